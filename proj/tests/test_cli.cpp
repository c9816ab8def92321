#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "pools.hpp"

using namespace zeta;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string &args, const std::string &env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" ZETA_BIN "\" " + args + " 2>/dev/null";
  Outcome r;
  FILE *p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string &name) { return std::string("\"") + ZETA_SAMPLES + "/" + name + "\""; }

std::string read_sample(const std::string &name) {
  std::ifstream in(std::string(ZETA_SAMPLES) + "/" + name);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string strip_newline(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

} // namespace

TEST(Cli, CheckPrintsTypeAndSharingSummary) {
  const Outcome r = run("check " + sample("share.zeta"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("1 -> 1 * 1\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("C-nodes: {x: arity 2, basis Z}"), std::string::npos) << r.out;
}

TEST(Cli, CheckJsonWithContext) {
  const Outcome r = run("check --json --ctx \"x:Z:1*1\" " + sample("swap.zeta"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["type"], "1 * 1");
  EXPECT_TRUE(j.contains("contractions"));
  EXPECT_TRUE(j.contains("weakenings"));
  EXPECT_TRUE(j.contains("exchanges"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("check " + sample("swap.zeta")).code, 1); // x unbound
  EXPECT_EQ(run("check " + sample("ghz.zeta")).code, 0);
  const std::string dir = ::testing::TempDir();
  const auto write = [&](const std::string &name, const std::string &text) {
    std::ofstream(dir + name) << text;
    return "\"" + dir + name + "\"";
  };
  EXPECT_EQ(run("check " + write("bad_parse.zeta", "Z x:1.\n  <x, >")).code, 2);
  EXPECT_EQ(run("check " + write("linear.zeta", "\\x:1. <x, x>")).code, 1);
  EXPECT_EQ(run("eval " + write("big.zeta", "Z[16]")).code, 3);
  EXPECT_EQ(run("eval " + write("small.zeta", "Z[4]"), "ZETA_WIRE_BUDGET=3").code, 3);
  EXPECT_EQ(run("eval " + write("small2.zeta", "Z[4]"), "ZETA_WIRE_BUDGET=4").code, 0);
  EXPECT_EQ(run("check \"" + dir + "missing-file.zeta\"").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, StdinInput) {
  const Outcome r = run("check - < " + sample("xpi.zeta"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("1\n", 0), 0u) << r.out;
}

TEST(Cli, EvalJsonMatchesLibrary) {
  for (const char *name : {"xpi.zeta", "h.zeta", "ghz.zeta", "share.zeta", "zid.zeta"}) {
    const Outcome r = run(std::string("eval ") + sample(name));
    ASSERT_EQ(r.code, 0) << name;
    const auto jd = interpret({}, parse(read_sample(name)));
    EXPECT_EQ(strip_newline(r.out), to_json(denote(jd.diagram))) << name;
  }
}

TEST(Cli, EvalXPiIsTheOneState) {
  const Outcome r = run("eval " + sample("xpi.zeta"));
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["shape"], nlohmann::json::array({2, 1}));
  EXPECT_NEAR(std::hypot(j["entries"][0][0].get<double>(), j["entries"][0][1].get<double>()), 0.0, 1e-9);
  EXPECT_GT(std::hypot(j["entries"][1][0].get<double>(), j["entries"][1][1].get<double>()), 0.5);
}

TEST(Cli, EvalAsMapAndText) {
  const Outcome m = run("eval --as-map " + sample("share.zeta"));
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(nlohmann::json::parse(m.out)["shape"], nlohmann::json::array({4, 2}));
  const Outcome t = run("eval --format text " + sample("h.zeta"));
  ASSERT_EQ(t.code, 0);
  EXPECT_EQ(std::count(t.out.begin(), t.out.end(), '\n'), 4);
}

TEST(Cli, DiagramFormats) {
  const Outcome j = run("diagram " + sample("zid.zeta"));
  ASSERT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["type"], "1 -> 1");
  const Diagram d = from_json(doc["diagram"].dump());
  EXPECT_TRUE(d == interpret({}, parse("Z x:1. x")).diagram);
  const Outcome dot = run("diagram --format dot " + sample("share.zeta"));
  ASSERT_EQ(dot.code, 0);
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
}

TEST(Cli, Equiv) {
  const Outcome same = run("equiv " + sample("id.zeta") + " " + sample("zid.zeta"));
  EXPECT_EQ(same.code, 0);
  EXPECT_EQ(same.out.rfind("EQUIVALENT", 0), 0u);
  const Outcome diff = run("equiv " + sample("x0.zeta") + " " + sample("z0.zeta"));
  EXPECT_EQ(diff.code, 1);
  EXPECT_EQ(diff.out.rfind("DISTINCT", 0), 0u);
  // Types differ.
  EXPECT_EQ(run("equiv " + sample("h.zeta") + " " + sample("xpi.zeta")).code, 2);
}

TEST(Cli, ShareCheck) {
  const Outcome yes = run("share-check " + sample("xpi.zeta"));
  EXPECT_EQ(yes.code, 0);
  EXPECT_NE(yes.out.find("n=2 basis Z commutes: yes"), std::string::npos) << yes.out;
  const std::string dir = ::testing::TempDir();
  std::ofstream(dir + "zhalf.zeta") << "Z[1]^pi/2";
  const Outcome no = run("share-check --copies 2 \"" + dir + "zhalf.zeta\"");
  EXPECT_EQ(no.code, 1);
  EXPECT_NE(no.out.find("no"), std::string::npos);
}

TEST(Cli, RulesJson) {
  const Outcome r = run("rules --json --threads 4");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  std::size_t unsound = 0, total = 0;
  const auto &items = j.is_array() ? j : j["verdicts"];
  for (const auto &v : items) {
    ++total;
    if (v["status"] == "unsound") ++unsound;
  }
  EXPECT_EQ(total, standard_pool().size());
  EXPECT_EQ(unsound, 0u);
}
