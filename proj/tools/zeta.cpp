// zeta: command-line front end.
//
// Exit codes: 0 success, 1 type error (or DISTINCT / unsound / does not
// commute), 2 parse error (and type mismatch for equiv), 3 wire budget.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "zeta/zeta.hpp"

namespace {

using nlohmann::ordered_json;
using namespace zeta;

constexpr int kOk = 0;
constexpr int kTypeError = 1;
constexpr int kParseError = 2;
constexpr int kBudget = 3;

struct Options {
  std::string ctx;
  std::string format = "json";
  bool as_map = false;
  double tol = 1e-9;
  bool json = false;
  bool exact = false;
  std::string copies = "2..3";
  std::string basis = "Z";
  unsigned threads = 1;
  std::vector<std::string> files;
};

std::string read_source(const std::string &path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs body and maps library errors to exit codes.
template <class F> int guarded(F &&body, int type_error_code = kTypeError) {
  try {
    return body();
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const WireBudgetError &e) {
    std::cerr << e.what() << " (set ZETA_WIRE_BUDGET to raise it)\n";
    return kBudget;
  } catch (const TypeError &e) {
    std::cerr << "type error: " << e.what() << "\n";
    return type_error_code;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return type_error_code;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- check ---------------------------------------------------------------

int cmd_check(const Options &o) {
  return guarded([&] {
    const Context ctx = parse_context(o.ctx);
    const Term term = parse(read_source(o.files[0]));
    auto [type, d] = infer(ctx, term);
    validate(d);

    struct Contraction {
      std::string variable;
      std::size_t arity;
      Basis basis;
    };
    std::vector<Contraction> cs;
    std::map<std::string, std::size_t> weakened, moved;
    d.visit([&](const Derivation &n) {
      if (n.rule == Rule::C) cs.push_back({n.variable, n.copies.size(), n.basis});
      if (n.rule == Rule::W) ++weakened[n.variable];
      if (n.rule == Rule::X) ++moved[n.premises[0].context.entries().back().name];
    });

    if (o.json) {
      ordered_json c = ordered_json::array();
      for (auto &x : cs) c.push_back({{"variable", x.variable}, {"arity", x.arity}, {"basis", basis_name(x.basis)}});
      ordered_json j{{"type", type.to_string()},
                     {"contractions", c},
                     {"weakenings", weakened},
                     {"exchanges", moved}};
      std::cout << j.dump() << "\n";
      return kOk;
    }
    std::cout << type.to_string() << "\n";
    auto counts = [](const std::map<std::string, std::size_t> &m) {
      std::string s;
      for (auto &[k, v] : m) s += (s.empty() ? "" : ", ") + k + ": " + std::to_string(v);
      return "{" + s + "}";
    };
    std::string c;
    for (auto &x : cs)
      c += (c.empty() ? "" : ", ") + x.variable + ": arity " + std::to_string(x.arity) + ", basis " +
           std::string(basis_name(x.basis));
    std::cout << "C-nodes: {" << c << "}\n";
    std::cout << "W-nodes: " << counts(weakened) << "\n";
    std::cout << "X-nodes: " << counts(moved) << "\n";
    return kOk;
  });
}

// --- diagram / eval --------------------------------------------------------

JudgementDiagram load_judgement(const Options &o, const std::string &path) {
  const Context ctx = parse_context(o.ctx);
  return interpret(ctx, parse(read_source(path)));
}

int cmd_diagram(const Options &o) {
  return guarded([&] {
    JudgementDiagram jd = load_judgement(o, o.files[0]);
    if (o.as_map) jd = eval_as_map(jd);
    if (o.format == "dot" && !o.json)
      std::cout << to_dot(jd.diagram);
    else
      std::cout << to_json(jd) << "\n";
    return kOk;
  });
}

int cmd_eval(const Options &o) {
  return guarded([&] {
    JudgementDiagram jd = load_judgement(o, o.files[0]);
    if (o.as_map) jd = eval_as_map(jd);
    const ComplexMatrix m = denote_within(jd.diagram, wire_budget_from_env());
    if (o.format == "text" && !o.json)
      std::cout << to_text(m);
    else
      std::cout << to_json(m) << "\n";
    return kOk;
  });
}

// --- equiv -----------------------------------------------------------------

int cmd_equiv(const Options &o) {
  return guarded(
      [&] {
        const JudgementDiagram a = load_judgement(o, o.files[0]);
        const JudgementDiagram b = load_judgement(o, o.files[1]);
        if (!(strip_units(a.type) == strip_units(b.type))) {
          std::cerr << "type mismatch: " << a.type.to_string() << " vs " << b.type.to_string() << "\n";
          return kParseError;
        }
        const std::size_t budget = wire_budget_from_env();
        const ComplexMatrix da = denote_within(a.diagram, budget), db = denote_within(b.diagram, budget);
        auto w = equal_up_to_scalar(da, db, o.tol);
        if (w && o.exact && !w->both_zero && std::abs(w->scalar - Complex(1.0)) > o.tol) w.reset();
        if (o.json) {
          ordered_json j{{"verdict", w ? "EQUIVALENT" : "DISTINCT"}};
          if (w && !w->both_zero) j["scalar"] = {w->scalar.real(), w->scalar.imag()};
          if (w && w->both_zero) j["scalar"] = nullptr;
          j["deviation"] = w ? w->deviation : (o.exact ? max_difference(da, db) : scalar_residual(da, db));
          std::cout << j.dump() << "\n";
        } else if (w) {
          std::cout << "EQUIVALENT scalar " << (w->both_zero ? std::string("(both zero)") : format_complex(w->scalar))
                    << "\n";
        } else {
          std::cout << "DISTINCT max deviation "
                    << fmt_double(o.exact ? max_difference(da, db) : scalar_residual(da, db)) << "\n";
        }
        return w ? kOk : kTypeError;
      },
      kParseError);
}

// --- rules -----------------------------------------------------------------

int cmd_rules(const Options &o) {
  return guarded([&] {
    const auto pool = standard_pool(wire_budget_from_env());
    const auto verdicts = run_suite(pool, o.tol, o.exact, o.threads);
    std::map<Verdict, std::size_t> tally;
    for (auto &v : verdicts) ++tally[v.status];
    const bool bad = tally[Verdict::Unsound] + tally[Verdict::TypeError] > 0;
    if (o.json) {
      ordered_json j = ordered_json::array();
      for (auto &v : verdicts) j.push_back(verdict_to_json_value(v));
      std::cout << j.dump() << "\n";
    } else {
      for (auto &v : verdicts) std::cout << report_line(v) << "\n";
      std::cout << verdicts.size() << " instances: " << tally[Verdict::Sound] << " sound, "
                << tally[Verdict::Unsound] << " unsound, " << tally[Verdict::SideConditionUnmet]
                << " side-condition-unmet, " << tally[Verdict::TypeError] << " type-error\n";
    }
    return bad ? kTypeError : kOk;
  });
}

// --- share-check -----------------------------------------------------------

std::pair<std::size_t, std::size_t> parse_copies(const std::string &s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const auto n = std::stoul(s);
      return {n, n};
    }
    return {std::stoul(s.substr(0, dots)), std::stoul(s.substr(dots + 2))};
  } catch (const std::exception &) {
    throw ParseError("bad --copies value '" + s + "', expected N or A..B", 1, 1);
  }
}

int cmd_share_check(const Options &o) {
  return guarded([&] {
    const Context ctx = parse_context(o.ctx);
    const Term term = parse(read_source(o.files[0]));
    const auto [lo, hi] = parse_copies(o.copies);
    const Basis basis = basis_from_name(o.basis);
    const std::size_t budget = wire_budget_from_env();
    bool all = true;
    ordered_json j = ordered_json::array();
    for (std::size_t n = lo; n <= hi; ++n) {
      const bool ok = commutes_with_sharing(ctx, term, basis, n, o.tol, budget);
      all = all && ok;
      if (o.json)
        j.push_back({{"copies", n}, {"basis", basis_name(basis)}, {"commutes", ok}});
      else
        std::cout << "n=" << n << " basis " << basis_name(basis) << " commutes: " << (ok ? "yes" : "no") << "\n";
    }
    if (o.json) std::cout << j.dump() << "\n";
    return all ? kOk : kTypeError;
  });
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"zeta: typecheck, translate and evaluate zeta-calculus terms"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App *sub, std::size_t files) {
    sub->add_option("files", o.files, files == 1 ? "source file (- for stdin)" : "two source files")
        ->required()
        ->expected(static_cast<int>(files));
    sub->add_option("--ctx", o.ctx, "typing context, e.g. \"x:Z:1, f:X:1->1*1\"");
    sub->add_flag("--json", o.json, "machine-readable output");
  };

  auto *check = app.add_subcommand("check", "print the inferred type and a derivation summary");
  common(check, 1);
  auto *diagram = app.add_subcommand("diagram", "print the translated diagram");
  common(diagram, 1);
  diagram->add_option("--format", o.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  diagram->add_flag("--as-map", o.as_map, "bend the argument of a function type into inputs");
  auto *eval = app.add_subcommand("eval", "print the denotation as a matrix");
  common(eval, 1);
  eval->add_flag("--as-map", o.as_map, "bend the argument of a function type into inputs");
  eval->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  auto *equiv = app.add_subcommand("equiv", "compare two terms up to a scalar");
  common(equiv, 2);
  equiv->add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
  equiv->add_flag("--exact", o.exact, "require the scalar to be 1");
  auto *rules_cmd = app.add_subcommand("rules", "check every rule schema over the standard pool");
  rules_cmd->add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
  rules_cmd->add_flag("--exact", o.exact, "require the scalar to be 1");
  rules_cmd->add_flag("--json", o.json, "machine-readable output");
  rules_cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
  auto *share = app.add_subcommand("share-check", "test whether a term commutes with sharing");
  common(share, 1);
  share->add_option("--basis", o.basis, "Z or X")->check(CLI::IsMember({"Z", "X"}));
  share->add_option("--copies", o.copies, "copy counts, N or A..B");
  share->add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }

  if (*check) return cmd_check(o);
  if (*diagram) return cmd_diagram(o);
  if (*eval) return cmd_eval(o);
  if (*equiv) return cmd_equiv(o);
  if (*rules_cmd) return cmd_rules(o);
  return cmd_share_check(o);
}
