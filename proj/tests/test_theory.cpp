#include <gtest/gtest.h>

#include <set>

#include "pools.hpp"

using namespace zeta;

namespace {

constexpr double kTol = 1e-9;

Bindings with_m(const std::string &m) {
  Bindings b;
  b.m = parse(m);
  return b;
}

bool same_denotation(const Context &ctx, const Term &a, const Term &b) {
  const auto l = interpret(ctx, a), r = interpret(ctx, b);
  return equal_up_to_scalar(denote(l.diagram), denote(r.diagram), kTol).has_value();
}

} // namespace

TEST(Rules, Catalogue) {
  EXPECT_EQ(rules().size(), 13u);
  std::set<std::string> ids;
  for (const auto &r : rules()) ids.insert(r.id);
  EXPECT_EQ(ids.size(), 13u);
  for (const char *id : {"alpha", "beta-linear", "eta", "cong-abs", "lambda-embed", "phase-absorb", "rot-compose",
                         "copy", "pi-commute", "color-change", "h-gen", "unit-left", "unit-right"})
    EXPECT_TRUE(ids.count(id)) << id;
  EXPECT_EQ(rule_by_id("eta").id, "eta");
  EXPECT_THROW(rule_by_id("no-such-rule"), Error);
}

TEST(Rules, InstanceExamples) {
  Bindings beta = with_m("x");
  beta.n = parse("Z[1]^0");
  EXPECT_EQ(check_rule_instance(rule_by_id("beta-linear"), beta, {}, kTol).status, Verdict::Sound);

  Bindings copy = with_m("<x, x>");
  copy.a = 1;
  EXPECT_EQ(check_rule_instance(rule_by_id("copy"), copy, {}, kTol).status, Verdict::Sound);
  copy.a = 2;
  EXPECT_EQ(check_rule_instance(rule_by_id("copy"), copy, {}, kTol).status, Verdict::SideConditionUnmet);

  Bindings eta = with_m("Z[-1]");
  EXPECT_EQ(check_rule_instance(rule_by_id("eta"), eta, {}, kTol).status, Verdict::Sound);

  // x used twice: beta-linear does not apply.
  Bindings dup = with_m("<x, x>");
  dup.n = parse("Z[1]");
  EXPECT_EQ(check_rule_instance(rule_by_id("beta-linear"), dup, {}, kTol).status, Verdict::SideConditionUnmet);
}

TEST(Rules, PhaseRulesOverBasesAndPhases) {
  for (Basis b : {Basis::Zeta, Basis::Xi})
    for (const Phase &alpha : {Phase::zero(), Phase::half_pi(), Phase::pi(), Phase::pi_fraction(1, 4)})
      for (const Phase &theta : {Phase::zero(), Phase::pi_fraction(3, 2)}) {
        Bindings bind = with_m("<x, x>");
        bind.basis = b;
        bind.alpha = alpha;
        bind.theta = theta;
        for (const char *id : {"phase-absorb", "rot-compose", "color-change", "h-gen"}) {
          const RuleVerdict v = check_rule_instance(rule_by_id(id), bind, {}, kTol);
          EXPECT_EQ(v.status, Verdict::Sound) << id << " " << bind.describe() << " " << v.detail;
        }
        for (int a : {0, 1}) {
          bind.a = a;
          for (const char *id : {"copy", "pi-commute"}) {
            const RuleVerdict v = check_rule_instance(rule_by_id(id), bind, {}, kTol);
            EXPECT_EQ(v.status, Verdict::Sound) << id << " " << bind.describe() << " " << v.detail;
          }
        }
      }
}

TEST(Rules, ExactModeRequiresUnitScalar) {
  // Phase absorption moves a phase into a state, which costs a global scalar
  // for some inputs. Exact mode must never report a scalar other than 1.
  for (const auto &e : standard_pool()) {
    const RuleVerdict v = check_rule_instance(*e.rule, e.bindings, e.context, kTol, true);
    if (v.status == Verdict::Sound && v.scalar) {
      EXPECT_NEAR(std::abs(*v.scalar - Complex(1.0)), 0.0, kTol) << report_line(v);
    }
  }
}

TEST(Rules, StandardPoolHasNoUnsoundInstance) {
  const auto pool = standard_pool();
  EXPECT_GE(pool.size(), 300u);
  const auto verdicts = run_suite(pool, kTol, false, 4);
  ASSERT_EQ(verdicts.size(), pool.size());
  std::size_t sound = 0;
  std::set<std::string> covered;
  for (const auto &v : verdicts) {
    EXPECT_NE(v.status, Verdict::Unsound) << report_line(v);
    EXPECT_NE(v.status, Verdict::TypeError) << report_line(v);
    if (v.status == Verdict::Sound) {
      ++sound;
      covered.insert(v.rule);
    }
  }
  EXPECT_GE(sound, pool.size() / 2);
  EXPECT_EQ(covered.size(), rules().size());
}

TEST(Rules, DistinctCongruencePremiseIsUnmet) {
  Bindings b = with_m("x");
  b.n = parse("Z[1]^pi");
  const RuleVerdict v = check_rule_instance(rule_by_id("cong-abs"), b, {}, kTol);
  EXPECT_EQ(v.status, Verdict::SideConditionUnmet);
}

TEST(Rules, ThreadCountDoesNotChangeVerdicts) {
  auto pool = standard_pool();
  pool.resize(std::min<std::size_t>(pool.size(), 120));
  const auto one = run_suite(pool, kTol, false, 1);
  const auto many = run_suite(pool, kTol, false, 6);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    EXPECT_EQ(one[i].status, many[i].status) << i;
    EXPECT_EQ(one[i].rule, many[i].rule) << i;
  }
}

TEST(Rules, VerdictJson) {
  RuleVerdict v{"eta", "A=1", Verdict::Sound, Complex(0.5, -1.0), 1e-12, {}};
  const auto j = verdict_to_json_value(v);
  EXPECT_EQ(j["rule"], "eta");
  EXPECT_EQ(j["status"], "sound");
  EXPECT_DOUBLE_EQ(j["scalar"][0].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["scalar"][1].get<double>(), -1.0);
  EXPECT_FALSE(j.contains("detail"));
  v.scalar.reset();
  v.status = Verdict::SideConditionUnmet;
  v.detail = "why";
  const auto k = verdict_to_json_value(v);
  EXPECT_TRUE(k["scalar"].is_null());
  EXPECT_EQ(k["status"], "side-condition-unmet");
  EXPECT_EQ(k["detail"], "why");
  EXPECT_NE(report_line(v).find("side-condition-unmet"), std::string::npos);
}

TEST(Sharing, Examples) {
  EXPECT_TRUE(commutes_with_sharing({}, parse("X[1]^pi"), Basis::Zeta, 2, kTol));
  EXPECT_TRUE(commutes_with_sharing({}, parse("X[1]"), Basis::Zeta, 3, kTol));
  EXPECT_FALSE(commutes_with_sharing({}, parse("Z[1]^pi/2"), Basis::Zeta, 2, kTol));
  EXPECT_TRUE(commutes_with_sharing({}, parse("Z[1]^pi"), Basis::Xi, 2, kTol));
  EXPECT_FALSE(commutes_with_sharing({}, parse("Z[1]^pi/2"), Basis::Xi, 2, kTol));
  EXPECT_FALSE(commutes_with_sharing({}, parse("X[1]^pi/2"), Basis::Xi, 2, kTol));
  for (const char *src : {"Z[1]^pi/2", "X[1]^pi/4", "H", "Z x:1. <x, x>"})
    for (Basis b : {Basis::Zeta, Basis::Xi}) EXPECT_TRUE(commutes_with_sharing({}, parse(src), b, 1, kTol)) << src;
}

TEST(Sharing, BudgetIsEnforced) {
  EXPECT_THROW(commutes_with_sharing({}, parse("Z[4]"), Basis::Zeta, 3, kTol, 10), WireBudgetError);
}

TEST(Beta, StepExamples) {
  auto s = beta_step(parse("(\\x:1. x) Z[1]"));
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(alpha_eq(*s, parse("Z[1]")));

  const Term two = parse("(\\f:1 -> 1. f Z[1]) (\\y:1. y)");
  auto first = beta_step(two);
  ASSERT_TRUE(first.has_value());
  EXPECT_TRUE(alpha_eq(*first, parse("(\\y:1. y) Z[1]")));
  auto second = beta_step(*first);
  ASSERT_TRUE(second.has_value());
  EXPECT_TRUE(alpha_eq(*second, parse("Z[1]")));
  EXPECT_FALSE(beta_step(*second).has_value());

  EXPECT_FALSE(beta_step(parse("(Z x:1. <x, x>) Z[1]")).has_value());
  EXPECT_FALSE(beta_step(parse("(Z^pi x:1. x) Z[1]")).has_value());
}

TEST(Beta, NormalizeExamples) {
  const auto r = normalize(parse("(\\x:0. x) ((\\y:0. y) *)"), 10);
  EXPECT_TRUE(r.normal_form);
  EXPECT_EQ(r.steps, 2u);
  EXPECT_TRUE(alpha_eq(r.term, parse("*")));

  const auto h = normalize(parse("H"), 50);
  EXPECT_TRUE(h.normal_form);

  const auto capped = normalize(parse("(\\x:0. x) ((\\y:0. y) *)"), 1);
  EXPECT_EQ(capped.steps, 1u);
  EXPECT_FALSE(capped.normal_form);
}

TEST(Beta, StepsPreserveDenotation) {
  const std::vector<std::string> redexes = {
      "(\\x:1. x) Z[1]^pi/2",
      "(\\f:1 -> 1. f Z[1]) (\\y:1. y)",
      "(\\p:1 * 1. let <u:1, v:1> =Z p in <v, u>) <Z[1], X[1]^pi>",
      "(X x:1. <Z[1], x>) (H Z[1]^pi)",
      "(Z x:1. <x, Z[1]>) X[1]^pi",
      "(\\g:1 -> 1 * 1. g) (Z x:1. <x, x>)",
      "(\\x:0. x) ((\\y:0. y) *)",
      "(\\h:1 -> 1. \\z:1. h z) (rotX^pi/4)",
  };
  std::size_t steps = 0;
  for (const auto &src : redexes) {
    Term t = parse(src);
    for (int i = 0; i < 10; ++i) {
      auto next = beta_step(t);
      if (!next) break;
      ++steps;
      EXPECT_TRUE(same_denotation({}, t, *next)) << print(t) << " -> " << print(*next);
      EXPECT_EQ(strip_units(infer({}, t).first), strip_units(infer({}, *next).first)) << print(t);
      t = *next;
    }
  }
  EXPECT_GE(steps, redexes.size());
}

TEST(Substitution, TheoremInstances) {
  const auto c = check_substitution(parse_context("x:Z:1"), parse("<x, x>"), {}, parse("X[1]^pi"), kTol);
  EXPECT_TRUE(c.equal);
  const auto bad = check_substitution(parse_context("x:Z:1"), parse("<x, x>"), {}, parse("Z[1]^pi/2"), kTol);
  EXPECT_FALSE(bad.equal);
}

TEST(HGen, NumericUpToThreeWires) {
  for (Basis b : {Basis::Zeta, Basis::Xi})
    for (const Phase &a : {Phase::zero(), Phase::half_pi(), Phase::pi(), Phase::radians(0.37)})
      for (std::size_t n = 0; n <= 3; ++n) EXPECT_TRUE(h_gen_numeric(b, a, n, kTol)) << n;
}
