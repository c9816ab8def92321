#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "zeta/eval.hpp"
#include "zeta/parser.hpp"
#include "zeta/semantics.hpp"
#include "zeta/typecheck.hpp"

namespace zeta {

/// Values for the metavariables of a rule schema. Unused slots are ignored.
struct Bindings {
  Basis basis = Basis::Zeta;
  Phase alpha = Phase::zero();
  Phase theta = Phase::zero();
  int a = 0;
  Type type = Type::numeral(1);
  std::string x = "x";
  std::optional<Term> m;
  std::optional<Term> n;

  std::string describe() const {
    std::string s = "basis=" + std::string(basis_name(basis)) + " alpha=" + alpha.to_string() +
                    " theta=" + theta.to_string() + " a=" + std::to_string(a) + " A=" + type.to_string();
    if (m) s += " M=" + print(*m);
    if (n) s += " N=" + print(*n);
    return s;
  }
};

/// Instantiation of both sides, or the reason the side condition fails.
struct Instance {
  std::optional<Term> lhs;
  std::optional<Term> rhs;
  std::string unmet;
};

struct EquationRule {
  std::string id;
  std::vector<std::string> metavariables;
  std::string lhs;
  std::string rhs;
  std::string side_condition;
  std::function<Instance(const Bindings &, const Context &)> instantiate;
};

enum class Verdict { Sound, Unsound, SideConditionUnmet, TypeError };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Sound: return "sound";
  case Verdict::Unsound: return "unsound";
  case Verdict::SideConditionUnmet: return "side-condition-unmet";
  case Verdict::TypeError: return "type-error";
  }
  return "?";
}

struct RuleVerdict {
  std::string rule;
  std::string bindings;
  Verdict status = Verdict::TypeError;
  std::optional<Complex> scalar; // unset when both sides vanish
  double deviation = 0.0;
  std::string detail;
};

namespace detail {

inline Instance unmet(std::string why) { return Instance{std::nullopt, std::nullopt, std::move(why)}; }
inline Instance sides(Term l, Term r) { return Instance{std::move(l), std::move(r), {}}; }

inline std::string fresh_for(const std::string &base, std::initializer_list<Term> terms,
                             const Context &ctx, std::initializer_list<std::string> extra = {}) {
  std::set<std::string> avoid(extra);
  for (auto &t : terms) {
    auto ns = names_in(t);
    avoid.insert(ns.begin(), ns.end());
  }
  for (auto &b : ctx) avoid.insert(b.name);
  return fresh_name(base, avoid);
}

inline Term gen1(Basis b, const Phase &p) { return Term::gen(b, p, 1); }

// Does ctx, x:_basis A |- m ≡ n hold denotationally?
inline bool equivalent_under(const Context &ctx, const Term &m, const Term &n, double tol) {
  auto l = interpret(ctx, m), r = interpret(ctx, n);
  if (!(strip_units(l.type) == strip_units(r.type))) return false;
  return equal_up_to_scalar(denote_within(l.diagram, kDefaultWireBudget),
                            denote_within(r.diagram, kDefaultWireBudget), tol)
      .has_value();
}

} // namespace detail

/// The rule schemas of the equational theory. Rules 8 to 10 are stated for
/// basis Z; binding basis X gives their colour-swapped duals.
inline const std::vector<EquationRule> &rules() {
  using detail::sides;
  using detail::unmet;
  static const std::vector<EquationRule> all = [] {
    std::vector<EquationRule> r;
    r.push_back({"alpha", {"x", "A", "M"}, "\\x. M", "\\y. M[x:=y]", "y fresh, x used once in M",
                 [](const Bindings &b, const Context &ctx) {
                   if (occurrences(b.x, *b.m) != 1) return unmet("x is not used exactly once in M");
                   const std::string y = detail::fresh_for("y", {*b.m}, ctx, {b.x});
                   return sides(Term::lambda(b.x, *b.m, b.type),
                                Term::lambda(y, substitute(*b.m, b.x, Term::var(y)), b.type));
                 }});
    r.push_back({"beta-linear", {"x", "A", "M", "N"}, "(\\x. M) N", "M[x:=N]", "x used once in M",
                 [](const Bindings &b, const Context &) {
                   if (occurrences(b.x, *b.m) != 1) return unmet("x is not used exactly once in M");
                   return sides(Term::app(Term::lambda(b.x, *b.m, b.type), *b.n), substitute(*b.m, b.x, *b.n));
                 }});
    r.push_back({"eta", {"A", "M"}, "\\x. M x", "M", "x fresh",
                 [](const Bindings &b, const Context &ctx) {
                   const std::string x = detail::fresh_for("x", {*b.m}, ctx);
                   return sides(Term::lambda(x, Term::app(*b.m, Term::var(x)), b.type), *b.m);
                 }});
    r.push_back({"cong-abs", {"basis", "alpha", "x", "A", "M", "N"}, "B^a x. M", "B^a x. N", "M ≡ N",
                 [](const Bindings &b, const Context &ctx) {
                   const Context inner = ctx.extended({b.x, b.basis, b.type});
                   try {
                     if (!detail::equivalent_under(inner, *b.m, *b.n, 1e-9)) return unmet("M and N differ");
                   } catch (const Error &e) {
                     return unmet(std::string("premise does not typecheck: ") + e.what());
                   }
                   return sides(Term::abs(b.basis, b.alpha, b.x, *b.m, b.type),
                                Term::abs(b.basis, b.alpha, b.x, *b.n, b.type));
                 }});
    r.push_back({"lambda-embed", {"basis", "x", "A", "M"}, "B x. M", "\\x. M", "x used once in M",
                 [](const Bindings &b, const Context &) {
                   if (occurrences(b.x, *b.m) != 1) return unmet("x is not used exactly once in M");
                   return sides(Term::abs(b.basis, Phase::zero(), b.x, *b.m, b.type),
                                Term::lambda(b.x, *b.m, b.type));
                 }});
    r.push_back({"phase-absorb", {"basis", "alpha", "theta", "x", "M"}, "(B^a x. M) B[1]^t",
                 "(B x. M) B[1]^(t+a)", "",
                 [](const Bindings &b, const Context &) {
                   const Type one = Type::numeral(1);
                   return sides(Term::app(Term::abs(b.basis, b.alpha, b.x, *b.m, one), detail::gen1(b.basis, b.theta)),
                                Term::app(Term::abs(b.basis, Phase::zero(), b.x, *b.m, one),
                                          detail::gen1(b.basis, b.theta + b.alpha)));
                 }});
    r.push_back({"rot-compose", {"basis", "alpha", "theta", "x", "M"}, "(B^a x. M) o rotB^t", "B^(a+t) x. M",
                 "",
                 [](const Bindings &b, const Context &) {
                   const Type one = Type::numeral(1);
                   return sides(compose_terms(Term::abs(b.basis, b.alpha, b.x, *b.m, one),
                                              rotation_term(b.basis, b.theta)),
                                Term::abs(b.basis, b.alpha + b.theta, b.x, *b.m, one));
                 }});
    r.push_back({"copy", {"basis", "alpha", "a", "x", "M"}, "(Z^a x. M) X[1]^(a pi)", "M[x:=X[1]^(a pi)]",
                 "a in {0,1}",
                 [](const Bindings &b, const Context &) {
                   if (b.a != 0 && b.a != 1) return unmet("a is not 0 or 1");
                   const Term g = detail::gen1(complement(b.basis), Phase::pi_fraction(b.a, 1));
                   return sides(Term::app(Term::abs(b.basis, b.alpha, b.x, *b.m, Type::numeral(1)), g),
                                substitute(*b.m, b.x, g));
                 }});
    r.push_back({"pi-commute", {"basis", "alpha", "a", "x", "M"}, "(Z^a x. M) o rotX^(a pi)",
                 "Z^((-1)^a a) x. M[x:=rotX^(a pi) x]", "a in {0,1}",
                 [](const Bindings &b, const Context &) {
                   if (b.a != 0 && b.a != 1) return unmet("a is not 0 or 1");
                   const Type one = Type::numeral(1);
                   const Term rot = rotation_term(complement(b.basis), Phase::pi_fraction(b.a, 1));
                   const Phase flipped = b.a == 1 ? -b.alpha : b.alpha;
                   return sides(compose_terms(Term::abs(b.basis, b.alpha, b.x, *b.m, one), rot),
                                Term::abs(b.basis, flipped, b.x,
                                          substitute(*b.m, b.x, Term::app(rot, Term::var(b.x))), one));
                 }});
    r.push_back({"color-change", {"basis", "alpha", "x", "M"}, "Z^a x. M", "(X^a y. M[x:=H y]) o H", "y fresh",
                 [](const Bindings &b, const Context &ctx) {
                   const Type one = Type::numeral(1);
                   const std::string y = detail::fresh_for("y", {*b.m}, ctx, {b.x});
                   const Term h = hadamard_term();
                   const Term body = substitute(*b.m, b.x, Term::app(h, Term::var(y)));
                   return sides(Term::abs(b.basis, b.alpha, b.x, *b.m, one),
                                compose_terms(Term::abs(complement(b.basis), b.alpha, y, body, one), h));
                 }});
    r.push_back({"h-gen", {"basis", "alpha"}, "H Z[1]^a", "X[1]^a", "",
                 [](const Bindings &b, const Context &) {
                   return sides(Term::app(hadamard_term(), detail::gen1(b.basis, b.alpha)),
                                detail::gen1(complement(b.basis), b.alpha));
                 }});
    r.push_back({"unit-left", {"M"}, "<*, M>", "M", "",
                 [](const Bindings &b, const Context &) { return sides(Term::tup(Term::unit(), *b.m), *b.m); }});
    r.push_back({"unit-right", {"M"}, "<M, *>", "M", "",
                 [](const Bindings &b, const Context &) { return sides(Term::tup(*b.m, Term::unit()), *b.m); }});
    return r;
  }();
  return all;
}

inline const EquationRule &rule_by_id(std::string_view id) {
  for (auto &r : rules())
    if (r.id == id) return r;
  throw Error("unknown rule " + std::string(id));
}

/// Instantiates both sides, typechecks them in ctx at a common type (up to
/// unit factors), translates, and compares denotations. In exact mode the
/// witness scalar must also be 1.
inline RuleVerdict check_rule_instance(const EquationRule &rule, const Bindings &b, const Context &ctx,
                                       double tol, bool exact = false) {
  RuleVerdict v{rule.id, b.describe(), Verdict::TypeError, std::nullopt, 0.0, {}};
  Instance inst;
  try {
    inst = rule.instantiate(b, ctx);
  } catch (const Error &e) {
    v.detail = e.what();
    return v;
  }
  if (!inst.lhs) {
    v.status = Verdict::SideConditionUnmet;
    v.detail = inst.unmet;
    return v;
  }
  std::optional<JudgementDiagram> l, r;
  try {
    l = interpret(ctx, *inst.lhs);
    r = interpret(ctx, *inst.rhs);
  } catch (const Error &e) {
    v.detail = e.what();
    return v;
  }
  if (!(strip_units(l->type) == strip_units(r->type))) {
    v.detail = "sides have types " + l->type.to_string() + " and " + r->type.to_string();
    return v;
  }
  const ComplexMatrix dl = denote(l->diagram), dr = denote(r->diagram);
  auto w = equal_up_to_scalar(dl, dr, tol);
  if (w && exact && !w->both_zero && std::abs(w->scalar - Complex(1.0)) > tol) w.reset();
  if (!w) {
    v.status = Verdict::Unsound;
    v.deviation = exact ? max_difference(dl, dr) : scalar_residual(dl, dr);
    v.detail = print(*inst.lhs) + "  vs  " + print(*inst.rhs);
    return v;
  }
  v.status = Verdict::Sound;
  if (!w->both_zero) v.scalar = w->scalar;
  v.deviation = w->deviation;
  return v;
}

struct PoolEntry {
  const EquationRule *rule;
  Bindings bindings;
  Context context;
};

namespace detail {

// Keeps entries whose left side typechecks and whose two sides fit the
// evaluation budget. Entries failing later checks stay in the pool so their
// verdicts are reported.
inline bool admissible(const PoolEntry &e, std::size_t budget) {
  Instance inst;
  try {
    inst = e.rule->instantiate(e.bindings, e.context);
    if (!inst.lhs) return true; // reported as side-condition-unmet
    infer(e.context, *inst.lhs);
  } catch (const Error &) {
    return false;
  }
  try {
    return required_wires(interpret(e.context, *inst.lhs).diagram) <= budget &&
           required_wires(interpret(e.context, *inst.rhs).diagram) <= budget;
  } catch (const Error &) {
    return true; // reported as type-error
  }
}

// Bodies over x : A, with the ambient context they need.
struct Shape {
  const char *text;
  bool uses_z;
};

inline const std::vector<Shape> &body_shapes() {
  static const std::vector<Shape> shapes = {
      {"x", false},
      {"<x, x>", false},
      {"<x, <x, x>>", false},
      {"H x", false},
      {"Z y:1. <y, x>", false},
      {"<x, z>", true},
      {"let <u:1, v:1> =Z x in <v, u>", false},
  };
  return shapes;
}

inline Context ambient(bool uses_z) { return uses_z ? parse_context("z:X:1") : Context{}; }

} // namespace detail

/// Instances of every rule over the standard pool: A in {1, 1*1}, phases
/// {0, pi/2, pi}, a in {0, 1}, both bases, and the body shapes above.
/// Instances whose left-hand side does not typecheck, or whose sides need
/// more than `budget` wires to evaluate, are dropped.
inline std::vector<PoolEntry> standard_pool(std::size_t budget = kDefaultWireBudget) {
  const std::vector<Type> types = {Type::numeral(1), Type::tensor(Type::numeral(1), Type::numeral(1))};
  const std::vector<Phase> phases = {Phase::zero(), Phase::half_pi(), Phase::pi()};
  const std::vector<Basis> bases = {Basis::Zeta, Basis::Xi};
  std::vector<PoolEntry> pool;
  auto add = [&](std::string_view id, Bindings b, Context ctx) {
    PoolEntry e{&rule_by_id(id), std::move(b), std::move(ctx)};
    if (detail::admissible(e, budget)) pool.push_back(std::move(e));
  };
  // shapes written for x : 1 are reused at 1 * 1 where they still typecheck
  auto bodies = [&](auto &&f) {
    for (auto &s : detail::body_shapes()) f(parse(s.text), detail::ambient(s.uses_z));
  };

  // closed arguments by type, plus one open argument
  auto arguments = [&](const Type &a) {
    std::vector<std::pair<Term, Context>> out;
    for (auto &p : phases) {
      if (a == Type::numeral(1)) {
        out.push_back({Term::gen(Basis::Zeta, p, 1), {}});
        out.push_back({Term::gen(Basis::Xi, p, 1), {}});
      } else {
        out.push_back({Term::gen(Basis::Zeta, p, 2), {}});
        out.push_back({Term::tup(Term::gen(Basis::Xi, p, 1), Term::gen(Basis::Zeta, Phase::zero(), 1)), {}});
      }
    }
    if (a == Type::numeral(1)) {
      out.push_back({Term::app(hadamard_term(), Term::gen(Basis::Zeta, Phase::zero(), 1)), {}});
      out.push_back({Term::var("w"), parse_context("w:X:1")});
    }
    return out;
  };

  for (auto &a : types) {
    bodies([&](const Term &m, const Context &ctx) {
      Bindings b;
      b.type = a;
      b.m = m;
      add("alpha", b, ctx);
      for (auto basis : bases) {
        b.basis = basis;
        add("lambda-embed", b, ctx);
      }
      for (auto &[n, nctx] : arguments(a)) {
        Bindings bn = b;
        bn.n = n;
        std::vector<Binding> merged(ctx.begin(), ctx.end());
        merged.insert(merged.end(), nctx.begin(), nctx.end());
        add("beta-linear", bn, Context(merged));
      }
      for (auto basis : bases)
        for (auto &p : phases) {
          Bindings bc = b;
          bc.basis = basis;
          bc.alpha = p;
          // two equivalent bodies and a distinct one
          bc.n = Term::app(Term::lambda("w", Term::var("w")), m);
          add("cong-abs", bc, ctx);
          bc.n = Term::tup(m, Term::unit());
          add("cong-abs", bc, ctx);
          if (a == Type::numeral(1)) {
            bc.n = Term::app(rotation_term(Basis::Xi, Phase::pi()), m);
            add("cong-abs", bc, ctx);
          }
        }
    });

    // function-typed M for eta
    std::vector<std::pair<std::string, Context>> fns;
    if (a == Type::numeral(1)) {
      fns = {{"Z[-1]", {}},     {"Z[-1]^pi/2", {}}, {"X[-1]^pi", {}},           {"H", {}},
             {"X^pi/2 r:1. r", {}}, {"Z y:1. <y, y>", {}}, {"f", parse_context("f:Z:1->1*1")}};
    } else {
      fns = {{"Z[-2]", {}}, {"X[-2]^pi/2", {}}, {"Z y:1*1. y", {}}, {"\\p:1*1. let <u:1, v:1> =X p in <v, u>", {}}};
    }
    for (auto &[text, ctx] : fns) {
      Bindings b;
      b.type = a;
      b.m = parse(text);
      add("eta", b, ctx);
    }
  }

  // single-qubit schemas
  for (auto &s : detail::body_shapes()) {
    const Term m = parse(s.text);
    const Context ctx = detail::ambient(s.uses_z);
    for (auto basis : bases)
      for (auto &alpha : phases) {
        Bindings b;
        b.basis = basis;
        b.alpha = alpha;
        b.m = m;
        add("color-change", b, ctx);
        for (auto &theta : phases) {
          b.theta = theta;
          add("phase-absorb", b, ctx);
          add("rot-compose", b, ctx);
        }
        for (int a : {0, 1}) {
          b.a = a;
          add("copy", b, ctx);
          add("pi-commute", b, ctx);
        }
      }
  }

  for (auto basis : bases)
    for (auto &alpha : phases) {
      Bindings b;
      b.basis = basis;
      b.alpha = alpha;
      add("h-gen", b, {});
    }

  const std::vector<std::pair<std::string, Context>> units = {
      {"x", parse_context("x:Z:1")}, {"Z[1]^pi/2", {}}, {"X[2]", {}}, {"H", {}}, {"<x, x>", parse_context("x:X:1")},
      {"*", {}}};
  for (auto &[text, ctx] : units) {
    Bindings b;
    b.m = parse(text);
    add("unit-left", b, ctx);
    add("unit-right", b, ctx);
  }
  return pool;
}

/// Checks every entry, optionally on worker threads. Results keep pool order.
inline std::vector<RuleVerdict> run_suite(const std::vector<PoolEntry> &pool, double tol, bool exact = false,
                                          unsigned threads = 1) {
  std::vector<RuleVerdict> out(pool.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < pool.size();)
      out[i] = check_rule_instance(*pool[i].rule, pool[i].bindings, pool[i].context, tol, exact);
  };
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> ts;
  for (unsigned t = 0; t < threads; ++t) ts.emplace_back(work);
  for (auto &t : ts) t.join();
  return out;
}

inline std::string report_line(const RuleVerdict &v) {
  std::string s = v.rule + "  " + std::string(verdict_name(v.status));
  if (v.scalar) s += "  scalar=" + format_complex(*v.scalar);
  char dev[32];
  std::snprintf(dev, sizeof dev, "%.3g", v.deviation);
  s += "  deviation=" + std::string(dev) + "  " + v.bindings;
  if (!v.detail.empty()) s += "  (" + v.detail + ")";
  return s;
}

inline nlohmann::ordered_json verdict_to_json_value(const RuleVerdict &v) {
  nlohmann::ordered_json j{{"rule", v.rule}, {"bindings", v.bindings}, {"status", verdict_name(v.status)}};
  j["scalar"] = v.scalar ? nlohmann::ordered_json{v.scalar->real(), v.scalar->imag()} : nullptr;
  j["deviation"] = v.deviation;
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

/// Does term, shared n ways in basis, equal n copies of term fed by the
/// shared context? The budget bounds size(ctx) + n * size(type).
inline bool commutes_with_sharing(const Context &ctx, const Term &term, Basis basis, std::size_t n, double tol,
                                  std::size_t budget = 14) {
  const JudgementDiagram jd = interpret(ctx, term);
  const std::size_t s = size(jd.type);
  const std::size_t needed = ctx.wires() + n * s;
  if (needed > budget) throw WireBudgetError(needed, budget);
  const Diagram shared_after = then(jd.diagram, upsilon(s, basis, n));
  const Diagram shared_before = then(share_context(ctx, n), beside_all(std::vector<Diagram>(n, jd.diagram)));
  return equal_up_to_scalar(denote(shared_after), denote(shared_before), tol).has_value();
}

struct SubstitutionCheck {
  bool equal = false;
  std::optional<Complex> scalar;
  double deviation = 0.0;
};

/// Compares ⟦M[x:=N]⟧ with ⟦N⟧ plugged into the x wires of ⟦M⟧, where
/// `gamma` is M's context with x as its last entry and `theta` is N's
/// context (disjoint from gamma's other entries).
inline SubstitutionCheck check_substitution(const Context &gamma, const Term &m, const Context &theta,
                                            const Term &n, double tol) {
  if (gamma.empty()) throw Error("substitution check needs x as the last context entry");
  const std::string x = gamma.entries().back().name;
  const JudgementDiagram jm = interpret(gamma, m);
  const JudgementDiagram jn = interpret(theta, n);
  std::vector<Binding> outer(gamma.begin(), gamma.end() - 1);
  outer.insert(outer.end(), theta.begin(), theta.end());
  const JudgementDiagram js = interpret(Context(outer), substitute(m, x, n));
  const ComplexMatrix lhs = denote(js.diagram), rhs = denote(plug(jm, jn));
  auto w = equal_up_to_scalar(lhs, rhs, tol);
  if (!w) return {false, std::nullopt, scalar_residual(lhs, rhs)};
  return {true, w->both_zero ? std::nullopt : std::optional<Complex>(w->scalar), w->deviation};
}

namespace detail {
inline bool is_linear_redex(const Term &t) {
  auto ap = t.as<Term::App>();
  if (!ap) return false;
  auto abs = ap->fn.as<Term::Abs>();
  return abs && abs->phase.is_zero() && occurrences(abs->name, abs->body) == 1;
}

inline std::optional<Term> step(const Term &t) {
  if (is_linear_redex(t)) {
    auto ap = t.as<Term::App>();
    auto abs = ap->fn.as<Term::Abs>();
    return substitute(abs->body, abs->name, ap->arg);
  }
  if (auto ap = t.as<Term::App>()) {
    if (auto f = step(ap->fn)) return Term::app(*f, ap->arg);
    if (auto a = step(ap->arg)) return Term::app(ap->fn, *a);
    return std::nullopt;
  }
  if (auto abs = t.as<Term::Abs>()) {
    if (auto b = step(abs->body))
      return Term::abs(abs->basis, abs->phase, abs->name, *b, abs->annotation, abs->linear);
    return std::nullopt;
  }
  if (auto tp = t.as<Term::Tup>()) {
    if (auto l = step(tp->left)) return Term::tup(*l, tp->right);
    if (auto r = step(tp->right)) return Term::tup(tp->left, *r);
    return std::nullopt;
  }
  if (auto l = t.as<Term::Let>()) {
    if (auto b = step(l->bound))
      return Term::let(l->basis, l->first, l->second, *b, l->body, l->first_type, l->second_type);
    if (auto b = step(l->body))
      return Term::let(l->basis, l->first, l->second, l->bound, *b, l->first_type, l->second_type);
  }
  return std::nullopt;
}
} // namespace detail

/// Leftmost-outermost reduction of a redex (B x. M) N whose binder has
/// phase 0 and uses x exactly once.
inline std::optional<Term> beta_step(const Term &t) { return detail::step(t); }

struct NormalizeResult {
  Term term;
  std::size_t steps = 0;
  bool normal_form = false;
};

inline NormalizeResult normalize(const Term &t, std::size_t max_steps) {
  NormalizeResult r{t, 0, false};
  while (r.steps < max_steps) {
    auto next = beta_step(r.term);
    if (!next) {
      r.normal_form = true;
      return r;
    }
    r.term = *next;
    ++r.steps;
  }
  r.normal_form = !beta_step(r.term).has_value();
  return r;
}

/// Numeric form of the H-generator rule with H on each of n wires:
/// H^n · Spider(basis, alpha, 0, n) against Spider(other basis, alpha, 0, n).
inline bool h_gen_numeric(Basis basis, const Phase &alpha, std::size_t n, double tol) {
  std::vector<Diagram> hs(n, Diagram::had());
  const Diagram lhs = then(Diagram::spider(basis, alpha, 0, n), beside_all(hs));
  const Diagram rhs = Diagram::spider(complement(basis), alpha, 0, n);
  return equal_up_to_scalar(denote(lhs), denote(rhs), tol).has_value();
}

} // namespace zeta
