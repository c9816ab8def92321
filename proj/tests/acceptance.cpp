// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference values come from matrices built here from basis
// states, or from the contraction oracles, never from the code under test alone.

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <iostream>
#include <sstream>

#include "pools.hpp"

using namespace zeta;

namespace {

constexpr double kTol = 1e-9;
constexpr double kExact = 1e-12;

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string &what) {
    if (!cond) {
      if (ok) note << what;
      ok = false;
    }
  }
};

// --- independent reference matrices -------------------------------------

ComplexMatrix ket(std::initializer_list<Complex> v) { return ComplexMatrix(v.size(), 1, v); }

ComplexMatrix hadamard_ref() {
  const double s = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, 2, {s, s, s, -s});
}

ComplexMatrix z_spider_ref(std::size_t m, std::size_t n, double phase) {
  ComplexMatrix out(std::size_t{1} << n, std::size_t{1} << m);
  out(0, 0) += 1.0;
  out((std::size_t{1} << n) - 1, (std::size_t{1} << m) - 1) += std::polar(1.0, phase);
  return out;
}

ComplexMatrix kron_power(const ComplexMatrix &m, std::size_t k) {
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (std::size_t i = 0; i < k; ++i) out = kron(out, m);
  return out;
}

ComplexMatrix x_spider_ref(std::size_t m, std::size_t n, double phase) {
  return matmul(kron_power(hadamard_ref(), n), matmul(z_spider_ref(m, n, phase), kron_power(hadamard_ref(), m)));
}

// Input wire i moves to output position perm[i]; wire 0 is the MSB.
ComplexMatrix permutation_ref(const std::vector<std::size_t> &perm) {
  const std::size_t k = perm.size(), dim = std::size_t{1} << k;
  ComplexMatrix out(dim, dim);
  for (std::size_t in = 0; in < dim; ++in) {
    std::size_t o = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (in >> (k - 1 - i) & 1) o |= std::size_t{1} << (k - 1 - perm[i]);
    out(o, in) = 1.0;
  }
  return out;
}

bool exactly_equal(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (std::abs(a.data()[i] - b.data()[i]) > kExact) return false;
  return true;
}

int run_cli(const std::string &args) {
  const std::string cmd = "\"" ZETA_BIN "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_source(const std::string &name, const std::string &text) {
  const std::string path = "/tmp/zeta_acceptance_" + name + ".zeta";
  std::ofstream(path) << text;
  return "\"" + path + "\"";
}

// --- criteria --------------------------------------------------------------

void sharing_semantics(Outcome &o) {
  const auto jd = interpret({}, parse("Z x:1. <x, x>"));
  const ComplexMatrix state = oracle_brute_force(jd.diagram);
  o.require(equal_up_to_scalar(state, ket({1, 0, 0, 0, 0, 0, 0, 1}), kTol).has_value(), "state is not GHZ");
  o.require(equal_up_to_scalar(denote(jd.diagram), state, kTol).has_value(), "denote disagrees with oracle");
  const auto map = eval_as_map(jd);
  const ComplexMatrix expected(4, 2, {1, 0, 0, 0, 0, 0, 0, 1});
  o.require(equal_up_to_scalar(oracle_brute_force(map.diagram), expected, kTol).has_value(),
            "map is not a|0>+b|1> -> a|00>+b|11>");
}

void higher_order_sharing(Outcome &o) {
  const auto jd = interpret({}, parse("(X f:1 -> 1 * 1. <f, f>) (Z x:1. <x, x>)"));
  o.require(size(jd.type) == 6, "expected six wires");
  const ComplexMatrix value = oracle_contract(jd.diagram);
  // X copy of each GHZ wire gives a1 b1 a2 b2 a3 b3; the two copies of f are
  // a1 a2 a3 and b1 b2 b3.
  const ComplexMatrix ghz = ket({1, 0, 0, 0, 0, 0, 0, 1});
  const ComplexMatrix copied = matmul(kron_power(x_spider_ref(1, 2, 0.0), 3), ghz);
  const ComplexMatrix expected = matmul(permutation_ref({0, 3, 1, 4, 2, 5}), copied);
  auto w = equal_up_to_scalar(value, expected, kTol);
  o.require(w.has_value(), "not the per-wire X copy of GHZ");
  if (w) o.note << "scalar " << format_complex(w->scalar);
  o.require(equal_up_to_scalar(denote(jd.diagram), value, kTol).has_value(), "denote disagrees with oracle");
}

void hadamard_sugar(Outcome &o) {
  const ComplexMatrix h = denote(eval_as_map(interpret({}, parse("H"))).diagram);
  const ComplexMatrix d(2, 2, {1, 0, 0, Complex(0, 1)});
  const ComplexMatrix oracle = matmul(d, matmul(matmul(hadamard_ref(), matmul(d, hadamard_ref())), d));
  o.require(equal_up_to_scalar(oracle, hadamard_ref(), kTol).has_value(), "oracle product is not Hadamard");
  auto w = equal_up_to_scalar(h, hadamard_ref(), kTol);
  o.require(w.has_value(), "H is not proportional to Hadamard");
  if (w) {
    o.require(std::abs(std::abs(w->scalar) - 1.0) <= kTol, "witness scalar is not of unit modulus");
    o.note << "scalar " << format_complex(w->scalar);
  }
  o.require(equal_up_to_scalar(h, oracle, kTol).has_value(), "H differs from the oracle product");
}

void rule_soundness(Outcome &o) {
  o.require(rules().size() == 13, "expected 13 rule schemas");
  o.require(detail::body_shapes().size() >= 5, "M-pool has fewer than 5 shapes");
  const auto pool = standard_pool();
  const auto verdicts = run_suite(pool, kTol);
  std::size_t sound = 0, unsound = 0, typeerr = 0, unmet = 0;
  std::set<std::string> covered;
  std::set<std::pair<std::string, Basis>> dual;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto &v = verdicts[i];
    switch (v.status) {
    case Verdict::Sound:
      ++sound;
      covered.insert(v.rule);
      dual.insert({v.rule, pool[i].bindings.basis});
      break;
    case Verdict::Unsound:
      ++unsound;
      if (unsound == 1) std::cerr << "  " << report_line(v) << "\n";
      break;
    case Verdict::TypeError: ++typeerr; break;
    case Verdict::SideConditionUnmet: ++unmet; break;
    }
  }
  o.require(unsound == 0, "unsound instances");
  o.require(typeerr == 0, "instances that do not typecheck");
  o.require(covered.size() == rules().size(), "some rule has no sound instance");
  for (const char *id : {"copy", "pi-commute", "color-change"})
    o.require(dual.count({id, Basis::Zeta}) && dual.count({id, Basis::Xi}), std::string(id) + " lacks a dual");
  o.note << pool.size() << " instances, " << sound << " sound, " << unsound << " unsound, " << unmet
         << " side condition unmet";
}

// Both sides of the sharing condition, contracted by enumeration.
bool commutes_by_oracle(const Term &n, Basis b, std::size_t copies) {
  const auto jd = interpret({}, n);
  const std::size_t s = size(jd.type);
  const Diagram after = then(jd.diagram, upsilon(s, b, copies));
  const Diagram before = beside_all(std::vector<Diagram>(copies, jd.diagram));
  return equal_up_to_scalar(oracle_brute_force(after), oracle_brute_force(before), kTol).has_value();
}

void definition_checks(Outcome &o) {
  std::size_t checked = 0;
  for (std::size_t n : {2u, 3u}) {
    for (const char *src : {"X[1]", "X[1]^pi"}) {
      o.require(commutes_by_oracle(parse(src), Basis::Zeta, n), std::string(src) + " fails Z-sharing");
      o.require(commutes_with_sharing({}, parse(src), Basis::Zeta, n, kTol), std::string(src) + " library says no");
      ++checked;
    }
    for (const char *src : {"Z[1]", "Z[1]^pi"}) {
      o.require(commutes_by_oracle(parse(src), Basis::Xi, n), std::string(src) + " fails X-sharing");
      o.require(commutes_with_sharing({}, parse(src), Basis::Xi, n, kTol), std::string(src) + " library says no");
      ++checked;
    }
  }
  o.require(!commutes_by_oracle(parse("Z[1]^pi/2"), Basis::Zeta, 2), "Z[1]^pi/2 commutes by oracle");
  o.require(!commutes_with_sharing({}, parse("Z[1]^pi/2"), Basis::Zeta, 2, kTol), "Z[1]^pi/2 commutes");
  o.note << checked << " positive cases, 1 negative control";
}

void substitution_property(Outcome &o) {
  const std::vector<std::string> bodies = {
      "x",
      "<x, x>",
      "<x, <x, x>>",
      "H x",
      "<H x, x>",
      "<x, Z[1]^pi/2>",
      "(Z^pi/2 y:1. <y, y>) x",
      "<rotX^pi/4 x, <x, H x>>",
      "let <u:1, v:1> =Z <x, rotZ^pi/2 x> in <v, u>",
  };
  const std::vector<std::string> args = {"X[1]", "X[1]^pi", "Z[1]", "Z[1]^pi", "H Z[1]^pi", "Z[1]^pi/2"};
  std::size_t triples = 0, twice = 0, thrice = 0;
  for (Basis b : {Basis::Zeta, Basis::Xi}) {
    const Context gamma = Context{}.extended({"x", b, Type::numeral(1)});
    for (const auto &na : args) {
      const Term n = parse(na);
      if (!commutes_with_sharing({}, n, b, 2, kTol) || !commutes_with_sharing({}, n, b, 3, kTol)) continue;
      for (const auto &ma : bodies) {
        const Term m = parse(ma);
        const auto c = check_substitution(gamma, m, {}, n, kTol);
        o.require(c.equal, ma + " [x:=" + na + "] in basis " + std::string(basis_name(b)));
        ++triples;
        const std::size_t uses = occurrences("x", m);
        if (uses == 2) ++twice;
        if (uses == 3) ++thrice;
      }
    }
  }
  o.require(triples >= 20, "fewer than 20 triples");
  o.require(twice > 0 && thrice > 0, "no double or triple contraction");
  o.note << triples << " triples, " << twice << " with x used twice, " << thrice << " three times";
}

void evaluator_consistency(Outcome &o) {
  std::mt19937 rng(20261019);
  std::size_t compared = 0;
  while (compared < 250) {
    const Diagram d = pool::random_diagram(rng, rng() % 4, 1 + rng() % 8, 10);
    if (required_wires(d) > 10) continue;
    o.require(max_difference(denote(d), oracle_contract(d)) <= kTol, "denote disagrees with oracle on " + describe(d));
    ++compared;
  }
  for (Basis b : {Basis::Zeta, Basis::Xi})
    for (const Phase &p : {Phase::zero(), Phase::half_pi(), Phase::pi(), Phase::pi_fraction(1, 4)}) {
      const Phase q = Phase::pi_fraction(3, 2);
      const Diagram fused = then(Diagram::spider(b, p, 2, 2), beside(Diagram::id(1), Diagram::spider(b, q, 1, 2)));
      o.require(exactly_equal(denote(fused), denote(Diagram::spider(b, p + q, 2, 3))), "spider fusion");
      const Diagram coloured = then(beside_all({Diagram::had(), Diagram::had()}),
                                    then(Diagram::spider(b, p, 2, 1), Diagram::had()));
      o.require(exactly_equal(denote(coloured), denote(Diagram::spider(complement(b), p, 2, 1))), "colour change");
      o.require(exactly_equal(denote(Diagram::spider(b, Phase::zero(), 1, 1)), ComplexMatrix::identity(2)),
                "identity removal");
    }
  const Diagram snake_l = then(beside(Diagram::cup(), Diagram::id(1)), beside(Diagram::id(1), Diagram::cap()));
  const Diagram snake_r = then(beside(Diagram::id(1), Diagram::cup()), beside(Diagram::cap(), Diagram::id(1)));
  o.require(exactly_equal(denote(snake_l), ComplexMatrix::identity(2)), "left snake");
  o.require(exactly_equal(denote(snake_r), ComplexMatrix::identity(2)), "right snake");
  o.note << compared << " random diagrams";
}

bool same_denotation(const Term &a, const Term &b) {
  const auto l = interpret({}, a), r = interpret({}, b);
  if (!(strip_units(l.type) == strip_units(r.type))) return false;
  return equal_up_to_scalar(denote(l.diagram), denote(r.diagram), kTol).has_value();
}

void linear_embedding(Outcome &o) {
  const std::vector<std::string> linear_pool = {
      "(\\x:1. x) Z[1]^pi/2",
      "(\\f:1 -> 1. f Z[1]) (\\y:1. y)",
      "(\\f:1 -> 1. \\z:1. f z) H",
      "(\\p:1 * 1. let <u:1, v:1> =Z p in <v, u>) <Z[1], X[1]^pi>",
      "(\\x:1. <x, Z[1]>) ((\\y:1. y) X[1]^pi/2)",
      "(\\g:1 -> 1 * 1. g) (Z x:1. <x, x>)",
      "(\\x:0. x) ((\\y:0. y) *)",
      "(\\h:1 -> 1. \\z:1. h z) (rotX^pi/4)",
      "(\\x:1. H x) ((\\y:1. rotZ^pi/2 y) X[1])",
  };
  std::size_t steps = 0;
  for (const auto &src : linear_pool) {
    Term t = parse(src);
    for (int i = 0; i < 16; ++i) {
      auto next = beta_step(t);
      if (!next) break;
      o.require(same_denotation(t, *next), "beta step changes " + print(t));
      ++steps;
      t = *next;
    }
  }
  // eta over the function-typed closed terms, alpha over bodies using x once.
  std::size_t eta = 0, alpha = 0;
  for (const char *m : {"\\y:1. y", "H", "X^pi/2 x:1. x", "Z x:1. x", "Z^pi x:1. x"}) {
    Bindings b;
    b.m = parse(m);
    const auto v = check_rule_instance(rule_by_id("eta"), b, {}, kTol);
    o.require(v.status == Verdict::Sound, std::string("eta on ") + m + ": " + v.detail);
    ++eta;
  }
  for (const char *m : {"x", "H x", "<x, Z[1]>", "rotZ^pi/2 x", "(\\y:1. y) x"}) {
    Bindings b;
    b.m = parse(m);
    const auto v = check_rule_instance(rule_by_id("alpha"), b, {}, kTol);
    o.require(v.status == Verdict::Sound, std::string("alpha on ") + m + ": " + v.detail);
    ++alpha;
  }
  // Composition elaborated with a Z binder and with an X binder.
  std::size_t compositions = 0;
  const std::vector<std::string> fns = {"H", "X^pi/2 x:1. x", "Z^pi/4 x:1. x", "\\y:1. y", "X x:1. x"};
  for (const auto &f : fns)
    for (const auto &g : fns) {
      const Term z = compose_terms(parse(f), parse(g));
      auto abs = z.as<Term::Abs>();
      o.require(abs && abs->basis == Basis::Zeta, "composition is not a Z binder");
      const Term x = Term::abs(Basis::Xi, Phase::zero(), abs->name, abs->body, abs->annotation, abs->linear);
      o.require(same_denotation(z, x), "composition basis matters for " + f + " o " + g);
      ++compositions;
    }
  o.note << steps << " beta steps, " << eta << " eta, " << alpha << " alpha, " << compositions << " compositions";
}

void round_trips(Outcome &o) {
  std::size_t terms = 0;
  for (const auto &s : pool::closed_terms()) {
    const Term t = parse(s.source);
    o.require(alpha_eq(parse(print(t)), t), "print/parse on " + s.source);
    const Diagram d = interpret({}, t).diagram;
    o.require(from_json(to_json(d)) == d, "diagram JSON on " + s.source);
    ++terms;
  }
  std::mt19937 rng(404);
  for (int i = 0; i < 500; ++i) {
    const Term t = pool::random_term(rng, 5);
    o.require(alpha_eq(parse(print(t)), t), "print/parse on " + print(t));
    const Diagram d = pool::random_diagram(rng, rng() % 4, 1 + rng() % 8, 10);
    o.require(from_json(to_json(d)) == d, "diagram JSON on " + describe(d));
    ++terms;
  }
  const auto kind_of = [](const Context &ctx, const std::string &src) -> std::optional<TypeErrorKind> {
    try {
      infer(ctx, parse(src));
    } catch (const TypeError &e) {
      return e.kind();
    }
    return std::nullopt;
  };
  o.require(kind_of({}, "<x, Z[1]>") == TypeErrorKind::UnboundVariable, "unbound variable kind");
  o.require(kind_of({}, "\\x:1. <x, x>") == TypeErrorKind::LinearityViolation, "linearity kind");
  o.require(kind_of(parse_context("x:Z:1, x:X:1"), "<x, x>") == TypeErrorKind::ContractionBasisConflict,
            "contraction-basis kind");
  o.require(run_cli("check " + temp_source("unbound", "<x, Z[1]>")) == 1, "unbound exit code");
  o.require(run_cli("check " + temp_source("linear", "\\x:1. <x, x>")) == 1, "linearity exit code");
  o.require(run_cli("check --ctx \"x:Z:1, x:X:1\" " + temp_source("conflict", "<x, x>")) == 1,
            "contraction-basis exit code");
  o.require(run_cli("check " + temp_source("good", "Z x:1. <x, x>")) == 0, "well-typed exit code");
  o.note << terms << " terms and diagrams";
}

} // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<void(Outcome &)>>> criteria = {
      {"sharing semantics", sharing_semantics},
      {"higher-order sharing", higher_order_sharing},
      {"H sugar", hadamard_sugar},
      {"rule soundness", rule_soundness},
      {"commuting with sharing", definition_checks},
      {"substitution", substitution_property},
      {"evaluator self-consistency", evaluator_consistency},
      {"linear embedding", linear_embedding},
      {"round-trips", round_trips},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception &e) {
      o.ok = false;
      o.note << "exception: " << e.what();
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
    if (!o.note.str().empty()) std::cout << ": " << o.note.str();
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
