#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zeta/error.hpp"
#include "zeta/parser.hpp"
#include "zeta/phase.hpp"
#include "zeta/term.hpp"
#include "zeta/type.hpp"

namespace zeta {

struct Binding {
  std::string name;
  Basis basis = Basis::Zeta;
  Type type;

  friend bool operator==(const Binding &a, const Binding &b) {
    return a.name == b.name && a.basis == b.basis && a.type == b.type;
  }
};

/// Ordered variable bindings x :_beta A. Order is wire order.
class Context {
public:
  Context() = default;
  Context(std::initializer_list<Binding> bs) : entries_(bs) {}
  explicit Context(std::vector<Binding> bs) : entries_(std::move(bs)) {}

  const std::vector<Binding> &entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Binding &operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].name == name) return i;
    return std::nullopt;
  }

  const Binding *find(std::string_view name) const {
    auto i = index_of(name);
    return i ? &entries_[*i] : nullptr;
  }

  Context extended(Binding b) const {
    Context c = *this;
    c.entries_.push_back(std::move(b));
    return c;
  }

  /// Total number of wires.
  std::size_t wires() const {
    std::size_t n = 0;
    for (auto &b : entries_) n += zeta::size(b.type);
    return n;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) s += ", ";
      s += entries_[i].name + ":" + std::string(basis_name(entries_[i].basis)) + ":" +
           entries_[i].type.to_string();
    }
    return s;
  }

  friend bool operator==(const Context &, const Context &) = default;

private:
  std::vector<Binding> entries_;
};

/// Parses `x:Z:1, f:X:1->1*1`. An empty string is the empty context.
inline Context parse_context(std::string_view text) {
  std::vector<Binding> out;
  std::size_t start = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  if (trim(text).empty()) return Context{};
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = trim(text.substr(start, comma - start));
    const std::size_t c1 = item.find(':');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
      throw ParseError("context entry '" + std::string(item) + "' is not name:basis:type", 1,
                       start + 1);
    const std::string name(trim(item.substr(0, c1)));
    if (name.empty() || !detail::ident_start(name[0]) || detail::is_keyword(name))
      throw ParseError("bad variable name '" + name + "' in context", 1, start + 1);
    const std::string_view basis = trim(item.substr(c1 + 1, c2 - c1 - 1));
    if (basis != "Z" && basis != "X")
      throw ParseError("context basis must be Z or X, found '" + std::string(basis) + "'", 1,
                       start + 1);
    out.push_back({name, basis_from_name(basis), parse_type(item.substr(c2 + 1))});
    start = comma + 1;
  }
  return Context(std::move(out));
}

// ---------------------------------------------------------------------------
// Unification

using Substitution = std::map<std::size_t, Type>;

inline Type resolve(const Type &t, const Substitution &s) {
  if (auto v = t.as<Type::Var>()) {
    auto it = s.find(v->id);
    return it == s.end() ? t : resolve(it->second, s);
  }
  if (auto p = t.as<Type::Tensor>()) return Type::tensor(resolve(p->left, s), resolve(p->right, s));
  if (auto d = t.as<Type::Dual>()) return Type::dual(resolve(d->inner, s));
  return t;
}

namespace detail {
inline bool occurs(std::size_t id, const Type &t, const Substitution &s) {
  Type r = resolve(t, s);
  if (auto v = r.as<Type::Var>()) return v->id == id;
  if (auto p = r.as<Type::Tensor>()) return occurs(id, p->left, s) || occurs(id, p->right, s);
  if (auto d = r.as<Type::Dual>()) return occurs(id, d->inner, s);
  return false;
}
} // namespace detail

/// Most general unifier extending `subst`. Numeral, Tensor and Dual are free
/// constructors, so 2 does not unify with 1 * 1.
inline Substitution unify(const Type &a, const Type &b, Substitution subst) {
  Type x = resolve(a, subst);
  Type y = resolve(b, subst);
  if (x == y) return subst;
  if (auto v = x.as<Type::Var>()) {
    if (detail::occurs(v->id, y, subst))
      throw TypeError(TypeErrorKind::OccursCheck,
                      "occurs check: " + x.to_string() + " occurs in " + y.to_string());
    subst[v->id] = y;
    return subst;
  }
  if (y.is<Type::Var>()) return unify(y, x, std::move(subst));
  auto clash = [&]() {
    return TypeError(TypeErrorKind::Mismatch,
                     "cannot unify " + x.to_string() + " with " + y.to_string());
  };
  if (x.node().index() != y.node().index()) throw clash();
  if (auto n = x.as<Type::Numeral>()) {
    if (n->n != y.as<Type::Numeral>()->n) throw clash();
    return subst;
  }
  if (auto p = x.as<Type::Tensor>()) {
    auto q = y.as<Type::Tensor>();
    subst = unify(p->left, q->left, std::move(subst));
    return unify(p->right, q->right, std::move(subst));
  }
  return unify(x.as<Type::Dual>()->inner, y.as<Type::Dual>()->inner, std::move(subst));
}

// ---------------------------------------------------------------------------
// Derivations

enum class Rule { U, V, G, D, B, A, T, E, W, C, X };

inline std::string_view rule_name(Rule r) {
  static constexpr std::string_view names[] = {"U", "V", "G", "D", "B", "A",
                                               "T", "E", "W", "C", "X"};
  return names[static_cast<int>(r)];
}

/// A typing derivation with structural rules made explicit.
///
/// W and C act on the last context entry, as in the declarative rules; X
/// nodes bring the affected entry to the end first. For X, `order[j]` is the
/// conclusion entry that becomes entry j of the premise context. For C,
/// `copies` names the fresh variables, one per occurrence, left to right.
struct Derivation {
  Rule rule;
  Context context;
  Term term;
  Type type;
  std::vector<Derivation> premises;

  std::string variable;
  Basis basis = Basis::Zeta;
  std::vector<std::string> copies;
  std::vector<std::size_t> order;

  template <class F> void visit(F &&f) const {
    f(*this);
    for (auto &p : premises) p.visit(f);
  }
};

namespace detail {

struct Elaborator {
  Substitution subst;
  std::size_t next_var = 0;
  std::map<std::string, std::vector<Type>> env;

  Type fresh() { return Type::var(next_var++); }

  Type lookup(const std::string &x) {
    auto it = env.find(x);
    if (it == env.end() || it->second.empty())
      throw TypeError(TypeErrorKind::UnboundVariable, "unbound variable " + x);
    return it->second.back();
  }

  struct Scope {
    Elaborator &e;
    std::vector<std::string> names;
    Scope(Elaborator &el, std::vector<std::pair<std::string, Type>> bs) : e(el) {
      for (auto &[n, t] : bs) {
        e.env[n].push_back(t);
        names.push_back(n);
      }
    }
    ~Scope() {
      for (auto &n : names) e.env[n].pop_back();
    }
  };

  std::pair<Term, Type> run(const Term &t) {
    if (t.is<Term::Unit>()) return {t, Type::unit()};
    if (auto v = t.as<Term::Var>()) return {t, lookup(v->name)};
    if (auto g = t.as<Term::Gen>()) {
      if (g->n >= 0) return {t, Type::numeral(static_cast<std::size_t>(g->n))};
      return {t, Type::fn(Type::numeral(static_cast<std::size_t>(-g->n)), Type::unit())};
    }
    if (auto a = t.as<Term::Abs>()) {
      if (a->linear) {
        const std::size_t k = occurrences(a->name, a->body);
        if (k != 1)
          throw TypeError(TypeErrorKind::LinearityViolation,
                          "lambda-bound variable " + a->name + " must occur exactly once, found " +
                              std::to_string(k));
      }
      Type dom = a->annotation ? *a->annotation : fresh();
      Scope scope(*this, {{a->name, dom}});
      auto [body, cod] = run(a->body);
      return {Term::abs(a->basis, a->phase, a->name, body, dom, a->linear), Type::fn(dom, cod)};
    }
    if (auto ap = t.as<Term::App>()) {
      auto [fn, ft] = run(ap->fn);
      auto [arg, at] = run(ap->arg);
      Type result = fresh();
      try {
        subst = unify(ft, Type::fn(at, result), std::move(subst));
      } catch (const TypeError &err) {
        throw TypeError(err.kind(), "cannot apply " + print(ap->fn) + " : " +
                                        resolve(ft, subst).to_string() + " to " + print(ap->arg) +
                                        " : " + resolve(at, subst).to_string() + " (" +
                                        err.what() + ")");
      }
      return {Term::app(fn, arg), result};
    }
    if (auto tp = t.as<Term::Tup>()) {
      auto [l, lt] = run(tp->left);
      auto [r, rt] = run(tp->right);
      return {Term::tup(l, r), Type::tensor(lt, rt)};
    }
    auto l = t.as<Term::Let>();
    auto [bound, bt] = run(l->bound);
    Type ta = l->first_type ? *l->first_type : fresh();
    Type tb = l->second_type ? *l->second_type : fresh();
    try {
      subst = unify(bt, Type::tensor(ta, tb), std::move(subst));
    } catch (const TypeError &err) {
      throw TypeError(err.kind(), "let-bound term " + print(l->bound) + " is not a pair: " +
                                      err.what());
    }
    Scope scope(*this, {{l->first, ta}, {l->second, tb}});
    auto [body, ct] = run(l->body);
    return {Term::let(l->basis, l->first, l->second, bound, body, ta, tb), ct};
  }

  Type concrete(const Type &t, const std::string &binder) const {
    Type r = resolve(t, subst);
    if (r.has_vars())
      throw TypeError(TypeErrorKind::Ambiguous, "cannot determine the type of binder '" + binder +
                                                    "' (" + r.to_string() +
                                                    "); add a type annotation");
    return r;
  }

  Term finalize(const Term &t) const {
    if (auto a = t.as<Term::Abs>())
      return Term::abs(a->basis, a->phase, a->name, finalize(a->body),
                       concrete(*a->annotation, a->name), a->linear);
    if (auto ap = t.as<Term::App>()) return Term::app(finalize(ap->fn), finalize(ap->arg));
    if (auto tp = t.as<Term::Tup>()) return Term::tup(finalize(tp->left), finalize(tp->right));
    if (auto l = t.as<Term::Let>())
      return Term::let(l->basis, l->first, l->second, finalize(l->bound), finalize(l->body),
                       concrete(*l->first_type, l->first), concrete(*l->second_type, l->second));
    return t;
  }
};

// Renames binders so that every binder is distinct from every other binder
// and from the names in `taken`.
inline Term freshen_binders(const Term &t, std::set<std::string> &taken) {
  auto rebind = [&](const std::string &name, Term &body) {
    if (!taken.count(name)) {
      taken.insert(name);
      return name;
    }
    auto avoid = taken;
    auto in_body = names_in(body);
    avoid.insert(in_body.begin(), in_body.end());
    std::string fresh = fresh_name(name, avoid);
    body = substitute(body, name, Term::var(fresh));
    taken.insert(fresh);
    return fresh;
  };
  if (auto a = t.as<Term::Abs>()) {
    Term body = a->body;
    std::string name = rebind(a->name, body);
    return Term::abs(a->basis, a->phase, name, freshen_binders(body, taken), a->annotation,
                     a->linear);
  }
  if (auto ap = t.as<Term::App>()) {
    Term fn = freshen_binders(ap->fn, taken);
    return Term::app(fn, freshen_binders(ap->arg, taken));
  }
  if (auto tp = t.as<Term::Tup>()) {
    Term l = freshen_binders(tp->left, taken);
    return Term::tup(l, freshen_binders(tp->right, taken));
  }
  if (auto l = t.as<Term::Let>()) {
    Term bound = freshen_binders(l->bound, taken);
    Term body = l->body;
    std::string first = l->first;
    if (first == l->second) {
      // the second name shadows the first; the first is never referenced
      auto avoid = taken;
      auto in_body = names_in(body);
      avoid.insert(in_body.begin(), in_body.end());
      avoid.insert(first);
      first = fresh_name(first, avoid);
      taken.insert(first);
    } else {
      first = rebind(first, body);
    }
    std::string second = rebind(l->second, body);
    return Term::let(l->basis, first, second, bound, freshen_binders(body, taken), l->first_type,
                     l->second_type);
  }
  return t;
}

// Replaces the free occurrences of x, left to right, by the given names.
// Binders are unique at this point, so no occurrence is shadowed.
inline Term rename_occurrences(const Term &t, const std::string &x,
                               const std::vector<std::string> &names, std::size_t &next) {
  if (auto v = t.as<Term::Var>()) return v->name == x ? Term::var(names.at(next++)) : t;
  if (auto a = t.as<Term::Abs>()) {
    if (a->name == x) return t;
    return Term::abs(a->basis, a->phase, a->name, rename_occurrences(a->body, x, names, next),
                     a->annotation, a->linear);
  }
  if (auto ap = t.as<Term::App>()) {
    Term fn = rename_occurrences(ap->fn, x, names, next);
    return Term::app(fn, rename_occurrences(ap->arg, x, names, next));
  }
  if (auto tp = t.as<Term::Tup>()) {
    Term l = rename_occurrences(tp->left, x, names, next);
    return Term::tup(l, rename_occurrences(tp->right, x, names, next));
  }
  if (auto l = t.as<Term::Let>()) {
    Term bound = rename_occurrences(l->bound, x, names, next);
    if (l->first == x || l->second == x)
      return Term::let(l->basis, l->first, l->second, bound, l->body, l->first_type, l->second_type);
    return Term::let(l->basis, l->first, l->second, bound,
                     rename_occurrences(l->body, x, names, next), l->first_type, l->second_type);
  }
  return t;
}

// Synthesizes the type of a fully annotated term whose binders are unique.
inline Type synthesize(const Context &ctx, const Term &t);

inline Derivation leaf(Rule r, const Context &ctx, const Term &t, const Type &ty) {
  return Derivation{r, ctx, t, ty, {}, {}, Basis::Zeta, {}, {}};
}

class Builder {
public:
  // Structural prefix: weaken what the term does not use, contract what it
  // uses more than once, then the syntax-directed rule.
  Derivation derive(const Context &ctx, const Term &t) {
    const Type ty = synthesize(ctx, t);
    std::vector<std::string> fv = free_vars(t);
    auto used = [&](const std::string &n) { return std::find(fv.begin(), fv.end(), n) != fv.end(); };

    if (std::any_of(ctx.begin(), ctx.end(), [&](const Binding &b) { return !used(b.name); })) {
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < ctx.size(); ++i)
        if (used(ctx[i].name)) order.push_back(i);
      const std::size_t kept = order.size();
      for (std::size_t i = 0; i < ctx.size(); ++i)
        if (!used(ctx[i].name)) order.push_back(i);
      return permute_then(ctx, t, ty, order, [&](const Context &moved) {
        return weaken_from(moved, kept, t, ty);
      });
    }

    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const std::size_t k = occurrences(ctx[i].name, t);
      if (k < 2) continue;
      std::vector<std::size_t> order;
      for (std::size_t j = 0; j < ctx.size(); ++j)
        if (j != i) order.push_back(j);
      order.push_back(i);
      return permute_then(ctx, t, ty, order,
                          [&](const Context &moved) { return contract_last(moved, t, ty, k); });
    }

    return syntax(ctx, t, ty);
  }

private:
  template <class F>
  Derivation permute_then(const Context &ctx, const Term &t, const Type &ty,
                          const std::vector<std::size_t> &order, F &&then) {
    bool identity = true;
    for (std::size_t j = 0; j < order.size(); ++j) identity = identity && order[j] == j;
    if (identity) return then(ctx);
    std::vector<Binding> moved;
    for (auto j : order) moved.push_back(ctx[j]);
    Context mc(std::move(moved));
    Derivation d = leaf(Rule::X, ctx, t, ty);
    d.order = order;
    d.premises.push_back(then(mc));
    return d;
  }

  Derivation weaken_from(const Context &ctx, std::size_t kept, const Term &t, const Type &ty) {
    if (ctx.size() == kept) return derive(ctx, t);
    std::vector<Binding> rest(ctx.begin(), ctx.end() - 1);
    Derivation d = leaf(Rule::W, ctx, t, ty);
    d.variable = ctx.entries().back().name;
    d.basis = ctx.entries().back().basis;
    d.premises.push_back(weaken_from(Context(std::move(rest)), kept, t, ty));
    return d;
  }

  Derivation contract_last(const Context &ctx, const Term &t, const Type &ty, std::size_t k) {
    const Binding &x = ctx.entries().back();
    std::vector<std::string> copies;
    for (std::size_t i = 1; i <= k; ++i) copies.push_back(x.name + "#" + std::to_string(i));
    std::size_t next = 0;
    Term renamed = rename_occurrences(t, x.name, copies, next);
    std::vector<Binding> inner(ctx.begin(), ctx.end() - 1);
    for (auto &c : copies) inner.push_back({c, x.basis, x.type});
    Derivation d = leaf(Rule::C, ctx, t, ty);
    d.variable = x.name;
    d.basis = x.basis;
    d.copies = copies;
    d.premises.push_back(derive(Context(std::move(inner)), renamed));
    return d;
  }

  Derivation syntax(const Context &ctx, const Term &t, const Type &ty) {
    if (t.is<Term::Unit>()) return leaf(Rule::U, ctx, t, ty);
    if (t.is<Term::Var>()) return leaf(Rule::V, ctx, t, ty);
    if (auto g = t.as<Term::Gen>()) return leaf(g->n >= 0 ? Rule::G : Rule::D, ctx, t, ty);
    if (auto a = t.as<Term::Abs>()) {
      Derivation d = leaf(Rule::B, ctx, t, ty);
      d.premises.push_back(derive(ctx.extended({a->name, a->basis, *a->annotation}), a->body));
      return d;
    }
    if (auto ap = t.as<Term::App>()) {
      Derivation d = leaf(Rule::A, ctx, t, ty);
      d.premises.push_back(derive(ctx, ap->fn));
      d.premises.push_back(derive(ctx, ap->arg));
      return d;
    }
    if (auto tp = t.as<Term::Tup>()) {
      Derivation d = leaf(Rule::T, ctx, t, ty);
      d.premises.push_back(derive(ctx, tp->left));
      d.premises.push_back(derive(ctx, tp->right));
      return d;
    }
    auto l = t.as<Term::Let>();
    Derivation d = leaf(Rule::E, ctx, t, ty);
    d.basis = l->basis;
    d.premises.push_back(derive(ctx, l->bound));
    d.premises.push_back(derive(
        ctx.extended({l->first, l->basis, *l->first_type}).extended({l->second, l->basis, *l->second_type}),
        l->body));
    return d;
  }
};

inline Type synthesize(const Context &ctx, const Term &t) {
  if (t.is<Term::Unit>()) return Type::unit();
  if (auto v = t.as<Term::Var>()) {
    auto b = ctx.find(v->name);
    if (!b) throw TypeError(TypeErrorKind::UnboundVariable, "unbound variable " + v->name);
    return b->type;
  }
  if (auto g = t.as<Term::Gen>()) {
    if (g->n >= 0) return Type::numeral(static_cast<std::size_t>(g->n));
    return Type::fn(Type::numeral(static_cast<std::size_t>(-g->n)), Type::unit());
  }
  if (auto a = t.as<Term::Abs>())
    return Type::fn(*a->annotation,
                    synthesize(ctx.extended({a->name, a->basis, *a->annotation}), a->body));
  if (auto ap = t.as<Term::App>()) {
    Type ft = synthesize(ctx, ap->fn);
    Type at = synthesize(ctx, ap->arg);
    if (!ft.is_fn() || !(ft.fn_domain() == at))
      throw TypeError(TypeErrorKind::Mismatch, "ill-typed application " + print(t));
    return ft.fn_codomain();
  }
  if (auto tp = t.as<Term::Tup>())
    return Type::tensor(synthesize(ctx, tp->left), synthesize(ctx, tp->right));
  auto l = t.as<Term::Let>();
  return synthesize(ctx.extended({l->first, l->basis, *l->first_type})
                        .extended({l->second, l->basis, *l->second_type}),
                    l->body);
}

inline void check_context(const Context &ctx) {
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (ctx[i].type.has_vars())
      throw TypeError(TypeErrorKind::Ambiguous, "context type of " + ctx[i].name + " is not concrete");
    for (std::size_t j = 0; j < i; ++j) {
      if (ctx[i].name != ctx[j].name) continue;
      if (ctx[i].basis != ctx[j].basis)
        throw TypeError(TypeErrorKind::ContractionBasisConflict,
                        "contraction-basis conflict: " + ctx[i].name + " is bound in basis " +
                            std::string(basis_name(ctx[j].basis)) + " and in basis " +
                            std::string(basis_name(ctx[i].basis)));
      throw TypeError(TypeErrorKind::DuplicateBinding,
                      "variable " + ctx[i].name + " is bound twice in the context");
    }
  }
}

inline std::pair<Type, Derivation> infer_impl(const Context &ctx, const Term &term,
                                              const std::optional<Type> &expected) {
  check_context(ctx);
  for (auto &x : free_vars(term))
    if (!ctx.find(x)) throw TypeError(TypeErrorKind::UnboundVariable, "unbound variable " + x);

  std::set<std::string> taken;
  for (auto &b : ctx) taken.insert(b.name);
  for (auto &x : free_vars(term)) taken.insert(x);
  const Term unique = freshen_binders(term, taken);

  Elaborator e;
  for (auto &b : ctx) e.env[b.name].push_back(b.type);
  auto [elaborated, ty] = e.run(unique);
  if (expected) {
    try {
      e.subst = unify(ty, *expected, std::move(e.subst));
    } catch (const TypeError &) {
      throw TypeError(TypeErrorKind::Mismatch, "type mismatch: expected " + expected->to_string() +
                                                   ", found " + resolve(ty, e.subst).to_string());
    }
  }
  const Term annotated = e.finalize(elaborated);
  Type result = resolve(ty, e.subst);
  Builder b;
  Derivation d = b.derive(ctx, annotated);
  return {result, std::move(d)};
}

} // namespace detail

/// Principal type of `term` under `ctx`, with an explicit derivation. The
/// derivation's terms carry inferred annotations on every binder.
inline std::pair<Type, Derivation> infer(const Context &ctx, const Term &term) {
  return detail::infer_impl(ctx, term, std::nullopt);
}

/// Derivation of ctx |- term : expected.
inline Derivation check(const Context &ctx, const Term &term, const Type &expected) {
  return detail::infer_impl(ctx, term, expected).second;
}

/// Re-checks every node of a derivation against its rule. Throws
/// TypeError(InvalidDerivation) naming the first offending node.
inline void validate(const Derivation &d) {
  auto bad = [&](const std::string &why) {
    throw TypeError(TypeErrorKind::InvalidDerivation,
                    std::string("rule ") + std::string(rule_name(d.rule)) + " at " + print(d.term) +
                        ": " + why);
  };
  auto arity = [&](std::size_t n) {
    if (d.premises.size() != n) bad("expected " + std::to_string(n) + " premises");
  };
  auto same_judgement = [&](const Derivation &p) {
    if (!alpha_eq(p.term, d.term)) bad("premise term differs");
    if (!(p.type == d.type)) bad("premise type differs");
  };
  for (auto &b : d.context)
    if (b.type.has_vars()) bad("context type not concrete");

  switch (d.rule) {
  case Rule::U:
    arity(0);
    if (!d.term.is<Term::Unit>() || !(d.type == Type::unit())) bad("expected * : 0");
    break;
  case Rule::V: {
    arity(0);
    auto v = d.term.as<Term::Var>();
    if (!v) bad("not a variable");
    auto b = d.context.find(v->name);
    if (!b || !(b->type == d.type)) bad("variable not in context at this type");
    break;
  }
  case Rule::G:
  case Rule::D: {
    arity(0);
    auto g = d.term.as<Term::Gen>();
    if (!g) bad("not a generator");
    const std::size_t n = static_cast<std::size_t>(g->n < 0 ? -g->n : g->n);
    if (d.rule == Rule::G && (g->n < 0 || !(d.type == Type::numeral(n)))) bad("expected state type");
    if (d.rule == Rule::D && (g->n >= 0 || !(d.type == Type::fn(Type::numeral(n), Type::unit()))))
      bad("expected effect type");
    break;
  }
  case Rule::B: {
    arity(1);
    auto a = d.term.as<Term::Abs>();
    if (!a || !a->annotation) bad("expected an annotated abstraction");
    if (d.context.find(a->name)) bad("bound variable already in context");
    const Derivation &p = d.premises[0];
    if (!(p.context == d.context.extended({a->name, a->basis, *a->annotation}))) bad("premise context");
    if (!alpha_eq(p.term, a->body)) bad("premise term");
    if (!(d.type == Type::fn(*a->annotation, p.type))) bad("conclusion type");
    if (a->linear && occurrences(a->name, a->body) != 1) bad("linear binder used non-linearly");
    break;
  }
  case Rule::A:
  case Rule::T: {
    arity(2);
    const Derivation &l = d.premises[0], &r = d.premises[1];
    if (!(l.context == d.context) || !(r.context == d.context)) bad("premise contexts");
    if (d.rule == Rule::A) {
      auto ap = d.term.as<Term::App>();
      if (!ap || !alpha_eq(l.term, ap->fn) || !alpha_eq(r.term, ap->arg)) bad("premise terms");
      if (!(l.type == Type::fn(r.type, d.type))) bad("function type");
    } else {
      auto tp = d.term.as<Term::Tup>();
      if (!tp || !alpha_eq(l.term, tp->left) || !alpha_eq(r.term, tp->right)) bad("premise terms");
      if (!(d.type == Type::tensor(l.type, r.type))) bad("tensor type");
    }
    break;
  }
  case Rule::E: {
    arity(2);
    auto l = d.term.as<Term::Let>();
    if (!l || !l->first_type || !l->second_type) bad("expected an annotated let");
    const Derivation &m = d.premises[0], &n = d.premises[1];
    if (!(m.context == d.context) || !alpha_eq(m.term, l->bound) ||
        !(m.type == Type::tensor(*l->first_type, *l->second_type)))
      bad("bound premise");
    if (!(n.context == d.context.extended({l->first, l->basis, *l->first_type})
                           .extended({l->second, l->basis, *l->second_type})) ||
        !alpha_eq(n.term, l->body) || !(n.type == d.type))
      bad("body premise");
    break;
  }
  case Rule::W: {
    arity(1);
    if (d.context.empty()) bad("nothing to weaken");
    const Binding &w = d.context.entries().back();
    if (w.name != d.variable) bad("weakened variable is not last");
    if (is_free_in(w.name, d.term)) bad("weakened variable is used");
    std::vector<Binding> rest(d.context.begin(), d.context.end() - 1);
    if (!(d.premises[0].context == Context(rest))) bad("premise context");
    same_judgement(d.premises[0]);
    break;
  }
  case Rule::C: {
    arity(1);
    if (d.context.empty() || d.copies.size() < 2) bad("contraction needs a variable and >= 2 copies");
    const Binding &x = d.context.entries().back();
    if (x.name != d.variable) bad("contracted variable is not last");
    if (x.basis != d.basis) bad("contraction basis differs from the variable's basis");
    std::vector<Binding> inner(d.context.begin(), d.context.end() - 1);
    for (auto &c : d.copies) inner.push_back({c, x.basis, x.type});
    const Derivation &p = d.premises[0];
    if (!(p.context == Context(inner))) bad("premise context");
    Term back = p.term;
    for (auto &c : d.copies) back = substitute(back, c, Term::var(x.name));
    if (!alpha_eq(back, d.term)) bad("premise term is not a renaming of the conclusion");
    if (!(p.type == d.type)) bad("premise type differs");
    break;
  }
  case Rule::X: {
    arity(1);
    std::vector<std::size_t> sorted = d.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i) bad("order is not a permutation");
    if (sorted.size() != d.context.size()) bad("order has the wrong length");
    std::vector<Binding> moved;
    for (auto j : d.order) moved.push_back(d.context[j]);
    if (!(d.premises[0].context == Context(moved))) bad("premise context");
    same_judgement(d.premises[0]);
    break;
  }
  }
  for (auto &p : d.premises) validate(p);
}

} // namespace zeta
