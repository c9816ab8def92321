#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "zeta/phase.hpp"
#include "zeta/type.hpp"

namespace zeta {

class Term;

namespace term_node {
struct Unit {};
struct Var {
  std::string name;
};
/// Basis generator beta_n^alpha; n < 0 denotes an effect.
struct Gen {
  Basis basis;
  Phase phase;
  std::int64_t n;
};
struct Abs;
struct App;
struct Tup;
struct Let;
} // namespace term_node

/// Immutable ζ-term. Copies share structure.
class Term {
public:
  using Unit = term_node::Unit;
  using Var = term_node::Var;
  using Gen = term_node::Gen;
  using Abs = term_node::Abs;
  using App = term_node::App;
  using Tup = term_node::Tup;
  using Let = term_node::Let;
  struct Node;

  static Term unit();
  static Term var(std::string name);
  static Term gen(Basis b, Phase p, std::int64_t n);
  static Term abs(Basis b, Phase p, std::string name, Term body,
                  std::optional<Type> annotation = std::nullopt, bool linear = false);
  /// \x. M, i.e. a phase-0 Z binder carrying the obligation that x is used once.
  static Term lambda(std::string name, Term body, std::optional<Type> annotation = std::nullopt);
  static Term app(Term fn, Term arg);
  static Term tup(Term left, Term right);
  static Term let(Basis b, std::string first, std::string second, Term bound, Term body,
                  std::optional<Type> first_type = std::nullopt,
                  std::optional<Type> second_type = std::nullopt);

  template <class T> const T *as() const;
  template <class T> bool is() const { return as<T>() != nullptr; }
  const Node &node() const { return *node_; }

  /// Identity of the shared node, used for side tables during inference.
  const void *id() const noexcept { return node_.get(); }

private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

namespace term_node {
struct Abs {
  Basis basis;
  Phase phase;
  std::string name;
  std::optional<Type> annotation;
  Term body;
  bool linear = false;
};
struct App {
  Term fn;
  Term arg;
};
struct Tup {
  Term left;
  Term right;
};
struct Let {
  Basis basis;
  std::string first;
  std::string second;
  std::optional<Type> first_type;
  std::optional<Type> second_type;
  Term bound;
  Term body;
};
} // namespace term_node

struct Term::Node : std::variant<Unit, Var, Gen, Abs, App, Tup, Let> {
  using variant::variant;
};

template <class T> const T *Term::as() const {
  return std::get_if<T>(
      static_cast<const std::variant<Unit, Var, Gen, Abs, App, Tup, Let> *>(node_.get()));
}

inline Term Term::unit() { return Term(std::make_shared<const Node>(Unit{})); }
inline Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(Var{std::move(name)}));
}
inline Term Term::gen(Basis b, Phase p, std::int64_t n) {
  return Term(std::make_shared<const Node>(Gen{b, p, n}));
}
inline Term Term::abs(Basis b, Phase p, std::string name, Term body, std::optional<Type> annotation,
                      bool linear) {
  return Term(std::make_shared<const Node>(
      Abs{b, p, std::move(name), std::move(annotation), std::move(body), linear}));
}
inline Term Term::lambda(std::string name, Term body, std::optional<Type> annotation) {
  return abs(Basis::Zeta, Phase::zero(), std::move(name), std::move(body), std::move(annotation), true);
}
inline Term Term::app(Term fn, Term arg) {
  return Term(std::make_shared<const Node>(App{std::move(fn), std::move(arg)}));
}
inline Term Term::tup(Term left, Term right) {
  return Term(std::make_shared<const Node>(Tup{std::move(left), std::move(right)}));
}
inline Term Term::let(Basis b, std::string first, std::string second, Term bound, Term body,
                      std::optional<Type> first_type, std::optional<Type> second_type) {
  return Term(std::make_shared<const Node>(Let{b, std::move(first), std::move(second),
                                               std::move(first_type), std::move(second_type),
                                               std::move(bound), std::move(body)}));
}

namespace detail {
inline void collect_free(const Term &t, std::set<std::string> &bound,
                         std::vector<std::string> &out) {
  auto bind = [&](const std::string &n, const Term &body) {
    const bool fresh = bound.insert(n).second;
    collect_free(body, bound, out);
    if (fresh) bound.erase(n);
  };
  if (auto v = t.as<Term::Var>()) {
    if (!bound.count(v->name) && std::find(out.begin(), out.end(), v->name) == out.end())
      out.push_back(v->name);
  } else if (auto a = t.as<Term::Abs>()) {
    bind(a->name, a->body);
  } else if (auto ap = t.as<Term::App>()) {
    collect_free(ap->fn, bound, out);
    collect_free(ap->arg, bound, out);
  } else if (auto tp = t.as<Term::Tup>()) {
    collect_free(tp->left, bound, out);
    collect_free(tp->right, bound, out);
  } else if (auto l = t.as<Term::Let>()) {
    collect_free(l->bound, bound, out);
    const bool f1 = bound.insert(l->first).second;
    const bool f2 = bound.insert(l->second).second;
    collect_free(l->body, bound, out);
    if (f1) bound.erase(l->first);
    if (f2) bound.erase(l->second);
  }
}
} // namespace detail

/// Free variables in order of first use.
inline std::vector<std::string> free_vars(const Term &t) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  detail::collect_free(t, bound, out);
  return out;
}

inline bool is_free_in(const std::string &x, const Term &t) {
  auto fv = free_vars(t);
  return std::find(fv.begin(), fv.end(), x) != fv.end();
}

/// Number of free occurrences of x in t.
inline std::size_t occurrences(const std::string &x, const Term &t) {
  if (auto v = t.as<Term::Var>()) return v->name == x ? 1 : 0;
  if (auto a = t.as<Term::Abs>()) return a->name == x ? 0 : occurrences(x, a->body);
  if (auto ap = t.as<Term::App>()) return occurrences(x, ap->fn) + occurrences(x, ap->arg);
  if (auto tp = t.as<Term::Tup>()) return occurrences(x, tp->left) + occurrences(x, tp->right);
  if (auto l = t.as<Term::Let>()) {
    const std::size_t in_bound = occurrences(x, l->bound);
    if (l->first == x || l->second == x) return in_bound;
    return in_bound + occurrences(x, l->body);
  }
  return 0;
}

namespace detail {
inline bool optional_type_eq(const std::optional<Type> &a, const std::optional<Type> &b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

// Bound names map to binding depth; free names compare by spelling.
inline bool alpha_eq_in(const Term &s, const Term &t, std::map<std::string, std::size_t> &ls,
                        std::map<std::string, std::size_t> &rs, std::size_t depth) {
  if (s.node().index() != t.node().index()) return false;
  if (s.is<Term::Unit>()) return true;
  if (auto a = s.as<Term::Var>()) {
    auto b = t.as<Term::Var>();
    auto ia = ls.find(a->name);
    auto ib = rs.find(b->name);
    if (ia == ls.end() && ib == rs.end()) return a->name == b->name;
    if (ia == ls.end() || ib == rs.end()) return false;
    return ia->second == ib->second;
  }
  if (auto a = s.as<Term::Gen>()) {
    auto b = t.as<Term::Gen>();
    return a->basis == b->basis && a->n == b->n && same_angle(a->phase, b->phase);
  }
  auto under = [&](const std::vector<std::pair<std::string, std::string>> &names, const Term &x,
                   const Term &y) {
    std::vector<std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> saved;
    for (std::size_t i = 0; i < names.size(); ++i) {
      auto old = [](auto &m, const std::string &k) -> std::optional<std::size_t> {
        auto it = m.find(k);
        return it == m.end() ? std::nullopt : std::optional<std::size_t>(it->second);
      };
      saved.emplace_back(old(ls, names[i].first), old(rs, names[i].second));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      ls[names[i].first] = depth + i;
      rs[names[i].second] = depth + i;
    }
    const bool r = alpha_eq_in(x, y, ls, rs, depth + names.size());
    for (std::size_t i = names.size(); i-- > 0;) {
      auto restore = [](auto &m, const std::string &k, const std::optional<std::size_t> &v) {
        if (v) m[k] = *v;
        else m.erase(k);
      };
      restore(ls, names[i].first, saved[i].first);
      restore(rs, names[i].second, saved[i].second);
    }
    return r;
  };
  if (auto a = s.as<Term::Abs>()) {
    auto b = t.as<Term::Abs>();
    return a->basis == b->basis && same_angle(a->phase, b->phase) && a->linear == b->linear &&
           optional_type_eq(a->annotation, b->annotation) &&
           under({{a->name, b->name}}, a->body, b->body);
  }
  if (auto a = s.as<Term::App>()) {
    auto b = t.as<Term::App>();
    return alpha_eq_in(a->fn, b->fn, ls, rs, depth) && alpha_eq_in(a->arg, b->arg, ls, rs, depth);
  }
  if (auto a = s.as<Term::Tup>()) {
    auto b = t.as<Term::Tup>();
    return alpha_eq_in(a->left, b->left, ls, rs, depth) &&
           alpha_eq_in(a->right, b->right, ls, rs, depth);
  }
  auto a = s.as<Term::Let>();
  auto b = t.as<Term::Let>();
  // let <x, x> binds the second name over the first
  if ((a->first == a->second) != (b->first == b->second)) return false;
  return a->basis == b->basis && optional_type_eq(a->first_type, b->first_type) &&
         optional_type_eq(a->second_type, b->second_type) &&
         alpha_eq_in(a->bound, b->bound, ls, rs, depth) &&
         under({{a->first, b->first}, {a->second, b->second}}, a->body, b->body);
}
} // namespace detail

/// Equality up to renaming of bound variables; phases compare by value.
inline bool alpha_eq(const Term &s, const Term &t) {
  std::map<std::string, std::size_t> ls, rs;
  return detail::alpha_eq_in(s, t, ls, rs, 0);
}

/// `base` with primes appended until it avoids every name in `avoid`.
inline std::string fresh_name(const std::string &base, const std::set<std::string> &avoid) {
  std::string n = base;
  while (avoid.count(n)) n += "'";
  return n;
}

namespace detail {
inline void all_names(const Term &t, std::set<std::string> &out) {
  if (auto v = t.as<Term::Var>()) out.insert(v->name);
  else if (auto a = t.as<Term::Abs>()) {
    out.insert(a->name);
    all_names(a->body, out);
  } else if (auto ap = t.as<Term::App>()) {
    all_names(ap->fn, out);
    all_names(ap->arg, out);
  } else if (auto tp = t.as<Term::Tup>()) {
    all_names(tp->left, out);
    all_names(tp->right, out);
  } else if (auto l = t.as<Term::Let>()) {
    out.insert(l->first);
    out.insert(l->second);
    all_names(l->bound, out);
    all_names(l->body, out);
  }
}
} // namespace detail

/// Every name mentioned in t, bound or free.
inline std::set<std::string> names_in(const Term &t) {
  std::set<std::string> out;
  detail::all_names(t, out);
  return out;
}

/// Capture-avoiding t[x := r].
inline Term substitute(const Term &t, const std::string &x, const Term &r) {
  if (auto v = t.as<Term::Var>()) return v->name == x ? r : t;
  if (t.is<Term::Unit>() || t.is<Term::Gen>()) return t;
  if (auto ap = t.as<Term::App>()) return Term::app(substitute(ap->fn, x, r), substitute(ap->arg, x, r));
  if (auto tp = t.as<Term::Tup>())
    return Term::tup(substitute(tp->left, x, r), substitute(tp->right, x, r));

  const auto rfv = free_vars(r);
  auto captures = [&](const std::string &n) {
    return std::find(rfv.begin(), rfv.end(), n) != rfv.end();
  };
  auto avoid_set = [&](const Term &body) {
    std::set<std::string> avoid(rfv.begin(), rfv.end());
    auto b = names_in(body);
    avoid.insert(b.begin(), b.end());
    avoid.insert(x);
    return avoid;
  };

  if (auto a = t.as<Term::Abs>()) {
    if (a->name == x || !is_free_in(x, a->body)) return t;
    std::string name = a->name;
    Term body = a->body;
    if (captures(name)) {
      name = fresh_name(name, avoid_set(body));
      body = substitute(body, a->name, Term::var(name));
    }
    return Term::abs(a->basis, a->phase, name, substitute(body, x, r), a->annotation, a->linear);
  }

  auto l = t.as<Term::Let>();
  Term bound = substitute(l->bound, x, r);
  if (l->first == x || l->second == x || !is_free_in(x, l->body))
    return Term::let(l->basis, l->first, l->second, bound, l->body, l->first_type, l->second_type);
  std::string first = l->first, second = l->second;
  Term body = l->body;
  if (captures(first)) {
    auto avoid = avoid_set(body);
    avoid.insert(second);
    first = fresh_name(first, avoid);
    body = substitute(body, l->first, Term::var(first));
  }
  if (captures(second)) {
    auto avoid = avoid_set(body);
    avoid.insert(first);
    second = fresh_name(second, avoid);
    body = substitute(body, l->second, Term::var(second));
  }
  return Term::let(l->basis, first, second, bound, substitute(body, x, r), l->first_type,
                   l->second_type);
}

} // namespace zeta
