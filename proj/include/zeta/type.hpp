#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "zeta/error.hpp"

namespace zeta {

class Type;

namespace type_node {
struct Numeral;
struct Tensor;
struct Dual;
struct Var;
} // namespace type_node

/// Types: numerals n (n qubits), tensors A * B, duals A'. Type variables only
/// appear during inference. The function type A -> B is the derived form
/// Tensor(Dual(A), B) and the unit type is Numeral(0).
class Type {
public:
  using Numeral = type_node::Numeral;
  using Tensor = type_node::Tensor;
  using Dual = type_node::Dual;
  using Var = type_node::Var;
  struct Node;

  Type();

  static Type numeral(std::size_t n);
  static Type unit() { return numeral(0); }
  static Type tensor(Type a, Type b);
  static Type dual(Type a);
  static Type var(std::size_t id);
  static Type fn(Type a, Type b) { return tensor(dual(std::move(a)), std::move(b)); }

  const Node &node() const { return *node_; }

  template <class T> const T *as() const;
  template <class T> bool is() const { return as<T>() != nullptr; }

  /// Domain and codomain when the type has the shape A' * B.
  bool is_fn() const;
  const Type &fn_domain() const;
  const Type &fn_codomain() const;

  bool has_vars() const;

  friend bool operator==(const Type &a, const Type &b);

  std::string to_string() const { return print(0); }

private:
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  // prec 0: arrow level, 1: product operand, 2: postfix operand
  std::string print(int prec) const;

  std::shared_ptr<const Node> node_;
};

namespace type_node {
struct Numeral {
  std::size_t n;
};
struct Tensor {
  Type left;
  Type right;
};
struct Dual {
  Type inner;
};
struct Var {
  std::size_t id;
};
} // namespace type_node

struct Type::Node : std::variant<Numeral, Tensor, Dual, Var> {
  using variant::variant;
};

inline Type::Type() : Type(numeral(0)) {}
inline Type Type::numeral(std::size_t n) { return Type(std::make_shared<const Node>(Numeral{n})); }
inline Type Type::tensor(Type a, Type b) {
  return Type(std::make_shared<const Node>(Tensor{std::move(a), std::move(b)}));
}
inline Type Type::dual(Type a) { return Type(std::make_shared<const Node>(Dual{std::move(a)})); }
inline Type Type::var(std::size_t id) { return Type(std::make_shared<const Node>(Var{id})); }

template <class T> const T *Type::as() const {
  return std::get_if<T>(static_cast<const std::variant<Numeral, Tensor, Dual, Var> *>(node_.get()));
}

inline bool Type::is_fn() const {
  auto t = as<Tensor>();
  return t && t->left.is<Dual>();
}
inline const Type &Type::fn_domain() const { return as<Tensor>()->left.as<Dual>()->inner; }
inline const Type &Type::fn_codomain() const { return as<Tensor>()->right; }

inline bool Type::has_vars() const {
  if (is<Numeral>()) return false;
  if (auto t = as<Tensor>()) return t->left.has_vars() || t->right.has_vars();
  if (auto d = as<Dual>()) return d->inner.has_vars();
  return true;
}

inline bool operator==(const Type &a, const Type &b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  if (auto x = a.as<Type::Numeral>()) return x->n == b.as<Type::Numeral>()->n;
  if (auto x = a.as<Type::Tensor>())
    return x->left == b.as<Type::Tensor>()->left && x->right == b.as<Type::Tensor>()->right;
  if (auto x = a.as<Type::Dual>()) return x->inner == b.as<Type::Dual>()->inner;
  return a.as<Type::Var>()->id == b.as<Type::Var>()->id;
}

inline std::string Type::print(int prec) const {
  auto wrap = [&](std::string s, int need) { return prec > need ? "(" + s + ")" : s; };
  if (is_fn()) return wrap(fn_domain().print(1) + " -> " + fn_codomain().print(0), 0);
  if (auto n = as<Numeral>()) return std::to_string(n->n);
  if (auto t = as<Tensor>()) return wrap(t->left.print(1) + " * " + t->right.print(2), 1);
  if (auto d = as<Dual>()) return d->inner.print(2) + "'";
  return "?" + std::to_string(as<Var>()->id);
}

/// Number of wires (qubits) carried by a fully inferred type.
inline std::size_t size(const Type &t) {
  if (auto n = t.as<Type::Numeral>()) return n->n;
  if (auto p = t.as<Type::Tensor>()) return size(p->left) + size(p->right);
  if (auto d = t.as<Type::Dual>()) return size(d->inner);
  throw TypeError(TypeErrorKind::Ambiguous, "size of a type containing a type variable");
}

/// A wire label. Numerals give indices, tensors tag with L/R, duals star.
class Label {
public:
  enum class Kind { Index, Left, Right, Star };

  static Label index(std::size_t i) { return Label(Kind::Index, i, nullptr); }
  static Label left(Label l) { return Label(Kind::Left, 0, std::make_shared<const Label>(std::move(l))); }
  static Label right(Label l) { return Label(Kind::Right, 0, std::make_shared<const Label>(std::move(l))); }
  static Label star(Label l) { return Label(Kind::Star, 0, std::make_shared<const Label>(std::move(l))); }

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return index_; }
  const Label &inner() const { return *inner_; }

  friend bool operator==(const Label &a, const Label &b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == Kind::Index) return a.index_ == b.index_;
    return *a.inner_ == *b.inner_;
  }

  std::string to_string() const {
    switch (kind_) {
    case Kind::Index: return std::to_string(index_);
    case Kind::Left: return "(L," + inner_->to_string() + ")";
    case Kind::Right: return "(R," + inner_->to_string() + ")";
    case Kind::Star: return inner_->to_string() + "*";
    }
    return {};
  }

private:
  Label(Kind k, std::size_t i, std::shared_ptr<const Label> inner)
      : kind_(k), index_(i), inner_(std::move(inner)) {}

  Kind kind_;
  std::size_t index_;
  std::shared_ptr<const Label> inner_;
};

/// Ordered wire labels of a type; the order fixes wire positions.
inline std::vector<Label> labels(const Type &t) {
  std::vector<Label> out;
  if (auto n = t.as<Type::Numeral>()) {
    for (std::size_t i = 0; i < n->n; ++i) out.push_back(Label::index(i));
  } else if (auto p = t.as<Type::Tensor>()) {
    for (auto &l : labels(p->left)) out.push_back(Label::left(l));
    for (auto &l : labels(p->right)) out.push_back(Label::right(l));
  } else if (auto d = t.as<Type::Dual>()) {
    for (auto &l : labels(d->inner)) out.push_back(Label::star(l));
  } else {
    throw TypeError(TypeErrorKind::Ambiguous, "labels of a type containing a type variable");
  }
  return out;
}

/// Drops unit factors (0 * A and A * 0 become A). Used where two sides are
/// compared up to the unit isomorphisms.
inline Type strip_units(const Type &t) {
  if (auto p = t.as<Type::Tensor>()) {
    Type l = strip_units(p->left);
    Type r = strip_units(p->right);
    if (l == Type::unit()) return r;
    if (r == Type::unit()) return l;
    return Type::tensor(l, r);
  }
  if (auto d = t.as<Type::Dual>()) return Type::dual(strip_units(d->inner));
  return t;
}

} // namespace zeta
