#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zeta/error.hpp"
#include "zeta/phase.hpp"

namespace zeta {

struct WireArity {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  friend bool operator==(const WireArity &, const WireArity &) = default;
};

class Diagram;

namespace diagram_node {
struct Id {
  std::size_t wires;
};
/// |b0..b0><b0..b0| + e^{i phase} |b1..b1><b1..b1| with `in` inputs, `out` outputs.
struct Spider {
  Basis basis;
  Phase phase;
  std::size_t in;
  std::size_t out;
};
struct Had {};
struct Swap {};
struct Cup {};
struct Cap {};
struct Scalar {
  std::complex<double> value;
};
struct Seq;
struct Par;
} // namespace diagram_node

/// String diagram built compositionally from ZX generators. Wire 0 is the
/// topmost wire; Seq runs left to right, Par stacks top over bottom.
class Diagram {
public:
  using Id = diagram_node::Id;
  using Spider = diagram_node::Spider;
  using Had = diagram_node::Had;
  using Swap = diagram_node::Swap;
  using Cup = diagram_node::Cup;
  using Cap = diagram_node::Cap;
  using Scalar = diagram_node::Scalar;
  using Seq = diagram_node::Seq;
  using Par = diagram_node::Par;
  struct Node;

  static Diagram id(std::size_t n);
  static Diagram spider(Basis b, Phase p, std::size_t in, std::size_t out);
  static Diagram had();
  static Diagram swap();
  static Diagram cup();
  static Diagram cap();
  static Diagram scalar(std::complex<double> c);
  static Diagram seq(Diagram first, Diagram second);
  static Diagram par(Diagram top, Diagram bottom);

  template <class T> const T *as() const;
  template <class T> bool is() const { return as<T>() != nullptr; }
  const Node &node() const { return *node_; }

  friend bool operator==(const Diagram &a, const Diagram &b);

private:
  explicit Diagram(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

namespace diagram_node {
struct Seq {
  Diagram first;
  Diagram second;
};
struct Par {
  Diagram top;
  Diagram bottom;
};
} // namespace diagram_node

struct Diagram::Node : std::variant<Id, Spider, Had, Swap, Cup, Cap, Scalar, Seq, Par> {
  using variant::variant;
};

template <class T> const T *Diagram::as() const {
  return std::get_if<T>(
      static_cast<const std::variant<Id, Spider, Had, Swap, Cup, Cap, Scalar, Seq, Par> *>(
          node_.get()));
}

inline Diagram Diagram::id(std::size_t n) { return Diagram(std::make_shared<const Node>(Id{n})); }
inline Diagram Diagram::spider(Basis b, Phase p, std::size_t in, std::size_t out) {
  return Diagram(std::make_shared<const Node>(Spider{b, p, in, out}));
}
inline Diagram Diagram::had() { return Diagram(std::make_shared<const Node>(Had{})); }
inline Diagram Diagram::swap() { return Diagram(std::make_shared<const Node>(Swap{})); }
inline Diagram Diagram::cup() { return Diagram(std::make_shared<const Node>(Cup{})); }
inline Diagram Diagram::cap() { return Diagram(std::make_shared<const Node>(Cap{})); }
inline Diagram Diagram::scalar(std::complex<double> c) {
  return Diagram(std::make_shared<const Node>(Scalar{c}));
}
inline Diagram Diagram::seq(Diagram first, Diagram second) {
  return Diagram(std::make_shared<const Node>(Seq{std::move(first), std::move(second)}));
}
inline Diagram Diagram::par(Diagram top, Diagram bottom) {
  return Diagram(std::make_shared<const Node>(Par{std::move(top), std::move(bottom)}));
}

inline bool operator==(const Diagram &a, const Diagram &b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  if (auto x = a.as<Diagram::Id>()) return x->wires == b.as<Diagram::Id>()->wires;
  if (auto x = a.as<Diagram::Spider>()) {
    auto y = b.as<Diagram::Spider>();
    return x->basis == y->basis && x->phase == y->phase && x->in == y->in && x->out == y->out;
  }
  if (auto x = a.as<Diagram::Scalar>()) return x->value == b.as<Diagram::Scalar>()->value;
  if (auto x = a.as<Diagram::Seq>()) {
    auto y = b.as<Diagram::Seq>();
    return x->first == y->first && x->second == y->second;
  }
  if (auto x = a.as<Diagram::Par>()) {
    auto y = b.as<Diagram::Par>();
    return x->top == y->top && x->bottom == y->bottom;
  }
  return true; // Had, Swap, Cup, Cap carry no data
}

/// One-line description of a node, for error messages.
inline std::string describe(const Diagram &d) {
  if (auto x = d.as<Diagram::Id>()) return "id(" + std::to_string(x->wires) + ")";
  if (auto x = d.as<Diagram::Spider>())
    return std::string(basis_name(x->basis)) + "-spider(" + x->phase.to_string() + ", " +
           std::to_string(x->in) + "->" + std::to_string(x->out) + ")";
  if (d.is<Diagram::Had>()) return "had";
  if (d.is<Diagram::Swap>()) return "swap";
  if (d.is<Diagram::Cup>()) return "cup";
  if (d.is<Diagram::Cap>()) return "cap";
  if (d.is<Diagram::Scalar>()) return "scalar";
  if (auto x = d.as<Diagram::Seq>()) return "seq(" + describe(x->first) + ", " + describe(x->second) + ")";
  auto x = d.as<Diagram::Par>();
  return "par(" + describe(x->top) + ", " + describe(x->bottom) + ")";
}

/// Input/output wire counts; throws DiagramError on an ill-formed Seq.
inline WireArity arity(const Diagram &d) {
  if (auto x = d.as<Diagram::Id>()) return {x->wires, x->wires};
  if (auto x = d.as<Diagram::Spider>()) return {x->in, x->out};
  if (d.is<Diagram::Had>()) return {1, 1};
  if (d.is<Diagram::Swap>()) return {2, 2};
  if (d.is<Diagram::Cup>()) return {0, 2};
  if (d.is<Diagram::Cap>()) return {2, 0};
  if (d.is<Diagram::Scalar>()) return {0, 0};
  if (auto x = d.as<Diagram::Seq>()) {
    const WireArity a = arity(x->first), b = arity(x->second);
    if (a.outputs != b.inputs) {
      std::string s = describe(d);
      if (s.size() > 160) s = s.substr(0, 157) + "...";
      throw DiagramError("arity mismatch in " + s + ": " + std::to_string(a.outputs) +
                         " outputs feed " + std::to_string(b.inputs) + " inputs");
    }
    return {a.inputs, b.outputs};
  }
  auto x = d.as<Diagram::Par>();
  const WireArity a = arity(x->top), b = arity(x->bottom);
  return {a.inputs + b.inputs, a.outputs + b.outputs};
}

/// Seq that checks the interface immediately.
inline Diagram then(const Diagram &first, const Diagram &second) {
  const WireArity a = arity(first), b = arity(second);
  if (a.outputs != b.inputs)
    throw DiagramError("cannot compose " + describe(first).substr(0, 60) + " (" +
                       std::to_string(a.outputs) + " outputs) with " +
                       describe(second).substr(0, 60) + " (" + std::to_string(b.inputs) +
                       " inputs)");
  if (first.is<Diagram::Id>()) return second;
  if (second.is<Diagram::Id>()) return first;
  return Diagram::seq(first, second);
}

/// Par that drops empty identities.
inline Diagram beside(const Diagram &top, const Diagram &bottom) {
  auto empty = [](const Diagram &d) { auto i = d.as<Diagram::Id>(); return i && i->wires == 0; };
  if (empty(top)) return bottom;
  if (empty(bottom)) return top;
  auto ti = top.as<Diagram::Id>(), bi = bottom.as<Diagram::Id>();
  if (ti && bi) return Diagram::id(ti->wires + bi->wires);
  return Diagram::par(top, bottom);
}

inline Diagram beside_all(const std::vector<Diagram> &ds) {
  Diagram acc = Diagram::id(0);
  for (auto &d : ds) acc = beside(acc, d);
  return acc;
}

inline bool is_permutation(const std::vector<std::size_t> &perm) {
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) return false;
  return true;
}

/// k -> k diagram of Swaps and identities sending input wire i to output
/// position perm[i].
inline Diagram permutation(const std::vector<std::size_t> &perm) {
  if (!is_permutation(perm)) throw DiagramError("not a permutation");
  const std::size_t k = perm.size();
  std::vector<std::size_t> wire_at(k);
  std::iota(wire_at.begin(), wire_at.end(), 0);
  Diagram result = Diagram::id(k);
  bool sorted = false;
  while (!sorted) {
    sorted = true;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      if (perm[wire_at[j]] > perm[wire_at[j + 1]]) {
        std::swap(wire_at[j], wire_at[j + 1]);
        Diagram layer = beside_all({Diagram::id(j), Diagram::swap(), Diagram::id(k - j - 2)});
        result = then(result, layer);
        sorted = false;
      }
    }
  }
  return result;
}

inline std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t> &perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

/// Sharing: `wires` -> n*wires. Each wire feeds a phase-0 1->n spider of the
/// basis; the outputs are regrouped into n consecutive copies of the input
/// block. n = 1 is the identity and n = 0 discards every wire.
inline Diagram upsilon(std::size_t wires, Basis basis, std::size_t n) {
  if (n == 1 || wires == 0) return Diagram::id(n == 0 ? 0 : wires * n);
  std::vector<Diagram> spiders(wires, Diagram::spider(basis, Phase::zero(), 1, n));
  Diagram fan = beside_all(spiders);
  if (n == 0) return fan;
  std::vector<std::size_t> perm(wires * n);
  for (std::size_t i = 0; i < wires; ++i)
    for (std::size_t j = 0; j < n; ++j) perm[i * n + j] = j * wires + i;
  return then(fan, permutation(perm));
}

inline Diagram discard(std::size_t wires, Basis basis) { return upsilon(wires, basis, 0); }

/// Peak widths of Par(top, bottom) when top is applied first and when bottom
/// is applied first.
inline std::pair<std::size_t, std::size_t> par_peaks(const WireArity &a, std::size_t peak_a,
                                                     const WireArity &b, std::size_t peak_b) {
  return {std::max(peak_a + b.inputs, a.outputs + peak_b), std::max(a.inputs + peak_b, peak_a + b.outputs)};
}

/// Width of the widest operand the dense evaluator holds while applying d,
/// not counting the column dimension.
inline std::size_t peak_wires(const Diagram &d) {
  if (auto x = d.as<Diagram::Seq>()) return std::max(peak_wires(x->first), peak_wires(x->second));
  if (auto x = d.as<Diagram::Par>()) {
    auto [top_first, bottom_first] =
        par_peaks(arity(x->top), peak_wires(x->top), arity(x->bottom), peak_wires(x->bottom));
    return std::min(top_first, bottom_first);
  }
  const WireArity a = arity(d);
  return std::max(a.inputs, a.outputs);
}

// ---------------------------------------------------------------------------
// Flattened network: generators with explicit edge ids.

struct Network {
  enum class Kind { Spider, Had, Swap, Cup, Cap, Scalar };
  struct Node {
    Kind kind;
    Basis basis = Basis::Zeta;
    Phase phase;
    std::complex<double> value{1.0, 0.0};
    std::vector<std::size_t> ins;
    std::vector<std::size_t> outs;
    std::size_t layer = 0;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;
  std::size_t edges = 0;
};

namespace detail {
struct Flattener {
  Network net;
  std::vector<std::size_t> edge_layer;

  std::size_t new_edge(std::size_t layer) {
    edge_layer.push_back(layer);
    return net.edges++;
  }

  std::vector<std::size_t> run(const Diagram &d, const std::vector<std::size_t> &ins) {
    if (d.is<Diagram::Id>()) return ins;
    if (auto x = d.as<Diagram::Seq>()) return run(x->second, run(x->first, ins));
    if (auto x = d.as<Diagram::Par>()) {
      const std::size_t k = arity(x->top).inputs;
      std::vector<std::size_t> top(ins.begin(), ins.begin() + static_cast<std::ptrdiff_t>(k));
      std::vector<std::size_t> bottom(ins.begin() + static_cast<std::ptrdiff_t>(k), ins.end());
      auto out = run(x->top, top);
      auto more = run(x->bottom, bottom);
      out.insert(out.end(), more.begin(), more.end());
      return out;
    }
    Network::Node n;
    const WireArity a = arity(d);
    if (auto s = d.as<Diagram::Spider>()) {
      n.kind = Network::Kind::Spider;
      n.basis = s->basis;
      n.phase = s->phase;
    } else if (d.is<Diagram::Had>()) {
      n.kind = Network::Kind::Had;
    } else if (d.is<Diagram::Swap>()) {
      n.kind = Network::Kind::Swap;
    } else if (d.is<Diagram::Cup>()) {
      n.kind = Network::Kind::Cup;
    } else if (d.is<Diagram::Cap>()) {
      n.kind = Network::Kind::Cap;
    } else {
      n.kind = Network::Kind::Scalar;
      n.value = d.as<Diagram::Scalar>()->value;
    }
    n.ins = ins;
    std::size_t layer = 1;
    for (auto e : ins) layer = std::max(layer, edge_layer[e] + 1);
    n.layer = layer;
    for (std::size_t i = 0; i < a.outputs; ++i) n.outs.push_back(new_edge(layer));
    net.nodes.push_back(n);
    return net.nodes.back().outs;
  }
};
} // namespace detail

inline Network flatten(const Diagram &d) {
  const WireArity a = arity(d);
  detail::Flattener f;
  for (std::size_t i = 0; i < a.inputs; ++i) f.net.inputs.push_back(f.new_edge(0));
  f.net.outputs = f.run(d, f.net.inputs);
  return std::move(f.net);
}

// ---------------------------------------------------------------------------
// Serialization

using ordered_json = nlohmann::ordered_json;

inline ordered_json phase_to_json(const Phase &p) {
  if (p.is_exact()) return ordered_json{{"pi_num", p.exact().num}, {"pi_den", p.exact().den}};
  return ordered_json{{"radians", p.radians_value()}};
}

inline Phase phase_from_json(const nlohmann::ordered_json &j) {
  if (!j.is_object()) throw DiagramError("phase must be an object");
  if (j.contains("radians")) return Phase::radians(j.at("radians").get<double>());
  if (j.contains("pi_num") && j.contains("pi_den"))
    return Phase::pi_fraction(j.at("pi_num").get<std::int64_t>(), j.at("pi_den").get<std::int64_t>());
  throw DiagramError("phase needs {pi_num, pi_den} or {radians}");
}

inline ordered_json diagram_to_json_value(const Diagram &d) {
  if (auto x = d.as<Diagram::Id>()) return {{"kind", "id"}, {"wires", x->wires}};
  if (auto x = d.as<Diagram::Spider>())
    return {{"kind", "spider"},
            {"basis", std::string(basis_name(x->basis))},
            {"phase", phase_to_json(x->phase)},
            {"in", x->in},
            {"out", x->out}};
  if (d.is<Diagram::Had>()) return {{"kind", "had"}};
  if (d.is<Diagram::Swap>()) return {{"kind", "swap"}};
  if (d.is<Diagram::Cup>()) return {{"kind", "cup"}};
  if (d.is<Diagram::Cap>()) return {{"kind", "cap"}};
  if (auto x = d.as<Diagram::Scalar>())
    return {{"kind", "scalar"}, {"re", x->value.real()}, {"im", x->value.imag()}};
  if (auto x = d.as<Diagram::Seq>())
    return {{"kind", "seq"}, {"first", diagram_to_json_value(x->first)},
            {"second", diagram_to_json_value(x->second)}};
  auto x = d.as<Diagram::Par>();
  return {{"kind", "par"}, {"top", diagram_to_json_value(x->top)},
          {"bottom", diagram_to_json_value(x->bottom)}};
}

inline std::string to_json(const Diagram &d) { return diagram_to_json_value(d).dump(); }

inline Diagram diagram_from_json_value(const ordered_json &j) {
  try {
    if (!j.is_object() || !j.contains("kind")) throw DiagramError("diagram node without 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "id") return Diagram::id(j.at("wires").get<std::size_t>());
    if (kind == "spider")
      return Diagram::spider(basis_from_name(j.at("basis").get<std::string>()),
                             phase_from_json(j.at("phase")), j.at("in").get<std::size_t>(),
                             j.at("out").get<std::size_t>());
    if (kind == "had") return Diagram::had();
    if (kind == "swap") return Diagram::swap();
    if (kind == "cup") return Diagram::cup();
    if (kind == "cap") return Diagram::cap();
    if (kind == "scalar")
      return Diagram::scalar({j.at("re").get<double>(), j.at("im").get<double>()});
    if (kind == "seq") {
      Diagram d = Diagram::seq(diagram_from_json_value(j.at("first")),
                               diagram_from_json_value(j.at("second")));
      arity(d);
      return d;
    }
    if (kind == "par")
      return Diagram::par(diagram_from_json_value(j.at("top")),
                          diagram_from_json_value(j.at("bottom")));
    throw DiagramError("unknown node kind '" + kind + "'");
  } catch (const nlohmann::json::exception &e) {
    throw DiagramError(std::string("malformed diagram document: ") + e.what());
  } catch (const DiagramError &) {
    throw;
  } catch (const Error &e) {
    throw DiagramError(std::string("malformed diagram document: ") + e.what());
  }
}

inline Diagram from_json(const std::string &text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw DiagramError(std::string("malformed diagram document: ") + e.what());
  }
  return diagram_from_json_value(j);
}

/// Graphviz rendering, left to right, one node per generator. Z spiders are
/// green, X spiders red, Hadamards yellow boxes.
inline std::string to_dot(const Diagram &d) {
  const Network net = flatten(d);
  std::ostringstream os;
  os << "digraph diagram {\n  rankdir=LR;\n  node [fontsize=10];\n";
  std::map<std::size_t, std::string> producer;
  std::map<std::size_t, std::vector<std::string>> ranks;
  for (std::size_t i = 0; i < net.inputs.size(); ++i) {
    const std::string name = "in" + std::to_string(i);
    os << "  " << name << " [shape=point];\n";
    producer[net.inputs[i]] = name;
    ranks[0].push_back(name);
  }
  std::size_t max_layer = 0;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const auto &n = net.nodes[i];
    const std::string name = "g" + std::to_string(i);
    os << "  " << name << " [";
    switch (n.kind) {
    case Network::Kind::Spider:
      os << "shape=circle, style=filled, fillcolor=\""
         << (n.basis == Basis::Zeta ? "#99dd99" : "#ee7777") << "\", label=\""
         << (n.phase.is_zero() ? std::string{} : n.phase.to_string()) << "\"";
      break;
    case Network::Kind::Had:
      os << "shape=square, style=filled, fillcolor=\"#ffee66\", label=\"H\"";
      break;
    case Network::Kind::Swap: os << "shape=diamond, label=\"swap\""; break;
    case Network::Kind::Cup: os << "shape=rarrow, label=\"cup\""; break;
    case Network::Kind::Cap: os << "shape=larrow, label=\"cap\""; break;
    case Network::Kind::Scalar:
      os << "shape=plaintext, label=\"" << n.value.real() << (n.value.imag() < 0 ? "" : "+")
         << n.value.imag() << "i\"";
      break;
    }
    os << "];\n";
    for (std::size_t k = 0; k < n.ins.size(); ++k)
      os << "  " << producer.at(n.ins[k]) << " -> " << name << " [arrowhead=none];\n";
    for (auto e : n.outs) producer[e] = name;
    ranks[n.layer].push_back(name);
    max_layer = std::max(max_layer, n.layer);
  }
  for (std::size_t i = 0; i < net.outputs.size(); ++i) {
    const std::string name = "out" + std::to_string(i);
    os << "  " << name << " [shape=point];\n";
    os << "  " << producer.at(net.outputs[i]) << " -> " << name << " [arrowhead=none];\n";
    ranks[max_layer + 1].push_back(name);
  }
  for (auto &[layer, names] : ranks) {
    os << "  { rank=same;";
    for (auto &n : names) os << " " << n << ";";
    os << " }\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace zeta
