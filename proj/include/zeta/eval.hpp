#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "zeta/diagram.hpp"
#include "zeta/error.hpp"
#include "zeta/matrix.hpp"
#include "zeta/phase.hpp"

namespace zeta {

namespace detail {

// (1/sqrt 2)^k, exact for even k.
inline double sqrt_half_pow(std::size_t k) {
  const double p = std::ldexp(1.0, -static_cast<int>(k / 2));
  return k % 2 ? p * 0.70710678118654752440 : p;
}

inline ComplexMatrix spider_matrix(Basis basis, const Phase &phase, std::size_t in, std::size_t out) {
  const std::size_t rows = std::size_t{1} << out, cols = std::size_t{1} << in;
  ComplexMatrix m(rows, cols);
  const Complex u = phase.unit();
  if (basis == Basis::Zeta) {
    m(0, 0) += 1.0;
    m(rows - 1, cols - 1) += u;
    return m;
  }
  const double s = sqrt_half_pow(in + out);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const bool odd = (std::popcount(r) + std::popcount(c)) % 2;
      m(r, c) = s * (odd ? Complex(1.0) - u : Complex(1.0) + u);
    }
  return m;
}

inline ComplexMatrix generator_matrix(const Diagram &d) {
  if (auto s = d.as<Diagram::Spider>()) return spider_matrix(s->basis, s->phase, s->in, s->out);
  if (d.is<Diagram::Had>()) {
    const double s = sqrt_half_pow(1);
    return ComplexMatrix(2, 2, {s, s, s, -s});
  }
  if (d.is<Diagram::Swap>()) {
    ComplexMatrix m(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return m;
  }
  if (d.is<Diagram::Cup>()) return ComplexMatrix(4, 1, {1.0, 0.0, 0.0, 1.0});
  if (d.is<Diagram::Cap>()) return ComplexMatrix(1, 4, {1.0, 0.0, 0.0, 1.0});
  return ComplexMatrix(1, 1, {d.as<Diagram::Scalar>()->value});
}

// Computes denote(d) * X where X is row-major with 2^in(d) rows.
inline std::vector<Complex> apply(const Diagram &d, const std::vector<Complex> &x, std::size_t cols) {
  if (d.is<Diagram::Id>()) return x;
  if (auto s = d.as<Diagram::Seq>()) return apply(s->second, apply(s->first, x, cols), cols);
  if (auto p = d.as<Diagram::Par>()) {
    const WireArity a = arity(p->top), b = arity(p->bottom);
    const std::size_t ain = std::size_t{1} << a.inputs, aout = std::size_t{1} << a.outputs;
    const std::size_t bin = std::size_t{1} << b.inputs, bout = std::size_t{1} << b.outputs;
    auto [top_first, bottom_first] = par_peaks(a, peak_wires(p->top), b, peak_wires(p->bottom));
    // each row block of `rows_in` rows of width `in * cols` is mapped by `f`
    auto blockwise = [&](const std::vector<Complex> &src, std::size_t blocks, std::size_t in,
                         std::size_t out, const Diagram &f) {
      std::vector<Complex> dst(blocks * out * cols), block(in * cols);
      for (std::size_t r = 0; r < blocks; ++r) {
        std::copy(src.begin() + static_cast<std::ptrdiff_t>(r * in * cols),
                  src.begin() + static_cast<std::ptrdiff_t>((r + 1) * in * cols), block.begin());
        const std::vector<Complex> w = apply(f, block, cols);
        std::copy(w.begin(), w.end(), dst.begin() + static_cast<std::ptrdiff_t>(r * out * cols));
      }
      return dst;
    };
    if (top_first <= bottom_first) {
      // (A (x) I) X with X viewed as 2^in_a rows of width 2^in_b * cols
      return blockwise(apply(p->top, x, bin * cols), aout, bin, bout, p->bottom);
    }
    return apply(p->top, blockwise(x, ain, bin, bout, p->bottom), bout * cols);
  }
  const ComplexMatrix g = generator_matrix(d);
  std::vector<Complex> out(g.rows() * cols);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t k = 0; k < g.cols(); ++k) {
      const Complex gik = g(i, k);
      if (gik == Complex{}) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] += gik * x[k * cols + j];
    }
  return out;
}

} // namespace detail

/// Dense denotation: Seq is the matrix product (second after first), Par
/// the Kronecker product with the top on the most significant qubits. No
/// normalization is applied. The product is evaluated as an action on the
/// identity so that wide identities and swaps never materialize.
inline ComplexMatrix denote(const Diagram &d) {
  const WireArity a = arity(d);
  const std::size_t cols = std::size_t{1} << a.inputs, rows = std::size_t{1} << a.outputs;
  return ComplexMatrix(rows, cols, detail::apply(d, ComplexMatrix::identity(cols).data(), cols));
}

/// Wires the dense evaluator needs for d: the input columns plus the widest
/// intermediate operand.
inline std::size_t required_wires(const Diagram &d) { return arity(d).inputs + peak_wires(d); }

inline constexpr std::size_t kDefaultWireBudget = 14;

/// ZETA_WIRE_BUDGET if set to a positive integer, 14 otherwise.
inline std::size_t wire_budget_from_env() {
  if (const char *v = std::getenv("ZETA_WIRE_BUDGET")) {
    char *end = nullptr;
    const unsigned long n = std::strtoul(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) return n;
  }
  return kDefaultWireBudget;
}

/// denote(d) after checking the wire budget.
inline ComplexMatrix denote_within(const Diagram &d, std::size_t budget) {
  const std::size_t need = required_wires(d);
  if (need > budget) throw WireBudgetError(need, budget);
  return denote(d);
}

namespace detail {
struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void merge(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Component of basis vector |b_k> at index i: Z = (1,0),(0,1); X = (1,1)/r2, (1,-1)/r2.
inline double basis_component(Basis basis, int k, std::size_t i) {
  if (basis == Basis::Zeta) return static_cast<std::size_t>(k) == i ? 1.0 : 0.0;
  const double s = 0.70710678118654752440;
  return (k == 1 && i == 1) ? -s : s;
}

// Dense tensor over index classes; vars[0] is the most significant bit.
struct IndexTensor {
  std::vector<std::size_t> vars;
  std::vector<Complex> data;
};

struct OracleNetwork {
  std::vector<IndexTensor> tensors;
  std::vector<std::size_t> in_idx, out_idx;
  std::size_t classes = 0;
  std::size_t loops = 0; // closed cup/cap loops, each worth a factor 2
};

inline Complex generator_entry(const Network::Node &n, const std::vector<std::size_t> &in_bits,
                               const std::vector<std::size_t> &out_bits) {
  if (n.kind == Network::Kind::Scalar) return n.value;
  if (n.kind == Network::Kind::Had)
    return sqrt_half_pow(1) * ((in_bits[0] & out_bits[0]) ? -1.0 : 1.0);
  double branch0 = 1.0, branch1 = 1.0;
  for (auto b : out_bits) {
    branch0 *= basis_component(n.basis, 0, b);
    branch1 *= basis_component(n.basis, 1, b);
  }
  for (auto b : in_bits) {
    branch0 *= basis_component(n.basis, 0, b);
    branch1 *= basis_component(n.basis, 1, b);
  }
  return branch0 + n.phase.unit() * branch1;
}

// Flattens d, merges the edges joined by swaps, cups and caps, and tabulates
// every remaining generator over its own index classes.
inline OracleNetwork build_oracle_network(const Diagram &d) {
  const Network net = flatten(d);
  UnionFind uf(net.edges);
  std::vector<const Network::Node *> gens;
  for (auto &n : net.nodes) {
    switch (n.kind) {
    case Network::Kind::Swap:
      uf.merge(n.ins[0], n.outs[1]);
      uf.merge(n.ins[1], n.outs[0]);
      break;
    case Network::Kind::Cup: uf.merge(n.outs[0], n.outs[1]); break;
    case Network::Kind::Cap: uf.merge(n.ins[0], n.ins[1]); break;
    default: gens.push_back(&n); break;
    }
  }
  OracleNetwork on;
  std::vector<std::size_t> slot(net.edges, SIZE_MAX);
  for (std::size_t e = 0; e < net.edges; ++e) {
    const std::size_t r = uf.find(e);
    if (slot[r] == SIZE_MAX) slot[r] = on.classes++;
  }
  auto index_of = [&](std::size_t e) { return slot[uf.find(e)]; };
  for (auto e : net.inputs) on.in_idx.push_back(index_of(e));
  for (auto e : net.outputs) on.out_idx.push_back(index_of(e));

  std::vector<bool> touched(on.classes, false);
  for (auto i : on.in_idx) touched[i] = true;
  for (auto i : on.out_idx) touched[i] = true;
  for (auto *n : gens) {
    IndexTensor t;
    std::vector<std::size_t> ins, outs;
    for (auto e : n->ins) ins.push_back(index_of(e));
    for (auto e : n->outs) outs.push_back(index_of(e));
    for (auto v : ins) if (std::find(t.vars.begin(), t.vars.end(), v) == t.vars.end()) t.vars.push_back(v);
    for (auto v : outs) if (std::find(t.vars.begin(), t.vars.end(), v) == t.vars.end()) t.vars.push_back(v);
    for (auto v : t.vars) touched[v] = true;
    const std::size_t r = t.vars.size();
    t.data.resize(std::size_t{1} << r);
    std::vector<std::size_t> in_bits(ins.size()), out_bits(outs.size());
    for (std::size_t a = 0; a < t.data.size(); ++a) {
      auto bit_of = [&](std::size_t v) {
        const auto pos = static_cast<std::size_t>(std::find(t.vars.begin(), t.vars.end(), v) - t.vars.begin());
        return (a >> (r - 1 - pos)) & 1u;
      };
      for (std::size_t i = 0; i < ins.size(); ++i) in_bits[i] = bit_of(ins[i]);
      for (std::size_t i = 0; i < outs.size(); ++i) out_bits[i] = bit_of(outs[i]);
      t.data[a] = generator_entry(*n, in_bits, out_bits);
    }
    on.tensors.push_back(std::move(t));
  }
  for (std::size_t c = 0; c < on.classes; ++c)
    if (!touched[c]) ++on.loops;
  return on;
}

inline std::size_t tensor_offset(const IndexTensor &t, const std::vector<std::size_t> &bits_of_var) {
  std::size_t off = 0;
  for (auto v : t.vars) off = (off << 1) | bits_of_var[v];
  return off;
}

// Sum over every assignment of `sum_out`, keeping `keep`, of the product of `ts`.
inline IndexTensor contract_bucket(const std::vector<const IndexTensor *> &ts,
                                   const std::vector<std::size_t> &keep, std::size_t sum_out,
                                   std::size_t classes) {
  IndexTensor r{keep, std::vector<Complex>(std::size_t{1} << keep.size())};
  std::vector<std::size_t> bits(classes, 0);
  const std::size_t k = keep.size();
  for (std::size_t a = 0; a < r.data.size(); ++a) {
    for (std::size_t i = 0; i < k; ++i) bits[keep[i]] = (a >> (k - 1 - i)) & 1u;
    Complex acc{};
    for (std::size_t b = 0; b < 2; ++b) {
      if (sum_out != SIZE_MAX) bits[sum_out] = b;
      else if (b == 1) break;
      Complex prod{1.0, 0.0};
      for (auto *t : ts) prod *= t->data[tensor_offset(*t, bits)];
      acc += prod;
    }
    r.data[a] = acc;
  }
  return r;
}

inline ComplexMatrix read_out(const OracleNetwork &on, const std::vector<IndexTensor> &ts) {
  const std::size_t nin = on.in_idx.size(), nout = on.out_idx.size();
  ComplexMatrix result(std::size_t{1} << nout, std::size_t{1} << nin);
  const double loops = std::ldexp(1.0, static_cast<int>(on.loops));
  std::vector<std::size_t> bits(on.classes, 0);
  std::vector<int> seen(on.classes, -1);
  for (std::size_t row = 0; row < result.rows(); ++row)
    for (std::size_t col = 0; col < result.cols(); ++col) {
      std::fill(seen.begin(), seen.end(), -1);
      bool consistent = true;
      auto assign = [&](std::size_t v, std::size_t b) {
        if (seen[v] >= 0 && static_cast<std::size_t>(seen[v]) != b) consistent = false;
        seen[v] = static_cast<int>(b);
        bits[v] = b;
      };
      for (std::size_t i = 0; i < nout; ++i) assign(on.out_idx[i], (row >> (nout - 1 - i)) & 1u);
      for (std::size_t i = 0; i < nin; ++i) assign(on.in_idx[i], (col >> (nin - 1 - i)) & 1u);
      if (!consistent) continue;
      Complex prod{loops, 0.0};
      for (auto &t : ts) prod *= t.data[tensor_offset(t, bits)];
      result(row, col) = prod;
    }
  return result;
}

} // namespace detail

/// Independent evaluator: flattens d into generator tensors with explicit
/// index classes (cups, caps and swaps only identify indices) and sums the
/// product of all tensors over every assignment of the internal indices.
/// Indices are summed out one at a time, each over the product of the
/// tensors that mention it. `max_wires` bounds the rank of any intermediate
/// tensor and the number of open wires.
inline ComplexMatrix oracle_contract(const Diagram &d, std::size_t max_wires = 14) {
  detail::OracleNetwork on = detail::build_oracle_network(d);
  const std::size_t open = on.in_idx.size() + on.out_idx.size();
  if (open > max_wires) throw WireBudgetError(open, max_wires);
  std::vector<bool> is_open(on.classes, false);
  for (auto v : on.in_idx) is_open[v] = true;
  for (auto v : on.out_idx) is_open[v] = true;

  std::vector<detail::IndexTensor> pool = std::move(on.tensors);
  for (;;) {
    // internal index whose bucket has the smallest rank
    std::size_t best = SIZE_MAX, best_rank = SIZE_MAX;
    std::vector<std::size_t> best_keep;
    std::vector<bool> present(on.classes, false);
    for (auto &t : pool)
      for (auto v : t.vars) present[v] = true;
    for (std::size_t v = 0; v < on.classes; ++v) {
      if (is_open[v] || !present[v]) continue;
      std::vector<std::size_t> keep;
      for (auto &t : pool) {
        if (std::find(t.vars.begin(), t.vars.end(), v) == t.vars.end()) continue;
        for (auto u : t.vars)
          if (u != v && std::find(keep.begin(), keep.end(), u) == keep.end()) keep.push_back(u);
      }
      if (keep.size() < best_rank) {
        best = v;
        best_rank = keep.size();
        best_keep = std::move(keep);
      }
    }
    if (best == SIZE_MAX) break;
    if (best_rank + 1 > max_wires) throw WireBudgetError(best_rank + 1, max_wires);
    std::vector<const detail::IndexTensor *> bucket;
    std::vector<detail::IndexTensor> rest;
    for (auto &t : pool)
      if (std::find(t.vars.begin(), t.vars.end(), best) != t.vars.end()) bucket.push_back(&t);
    detail::IndexTensor merged = detail::contract_bucket(bucket, best_keep, best, on.classes);
    for (auto &t : pool)
      if (std::find(t.vars.begin(), t.vars.end(), best) == t.vars.end()) rest.push_back(std::move(t));
    rest.push_back(std::move(merged));
    pool = std::move(rest);
  }
  return detail::read_out(on, pool);
}

/// Literal form of the oracle: one pass over every assignment of every index
/// class. Exponential in the class count; `max_wires` bounds that count.
inline ComplexMatrix oracle_brute_force(const Diagram &d, std::size_t max_wires = 14) {
  const detail::OracleNetwork on = detail::build_oracle_network(d);
  if (on.classes > max_wires) throw WireBudgetError(on.classes, max_wires);
  const std::size_t nin = on.in_idx.size(), nout = on.out_idx.size();
  ComplexMatrix result(std::size_t{1} << nout, std::size_t{1} << nin);
  // Closed loops are classes no tensor mentions; enumerating them already
  // contributes their factor 2.
  std::vector<std::size_t> bits(on.classes, 0);
  for (std::size_t a = 0; a < (std::size_t{1} << on.classes); ++a) {
    for (std::size_t v = 0; v < on.classes; ++v) bits[v] = (a >> v) & 1u;
    Complex value{1.0, 0.0};
    for (auto &t : on.tensors) value *= t.data[detail::tensor_offset(t, bits)];
    if (value == Complex{}) continue;
    std::size_t row = 0, col = 0;
    for (auto v : on.out_idx) row = (row << 1) | bits[v];
    for (auto v : on.in_idx) col = (col << 1) | bits[v];
    result(row, col) += value;
  }
  return result;
}

} // namespace zeta
