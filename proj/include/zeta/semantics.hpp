#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zeta/diagram.hpp"
#include "zeta/error.hpp"
#include "zeta/parser.hpp"
#include "zeta/typecheck.hpp"

namespace zeta {

/// Input wire label: the context variable and the wire within its type.
struct WireLabel {
  std::string variable;
  Label label;

  std::string to_string() const { return variable + ":" + label.to_string(); }
  friend bool operator==(const WireLabel &, const WireLabel &) = default;
};

/// A diagram together with the judgement it interprets. Inputs follow the
/// context order, outputs follow labels(type).
struct JudgementDiagram {
  Context context;
  Term term;
  Type type;
  Diagram diagram;
  std::vector<WireLabel> inputs;
  std::vector<Label> outputs;
};

inline std::vector<WireLabel> context_labels(const Context &ctx) {
  std::vector<WireLabel> out;
  for (auto &b : ctx)
    for (auto &l : labels(b.type)) out.push_back({b.name, l});
  return out;
}

namespace detail {

inline std::vector<std::size_t> entry_sizes(const Context &ctx) {
  std::vector<std::size_t> s;
  for (auto &b : ctx) s.push_back(size(b.type));
  return s;
}

inline Diagram cups(std::size_t k) { return beside_all(std::vector<Diagram>(k, Diagram::cup())); }
inline Diagram caps(std::size_t k) { return beside_all(std::vector<Diagram>(k, Diagram::cap())); }

inline Diagram discard_context(const Context &ctx) {
  std::vector<Diagram> parts;
  for (auto &b : ctx) parts.push_back(discard(size(b.type), b.basis));
  return beside_all(parts);
}

// k cups laid out as [a0 b0 a1 b1 ...] regrouped to [a0..a(k-1) b0..b(k-1)].
inline Diagram bent_pairs(std::size_t k) {
  std::vector<std::size_t> perm(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    perm[2 * i] = i;
    perm[2 * i + 1] = k + i;
  }
  return then(cups(k), permutation(perm));
}

// Wires [s0 .. s(k-1), rest(m), t0 .. t(k-1)]: cap s_i with t_i, keep rest.
inline Diagram cap_off(std::size_t k, std::size_t m) {
  std::vector<std::size_t> perm(2 * k + m);
  for (std::size_t i = 0; i < k; ++i) perm[i] = m + 2 * i;
  for (std::size_t j = 0; j < m; ++j) perm[k + j] = j;
  for (std::size_t i = 0; i < k; ++i) perm[k + m + i] = m + 2 * i + 1;
  return then(permutation(perm), beside(Diagram::id(m), caps(k)));
}

} // namespace detail

/// Υ(Γ, n): every entry is shared n ways in its own basis, then the wires are
/// regrouped into n consecutive copies of the whole context block.
inline Diagram share_context(const Context &ctx, std::size_t n) {
  const auto sizes = detail::entry_sizes(ctx);
  std::vector<Diagram> parts;
  for (std::size_t i = 0; i < ctx.size(); ++i) parts.push_back(upsilon(sizes[i], ctx[i].basis, n));
  const Diagram fan = beside_all(parts);
  if (n == 0) return fan;
  const std::size_t g = ctx.wires();
  std::vector<std::size_t> perm(g * n);
  std::size_t off = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t w = 0; w < sizes[i]; ++w) perm[off * n + c * sizes[i] + w] = c * g + off + w;
    off += sizes[i];
  }
  return then(fan, permutation(perm));
}

/// `literal_sharing` makes A, T and E nodes copy the whole context with
/// Υ(Γ, 2) and leave the discards to the premises. By default each entry is
/// routed to the premise that uses it, which denotes the same map (a phase-0
/// spider with all but one output discarded is the identity).
struct TranslateOptions {
  bool literal_sharing = false;
};

inline Diagram translate_diagram(const Derivation &d, const TranslateOptions &opts = {});

/// Interprets a validated derivation as a diagram.
inline JudgementDiagram translate(const Derivation &d, const TranslateOptions &opts = {}) {
  JudgementDiagram jd{d.context, d.term, d.type, translate_diagram(d, opts), context_labels(d.context),
                      labels(d.type)};
  const WireArity a = arity(jd.diagram);
  if (a.inputs != d.context.wires() || a.outputs != size(d.type))
    throw DiagramError("translation of " + print(d.term) + " has arity " + std::to_string(a.inputs) +
                       "->" + std::to_string(a.outputs) + ", expected " +
                       std::to_string(d.context.wires()) + "->" + std::to_string(size(d.type)));
  return jd;
}

namespace detail {

struct Block {
  std::string name;
  std::size_t wires;
  Basis basis;
};

inline std::vector<Block> blocks_of(const Context &ctx) {
  std::vector<Block> out;
  for (auto &b : ctx) out.push_back({b.name, size(b.type), b.basis});
  return out;
}

// Reorders the available blocks into `target` order and discards the rest.
inline Diagram route(const std::vector<Block> &available, const std::vector<std::string> &target) {
  std::vector<std::size_t> offset(available.size() + 1, 0);
  for (std::size_t i = 0; i < available.size(); ++i) offset[i + 1] = offset[i] + available[i].wires;
  const std::size_t total = offset.back();
  std::vector<std::size_t> perm(total);
  std::vector<bool> kept(available.size(), false);
  std::size_t pos = 0;
  for (auto &name : target) {
    std::size_t i = 0;
    while (i < available.size() && (available[i].name != name || kept[i])) ++i;
    if (i == available.size()) throw DiagramError("cannot route " + name);
    kept[i] = true;
    for (std::size_t w = 0; w < available[i].wires; ++w) perm[offset[i] + w] = pos++;
  }
  const std::size_t live = pos;
  std::vector<Diagram> drops;
  for (std::size_t i = 0; i < available.size(); ++i) {
    if (kept[i]) continue;
    for (std::size_t w = 0; w < available[i].wires; ++w) perm[offset[i] + w] = pos++;
    drops.push_back(discard(available[i].wires, available[i].basis));
  }
  return then(permutation(perm), beside(Diagram::id(live), beside_all(drops)));
}

// Skips the weakening prefix of a premise: the X and W nodes above the first
// node whose context holds only variables its term uses.
inline const Derivation &restricted(const Derivation &p) {
  const Derivation *q = &p;
  for (;;) {
    bool all_used = true;
    for (auto &b : q->context) all_used = all_used && is_free_in(b.name, q->term);
    if (all_used || (q->rule != Rule::X && q->rule != Rule::W)) return *q;
    q = &q->premises[0];
  }
}

inline std::vector<std::string> names_of(const Context &ctx) {
  std::vector<std::string> out;
  for (auto &b : ctx) out.push_back(b.name);
  return out;
}

inline bool disjoint_use(const Derivation &m, const Derivation &n) {
  for (auto &b : m.context)
    if (n.context.find(b.name)) return false;
  return true;
}

// A, T and E with each context entry routed to the premise that uses it.
// Empty when some entry is used by both premises.
inline std::optional<Diagram> routed_split(const Derivation &d, const TranslateOptions &opts) {
  const Context &ctx = d.context;
  const Derivation &m = restricted(d.premises[0]);
  const Derivation &n = restricted(d.premises[1]);
  if (d.rule != Rule::E && disjoint_use(m, n)) {
    std::vector<std::string> target = names_of(m.context);
    for (auto &x : n.context) target.push_back(x.name);
    const Diagram both =
        then(route(blocks_of(ctx), target), beside(translate_diagram(m, opts), translate_diagram(n, opts)));
    if (d.rule == Rule::T) return both;
    return then(both, cap_off(size(m.type.fn_domain()), size(d.type)));
  }
  if (d.rule == Rule::E) {
    auto let = d.term.as<Term::Let>();
    // Γ entries the body uses, besides the two let-bound names
    std::vector<std::string> rest;
    for (auto &b : ctx)
      if (n.context.find(b.name) && b.name != let->first && b.name != let->second) rest.push_back(b.name);
    bool clash = false;
    for (auto &r : rest) clash = clash || m.context.find(r);
    if (!clash) {
      std::vector<std::string> target = names_of(m.context);
      target.insert(target.end(), rest.begin(), rest.end());
      std::vector<Block> after = {{let->first, size(*let->first_type), let->basis},
                                {let->second, size(*let->second_type), let->basis}};
      for (auto &r : rest) {
        const Binding *b = ctx.find(r);
        after.push_back({r, size(b->type), b->basis});
      }
      std::size_t rest_wires = 0;
      for (std::size_t i = 2; i < after.size(); ++i) rest_wires += after[i].wires;
      return then(then(route(blocks_of(ctx), target),
                       beside(translate_diagram(m, opts), Diagram::id(rest_wires))),
                  then(route(after, names_of(n.context)), translate_diagram(n, opts)));
    }
  }
  return std::nullopt;
}

} // namespace detail

inline Diagram translate_diagram(const Derivation &d, const TranslateOptions &opts) {
  const Context &ctx = d.context;
  const std::size_t g = ctx.wires();
  switch (d.rule) {
  case Rule::U: return detail::discard_context(ctx);
  case Rule::V: {
    const auto &name = d.term.as<Term::Var>()->name;
    std::vector<Diagram> parts;
    for (auto &b : ctx) {
      const std::size_t s = size(b.type);
      parts.push_back(b.name == name ? Diagram::id(s) : discard(s, b.basis));
    }
    return beside_all(parts);
  }
  case Rule::G: {
    auto gen = d.term.as<Term::Gen>();
    return beside(detail::discard_context(ctx),
                  Diagram::spider(gen->basis, gen->phase, 0, static_cast<std::size_t>(gen->n)));
  }
  case Rule::D: {
    auto gen = d.term.as<Term::Gen>();
    const auto k = static_cast<std::size_t>(-gen->n);
    const Diagram effect = then(detail::bent_pairs(k),
                                beside(Diagram::id(k), Diagram::spider(gen->basis, gen->phase, k, 0)));
    return beside(detail::discard_context(ctx), effect);
  }
  case Rule::B: {
    auto abs = d.term.as<Term::Abs>();
    const std::size_t k = size(*abs->annotation);
    const Diagram body = translate_diagram(d.premises[0], opts);
    // Γ, then k cups; the first leg of each cup becomes the A* output and the
    // second feeds x through the binder's phase spider.
    std::vector<std::size_t> perm(g + 2 * k);
    for (std::size_t j = 0; j < g; ++j) perm[j] = k + j;
    for (std::size_t i = 0; i < k; ++i) {
      perm[g + 2 * i] = i;
      perm[g + 2 * i + 1] = k + g + i;
    }
    const Diagram bend = then(beside(Diagram::id(g), detail::cups(k)), permutation(perm));
    const Diagram phases = beside_all(
        std::vector<Diagram>(k, Diagram::spider(abs->basis, abs->phase, 1, 1)));
    return then(then(bend, beside(Diagram::id(k + g), phases)), beside(Diagram::id(k), body));
  }
  case Rule::A:
  case Rule::T:
  case Rule::E:
    if (!opts.literal_sharing)
      if (auto routed = detail::routed_split(d, opts)) return *routed;
    break;
  default: break;
  }

  switch (d.rule) {
  case Rule::A: {
    const Derivation &m = d.premises[0], &n = d.premises[1];
    const std::size_t k = size(m.type.fn_domain()), out = size(d.type);
    const Diagram both = beside(translate_diagram(m, opts), translate_diagram(n, opts));
    return then(then(share_context(ctx, 2), both), detail::cap_off(k, out));
  }
  case Rule::T:
    return then(share_context(ctx, 2),
                beside(translate_diagram(d.premises[0], opts), translate_diagram(d.premises[1], opts)));
  case Rule::E: {
    const Derivation &m = d.premises[0];
    const std::size_t ab = size(m.type);
    std::vector<std::size_t> perm(ab + g);
    for (std::size_t i = 0; i < ab; ++i) perm[i] = g + i;
    for (std::size_t j = 0; j < g; ++j) perm[ab + j] = j;
    const Diagram feed =
        then(then(share_context(ctx, 2), beside(translate_diagram(m, opts), Diagram::id(g))), permutation(perm));
    return then(feed, translate_diagram(d.premises[1], opts));
  }
  case Rule::W: {
    const Binding &w = ctx.entries().back();
    return beside(translate_diagram(d.premises[0], opts), discard(size(w.type), w.basis));
  }
  case Rule::C: {
    const Binding &x = ctx.entries().back();
    const std::size_t s = size(x.type);
    return then(beside(Diagram::id(g - s), upsilon(s, x.basis, d.copies.size())),
                translate_diagram(d.premises[0], opts));
  }
  case Rule::X: {
    const auto sizes = detail::entry_sizes(ctx);
    std::vector<std::size_t> offset(ctx.size() + 1, 0);
    for (std::size_t i = 0; i < ctx.size(); ++i) offset[i + 1] = offset[i] + sizes[i];
    std::vector<std::size_t> perm(g);
    std::size_t pos = 0;
    for (auto src : d.order)
      for (std::size_t w = 0; w < sizes[src]; ++w) perm[offset[src] + w] = pos++;
    return then(permutation(perm), translate_diagram(d.premises[0], opts));
  }
  default: break;
  }
  throw DiagramError("unknown rule");
}

/// Bends the A* outputs of a function-typed judgement back into inputs. The
/// argument appears as a fresh trailing context entry `#arg<i>`.
inline JudgementDiagram eval_as_map(const JudgementDiagram &jd) {
  if (!jd.type.is_fn())
    throw DiagramError("eval_as_map needs a function type, got " + jd.type.to_string());
  const Type a = jd.type.fn_domain(), b = jd.type.fn_codomain();
  const std::size_t k = size(a), m = size(b);
  std::size_t used = 0;
  for (auto &e : jd.context)
    if (e.name.rfind("#arg", 0) == 0) ++used;
  const std::string name = "#arg" + std::to_string(used);

  JudgementDiagram out = jd;
  out.context = jd.context.extended({name, Basis::Zeta, a});
  out.type = b;
  out.diagram = then(beside(jd.diagram, Diagram::id(k)), detail::cap_off(k, m));
  out.inputs = context_labels(out.context);
  out.outputs = labels(b);
  return out;
}

/// Typechecks and translates in one step.
inline JudgementDiagram interpret(const Context &ctx, const Term &term) {
  auto [ty, d] = infer(ctx, term);
  validate(d);
  return translate(d);
}

inline nlohmann::ordered_json judgement_to_json_value(const JudgementDiagram &jd) {
  nlohmann::ordered_json ins = nlohmann::ordered_json::array(), outs = nlohmann::ordered_json::array();
  for (auto &l : jd.inputs) ins.push_back(l.to_string());
  for (auto &l : jd.outputs) outs.push_back(l.to_string());
  return {{"context", jd.context.to_string()},
          {"term", print(jd.term)},
          {"type", jd.type.to_string()},
          {"diagram", diagram_to_json_value(jd.diagram)},
          {"labels", {{"inputs", ins}, {"outputs", outs}}}};
}

inline std::string to_json(const JudgementDiagram &jd) { return judgement_to_json_value(jd).dump(); }

/// Right-hand side of the substitution property: with Γ, x:B ⊢ M and
/// Θ ⊢ N : B over disjoint contexts, ⟦N⟧ is plugged into x's wires of ⟦M⟧.
/// The result has inputs Γ then Θ. `m` must have x as its last entry.
inline Diagram plug(const JudgementDiagram &m, const JudgementDiagram &n) {
  const std::size_t xs = size(m.context.entries().back().type);
  const std::size_t g = m.context.wires() - xs;
  return then(beside(Diagram::id(g), n.diagram), m.diagram);
}

} // namespace zeta
