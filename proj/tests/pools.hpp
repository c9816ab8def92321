#pragma once

// Random terms and diagrams shared by the test binaries.

#include <random>
#include <string>
#include <vector>

#include "zeta/zeta.hpp"

namespace zeta::pool {

inline Phase random_phase(std::mt19937 &rng) {
  static const std::vector<Phase> phases = {Phase::zero(), Phase::half_pi(), Phase::pi(),
                                            Phase::pi_fraction(3, 2), Phase::pi_fraction(1, 4),
                                            Phase::radians(0.7)};
  return phases[std::uniform_int_distribution<std::size_t>(0, phases.size() - 1)(rng)];
}

inline Basis random_basis(std::mt19937 &rng) { return rng() % 2 ? Basis::Zeta : Basis::Xi; }

inline Type random_type(std::mt19937 &rng, int depth) {
  const int pick = static_cast<int>(rng() % (depth > 0 ? 4 : 2));
  switch (pick) {
  case 0: return Type::numeral(1);
  case 1: return Type::numeral(rng() % 3);
  case 2: return Type::tensor(random_type(rng, depth - 1), random_type(rng, depth - 1));
  default: return Type::dual(random_type(rng, depth - 1));
  }
}

// Syntactically arbitrary terms; most are not well typed.
inline Term random_term(std::mt19937 &rng, int depth) {
  static const std::vector<std::string> names = {"x", "y", "z", "u", "v"};
  auto name = [&] { return names[rng() % names.size()]; };
  auto annot = [&]() -> std::optional<Type> {
    if (rng() % 2) return std::nullopt;
    return random_type(rng, 2);
  };
  const int pick = static_cast<int>(rng() % (depth > 0 ? 8 : 3));
  switch (pick) {
  case 0: return Term::unit();
  case 1: return Term::var(name());
  case 2: return Term::gen(random_basis(rng), random_phase(rng), static_cast<std::int64_t>(rng() % 6) - 2);
  case 3:
    return Term::abs(random_basis(rng), random_phase(rng), name(), random_term(rng, depth - 1), annot());
  case 4: return Term::lambda(name(), random_term(rng, depth - 1), annot());
  case 5: return Term::app(random_term(rng, depth - 1), random_term(rng, depth - 1));
  case 6: return Term::tup(random_term(rng, depth - 1), random_term(rng, depth - 1));
  default:
    return Term::let(random_basis(rng), name(), name(), random_term(rng, depth - 1), random_term(rng, depth - 1),
                     annot(), annot());
  }
}

// A random generator diagram on `in` inputs, built as a stack of layers of
// at most `max_wires` wires.
inline Diagram random_diagram(std::mt19937 &rng, std::size_t in, std::size_t layers, std::size_t max_wires) {
  Diagram d = Diagram::id(in);
  std::size_t w = in;
  for (std::size_t l = 0; l < layers; ++l) {
    Diagram g = Diagram::id(0);
    std::size_t gin = 0, gout = 0;
    for (int tries = 0; tries < 20; ++tries) {
      const int pick = static_cast<int>(rng() % 7);
      if (pick <= 2) {
        gin = rng() % 3;
        gout = rng() % 3;
        g = Diagram::spider(random_basis(rng), random_phase(rng), gin, gout);
      } else if (pick == 3) {
        gin = gout = 1;
        g = Diagram::had();
      } else if (pick == 4) {
        gin = gout = 2;
        g = Diagram::swap();
      } else if (pick == 5) {
        gin = 0;
        gout = 2;
        g = Diagram::cup();
      } else {
        gin = 2;
        gout = 0;
        g = Diagram::cap();
      }
      if (gin <= w && w - gin + gout <= max_wires) break;
      gin = gout = 0;
      g = Diagram::id(0);
    }
    const std::size_t above = w - gin == 0 ? 0 : rng() % (w - gin + 1);
    const std::size_t below = w - gin - above;
    Diagram layer = beside(beside(Diagram::id(above), g), Diagram::id(below));
    if (rng() % 5 == 0) layer = beside(layer, Diagram::scalar({0.5 + 0.1 * (rng() % 5), 0.3}));
    d = then(d, layer);
    w = w - gin + gout;
  }
  return d;
}

// Well-typed closed terms with the type each one should infer to.
struct TypedSample {
  std::string source;
  std::string type;
};

inline const std::vector<TypedSample> &closed_terms() {
  static const std::vector<TypedSample> samples = {
      {"*", "0"},
      {"Z[1]", "1"},
      {"X[1]^pi", "1"},
      {"Z[2]^pi/2", "2"},
      {"Z[0]^pi", "0"},
      {"<Z[1], X[1]>", "1 * 1"},
      {"Z x:1. <x, x>", "1 -> 1 * 1"},
      {"\\x:1. x", "1 -> 1"},
      {"Z^pi x:1. x", "1 -> 1"},
      {"X x:1. <x, <x, x>>", "1 -> 1 * (1 * 1)"},
      {"H", "1 -> 1"},
      {"(\\x:1. x) Z[1]", "1"},
      {"(Z x:1. <x, x>) X[1]", "1 * 1"},
      {"Z p:1*1. let <u:1, v:1> =Z p in <v, u>", "1 * 1 -> 1 * 1"},
  };
  return samples;
}

} // namespace zeta::pool
