#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <variant>

#include "zeta/error.hpp"

namespace zeta {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Basis { Zeta, Xi };

constexpr Basis complement(Basis b) noexcept { return b == Basis::Zeta ? Basis::Xi : Basis::Zeta; }

/// "Z" or "X", the spelling used by the grammar and the JSON schema.
constexpr std::string_view basis_name(Basis b) noexcept { return b == Basis::Zeta ? "Z" : "X"; }

inline Basis basis_from_name(std::string_view s) {
  if (s == "Z") return Basis::Zeta;
  if (s == "X") return Basis::Xi;
  throw Error("unknown basis '" + std::string(s) + "' (expected Z or X)");
}

/// An angle in [0, 2pi). Exact phases are rational multiples of pi kept in
/// lowest terms with numerator/denominator in [0, 2); decimal phases are
/// plain radians. Arithmetic stays exact until a decimal operand shows up.
class Phase {
public:
  struct Exact {
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool operator==(const Exact &) const = default;
  };
  struct Radians {
    double value = 0.0;
    bool operator==(const Radians &) const = default;
  };

  Phase() = default;

  static Phase pi_fraction(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw Error("phase denominator must be nonzero");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t period = 2 * den;
    num %= period;
    if (num < 0) num += period;
    const std::int64_t g = std::gcd(num, den);
    Phase p;
    p.repr_ = Exact{num / (g == 0 ? 1 : g), den / (g == 0 ? den : g)};
    if (num == 0) p.repr_ = Exact{0, 1};
    return p;
  }

  static Phase radians(double r) {
    if (!std::isfinite(r)) throw Error("phase must be finite");
    double v = std::fmod(r, kTwoPi);
    if (v < 0) v += kTwoPi;
    if (v >= kTwoPi) v = 0.0;
    Phase p;
    p.repr_ = Radians{v};
    return p;
  }

  static Phase zero() { return Phase{}; }
  static Phase pi() { return pi_fraction(1, 1); }
  static Phase half_pi() { return pi_fraction(1, 2); }

  bool is_exact() const noexcept { return std::holds_alternative<Exact>(repr_); }
  const Exact &exact() const { return std::get<Exact>(repr_); }
  double radians_value() const { return std::get<Radians>(repr_).value; }

  /// Numeric value in [0, 2pi).
  double value() const {
    if (auto e = std::get_if<Exact>(&repr_))
      return kPi * static_cast<double>(e->num) / static_cast<double>(e->den);
    return std::get<Radians>(repr_).value;
  }

  bool is_zero() const {
    if (auto e = std::get_if<Exact>(&repr_)) return e->num == 0;
    return std::get<Radians>(repr_).value == 0.0;
  }

  /// e^{i*phase}. Multiples of pi/2 are returned exactly.
  std::complex<double> unit() const {
    if (auto e = std::get_if<Exact>(&repr_)) {
      if ((2 * e->num) % e->den == 0) {
        switch ((2 * e->num) / e->den) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        case 3: return {0.0, -1.0};
        default: break;
        }
      }
    }
    return std::polar(1.0, value());
  }

  Phase operator+(const Phase &o) const {
    if (is_exact() && o.is_exact()) {
      const auto &a = exact();
      const auto &b = o.exact();
      const std::int64_t l = std::lcm(a.den, b.den);
      return pi_fraction(a.num * (l / a.den) + b.num * (l / b.den), l);
    }
    return radians(value() + o.value());
  }

  Phase operator-() const {
    if (is_exact()) return pi_fraction(-exact().num, exact().den);
    return radians(-value());
  }

  Phase operator-(const Phase &o) const { return *this + (-o); }

  /// Structural equality (same representation). See same_angle for values.
  bool operator==(const Phase &) const = default;

  /// Concrete syntax: 0, pi, pi/2, 3pi/4, rad(1.25).
  std::string to_string() const {
    if (auto e = std::get_if<Exact>(&repr_)) {
      if (e->num == 0) return "0";
      std::string s = e->num == 1 ? "pi" : std::to_string(e->num) + "pi";
      if (e->den != 1) s += "/" + std::to_string(e->den);
      return s;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, radians_value());
    std::string num(buf, res.ptr);
    if (num.find_first_of(".e") == std::string::npos) num += ".0";
    return "rad(" + num + ")";
  }

private:
  std::variant<Exact, Radians> repr_{Exact{0, 1}};
};

/// Equality of the angles modulo 2pi.
inline bool same_angle(const Phase &a, const Phase &b, double tol = 1e-12) {
  if (a.is_exact() && b.is_exact()) return a == b;
  double d = std::fabs(a.value() - b.value());
  d = std::fmin(d, kTwoPi - d);
  return d <= tol;
}

} // namespace zeta
