#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zeta/error.hpp"

namespace zeta {

using Complex = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Dense row-major complex matrix. Rows = 2^outputs, cols = 2^inputs.
class ComplexMatrix {
public:
  ComplexMatrix() : ComplexMatrix(1, 1) {}

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {
    if (!is_power_of_two(rows) || !is_power_of_two(cols))
      throw Error("matrix dimensions must be powers of two, got " + std::to_string(rows) + "x" +
                  std::to_string(cols));
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : ComplexMatrix(rows, cols) {
    if (data.size() != rows * cols) throw Error("matrix data size does not match its shape");
    data_ = std::move(data);
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Complex> &data() const noexcept { return data_; }
  std::vector<Complex> &data() noexcept { return data_; }

  Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double max_abs() const {
    double m = 0;
    for (auto &z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    for (auto &z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

inline ComplexMatrix operator*(Complex c, const ComplexMatrix &m) {
  ComplexMatrix r = m;
  for (auto &z : r.data()) z *= c;
  return r;
}

inline ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.cols() != b.rows())
    throw Error("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                std::to_string(b.rows()) + " differ");
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

/// a (x) b with a on the most significant qubits.
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

inline ComplexMatrix transpose(const ComplexMatrix &m) {
  ComplexMatrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
  return r;
}

/// Witness of a == c * b. `both_zero` marks the degenerate case where both
/// matrices vanish within tolerance and no scalar is meaningful.
struct ScalarWitness {
  bool both_zero = false;
  Complex scalar{1.0, 0.0};
  double deviation = 0.0;
};

inline void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("shape mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

namespace detail {
// Candidate scalar: ratio at the largest-magnitude entry of b.
inline std::optional<Complex> candidate_scalar(const ComplexMatrix &a, const ComplexMatrix &b) {
  std::size_t best = 0;
  double mag = -1;
  for (std::size_t i = 0; i < b.data().size(); ++i)
    if (std::abs(b.data()[i]) > mag) {
      mag = std::abs(b.data()[i]);
      best = i;
    }
  if (mag <= 0) return std::nullopt;
  return a.data()[best] / b.data()[best];
}

inline double deviation_with(const ComplexMatrix &a, const ComplexMatrix &b, Complex c) {
  double dev = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    dev = std::max(dev, std::abs(a.data()[i] - c * b.data()[i]));
  return dev;
}
} // namespace detail

/// Nonzero c with max|a - c b| <= tol, if one exists.
inline std::optional<ScalarWitness> equal_up_to_scalar(const ComplexMatrix &a, const ComplexMatrix &b,
                                                       double tol) {
  require_same_shape(a, b);
  if (a.max_abs() <= tol && b.max_abs() <= tol) return ScalarWitness{true, Complex{}, 0.0};
  auto c = detail::candidate_scalar(a, b);
  if (!c || std::abs(*c) == 0.0) return std::nullopt;
  const double dev = detail::deviation_with(a, b, *c);
  if (dev > tol) return std::nullopt;
  return ScalarWitness{false, *c, dev};
}

/// max|a - b|.
inline double max_difference(const ComplexMatrix &a, const ComplexMatrix &b) {
  require_same_shape(a, b);
  return detail::deviation_with(a, b, Complex{1.0, 0.0});
}

/// Distance reported for a failed comparison: the residual under the
/// candidate scalar when there is one, max|a - b| otherwise.
inline double scalar_residual(const ComplexMatrix &a, const ComplexMatrix &b) {
  require_same_shape(a, b);
  auto c = detail::candidate_scalar(a, b);
  if (!c || std::abs(*c) == 0.0) return max_difference(a, b);
  return detail::deviation_with(a, b, *c);
}

/// {"shape":[rows,cols],"entries":[[re,im],...]} row-major.
inline nlohmann::ordered_json matrix_to_json_value(const ComplexMatrix &m) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (auto &z : m.data()) entries.push_back({z.real(), z.imag()});
  return {{"shape", {m.rows(), m.cols()}}, {"entries", entries}};
}

inline std::string to_json(const ComplexMatrix &m) { return matrix_to_json_value(m).dump(); }

inline ComplexMatrix matrix_from_json(const std::string &text) {
  try {
    auto j = nlohmann::ordered_json::parse(text);
    const auto rows = j.at("shape").at(0).get<std::size_t>();
    const auto cols = j.at("shape").at(1).get<std::size_t>();
    std::vector<Complex> data;
    for (auto &e : j.at("entries")) data.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return ComplexMatrix(rows, cols, std::move(data));
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("malformed matrix document: ") + e.what());
  }
}

/// `a+bi` with 6 significant digits.
inline std::string format_complex(Complex z) {
  auto clean = [](double v) { return std::abs(v) < 5e-13 ? 0.0 : v; };
  char buf[64];
  const double re = clean(z.real()), im = clean(z.imag());
  std::snprintf(buf, sizeof buf, "%.6g%s%.6gi", re, (im < 0 || std::signbit(im)) ? "" : "+", im);
  return buf;
}

/// One row per line, entries separated by two spaces.
inline std::string to_text(const ComplexMatrix &m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += "  ";
      s += format_complex(m(i, j));
    }
    s += "\n";
  }
  return s;
}

} // namespace zeta
