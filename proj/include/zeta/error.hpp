#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zeta {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string &msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

enum class TypeErrorKind {
  UnboundVariable,
  Mismatch,
  OccursCheck,
  Ambiguous,
  LinearityViolation,
  ContractionBasisConflict,
  DuplicateBinding,
  NotAFunction,
  InvalidDerivation,
};

class TypeError : public Error {
public:
  TypeError(TypeErrorKind kind, const std::string &msg) : Error(msg), kind_(kind) {}
  TypeErrorKind kind() const noexcept { return kind_; }

private:
  TypeErrorKind kind_;
};

/// Ill-formed diagram: a Seq whose inner arities disagree, or a bad document.
class DiagramError : public Error {
public:
  using Error::Error;
};

class WireBudgetError : public Error {
public:
  WireBudgetError(std::size_t needed, std::size_t budget)
      : Error("wire budget exceeded: " + std::to_string(needed) + " wires needed, budget is " +
              std::to_string(budget)),
        needed_(needed), budget_(budget) {}

  std::size_t needed() const noexcept { return needed_; }
  std::size_t budget() const noexcept { return budget_; }

private:
  std::size_t needed_;
  std::size_t budget_;
};

} // namespace zeta
