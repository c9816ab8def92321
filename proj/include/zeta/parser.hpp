#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zeta/error.hpp"
#include "zeta/phase.hpp"
#include "zeta/term.hpp"
#include "zeta/type.hpp"

// Concrete syntax (ASCII):
//
//   term   := comp
//   comp   := app ("o" app)*                      right-associative
//   app    := atom+                               left-associative
//   atom   := "*" | ident | gen | rot | "H" | tuple | letexp | abs | "(" term ")"
//   abs    := ("Z"|"X") ["^" phase] ident [":" type] "." term
//           | "\" ident [":" type] "." term
//   gen    := ("Z"|"X") "[" int "]" ["^" phase]
//   rot    := "rot" ("Z"|"X") "^" phase
//   tuple  := "<" term "," term ">"
//   letexp := "let" "<" ident [":" type] "," ident [":" type] ">" "=" ("Z"|"X") term "in" term
//   phase  := ["-"] (int "pi" ["/" int] | "pi" ["/" int] | "0" | "rad(" decimal ")")
//   type   := prod ["->" type] ; prod := post ("*" post)* ; post := (nat | "(" type ")") "'"*
//
// '#' starts a comment that runs to the end of the line.

namespace zeta {

namespace detail {

enum class Tok { Ident, Int, Decimal, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col, start = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      while (j < src.size() && src[j] == '\'') ++j;
      out.push_back({Tok::Ident, std::string(src.substr(start, j - start)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      Tok kind = Tok::Int;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        kind = Tok::Decimal;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (kind == Tok::Decimal && j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '-' || src[k] == '+')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      out.push_back({kind, std::string(src.substr(start, j - start)), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Sym, "->", l, cl});
      advance(2);
      continue;
    }
    static constexpr std::string_view symbols = "*<>,().\\^[]-/=:'";
    if (symbols.find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

inline bool is_keyword(const std::string &s) {
  return s == "Z" || s == "X" || s == "H" || s == "let" || s == "in" || s == "o" || s == "rotZ" ||
         s == "rotX";
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Term parse_whole_term() {
    Term t = term();
    expect_end();
    return t;
  }

  Type parse_whole_type() {
    Type t = type();
    expect_end();
    return t;
  }

  Phase parse_whole_phase() {
    Phase p = phase();
    expect_end();
    return p;
  }

private:
  const Token &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool at_ident(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }

  [[noreturn]] void fail(const std::string &msg, const Token &t) const {
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.line, t.column);
  }

  void expect_sym(std::string_view s) {
    if (!at_sym(s)) fail("expected '" + std::string(s) + "'", peek());
    next();
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("expected end of input", peek());
  }

  std::string identifier() {
    const Token &t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected identifier", t);
    return next().text;
  }

  std::int64_t integer() {
    bool neg = false;
    if (at_sym("-")) {
      next();
      neg = true;
    }
    const Token &t = peek();
    if (t.kind != Tok::Int) fail("expected integer", t);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) fail("integer out of range", t);
    next();
    return neg ? -v : v;
  }

  Basis basis_keyword() {
    const Token &t = peek();
    if (t.kind == Tok::Ident && (t.text == "Z" || t.text == "X")) {
      next();
      return t.text == "Z" ? Basis::Zeta : Basis::Xi;
    }
    fail("expected basis Z or X", t);
  }

  Phase phase() {
    bool neg = false;
    if (at_sym("-")) {
      next();
      neg = true;
    }
    Phase p;
    const Token &t = peek();
    if (t.kind == Tok::Ident && t.text == "rad" && at_sym("(", 1)) {
      next();
      next();
      bool inner_neg = false;
      if (at_sym("-")) {
        next();
        inner_neg = true;
      }
      const Token &num = peek();
      if (num.kind != Tok::Int && num.kind != Tok::Decimal) fail("expected decimal radians", num);
      double v = 0;
      auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), v);
      if (ec != std::errc{}) fail("malformed decimal", num);
      next();
      expect_sym(")");
      p = Phase::radians(inner_neg ? -v : v);
    } else if (t.kind == Tok::Int && at_ident("pi", 1)) {
      const std::int64_t k = integer();
      next();
      p = Phase::pi_fraction(k, optional_denominator());
    } else if (t.kind == Tok::Ident && t.text == "pi") {
      next();
      p = Phase::pi_fraction(1, optional_denominator());
    } else if (t.kind == Tok::Int && t.text == "0") {
      next();
      p = Phase::zero();
    } else {
      fail("phase out of grammar (expected 0, [k]pi[/d] or rad(x))", t);
    }
    return neg ? -p : p;
  }

  std::int64_t optional_denominator() {
    if (!at_sym("/")) return 1;
    next();
    const Token &t = peek();
    const std::int64_t d = integer();
    if (d <= 0) fail("phase denominator must be positive", t);
    return d;
  }

  std::optional<Type> optional_annotation() {
    if (!at_sym(":")) return std::nullopt;
    next();
    return type();
  }

  // --- types ---
  Type type() {
    Type left = product();
    if (at_sym("->")) {
      next();
      return Type::fn(left, type());
    }
    return left;
  }

  Type product() {
    Type t = postfix();
    while (at_sym("*")) {
      next();
      t = Type::tensor(t, postfix());
    }
    return t;
  }

  Type postfix() {
    Type t;
    if (at_sym("(")) {
      next();
      t = type();
      expect_sym(")");
    } else if (peek().kind == Tok::Int) {
      const Token &tok = peek();
      const std::int64_t n = integer();
      if (n < 0) fail("numeral type must be a natural number", tok);
      t = Type::numeral(static_cast<std::size_t>(n));
    } else {
      fail("expected a type", peek());
    }
    while (at_sym("'")) {
      next();
      t = Type::dual(t);
    }
    return t;
  }

  // --- terms ---
  Term term() {
    Term left = app();
    if (at_ident("o")) {
      next();
      Term right = term();
      return compose(left, right);
    }
    return left;
  }

  bool atom_starts() const {
    const Token &t = peek();
    if (t.kind == Tok::Ident) return t.text != "in" && t.text != "o";
    if (t.kind != Tok::Sym) return false;
    return t.text == "*" || t.text == "<" || t.text == "(" || t.text == "\\";
  }

  Term app() {
    if (!atom_starts()) fail("expected a term", peek());
    Term t = atom();
    while (atom_starts()) t = Term::app(t, atom());
    return t;
  }

  Term atom() {
    const Token &t = peek();
    if (at_sym("*")) {
      next();
      return Term::unit();
    }
    if (at_sym("(")) {
      next();
      Term inner = term();
      expect_sym(")");
      return inner;
    }
    if (at_sym("<")) {
      next();
      Term l = term();
      expect_sym(",");
      Term r = term();
      expect_sym(">");
      return Term::tup(l, r);
    }
    if (at_sym("\\")) {
      next();
      std::string name = identifier();
      auto ann = optional_annotation();
      expect_sym(".");
      return Term::lambda(name, term(), ann);
    }
    if (t.kind != Tok::Ident) fail("expected a term", t);
    if (t.text == "let") return let_expression();
    if (t.text == "H") {
      next();
      return hadamard();
    }
    if (t.text == "rotZ" || t.text == "rotX") {
      const Basis b = t.text == "rotZ" ? Basis::Zeta : Basis::Xi;
      next();
      expect_sym("^");
      return rotation(b, phase());
    }
    if (t.text == "Z" || t.text == "X") {
      const Basis b = basis_keyword();
      if (at_sym("[")) {
        next();
        const std::int64_t n = integer();
        expect_sym("]");
        Phase p;
        if (at_sym("^")) {
          next();
          p = phase();
        }
        return Term::gen(b, p, n);
      }
      Phase p;
      if (at_sym("^")) {
        next();
        p = phase();
      }
      std::string name = identifier();
      auto ann = optional_annotation();
      expect_sym(".");
      return Term::abs(b, p, name, term(), ann);
    }
    return Term::var(identifier());
  }

  Term let_expression() {
    next();
    expect_sym("<");
    std::string first = identifier();
    auto first_type = optional_annotation();
    expect_sym(",");
    std::string second = identifier();
    auto second_type = optional_annotation();
    expect_sym(">");
    expect_sym("=");
    const Basis b = basis_keyword();
    Term bound = term();
    if (!at_ident("in")) fail("expected 'in'", peek());
    next();
    Term body = term();
    return Term::let(b, first, second, bound, body, first_type, second_type);
  }

public:
  static Term rotation(Basis b, Phase p) { return Term::abs(b, p, "x", Term::var("x")); }

  /// M o N := Z x. M (N x), x fresh.
  static Term compose(const Term &m, const Term &n) {
    auto avoid = names_in(m);
    auto more = names_in(n);
    avoid.insert(more.begin(), more.end());
    const std::string v = fresh_name("x", avoid);
    return Term::abs(Basis::Zeta, Phase::zero(), v, Term::app(m, Term::app(n, Term::var(v))));
  }

  /// H := rotZ^pi/2 o rotX^pi/2 o rotZ^pi/2, a single-qubit gate.
  static Term hadamard() {
    const Term inner = compose(rotation(Basis::Xi, Phase::half_pi()), rotation(Basis::Zeta, Phase::half_pi()));
    const Term outer = compose(rotation(Basis::Zeta, Phase::half_pi()), inner);
    auto a = outer.as<Term::Abs>();
    return Term::abs(a->basis, a->phase, a->name, a->body, Type::numeral(1));
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses a term; all sugar (rot, o, H, \) is expanded.
inline Term parse(std::string_view text) { return detail::Parser(text).parse_whole_term(); }

inline Type parse_type(std::string_view text) { return detail::Parser(text).parse_whole_type(); }

inline Phase parse_phase(std::string_view text) { return detail::Parser(text).parse_whole_phase(); }

/// Sugar-free terms, exposed for tests and rule schemas.
inline Term rotation_term(Basis b, Phase p) { return detail::Parser::rotation(b, p); }
inline Term compose_terms(const Term &m, const Term &n) { return detail::Parser::compose(m, n); }
inline Term hadamard_term() { return detail::Parser::hadamard(); }

namespace detail {
// prec 0: anything, 1: function position, 2: argument position
inline std::string print_term(const Term &t, int prec) {
  auto wrap = [&](const std::string &s, int need) { return prec > need ? "(" + s + ")" : s; };
  auto annotation = [](const std::optional<Type> &a) {
    return a ? " : " + a->to_string() : std::string{};
  };
  if (t.is<Term::Unit>()) return "*";
  if (auto v = t.as<Term::Var>()) return v->name;
  if (auto g = t.as<Term::Gen>()) {
    std::string s = std::string(basis_name(g->basis)) + "[" + std::to_string(g->n) + "]";
    if (!(g->phase.is_exact() && g->phase.is_zero())) s += "^" + g->phase.to_string();
    return s;
  }
  if (auto a = t.as<Term::Abs>()) {
    std::string head;
    if (a->linear) {
      head = "\\" + a->name;
    } else {
      head = std::string(basis_name(a->basis));
      if (!(a->phase.is_exact() && a->phase.is_zero())) head += "^" + a->phase.to_string();
      head += " " + a->name;
    }
    return wrap(head + annotation(a->annotation) + ". " + print_term(a->body, 0), 0);
  }
  if (auto ap = t.as<Term::App>())
    return wrap(print_term(ap->fn, 1) + " " + print_term(ap->arg, 2), 1);
  if (auto tp = t.as<Term::Tup>())
    return "<" + print_term(tp->left, 0) + ", " + print_term(tp->right, 0) + ">";
  auto l = t.as<Term::Let>();
  return wrap("let <" + l->first + annotation(l->first_type) + ", " + l->second +
                  annotation(l->second_type) + "> = " + std::string(basis_name(l->basis)) + " " +
                  print_term(l->bound, 0) + " in " + print_term(l->body, 0),
              0);
}
} // namespace detail

/// Concrete syntax for t. Sugar is not reintroduced, except that linear
/// binders print as \x so the obligation survives a round trip.
inline std::string print(const Term &t) { return detail::print_term(t, 0); }

} // namespace zeta
