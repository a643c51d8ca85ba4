#pragma once

#include <cctype>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>

#include "topsing/errors.hpp"
#include "topsing/series.hpp"

namespace topsing {

/// Syntax error in the polynomial grammar, with 1-based line and column of the
/// offending token.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column, std::string token)
      : UsageError(format(message, line, column, token)),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& token() const { return token_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column,
                            const std::string& token) {
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << column << ": " << message;
    if (!token.empty()) os << " (near '" << token << "')";
    return os.str();
  }
  std::size_t line_, column_;
  std::string token_;
};

namespace detail {

enum class TokenKind { Integer, Variable, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line, column;
};

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, std::size_t num_vars) : text_(text), num_vars_(num_vars) {
    tokenize();
    if (num_vars_ == 0) {
      for (const auto& t : tokens_)
        if (t.kind == TokenKind::Variable) num_vars_ = std::max(num_vars_, var_index(t) + 1);
      if (num_vars_ == 0) num_vars_ = 1;
    }
  }

  SparseSeries parse() {
    if (peek().kind == TokenKind::End) fail("empty expression", peek());
    SparseSeries r = expression();
    if (peek().kind != TokenKind::End) fail("unexpected token", peek());
    return r;
  }

 private:
  void tokenize() {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text_.size();) {
      char c = text_[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        ++col;
        continue;
      }
      std::size_t start_col = col;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        tokens_.push_back({TokenKind::Integer, std::string(text_.substr(i, j - i)), line, start_col});
        col += j - i;
        i = j;
        continue;
      }
      if (c == 'x') {
        std::size_t j = i + 1;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        std::string tok(text_.substr(i, j - i));
        if (j == i + 1) {
          while (j < text_.size() && std::isalnum(static_cast<unsigned char>(text_[j]))) ++j;
          fail("variable must be x followed by an index", {TokenKind::Variable, std::string(text_.substr(i, j - i)), line, start_col});
        }
        if (j < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) {
          std::size_t k = j;
          while (k < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[k])) || text_[k] == '_')) ++k;
          fail("unknown identifier", {TokenKind::Variable, std::string(text_.substr(i, k - i)), line, start_col});
        }
        tokens_.push_back({TokenKind::Variable, tok, line, start_col});
        col += j - i;
        i = j;
        continue;
      }
      TokenKind kind;
      switch (c) {
        case '+': kind = TokenKind::Plus; break;
        case '-': kind = TokenKind::Minus; break;
        case '*': kind = TokenKind::Star; break;
        case '^': kind = TokenKind::Caret; break;
        case '/': kind = TokenKind::Slash; break;
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        default: {
          std::size_t j = i;
          while (j < text_.size() && !std::isspace(static_cast<unsigned char>(text_[j]))) ++j;
          fail("unexpected character", {TokenKind::End, std::string(text_.substr(i, std::max<std::size_t>(1, j - i))), line, start_col});
        }
      }
      tokens_.push_back({kind, std::string(1, c), line, start_col});
      ++i;
      ++col;
    }
    tokens_.push_back({TokenKind::End, "", line, col});
  }

  std::size_t var_index(const Token& t) const {
    unsigned long idx = 0;
    try {
      idx = std::stoul(t.text.substr(1));
    } catch (const std::exception&) {
      fail("variable index out of range", t);
    }
    if (idx == 0) fail("variables are numbered from x1", t);
    if (idx > kMaxVariables) fail("variable index exceeds 64", t);
    return idx - 1;
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] static void fail(const std::string& msg, const Token& t) {
    throw ParseError(msg, t.line, t.column, t.text.empty() ? "end of input" : t.text);
  }

  SparseSeries expression() {
    SparseSeries acc = term();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      bool minus = next().kind == TokenKind::Minus;
      SparseSeries rhs = term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  SparseSeries term() {
    SparseSeries acc = unary();
    while (true) {
      const Token& t = peek();
      if (t.kind == TokenKind::Star) {
        next();
        acc = acc * unary();
      } else if (t.kind == TokenKind::Integer || t.kind == TokenKind::Variable || t.kind == TokenKind::LParen) {
        fail("implicit multiplication is not allowed; use '*'", t);
      } else {
        return acc;
      }
    }
  }

  SparseSeries unary() {
    if (peek().kind == TokenKind::Minus) {
      next();
      return -unary();
    }
    if (peek().kind == TokenKind::Plus) {
      next();
      return unary();
    }
    return power();
  }

  SparseSeries power() {
    SparseSeries base = primary();
    if (peek().kind != TokenKind::Caret) return base;
    next();
    const Token& e = peek();
    if (e.kind != TokenKind::Integer) fail("exponent must be a non-negative integer literal", e);
    next();
    unsigned long k = 0;
    try {
      k = std::stoul(e.text);
    } catch (const std::exception&) {
      fail("exponent too large", e);
    }
    if (k > kMaxExponent) fail("exponent too large", e);
    if (peek().kind == TokenKind::Caret) fail("chained exponents are ambiguous; use parentheses", peek());
    return base.pow(static_cast<unsigned>(k));
  }

  SparseSeries primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Integer: {
        next();
        Integer num(t.text, 10);
        Rational value(num);
        if (peek().kind == TokenKind::Slash) {
          next();
          const Token& d = peek();
          if (d.kind != TokenKind::Integer) fail("rational literal needs an integer denominator", d);
          next();
          Integer den(d.text, 10);
          if (den == 0) fail("zero denominator", d);
          value = Rational(num, den);
          value.canonicalize();
        }
        return SparseSeries::constant(num_vars_, value);
      }
      case TokenKind::Variable: {
        next();
        std::size_t idx = var_index(t);
        if (idx >= num_vars_)
          fail("variable outside the ambient space x1..x" + std::to_string(num_vars_), t);
        return SparseSeries::variable(num_vars_, idx);
      }
      case TokenKind::LParen: {
        next();
        SparseSeries inner = expression();
        if (peek().kind != TokenKind::RParen) fail("expected ')'", peek());
        next();
        return inner;
      }
      case TokenKind::Slash: fail("'/' is only allowed inside a rational literal", t);
      default: fail("expected a number, variable or '('", t);
    }
  }

  std::string_view text_;
  std::size_t num_vars_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a polynomial over Q in the variables x1..xN. With num_vars == 0 the
/// ambient dimension is the largest variable index that occurs.
inline SparseSeries parse_polynomial(std::string_view text, std::size_t num_vars = 0) {
  return detail::PolynomialParser(text, num_vars).parse();
}

using VariableNamer = std::function<std::string(std::size_t)>;

inline std::string default_variable_name(std::size_t i) { return "x" + std::to_string(i + 1); }

/// Prints in the input grammar, terms in descending grevlex order.
inline std::string format_polynomial(const SparseSeries& f, const VariableNamer& name = default_variable_name) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    Rational mag = abs(c);
    bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += name(v);
      if (m[v] > 1) mono += "^" + std::to_string(m[v]);
    }
    if (mono.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += to_string(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace topsing
