#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lambkit/syntax.hpp"

namespace lambkit {

class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

namespace detail {

enum class Tok : std::uint8_t {
  Ident, Zero, One, LParen, RParen, BSlash, Slash, Dot, Amp, Bang, Star,
  Arrow, Comma, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '#') {  // line comment
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    std::size_t at = i;
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", at}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", at}); ++i; continue;
      case '\\': out.push_back({Tok::BSlash, "\\", at}); ++i; continue;
      case '/': out.push_back({Tok::Slash, "/", at}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", at}); ++i; continue;
      case '&': out.push_back({Tok::Amp, "&", at}); ++i; continue;
      case '!': out.push_back({Tok::Bang, "!", at}); ++i; continue;
      case '*': out.push_back({Tok::Star, "*", at}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", at}); ++i; continue;
      case '0': out.push_back({Tok::Zero, "0", at}); ++i; continue;
      case '1': out.push_back({Tok::One, "1", at}); ++i; continue;
      case '=':
        if (i + 1 < n && src[i + 1] == '>') {
          out.push_back({Tok::Arrow, "=>", at});
          i += 2;
          continue;
        }
        throw ParseError("unknown token '='", at);
      default:
        if (c >= 'a' && c <= 'z') {
          std::size_t j = i + 1;
          while (j < n && ((src[j] >= 'a' && src[j] <= 'z') ||
                           (src[j] >= '0' && src[j] <= '9') || src[j] == '_'))
            ++j;
          out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), at});
          i = j;
          continue;
        }
        throw ParseError(std::string("unknown token '") + c + "'", at);
    }
  }
  out.push_back({Tok::End, "", n});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Formula formula() {
    Formula f = division();
    expect(Tok::End, "end of input");
    return f;
  }

  Sequent sequent() {
    Sequent s;
    if (peek().kind != Tok::Arrow) {
      s.antecedent.push_back(division());
      while (peek().kind == Tok::Comma) {
        next();
        s.antecedent.push_back(division());
      }
    }
    expect(Tok::Arrow, "'=>'");
    s.succedent = division();
    expect(Tok::End, "end of input");
    return s;
  }

  Formula division() {
    std::vector<Formula> items;
    std::vector<bool> starred;
    std::vector<Tok> ops;
    auto operand = [&] {
      auto [f, st] = meet_term();
      items.push_back(std::move(f));
      starred.push_back(st);
    };
    operand();
    while (peek().kind == Tok::BSlash || peek().kind == Tok::Slash) {
      ops.push_back(next().kind);
      operand();
    }
    if (ops.empty()) {
      if (starred[0]) throw ParseError("star marker without a division", peek().offset);
      return items[0];
    }
    for (std::size_t k = 1; k < ops.size(); ++k)
      if (ops[k] != ops[0])
        throw ParseError("cannot mix \\ and / without parentheses", peek().offset);
    if (ops[0] == Tok::BSlash) {
      // Right-associative; every item but the last is a denominator.
      if (starred.back()) throw ParseError("star marker on a numerator", peek().offset);
      Formula f = items.back();
      for (std::size_t k = items.size() - 1; k-- > 0;)
        f = starred[k] ? iter_ldiv(items[k], std::move(f)) : ldiv(items[k], std::move(f));
      return f;
    }
    // Left-associative; every item but the first is a denominator.
    if (starred[0]) throw ParseError("star marker on a numerator", peek().offset);
    Formula f = items[0];
    for (std::size_t k = 1; k < items.size(); ++k)
      f = starred[k] ? iter_rdiv(std::move(f), items[k]) : rdiv(std::move(f), items[k]);
    return f;
  }

private:
  // Each term parser returns the formula plus whether it carries a trailing
  // star marker. The star binds tightest, so a starred term must be the
  // entire division operand; swallowing it into a larger . or & term is an
  // error ("(c.a)* \ b" is fine, "c.a* \ b" is not).
  std::pair<Formula, bool> meet_term() {
    auto [f, st] = product_term();
    while (peek().kind == Tok::Amp) {
      next();
      auto [g, st2] = product_term();
      if (st || st2)
        throw ParseError("starred denominator must be parenthesized", peek().offset);
      f = meet(std::move(f), std::move(g));
    }
    return {std::move(f), st};
  }

  std::pair<Formula, bool> product_term() {
    auto [f, st] = unary_term();
    while (peek().kind == Tok::Dot) {
      next();
      auto [g, st2] = unary_term();
      if (st || st2)
        throw ParseError("starred denominator must be parenthesized", peek().offset);
      f = mul(std::move(f), std::move(g));
    }
    return {std::move(f), st};
  }

  std::pair<Formula, bool> unary_term() {
    if (peek().kind == Tok::Bang) {
      next();
      auto [f, st] = unary_term();
      if (st) throw ParseError("star marker inside !", peek().offset);
      bool starred = try_star();
      return {bang(std::move(f)), starred};
    }
    Formula f = atom();
    return {std::move(f), try_star()};
  }

  Formula atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Ident: return var(t.text);
      case Tok::Zero: return zero();
      case Tok::One: return one();
      case Tok::LParen: {
        Formula f = division();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected a formula, got '" + t.text + "'", t.offset);
    }
  }

  bool try_star() {
    if (peek().kind == Tok::Star) {
      next();
      return true;
    }
    return false;
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  void expect(Tok kind, const char* what) {
    const Token& t = next();
    if (t.kind != kind)
      throw ParseError(std::string("expected ") + what + ", got '" +
                           (t.kind == Tok::End ? std::string("end of input") : t.text) + "'",
                       t.offset);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::Parser(text).formula();
}

inline Sequent parse_sequent(std::string_view text) {
  return detail::Parser(text).sequent();
}

}  // namespace lambkit
