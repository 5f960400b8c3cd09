// Recursive-descent parser for the goal grammar.

#include <cctype>

#include "optbt/logic.hpp"

namespace optbt::logic {

SyntaxError::SyntaxError(std::size_t position, std::string expected, std::string found)
    : std::runtime_error("syntax error at position " + std::to_string(position) + ": expected " + expected +
                         ", found " + found),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Not, And, Or, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t position;  // code points
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident:
      return "identifier '" + t.text + "'";
    case Tok::End:
      return "end of input";
    default:
      return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    const std::size_t pos = cp_;
    if (i_ >= text_.size()) return {Tok::End, "", pos};
    const unsigned char ch = static_cast<unsigned char>(text_[i_]);
    if (std::isalpha(ch) || ch == '_') {
      std::size_t start = i_;
      while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) {
        ++i_;
        ++cp_;
      }
      return {Tok::Ident, std::string(text_.substr(start, i_ - start)), pos};
    }
    switch (ch) {
      case '(':
        return single(Tok::LParen, pos);
      case ')':
        return single(Tok::RParen, pos);
      case ',':
        return single(Tok::Comma, pos);
      case '!':
        return single(Tok::Not, pos);
      case '&':
        return single(Tok::And, pos);
      case '|':
        return single(Tok::Or, pos);
      default:
        break;
    }
    if (match("¬")) return {Tok::Not, "¬", pos};
    if (match("∧")) return {Tok::And, "∧", pos};
    if (match("∨")) return {Tok::Or, "∨", pos};
    throw SyntaxError(pos, "a literal, '!', '(' or an operator", "unexpected character '" + current_char() + "'");
  }

 private:
  Token single(Tok kind, std::size_t pos) {
    ++i_;
    ++cp_;
    return {kind, std::string(1, text_[i_ - 1]), pos};
  }

  bool match(std::string_view utf8) {
    if (text_.substr(i_, utf8.size()) != utf8) return false;
    i_ += utf8.size();
    ++cp_;
    return true;
  }

  std::string current_char() const {
    std::size_t len = 1;
    const auto ch = static_cast<unsigned char>(text_[i_]);
    if (ch >= 0xF0) len = 4;
    else if (ch >= 0xE0) len = 3;
    else if (ch >= 0xC0) len = 2;
    return std::string(text_.substr(i_, len));
  }

  void skip_space() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) {
      ++i_;
      ++cp_;
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::size_t cp_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  Wff goal() {
    if (tok_.kind == Tok::End) throw SyntaxError(tok_.position, "a goal formula", "end of input");
    Wff w = disjunction();
    if (tok_.kind != Tok::End) fail("'&', '|' or end of input");
    return w;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& expected) { throw SyntaxError(tok_.position, expected, describe(tok_)); }

  void expect(Tok kind, const std::string& expected) {
    if (tok_.kind != kind) fail(expected);
    advance();
  }

  Wff disjunction() {
    Wff lhs = conjunction();
    while (tok_.kind == Tok::Or) {
      advance();
      lhs = Wff::disjunction(std::move(lhs), conjunction());
    }
    return lhs;
  }

  Wff conjunction() {
    Wff lhs = unary();
    while (tok_.kind == Tok::And) {
      advance();
      lhs = Wff::conjunction(std::move(lhs), unary());
    }
    return lhs;
  }

  Wff unary() {
    switch (tok_.kind) {
      case Tok::Not:
        advance();
        return Wff::negation(unary());
      case Tok::LParen: {
        advance();
        Wff inner = disjunction();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        return literal();
      default:
        fail("a literal, '!' or '('");
    }
  }

  Wff literal() {
    std::string name = tok_.text;
    advance();
    std::vector<std::string> args;
    if (tok_.kind == Tok::LParen) {
      advance();
      if (tok_.kind != Tok::Ident) fail("an object name");
      args.push_back(tok_.text);
      advance();
      while (tok_.kind == Tok::Comma) {
        advance();
        if (tok_.kind != Tok::Ident) fail("an object name");
        args.push_back(tok_.text);
        advance();
      }
      expect(Tok::RParen, "',' or ')'");
    }
    return Wff::literal(std::move(name), std::move(args));
  }

  Lexer lexer_;
  Token tok_{Tok::End, "", 0};
};

}  // namespace

Wff parse_wff(std::string_view text) { return Parser(text).goal(); }

}  // namespace optbt::logic
