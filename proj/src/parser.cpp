#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "tlmp/errors.hpp"
#include "tlmp/formula.hpp"

namespace tlmp {

namespace {

enum class Tok {
  LParen, RParen, LBrace, RBrace, Comma,
  AndAnd, OrOr, Arrow, Bang, Less, Greater,
  Ident, Number, End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { scan(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    scan();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, column_);
  }

  char at(size_t i) const { return i < text_.size() ? text_[i] : '\0'; }

  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void scan() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
    current_ = Token{};
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '(': current_.kind = Tok::LParen; advance(); return;
      case ')': current_.kind = Tok::RParen; advance(); return;
      case '{': current_.kind = Tok::LBrace; advance(); return;
      case '}': current_.kind = Tok::RBrace; advance(); return;
      case ',': current_.kind = Tok::Comma; advance(); return;
      case '!': current_.kind = Tok::Bang; advance(); return;
      case '<': current_.kind = Tok::Less; advance(); return;
      case '>': current_.kind = Tok::Greater; advance(); return;
      case '&':
        if (at(pos_ + 1) != '&') fail("single '&', use '&&'");
        advance();
        advance();
        current_.kind = Tok::AndAnd;
        return;
      case '|':
        if (at(pos_ + 1) != '|') fail("single '|', use '||'");
        advance();
        advance();
        current_.kind = Tok::OrOr;
        return;
      case '-':
        if (at(pos_ + 1) == '>') {
          advance();
          advance();
          current_.kind = Tok::Arrow;
          return;
        }
        if (std::isdigit(static_cast<unsigned char>(at(pos_ + 1)))) {
          scan_number();
          return;
        }
        fail("stray '-'");
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      scan_number();
      return;
    }
    if (ident_start(c)) {
      size_t begin = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
      current_.kind = Tok::Ident;
      current_.text = std::string(text_.substr(begin, pos_ - begin));
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void scan_number() {
    size_t begin = pos_;
    if (text_[pos_] == '-') advance();
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("malformed exponent");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    current_.kind = Tok::Number;
    current_.text = std::string(text_.substr(begin, pos_ - begin));
    current_.number = std::strtod(current_.text.c_str(), nullptr);
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

bool is_keyword(const Token& t, const char* word) {
  return t.kind == Tok::Ident && t.text == word;
}

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, double>* named_weights)
      : lex_(text), named_weights_(named_weights) {}

  Formula run() {
    Formula f = parse_formula();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw ParseError("unexpected trailing input", t.line, t.column, "end of formula");
    validate(f);
    return f;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg,
                         const std::string& expected = {}) const {
    throw ParseError(msg, t.line, t.column, expected);
  }

  Token expect(Tok kind, const char* what) {
    Token t = lex_.next();
    if (t.kind != kind) fail(t, "syntax error", what);
    return t;
  }

  Formula parse_formula() {
    Formula lhs = parse_andor();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.next();
      Formula rhs = parse_andor();
      return make_implies(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula parse_andor() {
    Formula first = parse_until();
    Tok op = lex_.peek().kind;
    if (op != Tok::AndAnd && op != Tok::OrOr) return first;

    std::vector<Formula> operands;
    operands.push_back(std::move(first));
    std::optional<std::vector<double>> weights;
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind != Tok::AndAnd && t.kind != Tok::OrOr) break;
      if (t.kind != op)
        fail(t, "mixing '&&' and '||' requires parentheses");
      lex_.next();
      if (lex_.peek().kind == Tok::LBrace) {
        Token brace = lex_.peek();
        if (weights) fail(brace, "weights specified more than once in one chain");
        weights = parse_weights();
      }
      operands.push_back(parse_until());
    }
    if (weights && weights->size() != operands.size()) {
      const Token& t = lex_.peek();
      fail(t, "weight count " + std::to_string(weights->size()) +
                  " does not match operand count " + std::to_string(operands.size()));
    }
    std::vector<double> w = weights.value_or(std::vector<double>{});
    return op == Tok::AndAnd ? make_and(std::move(operands), std::move(w))
                             : make_or(std::move(operands), std::move(w));
  }

  std::vector<double> parse_weights() {
    expect(Tok::LBrace, "'{'");
    std::vector<double> out;
    while (true) {
      Token t = lex_.next();
      double value = 0.0;
      if (t.kind == Tok::Number) {
        value = t.number;
      } else if (t.kind == Tok::Ident) {
        if (named_weights_ == nullptr)
          fail(t, "unknown weight name '" + t.text + "'");
        auto it = named_weights_->find(t.text);
        if (it == named_weights_->end())
          fail(t, "unknown weight name '" + t.text + "'");
        value = it->second;
      } else {
        fail(t, "syntax error", "weight value");
      }
      if (!(value > 0.0))
        fail(t, "weight must be positive, got " + t.text);
      out.push_back(value);
      Token sep = lex_.next();
      if (sep.kind == Tok::RBrace) break;
      if (sep.kind != Tok::Comma) fail(sep, "syntax error", "',' or '}'");
    }
    return out;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    while (true) {
      const Token& t = lex_.peek();
      if (is_keyword(t, "U")) {
        lex_.next();
        lhs = make_until(std::move(lhs), parse_unary());
      } else if (is_keyword(t, "T")) {
        lex_.next();
        lhs = make_then(std::move(lhs), parse_unary());
      } else {
        break;
      }
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Bang) {
      lex_.next();
      return make_not(parse_unary());
    }
    if (is_keyword(t, "F")) {
      lex_.next();
      return make_eventually(parse_unary());
    }
    if (is_keyword(t, "G")) {
      lex_.next();
      return make_always(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    Token t = lex_.next();
    if (t.kind == Tok::LParen) {
      Formula f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (is_keyword(t, "true")) return make_true();
    if (t.kind == Tok::Ident) {
      if (t.text == "U" || t.text == "T" || t.text == "F" || t.text == "G")
        fail(t, "'" + t.text + "' is a reserved operator name");
      return parse_predicate(std::move(t.text));
    }
    fail(t, "syntax error", "'(', '!', 'F', 'G', 'true' or a predicate name");
  }

  Formula parse_predicate(std::string name) {
    std::vector<std::string> args;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      while (true) {
        Token a = lex_.next();
        if (a.kind != Tok::Ident && a.kind != Tok::Number)
          fail(a, "syntax error", "predicate argument");
        args.push_back(a.text);
        Token sep = lex_.next();
        if (sep.kind == Tok::RParen) break;
        if (sep.kind != Tok::Comma) fail(sep, "syntax error", "',' or ')'");
      }
    }
    const Token& t = lex_.peek();
    if (t.kind == Tok::Less || t.kind == Tok::Greater) {
      CmpOp op = t.kind == Tok::Less ? CmpOp::Less : CmpOp::Greater;
      lex_.next();
      Token num = expect(Tok::Number, "number");
      return make_pred_cmp(std::move(name), std::move(args), op, num.number);
    }
    return make_pred(std::move(name), std::move(args));
  }

  Lexer lex_;
  const std::map<std::string, double>* named_weights_;
};

}  // namespace

Formula parse_formula(std::string_view text,
                      const std::map<std::string, double>* named_weights) {
  return Parser(text, named_weights).run();
}

}  // namespace tlmp
