#include "splitlab/lang/parser.hpp"

#include <cctype>

namespace splitlab::lang {

const char* lang_error_name(LangErrorKind k) {
  switch (k) {
    case LangErrorKind::Syntax: return "syntax error";
    case LangErrorKind::UnknownIdentifier: return "unknown identifier";
    case LangErrorKind::IndexOutOfRange: return "index out of range";
    case LangErrorKind::Arity: return "vector/scalar arity mismatch";
    case LangErrorKind::NonScalarDivision: return "division by operator-valued expression";
    case LangErrorKind::DivisionByZero: return "division by zero";
    case LangErrorKind::Limit: return "expression exceeds limits";
  }
  return "error";
}

std::string LangError::format_message(LangErrorKind kind, const std::string& msg, Span s) {
  return std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + lang_error_name(kind) + ": " + msg;
}

namespace {

enum class Tok { Int, Ident, LParen, RParen, LBrack, RBrack, Comma, Plus, Minus, Star, Slash, End };

struct Token {
  Tok kind;
  std::string_view text;
  Span span;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Int: return "integer";
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : src_(s) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    Span sp{line_, col_, static_cast<int>(pos_), 0};
    if (pos_ >= src_.size()) return {Tok::End, {}, sp};
    const char c = src_[pos_];
    const std::size_t start = pos_;
    auto single = [&](Tok t) {
      advance();
      sp.length = 1;
      return Token{t, src_.substr(start, 1), sp};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBrack);
      case ']': return single(Tok::RBrack);
      case ',': return single(Tok::Comma);
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      sp.length = static_cast<int>(pos_ - start);
      return {Tok::Int, src_.substr(start, pos_ - start), sp};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
      sp.length = static_cast<int>(pos_ - start);
      return {Tok::Ident, src_.substr(start, pos_ - start), sp};
    }
    sp.length = 1;
    std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "byte " + std::to_string(static_cast<unsigned char>(c));
    throw LangError(LangErrorKind::Syntax, "unexpected character '" + shown + "'", sp);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_vector_atom(std::string_view s) { return s == "P" || s == "J" || s == "K" || s == "Phat"; }
bool is_scalar_atom(std::string_view s) { return s == "H" || s == "m" || s == "i"; }
int call_arity(std::string_view s) {
  if (s == "Comm" || s == "Dot" || s == "Cross" || s == "Pow") return 2;
  if (s == "Adjoint") return 1;
  return -1;
}

class Parser {
 public:
  Parser(std::string_view s, const ParseLimits& lim) : lex_(s), lim_(lim) { cur_ = lex_.next(); }

  OpAst parse_all() {
    OpAst e = expr();
    if (cur_.kind != Tok::End) fail_expected("operator or end of input");
    return e;
  }

 private:
  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& q, const Span& sp) : p(q) {
      if (++p.depth_ > p.lim_.max_depth) throw LangError(LangErrorKind::Limit, "nesting deeper than " + std::to_string(p.lim_.max_depth), sp);
    }
    ~DepthGuard() { --p.depth_; }
  };

  [[noreturn]] void fail_expected(const std::string& what) {
    std::string got = cur_.kind == Tok::End ? "end of input" : "'" + std::string(cur_.text) + "'";
    throw LangError(LangErrorKind::Syntax, "expected " + what + ", found " + got, cur_.span);
  }

  Token take(Tok t) {
    if (cur_.kind != t) fail_expected(tok_name(t));
    Token tk = cur_;
    cur_ = lex_.next();
    return tk;
  }

  static Span join(const Span& a, const Span& b) {
    Span s = a;
    s.length = b.offset + b.length - a.offset;
    return s;
  }

  static OpAst binary(AstKind k, OpAst l, OpAst r) {
    OpAst n;
    n.kind = k;
    n.span = join(l.span, r.span);
    n.args.push_back(std::move(l));
    n.args.push_back(std::move(r));
    return n;
  }

  OpAst expr() {
    DepthGuard g(*this, cur_.span);
    OpAst l = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const AstKind k = cur_.kind == Tok::Plus ? AstKind::Add : AstKind::Sub;
      cur_ = lex_.next();
      l = binary(k, std::move(l), term());
    }
    return l;
  }

  OpAst term() {
    OpAst l = unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const AstKind k = cur_.kind == Tok::Star ? AstKind::Mul : AstKind::Div;
      cur_ = lex_.next();
      l = binary(k, std::move(l), unary());
    }
    return l;
  }

  OpAst unary() {
    if (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
      const Token op = cur_;
      cur_ = lex_.next();
      DepthGuard g(*this, op.span);
      OpAst inner = unary();
      if (op.kind == Tok::Plus) return inner;
      OpAst n;
      n.kind = AstKind::Neg;
      n.span = join(op.span, inner.span);
      n.args.push_back(std::move(inner));
      return n;
    }
    return primary();
  }

  int small_int(const Token& t, int limit) {
    if (t.text.size() > 9) throw LangError(LangErrorKind::Limit, "integer " + std::string(t.text) + " too large here", t.span);
    const int v = std::stoi(std::string(t.text));
    if (v > limit) throw LangError(LangErrorKind::Limit, "integer " + std::string(t.text) + " exceeds " + std::to_string(limit), t.span);
    return v;
  }

  OpAst primary() {
    if (cur_.kind == Tok::Int) {
      Token t = take(Tok::Int);
      if (static_cast<int>(t.text.size()) > lim_.max_literal_digits)
        throw LangError(LangErrorKind::Limit, "integer literal longer than " + std::to_string(lim_.max_literal_digits) + " digits", t.span);
      OpAst n;
      n.kind = AstKind::Integer;
      n.value = mpz_class(std::string(t.text), 10);
      n.span = t.span;
      return n;
    }
    if (cur_.kind == Tok::LParen) {
      Token open = take(Tok::LParen);
      OpAst e = expr();
      Token close = take(Tok::RParen);
      e.span = join(open.span, close.span);
      return e;
    }
    if (cur_.kind != Tok::Ident) fail_expected("expression");
    Token id = take(Tok::Ident);
    const std::string name(id.text);
    if (const int arity = call_arity(name); arity > 0) {
      take(Tok::LParen);
      OpAst n;
      n.kind = AstKind::Call;
      n.name = name;
      n.args.push_back(expr());
      if (name == "Pow") {
        take(Tok::Comma);
        int sign = 1;
        if (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
          sign = cur_.kind == Tok::Minus ? -1 : 1;
          cur_ = lex_.next();
        }
        Token e = take(Tok::Int);
        n.index = sign * small_int(e, lim_.max_power);
      } else {
        for (int k = 1; k < arity; ++k) {
          take(Tok::Comma);
          n.args.push_back(expr());
        }
      }
      Token close = take(Tok::RParen);
      n.span = join(id.span, close.span);
      return n;
    }
    if (is_scalar_atom(name)) {
      OpAst n;
      n.kind = AstKind::Atom;
      n.name = name;
      n.span = id.span;
      return n;
    }
    if (is_vector_atom(name)) {
      OpAst n;
      n.name = name;
      n.span = id.span;
      if (cur_.kind == Tok::LBrack) {
        take(Tok::LBrack);
        Token ix = take(Tok::Int);
        if (ix.text.size() > 1 || ix.text[0] < '1' || ix.text[0] > '3')
          throw LangError(LangErrorKind::IndexOutOfRange, "index " + std::string(ix.text) + " of " + name + " not in {1,2,3}", ix.span);
        Token close = take(Tok::RBrack);
        n.kind = AstKind::IndexedAtom;
        n.index = ix.text[0] - '0';
        n.span = join(id.span, close.span);
      } else {
        n.kind = AstKind::Atom;
      }
      return n;
    }
    throw LangError(LangErrorKind::UnknownIdentifier, "'" + name + "' is not an atom or function", id.span);
  }

  Lexer lex_;
  ParseLimits lim_;
  Token cur_;
  int depth_ = 0;
};

}  // namespace

OpAst parse(std::string_view text, const ParseLimits& limits) {
  if (text.size() > limits.max_length) throw LangError(LangErrorKind::Limit, "input longer than limit", Span{});
  return Parser(text, limits).parse_all();
}

}  // namespace splitlab::lang
