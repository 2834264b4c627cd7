#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace splitlab::lang {

struct Span {
  int line = 1;
  int column = 1;
  int offset = 0;
  int length = 0;
};

enum class AstKind { Integer, Atom, IndexedAtom, Neg, Add, Sub, Mul, Div, Call };

struct OpAst {
  AstKind kind = AstKind::Integer;
  std::string name;   // atom or call name
  int index = 0;      // IndexedAtom index, Pow exponent
  mpz_class value;    // Integer literal
  std::vector<OpAst> args;
  Span span;
};

enum class LangErrorKind {
  Syntax,
  UnknownIdentifier,
  IndexOutOfRange,
  Arity,
  NonScalarDivision,
  DivisionByZero,
  Limit,
};

const char* lang_error_name(LangErrorKind k);

class LangError : public std::runtime_error {
 public:
  LangError(LangErrorKind kind, const std::string& msg, Span span)
      : std::runtime_error(format_message(kind, msg, span)), kind_(kind), span_(span), detail_(msg) {}
  LangErrorKind kind() const { return kind_; }
  const Span& span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string format_message(LangErrorKind kind, const std::string& msg, Span s);
  LangErrorKind kind_;
  Span span_;
  std::string detail_;
};

}  // namespace splitlab::lang
