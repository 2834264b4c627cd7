#include "splitlab/lang/lower.hpp"

#include <algorithm>

namespace splitlab::lang {

namespace {

class Lowerer {
 public:
  Lowerer(RingRef r, const LowerLimits& lim) : ring_(std::move(r)), lim_(lim) {}

  Value go(const OpAst& n) {
    try {
      return check(n, visit(n));
    } catch (const AlgebraError& e) {
      const auto kind = e.kind() == AlgebraErrorKind::MalformedCoefficient ? LangErrorKind::DivisionByZero : LangErrorKind::Arity;
      throw LangError(kind, e.what(), n.span);
    }
  }

 private:
  Value check(const OpAst& n, Value v) {
    auto one = [&](const OperatorExpr& e) {
      if (e.max_word_length() > lim_.max_word_length || e.terms().size() > lim_.max_terms)
        throw LangError(LangErrorKind::Limit, "operator word or term count too large", n.span);
    };
    if (auto* e = std::get_if<OperatorExpr>(&v)) {
      one(*e);
    } else {
      for (const auto& c : std::get<VectorExpr>(v).c) one(c);
    }
    return v;
  }

  static bool is_vec(const Value& v) { return std::holds_alternative<VectorExpr>(v); }

  static std::pair<std::size_t, std::size_t> size_of(const Value& v) {
    std::size_t w = 0, t = 0;
    auto one = [&](const OperatorExpr& e) {
      w = std::max(w, e.max_word_length());
      t = std::max(t, e.terms().size());
    };
    if (auto* e = std::get_if<OperatorExpr>(&v)) {
      one(*e);
    } else {
      for (const auto& c : std::get<VectorExpr>(v).c) one(c);
    }
    return {w, t};
  }

  // Rejects products whose normal form would be too large before computing it.
  void guard_product(const OpAst& n, const Value& a, const Value& b, std::size_t times = 1) {
    const auto [wa, ta] = size_of(a);
    const auto [wb, tb] = size_of(b);
    if ((wa + wb) * times > lim_.max_word_length || ta * tb > lim_.max_terms)
      throw LangError(LangErrorKind::Limit, "product too large", n.span);
  }

  OperatorExpr scalar_of(const OpAst& n, const Value& v, const char* what) {
    if (is_vec(v)) throw LangError(LangErrorKind::Arity, std::string(what) + " needs a scalar-valued operand", n.span);
    return std::get<OperatorExpr>(v);
  }

  VectorExpr vector_of(const OpAst& n, const Value& v, const char* what) {
    if (!is_vec(v)) throw LangError(LangErrorKind::Arity, std::string(what) + " needs a vector-valued operand", n.span);
    return std::get<VectorExpr>(v);
  }

  OperatorExpr component(const std::string& name, int a) {
    if (name == "P") return OperatorExpr::P(ring_, a);
    if (name == "J") return OperatorExpr::J(ring_, a);
    if (name == "K") return OperatorExpr::K(ring_, a);
    return OperatorExpr::Phat(ring_, a);
  }

  Value visit(const OpAst& n) {
    switch (n.kind) {
      case AstKind::Integer:
        return OperatorExpr::constant(ring_, GaussQ(mpq_class(n.value)));
      case AstKind::Atom:
        if (n.name == "H") return OperatorExpr::H(ring_);
        if (n.name == "m") return OperatorExpr::mass(ring_);
        if (n.name == "i") return OperatorExpr::imag(ring_);
        return VectorExpr(component(n.name, 1), component(n.name, 2), component(n.name, 3));
      case AstKind::IndexedAtom:
        return component(n.name, n.index);
      case AstKind::Neg: {
        Value v = go(n.args[0]);
        if (is_vec(v)) return -std::get<VectorExpr>(v);
        return -std::get<OperatorExpr>(v);
      }
      case AstKind::Add:
      case AstKind::Sub: {
        Value a = go(n.args[0]), b = go(n.args[1]);
        if (is_vec(a) != is_vec(b)) throw LangError(LangErrorKind::Arity, "adding a vector and a scalar", n.span);
        const bool add = n.kind == AstKind::Add;
        if (is_vec(a)) {
          const auto& x = std::get<VectorExpr>(a);
          const auto& y = std::get<VectorExpr>(b);
          return add ? x + y : x - y;
        }
        const auto& x = std::get<OperatorExpr>(a);
        const auto& y = std::get<OperatorExpr>(b);
        return add ? x + y : x - y;
      }
      case AstKind::Mul: {
        Value a = go(n.args[0]), b = go(n.args[1]);
        if (is_vec(a) && is_vec(b)) throw LangError(LangErrorKind::Arity, "product of two vectors; use Dot or Cross", n.span);
        guard_product(n, a, b);
        if (is_vec(a)) return std::get<VectorExpr>(a) * std::get<OperatorExpr>(b);
        if (is_vec(b)) return std::get<OperatorExpr>(a) * std::get<VectorExpr>(b);
        return std::get<OperatorExpr>(a) * std::get<OperatorExpr>(b);
      }
      case AstKind::Div: {
        Value a = go(n.args[0]), b = go(n.args[1]);
        if (is_vec(b)) throw LangError(LangErrorKind::Arity, "division by a vector", n.args[1].span);
        auto s = std::get<OperatorExpr>(b).as_scalar();
        if (!s) throw LangError(LangErrorKind::NonScalarDivision, "divisor contains J or K", n.args[1].span);
        if (s->is_zero()) throw LangError(LangErrorKind::DivisionByZero, "divisor is identically zero", n.args[1].span);
        // x / s means s^-1 x.
        const OperatorExpr inv = OperatorExpr::scalar(s->inverse());
        if (is_vec(a)) return inv * std::get<VectorExpr>(a);
        return inv * std::get<OperatorExpr>(a);
      }
      case AstKind::Call:
        return call(n);
    }
    throw LangError(LangErrorKind::Syntax, "malformed tree", n.span);
  }

  Value call(const OpAst& n) {
    if (n.name == "Adjoint") {
      Value v = go(n.args[0]);
      if (is_vec(v)) return adjoint(std::get<VectorExpr>(v));
      return adjoint(std::get<OperatorExpr>(v));
    }
    if (n.name == "Pow") {
      OperatorExpr base = scalar_of(n, go(n.args[0]), "Pow");
      if (n.index < 0 && !base.is_scalar())
        throw LangError(LangErrorKind::NonScalarDivision, "negative power of an operator containing J or K", n.span);
      if (n.index < 0 && base.is_zero()) throw LangError(LangErrorKind::DivisionByZero, "negative power of zero", n.span);
      if (n.index > 1) {
        const Value bv = base;
        const auto [w, t] = size_of(bv);
        if (w * static_cast<std::size_t>(n.index) > lim_.max_word_length || (t > 1 && n.index > 6 && t > 3))
          throw LangError(LangErrorKind::Limit, "power too large", n.span);
      }
      return base.pow(n.index);
    }
    Value a = go(n.args[0]), b = go(n.args[1]);
    guard_product(n, a, b);
    if (n.name == "Comm") return commutator(scalar_of(n, a, "Comm"), scalar_of(n, b, "Comm"));
    if (n.name == "Dot") return vec_dot(vector_of(n, a, "Dot"), vector_of(n, b, "Dot"));
    return vec_cross(vector_of(n, a, "Cross"), vector_of(n, b, "Cross"));
  }

  RingRef ring_;
  LowerLimits lim_;
};

}  // namespace

Value lower(const OpAst& ast, const RingRef& ring, const LowerLimits& limits) { return Lowerer(ring, limits).go(ast); }

OperatorExpr lower_scalar(const OpAst& ast, const RingRef& ring, const LowerLimits& limits) {
  Value v = lower(ast, ring, limits);
  if (std::holds_alternative<VectorExpr>(v)) throw LangError(LangErrorKind::Arity, "expression is vector-valued", ast.span);
  return std::get<OperatorExpr>(v);
}

}  // namespace splitlab::lang
