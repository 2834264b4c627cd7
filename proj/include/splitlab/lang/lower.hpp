#pragma once

#include "splitlab/algebra/operator_expr.hpp"
#include "splitlab/lang/ast.hpp"

#include <variant>

namespace splitlab::lang {

using Value = std::variant<OperatorExpr, VectorExpr>;

struct LowerLimits {
  std::size_t max_word_length = 10;
  std::size_t max_terms = 20000;
};

// Scalar-valued trees give an OperatorExpr, vector-valued ones a VectorExpr.
Value lower(const OpAst& ast, const RingRef& ring, const LowerLimits& limits = {});
OperatorExpr lower_scalar(const OpAst& ast, const RingRef& ring, const LowerLimits& limits = {});

}  // namespace splitlab::lang
