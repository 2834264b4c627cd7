#pragma once

#include "splitlab/algebra/operator_expr.hpp"
#include "splitlab/lang/ast.hpp"

#include <string>

namespace splitlab::lang {

std::string format(const OpAst& ast);
std::string format(const ScalarCoeff& c);
std::string format(const OperatorExpr& e);
std::string format(const VectorExpr& v);  // "[e1, e2, e3]"

}  // namespace splitlab::lang
