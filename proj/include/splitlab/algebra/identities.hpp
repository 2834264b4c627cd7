#pragma once

#include "splitlab/algebra/operator_expr.hpp"

#include <functional>
#include <string>
#include <vector>

namespace splitlab {

struct IdentitySides {
  std::vector<OperatorExpr> lhs;
  std::vector<OperatorExpr> rhs;
};

struct IdentitySpec {
  std::string name;
  std::string anchor;
  bool needs_mass = false;  // only meaningful with m > 0
  std::function<IdentitySides(const RingRef&)> build;
};

struct IdentityResult {
  std::string name;
  std::string anchor;
  std::string ring;
  bool zero = false;
  std::size_t components = 0;
  std::size_t nonzero_components = 0;
  std::string residual;  // first nonzero residual component, debug form
  double seconds = 0;
};

// The full catalog; entries with needs_mass are skipped on massless rings.
const std::vector<IdentitySpec>& identity_catalog();

IdentityResult run_identity(const IdentitySpec& entry, const RingRef& ring);
std::vector<IdentityResult> identity_suite(const RingRef& ring);
// Massive ring followed by the massless ring.
std::vector<IdentityResult> identity_suite();

// Operators used across the catalog and the numerical cross-checks.
VectorExpr boost_connection(const RingRef& r);
VectorExpr rotation_connection(const RingRef& r);       // first form
VectorExpr rotation_connection_sym(const RingRef& r);   // symmetrized form
VectorExpr flat_connection(const RingRef& r);           // (H/m) D^K + (1 - H/m) D^R
VectorExpr newton_wigner_closed(const RingRef& r);      // closed form, Q = i D^+

}  // namespace splitlab
