#pragma once

#include "splitlab/bundle/section.hpp"

#include <array>
#include <string>
#include <vector>

namespace splitlab {

enum class GenKind { H, P, J, K, Chi, Jpar, Jperp, Kpar, Kperp };

struct GeneratorAction {
  GenKind kind = GenKind::H;
  int index = 0;  // 1..3 for vector generators, 0 for H and chi
};

GeneratorAction parse_generator(const std::string& name);  // "H", "P1", "J3", "chi", "Jperp2", ...
std::string generator_name(const GeneratorAction& g);

struct GeneratorOptions {
  // Massless |h| = 1: allowed |khat . out| relative to max |psi| + max |out|. Negative disables the check.
  double eps_perp = 1e-2;
};

struct ConstraintDrift : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Triple = std::array<Section, 3>;

// Spectral partial derivatives d/dr, d/dtheta, d/dphi of every fiber component (same layout as the data).
struct Partials {
  std::vector<cplx> dr, dt, dp;
};
Partials partials(const Section& psi);

// Cartesian gradient of every component: grad[a] holds d/dk_a.
Triple gradient(const Section& psi);

Section apply_generator(const Section& psi, const GeneratorAction& g, const GeneratorOptions& opt = {});
Triple apply_J(const Section& psi, const GeneratorOptions& opt = {});
Triple apply_K(const Section& psi, const GeneratorOptions& opt = {});
Triple apply_P(const Section& psi);
Section apply_H(const Section& psi);
Section apply_chi(const Section& psi);

// Commutation relations of the Poincare algebra, one entry per (A_a, B_b) pair.
struct Relation {
  std::string id;      // e.g. "KK.12"
  std::string family;  // e.g. "KK"
  std::string text;    // e.g. "[K1,K2] = -i J3"
};
const std::vector<Relation>& relation_catalog();
const std::vector<std::string>& relation_families();

// ||([A,B] - rhs) psi|| / ||psi|| for a single relation id or the maximum over a family id.
double algebra_residual(const Section& psi, const std::string& relation_id);

// All members of one family at once (shares generator applications).
std::vector<std::pair<std::string, double>> family_residuals(const Section& psi, const std::string& family);

}  // namespace splitlab
