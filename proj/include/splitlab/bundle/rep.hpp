#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>

namespace splitlab {

using FiberMatrix = Eigen::MatrixXcd;

struct RepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unitary irreducible representation data.
//  massive: m > 0, spin s, fiber C^(2s+1) in the canonical spin basis (m_s = s, s-1, ..., -s).
//  massless: m = 0, helicity h; h = 0 is a scalar, |h| = 1 uses transverse vectors in C^3 restricted to
//  the helicity eigenline of chi = i khat x (.).
// sigma is the sign of the spin term of the massive boost, K = i w grad + sigma (S x k)/(w + m).
struct RepSpec {
  enum class Kind { Massive, Massless };
  Kind kind = Kind::Massive;
  double mass = 1.0;
  int spin = 0;
  int helicity = 0;
  int sigma = -1;

  static RepSpec massive(double m, int s);
  static RepSpec massless(int h);

  bool is_massless() const { return kind == Kind::Massless; }
  int dim() const;
  // Number of independent polarizations (1 for massless of any helicity).
  int physical_dim() const { return is_massless() ? 1 : dim(); }
  std::string label() const;
  void validate() const;
  bool operator==(const RepSpec&) const = default;
};

// Spin matrices S_1, S_2, S_3 on the fiber.
std::array<FiberMatrix, 3> spin_matrices(const RepSpec& rep);

}  // namespace splitlab
