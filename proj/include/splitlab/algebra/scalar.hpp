#pragma once

#include "splitlab/algebra/polynomial.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace splitlab {

enum class AlgebraErrorKind { MalformedCoefficient, EvaluationPole, RingMismatch, Unsupported };

class AlgebraError : public std::runtime_error {
 public:
  AlgebraError(AlgebraErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  AlgebraErrorKind kind() const { return kind_; }

 private:
  AlgebraErrorKind kind_;
};

enum class RingKind { Massive, Massless, Evaluated };

// Coefficient ring description. Immutable; shared between all values built
// in it.
struct Ring {
  RingKind kind = RingKind::Massive;
  bool massless = false;      // m = 0 and H = |P|
  mpq_class kappa{0};         // Evaluated: P = (0, 0, kappa)
  int boost_sign = -1;        // [K_a, K_b] = boost_sign * i eps_abc J_c
  Poly abs_p_sq;              // rewrite target of |P|^2
  Poly energy_sq;             // rewrite target of H^2
  std::vector<Poly> builtin_factors;
  std::string label;
};
using RingRef = std::shared_ptr<const Ring>;

RingRef massive_ring();
RingRef massless_ring();
// Massive ring with the sign of [K_a, K_b] flipped; mutation control only.
RingRef mutated_ring();
RingRef evaluated_ring(const RingRef& base, const mpq_class& kappa);
bool same_ring(const RingRef& a, const RingRef& b);

// Exact element of Q(i)(m, P)[|P|, H] modulo |P|^2 = P.P, H^2 = P.P + m^2.
// Numerator has |P|- and H-degree <= 1; the denominator is a product of monic
// polynomials in (m, P) only.
class ScalarCoeff {
 public:
  using Factor = std::pair<Poly, int>;

  explicit ScalarCoeff(RingRef ring, GaussQ c = GaussQ(0));
  ScalarCoeff(RingRef ring, Poly num, std::vector<Factor> den);

  static ScalarCoeff mass(const RingRef& r);
  static ScalarCoeff momentum(const RingRef& r, int a);  // a in {1,2,3}
  static ScalarCoeff abs_momentum(const RingRef& r);
  static ScalarCoeff energy(const RingRef& r);
  static ScalarCoeff imag(const RingRef& r);

  const RingRef& ring() const { return ring_; }
  const Poly& numerator() const { return num_; }
  const std::vector<Factor>& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  GaussQ constant_value() const { return num_.constant_term(); }

  ScalarCoeff operator+(const ScalarCoeff& o) const;
  ScalarCoeff operator-(const ScalarCoeff& o) const;
  ScalarCoeff operator-() const;
  ScalarCoeff operator*(const ScalarCoeff& o) const;
  ScalarCoeff operator/(const ScalarCoeff& o) const { return *this * o.inverse(); }
  ScalarCoeff scaled(const GaussQ& c) const;
  ScalarCoeff inverse() const;
  ScalarCoeff pow(int n) const;
  ScalarCoeff conj() const;

  // Total derivative along P_a with |P| and H as dependent functions.
  ScalarCoeff derivative(int a) const;
  // Substitutes P = (0, 0, kappa) into an evaluated ring.
  ScalarCoeff evaluate_at(const RingRef& target) const;

  std::complex<double> eval(double m, double p1, double p2, double p3) const;

  // Exact equality (difference reduces to zero).
  bool equals(const ScalarCoeff& o) const { return (*this - o).is_zero(); }
  // Structural equality of the canonical representation.
  bool identical(const ScalarCoeff& o) const;

  std::string debug_str() const;

 private:
  void normalize();
  Poly reduce(const Poly& p) const;
  void check_ring(const ScalarCoeff& o) const;

  RingRef ring_;
  Poly num_;
  std::vector<Factor> den_;
};

inline bool operator==(const ScalarCoeff& a, const ScalarCoeff& b) { return a.equals(b); }
inline bool operator!=(const ScalarCoeff& a, const ScalarCoeff& b) { return !a.equals(b); }

}  // namespace splitlab
