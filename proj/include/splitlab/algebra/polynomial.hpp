#pragma once

#include "splitlab/algebra/gauss_rational.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace splitlab {

// Polynomial variables. AbsP stands for |P| and Energy for H; the relations
// AbsP^2 = P.P and Energy^2 = P.P + m^2 are applied by the coefficient ring.
enum class Var : int { Mass = 0, P1 = 1, P2 = 2, P3 = 3, AbsP = 4, Energy = 5 };
inline constexpr int kNumVars = 6;

// Packed exponent vector, one byte per variable, Mass in the top byte, so
// integer order on Mono is lex order with Mass > P1 > ... > Energy.
using Mono = std::uint64_t;

inline constexpr int mono_shift(Var v) { return 8 * (kNumVars - 1 - static_cast<int>(v)); }
inline int mono_exp(Mono m, Var v) { return static_cast<int>((m >> mono_shift(v)) & 0xffu); }
inline Mono mono_var(Var v, int e = 1) { return static_cast<Mono>(e) << mono_shift(v); }
bool mono_divides(Mono d, Mono m);
int mono_degree(Mono m);

struct PolyTerm {
  Mono mono;
  GaussQ coef;
};

// Sparse multivariate polynomial over Q(i); terms sorted by decreasing Mono,
// no zero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(GaussQ c);
  static Poly var(Var v, int e = 1);
  static Poly monomial(Mono m, GaussQ c);

  const std::vector<PolyTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono == 0); }
  GaussQ constant_term() const;
  const PolyTerm& leading() const { return terms_.front(); }
  int degree(Var v) const;
  bool involves(Var v) const { return degree(v) > 0; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const GaussQ& c) const;
  Poly mul_mono(Mono m, const GaussQ& c) const;
  Poly pow(int n) const;

  Poly conj() const;
  Poly diff(Var v) const;
  Poly substitute(Var v, const GaussQ& value) const;
  // Collects the coefficient of v^e (v removed).
  Poly coefficient_of(Var v, int e) const;
  // Exact quotient if d divides *this.
  std::optional<Poly> divide_exact(const Poly& d) const;
  // Scaled so that the leading coefficient is 1.
  Poly monic() const;

  std::complex<double> eval(const std::array<std::complex<double>, kNumVars>& x) const;

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }
  std::string debug_str() const;

  static Poly from_unsorted(std::vector<PolyTerm> terms);

 private:
  std::vector<PolyTerm> terms_;
};

// Total order for canonical factor lists.
int compare(const Poly& a, const Poly& b);

}  // namespace splitlab
