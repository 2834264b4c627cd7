#pragma once

#include "splitlab/algebra/scalar.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace splitlab {

// Basis generators in PBW order.
enum class Gen : std::uint8_t { J1 = 0, J2, J3, K1, K2, K3 };

inline Gen gen_J(int a) { return static_cast<Gen>(a - 1); }
inline Gen gen_K(int a) { return static_cast<Gen>(a + 2); }
inline bool is_boost(Gen g) { return static_cast<int>(g) >= 3; }
inline int gen_index(Gen g) { return static_cast<int>(g) % 3 + 1; }

// PBW-ordered word; empty word is the identity.
using Word = std::vector<Gen>;

struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

std::string word_str(const Word& w);

// Finite sum of coefficient * word, coefficients written on the left; always
// kept in PBW normal form.
class OperatorExpr {
 public:
  using TermMap = std::map<Word, ScalarCoeff, WordLess>;

  explicit OperatorExpr(RingRef ring);
  static OperatorExpr scalar(const ScalarCoeff& c);
  static OperatorExpr constant(const RingRef& r, const GaussQ& c) { return scalar(ScalarCoeff(r, c)); }
  static OperatorExpr generator(const RingRef& r, Gen g);
  static OperatorExpr J(const RingRef& r, int a) { return generator(r, gen_J(a)); }
  static OperatorExpr K(const RingRef& r, int a) { return generator(r, gen_K(a)); }
  static OperatorExpr H(const RingRef& r) { return scalar(ScalarCoeff::energy(r)); }
  static OperatorExpr P(const RingRef& r, int a) { return scalar(ScalarCoeff::momentum(r, a)); }
  static OperatorExpr Phat(const RingRef& r, int a);
  static OperatorExpr abs_P(const RingRef& r) { return scalar(ScalarCoeff::abs_momentum(r)); }
  static OperatorExpr mass(const RingRef& r) { return scalar(ScalarCoeff::mass(r)); }
  static OperatorExpr imag(const RingRef& r) { return scalar(ScalarCoeff::imag(r)); }

  const RingRef& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const;
  std::optional<ScalarCoeff> as_scalar() const;
  std::size_t max_word_length() const;

  OperatorExpr operator+(const OperatorExpr& o) const;
  OperatorExpr operator-(const OperatorExpr& o) const;
  OperatorExpr operator-() const;
  OperatorExpr operator*(const OperatorExpr& o) const;
  OperatorExpr scaled(const ScalarCoeff& c) const;  // c on the left
  OperatorExpr scaled(const GaussQ& c) const;
  OperatorExpr pow(int n) const;

  // Structural comparison of normal forms.
  bool identical(const OperatorExpr& o) const;
  std::string debug_str() const;

  void add_term(const Word& w, const ScalarCoeff& c);

 private:
  RingRef ring_;
  TermMap terms_;
};

inline bool operator==(const OperatorExpr& a, const OperatorExpr& b) { return a.identical(b); }
inline bool operator!=(const OperatorExpr& a, const OperatorExpr& b) { return !a.identical(b); }

// A product of factors written in arbitrary order.
using RawFactor = std::variant<ScalarCoeff, Gen>;
using RawProduct = std::vector<RawFactor>;

OperatorExpr normal_form(const OperatorExpr& e);
OperatorExpr normal_form(const RingRef& ring, const std::vector<RawProduct>& sum);
OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr adjoint(const OperatorExpr& e);
// Substitutes P = (0, 0, kappa) into every coefficient; words are untouched.
OperatorExpr evaluate_at(const OperatorExpr& e, const mpq_class& kappa);
// [X, c] for a single generator X and scalar c.
ScalarCoeff generator_scalar_bracket(Gen x, const ScalarCoeff& c);

struct VectorExpr {
  std::array<OperatorExpr, 3> c;

  explicit VectorExpr(const RingRef& r) : c{OperatorExpr(r), OperatorExpr(r), OperatorExpr(r)} {}
  VectorExpr(OperatorExpr a, OperatorExpr b, OperatorExpr d) : c{std::move(a), std::move(b), std::move(d)} {}

  static VectorExpr J(const RingRef& r);
  static VectorExpr K(const RingRef& r);
  static VectorExpr P(const RingRef& r);
  static VectorExpr Phat(const RingRef& r);

  const RingRef& ring() const { return c[0].ring(); }
  OperatorExpr& operator[](int a) { return c[a]; }
  const OperatorExpr& operator[](int a) const { return c[a]; }

  VectorExpr operator+(const VectorExpr& o) const;
  VectorExpr operator-(const VectorExpr& o) const;
  VectorExpr operator-() const;
  bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }
  bool identical(const VectorExpr& o) const;
};

// s * v and v * s with operator-valued s; order is kept.
VectorExpr operator*(const OperatorExpr& s, const VectorExpr& v);
VectorExpr operator*(const VectorExpr& v, const OperatorExpr& s);
OperatorExpr vec_dot(const VectorExpr& a, const VectorExpr& b);
VectorExpr vec_cross(const VectorExpr& a, const VectorExpr& b);
VectorExpr adjoint(const VectorExpr& v);

}  // namespace splitlab
