#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace splitlab {

// Exact element of Q(i).
struct GaussQ {
  mpq_class re{0};
  mpq_class im{0};

  GaussQ() = default;
  GaussQ(long n) : re(n), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussQ(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static GaussQ i_unit() { return GaussQ(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  GaussQ conj() const { return GaussQ(re, -im); }
  GaussQ inverse() const;

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;

  GaussQ& operator+=(const GaussQ& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussQ& operator-=(const GaussQ& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussQ& operator*=(const GaussQ& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
};

inline GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
inline GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
inline GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
inline GaussQ operator-(const GaussQ& a) { return GaussQ(-a.re, -a.im); }
inline bool operator==(const GaussQ& a, const GaussQ& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }

// Total order used only for canonical sorting.
inline int compare(const GaussQ& a, const GaussQ& b) {
  int c = cmp(a.re, b.re);
  if (c != 0) return c < 0 ? -1 : 1;
  c = cmp(a.im, b.im);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace splitlab
