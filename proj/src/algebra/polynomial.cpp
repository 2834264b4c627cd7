#include "splitlab/algebra/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace splitlab {

bool mono_divides(Mono d, Mono m) {
  for (int v = 0; v < kNumVars; ++v) {
    const auto var = static_cast<Var>(v);
    if (mono_exp(d, var) > mono_exp(m, var)) return false;
  }
  return true;
}

int mono_degree(Mono m) {
  int d = 0;
  for (int v = 0; v < kNumVars; ++v) d += mono_exp(m, static_cast<Var>(v));
  return d;
}

Poly::Poly(GaussQ c) {
  if (!c.is_zero()) terms_.push_back({0, std::move(c)});
}

Poly Poly::var(Var v, int e) { return monomial(mono_var(v, e), GaussQ(1)); }

Poly Poly::monomial(Mono m, GaussQ c) {
  Poly p;
  if (!c.is_zero()) p.terms_.push_back({m, std::move(c)});
  return p;
}

Poly Poly::from_unsorted(std::vector<PolyTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const PolyTerm& a, const PolyTerm& b) { return a.mono > b.mono; });
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coef.is_zero()) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coef.is_zero()) p.terms_.pop_back();
  return p;
}

GaussQ Poly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono == 0) return terms_.back().coef;
  return GaussQ(0);
}

int Poly::degree(Var v) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, mono_exp(t.mono, v));
  return d;
}

namespace {

template <bool Subtract>
Poly merge(const std::vector<PolyTerm>& a, const std::vector<PolyTerm>& b) {
  std::vector<PolyTerm> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono > a[i].mono) {
      out.push_back(Subtract ? PolyTerm{b[j].mono, -b[j].coef} : b[j]);
      ++j;
    } else {
      GaussQ c = Subtract ? a[i].coef - b[j].coef : a[i].coef + b[j].coef;
      if (!c.is_zero()) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return Poly::from_unsorted(std::move(out));
}

}  // namespace

Poly Poly::operator+(const Poly& o) const { return merge<false>(terms_, o.terms_); }
Poly Poly::operator-(const Poly& o) const { return merge<true>(terms_, o.terms_); }

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

Poly Poly::operator*(const Poly& o) const {
  if (terms_.empty() || o.terms_.empty()) return {};
  std::vector<PolyTerm> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) out.push_back({a.mono + b.mono, a.coef * b.coef});
  return from_unsorted(std::move(out));
}

Poly Poly::scaled(const GaussQ& c) const {
  if (c.is_zero()) return {};
  Poly p = *this;
  for (auto& t : p.terms_) t.coef *= c;
  return p;
}

Poly Poly::mul_mono(Mono m, const GaussQ& c) const {
  if (c.is_zero()) return {};
  Poly p = *this;
  for (auto& t : p.terms_) {
    t.mono += m;
    t.coef *= c;
  }
  return p;
}

Poly Poly::pow(int n) const {
  Poly r(GaussQ(1));
  for (int k = 0; k < n; ++k) r = r * *this;
  return r;
}

Poly Poly::conj() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coef = t.coef.conj();
  return p;
}

Poly Poly::diff(Var v) const {
  std::vector<PolyTerm> out;
  for (const auto& t : terms_) {
    const int e = mono_exp(t.mono, v);
    if (e == 0) continue;
    out.push_back({t.mono - mono_var(v), t.coef * GaussQ(e)});
  }
  return from_unsorted(std::move(out));
}

Poly Poly::substitute(Var v, const GaussQ& value) const {
  std::vector<PolyTerm> out;
  for (const auto& t : terms_) {
    const int e = mono_exp(t.mono, v);
    GaussQ c = t.coef;
    for (int k = 0; k < e; ++k) c *= value;
    if (c.is_zero()) continue;
    out.push_back({t.mono - mono_var(v, e), std::move(c)});
  }
  return from_unsorted(std::move(out));
}

Poly Poly::coefficient_of(Var v, int e) const {
  std::vector<PolyTerm> out;
  for (const auto& t : terms_)
    if (mono_exp(t.mono, v) == e) out.push_back({t.mono - mono_var(v, e), t.coef});
  return from_unsorted(std::move(out));
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) return std::nullopt;
  if (terms_.empty()) return Poly{};
  const Mono lm = d.leading().mono;
  const GaussQ inv = d.leading().coef.inverse();
  Poly rem = *this;
  std::vector<PolyTerm> quot;
  // With a single divisor the running remainder stays a multiple of d when d
  // divides f, so the first leading term not divisible by LT(d) decides.
  while (!rem.is_zero()) {
    const PolyTerm& lt = rem.leading();
    if (!mono_divides(lm, lt.mono)) return std::nullopt;
    PolyTerm q{lt.mono - lm, lt.coef * inv};
    rem = rem - d.mul_mono(q.mono, q.coef);
    quot.push_back(std::move(q));
  }
  return from_unsorted(std::move(quot));
}

Poly Poly::monic() const {
  if (terms_.empty()) return {};
  return scaled(leading().coef.inverse());
}

std::complex<double> Poly::eval(const std::array<std::complex<double>, kNumVars>& x) const {
  std::complex<double> s = 0;
  for (const auto& t : terms_) {
    std::complex<double> v = t.coef.to_complex();
    for (int k = 0; k < kNumVars; ++k) {
      const int e = mono_exp(t.mono, static_cast<Var>(k));
      for (int q = 0; q < e; ++q) v *= x[k];
    }
    s += v;
  }
  return s;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t k = 0; k < terms_.size(); ++k)
    if (terms_[k].mono != o.terms_[k].mono || terms_[k].coef != o.terms_[k].coef) return false;
  return true;
}

std::string Poly::debug_str() const {
  static const char* names[kNumVars] = {"m", "P1", "P2", "P3", "R", "H"};
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coef.str() << ")";
    for (int k = 0; k < kNumVars; ++k) {
      const int e = mono_exp(t.mono, static_cast<Var>(k));
      if (e == 1) os << "*" << names[k];
      if (e > 1) os << "*" << names[k] << "^" << e;
    }
  }
  return os.str();
}

int compare(const Poly& a, const Poly& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k].mono != y[k].mono) return x[k].mono < y[k].mono ? -1 : 1;
    const int c = compare(x[k].coef, y[k].coef);
    if (c != 0) return c;
  }
  if (x.size() == y.size()) return 0;
  return x.size() < y.size() ? -1 : 1;
}

}  // namespace splitlab
