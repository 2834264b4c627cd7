#include "splitlab/algebra/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace splitlab {

namespace {

Poly p_sq() { return Poly::var(Var::P1, 2) + Poly::var(Var::P2, 2) + Poly::var(Var::P3, 2); }

std::shared_ptr<Ring> make_massive(int boost_sign, const char* label) {
  auto r = std::make_shared<Ring>();
  r->kind = RingKind::Massive;
  r->boost_sign = boost_sign;
  r->abs_p_sq = p_sq();
  r->energy_sq = p_sq() + Poly::var(Var::Mass, 2);
  r->builtin_factors = {Poly::var(Var::Mass), Poly::var(Var::P1), Poly::var(Var::P2), Poly::var(Var::P3),
                        r->abs_p_sq, r->energy_sq};
  r->label = label;
  return r;
}

}  // namespace

RingRef massive_ring() {
  static const RingRef r = make_massive(-1, "massive");
  return r;
}

RingRef mutated_ring() {
  static const RingRef r = make_massive(+1, "massive-mutated");
  return r;
}

RingRef massless_ring() {
  static const RingRef r = [] {
    auto m = std::make_shared<Ring>();
    m->kind = RingKind::Massless;
    m->massless = true;
    m->abs_p_sq = p_sq();
    m->builtin_factors = {Poly::var(Var::P1), Poly::var(Var::P2), Poly::var(Var::P3), m->abs_p_sq};
    m->label = "massless";
    return RingRef(m);
  }();
  return r;
}

RingRef evaluated_ring(const RingRef& base, const mpq_class& kappa) {
  if (base->kind == RingKind::Evaluated) throw AlgebraError(AlgebraErrorKind::Unsupported, "ring already evaluated");
  if (sgn(kappa) <= 0) throw AlgebraError(AlgebraErrorKind::Unsupported, "evaluation point needs kappa > 0");
  auto r = std::make_shared<Ring>();
  r->kind = RingKind::Evaluated;
  r->massless = base->massless;
  r->kappa = kappa;
  r->boost_sign = base->boost_sign;
  if (!base->massless) {
    r->energy_sq = Poly::var(Var::Mass, 2) + Poly(GaussQ(kappa * kappa));
    r->builtin_factors = {Poly::var(Var::Mass), r->energy_sq};
  }
  r->label = base->label + "@(0,0," + kappa.get_str() + ")";
  return r;
}

bool same_ring(const RingRef& a, const RingRef& b) {
  if (a == b) return true;
  return a->kind == b->kind && a->massless == b->massless && a->kappa == b->kappa && a->boost_sign == b->boost_sign;
}

ScalarCoeff::ScalarCoeff(RingRef ring, GaussQ c) : ring_(std::move(ring)), num_(std::move(c)) {}

ScalarCoeff::ScalarCoeff(RingRef ring, Poly num, std::vector<Factor> den)
    : ring_(std::move(ring)), num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

ScalarCoeff ScalarCoeff::mass(const RingRef& r) {
  if (r->massless) return ScalarCoeff(r);
  return ScalarCoeff(r, Poly::var(Var::Mass), {});
}

ScalarCoeff ScalarCoeff::momentum(const RingRef& r, int a) {
  if (a < 1 || a > 3) throw AlgebraError(AlgebraErrorKind::Unsupported, "momentum index out of range");
  if (r->kind == RingKind::Evaluated) return ScalarCoeff(r, a == 3 ? GaussQ(r->kappa) : GaussQ(0));
  return ScalarCoeff(r, Poly::var(static_cast<Var>(a)), {});
}

ScalarCoeff ScalarCoeff::abs_momentum(const RingRef& r) {
  if (r->kind == RingKind::Evaluated) return ScalarCoeff(r, GaussQ(r->kappa));
  return ScalarCoeff(r, Poly::var(Var::AbsP), {});
}

ScalarCoeff ScalarCoeff::energy(const RingRef& r) {
  if (r->massless) return abs_momentum(r);
  return ScalarCoeff(r, Poly::var(Var::Energy), {});
}

ScalarCoeff ScalarCoeff::imag(const RingRef& r) { return ScalarCoeff(r, GaussQ::i_unit()); }

void ScalarCoeff::check_ring(const ScalarCoeff& o) const {
  if (!same_ring(ring_, o.ring_))
    throw AlgebraError(AlgebraErrorKind::RingMismatch, "coefficients from rings " + ring_->label + " and " + o.ring_->label);
}

Poly ScalarCoeff::reduce(const Poly& p) const {
  bool needed = false;
  for (const auto& t : p.terms())
    if (mono_exp(t.mono, Var::AbsP) > 1 || mono_exp(t.mono, Var::Energy) > 1) {
      needed = true;
      break;
    }
  if (!needed) return p;
  std::vector<PolyTerm> keep;
  Poly extra;
  for (const auto& t : p.terms()) {
    const int a = mono_exp(t.mono, Var::AbsP);
    const int b = mono_exp(t.mono, Var::Energy);
    if (a < 2 && b < 2) {
      keep.push_back(t);
      continue;
    }
    Mono base = t.mono - mono_var(Var::AbsP, a - a % 2) - mono_var(Var::Energy, b - b % 2);
    Poly term = Poly::monomial(base, t.coef);
    if (a >= 2) term = term * ring_->abs_p_sq.pow(a / 2);
    if (b >= 2) term = term * ring_->energy_sq.pow(b / 2);
    extra = extra + term;
  }
  return Poly::from_unsorted(std::move(keep)) + extra;
}

void ScalarCoeff::normalize() {
  num_ = reduce(num_);
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  std::vector<Factor> den;
  for (auto& [f, e] : den_) {
    if (e == 0) continue;
    if (e < 0) throw AlgebraError(AlgebraErrorKind::MalformedCoefficient, "negative denominator exponent");
    if (f.is_zero()) throw AlgebraError(AlgebraErrorKind::MalformedCoefficient, "division by zero");
    const GaussQ lc = f.leading().coef;
    if (!lc.is_one()) {
      GaussQ s = lc.inverse();
      GaussQ acc(1);
      for (int k = 0; k < e; ++k) acc *= s;
      num_ = num_.scaled(acc);
    }
    if (f.is_constant()) continue;
    den.emplace_back(lc.is_one() ? std::move(f) : f.monic(), e);
  }
  std::sort(den.begin(), den.end(), [](const Factor& a, const Factor& b) { return compare(a.first, b.first) < 0; });
  den_.clear();
  for (auto& fe : den) {
    if (!den_.empty() && den_.back().first == fe.first) {
      den_.back().second += fe.second;
    } else {
      den_.push_back(std::move(fe));
    }
  }
  for (auto& [f, e] : den_) {
    while (e > 0) {
      auto q = num_.divide_exact(f);
      if (!q) break;
      num_ = std::move(*q);
      --e;
    }
  }
  den_.erase(std::remove_if(den_.begin(), den_.end(), [](const Factor& fe) { return fe.second == 0; }), den_.end());
}

ScalarCoeff ScalarCoeff::operator+(const ScalarCoeff& o) const {
  check_ring(o);
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  // Least common multiple over the (canonical) factor lists.
  std::vector<Factor> den;
  Poly ma(GaussQ(1)), mb(GaussQ(1));
  std::size_t i = 0, j = 0;
  while (i < den_.size() || j < o.den_.size()) {
    int c;
    if (i == den_.size()) c = 1;
    else if (j == o.den_.size()) c = -1;
    else c = compare(den_[i].first, o.den_[j].first);
    if (c < 0) {
      den.push_back(den_[i]);
      mb = mb * den_[i].first.pow(den_[i].second);
      ++i;
    } else if (c > 0) {
      den.push_back(o.den_[j]);
      ma = ma * o.den_[j].first.pow(o.den_[j].second);
      ++j;
    } else {
      const int ea = den_[i].second, eb = o.den_[j].second;
      den.emplace_back(den_[i].first, std::max(ea, eb));
      if (ea < eb) ma = ma * den_[i].first.pow(eb - ea);
      if (eb < ea) mb = mb * den_[i].first.pow(ea - eb);
      ++i;
      ++j;
    }
  }
  return ScalarCoeff(ring_, num_ * ma + o.num_ * mb, std::move(den));
}

ScalarCoeff ScalarCoeff::operator-() const {
  ScalarCoeff r = *this;
  r.num_ = -r.num_;
  return r;
}

ScalarCoeff ScalarCoeff::operator-(const ScalarCoeff& o) const { return *this + (-o); }

ScalarCoeff ScalarCoeff::operator*(const ScalarCoeff& o) const {
  check_ring(o);
  if (is_zero() || o.is_zero()) return ScalarCoeff(ring_);
  std::vector<Factor> den = den_;
  den.insert(den.end(), o.den_.begin(), o.den_.end());
  return ScalarCoeff(ring_, num_ * o.num_, std::move(den));
}

ScalarCoeff ScalarCoeff::scaled(const GaussQ& c) const {
  if (c.is_zero()) return ScalarCoeff(ring_);
  ScalarCoeff r = *this;
  r.num_ = r.num_.scaled(c);
  return r;
}

ScalarCoeff ScalarCoeff::inverse() const {
  if (is_zero()) throw AlgebraError(AlgebraErrorKind::MalformedCoefficient, "division by an identically zero coefficient");
  Poly numer(GaussQ(1));
  for (const auto& [f, e] : den_) numer = numer * f.pow(e);
  Poly cur = num_;
  const Poly h = Poly::var(Var::Energy);
  const Poly r = Poly::var(Var::AbsP);
  if (cur.involves(Var::Energy)) {
    Poly u = cur.coefficient_of(Var::Energy, 0);
    Poly v = cur.coefficient_of(Var::Energy, 1);
    numer = reduce(numer * (u - v * h));
    cur = reduce(u * u - v * v * ring_->energy_sq);
  }
  if (cur.involves(Var::AbsP)) {
    Poly p = cur.coefficient_of(Var::AbsP, 0);
    Poly q = cur.coefficient_of(Var::AbsP, 1);
    numer = reduce(numer * (p - q * r));
    cur = reduce(p * p - q * q * ring_->abs_p_sq);
  }
  if (cur.is_zero()) throw AlgebraError(AlgebraErrorKind::MalformedCoefficient, "coefficient is a zero divisor");
  std::vector<Factor> den;
  auto peel = [&](const Poly& f) {
    if (f.is_constant()) return;
    int e = 0;
    while (!cur.is_constant()) {
      auto q = cur.divide_exact(f);
      if (!q) break;
      cur = std::move(*q);
      ++e;
    }
    if (e > 0) den.emplace_back(f, e);
  };
  for (const auto& f : ring_->builtin_factors) peel(f);
  for (const auto& fe : den_) peel(fe.first);
  den.emplace_back(cur, 1);
  return ScalarCoeff(ring_, std::move(numer), std::move(den));
}

ScalarCoeff ScalarCoeff::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  ScalarCoeff r(ring_, GaussQ(1));
  for (int k = 0; k < n; ++k) r = r * *this;
  return r;
}

ScalarCoeff ScalarCoeff::conj() const {
  std::vector<Factor> den;
  for (const auto& [f, e] : den_) den.emplace_back(f.conj(), e);
  return ScalarCoeff(ring_, num_.conj(), std::move(den));
}

ScalarCoeff ScalarCoeff::derivative(int a) const {
  if (ring_->kind == RingKind::Evaluated)
    throw AlgebraError(AlgebraErrorKind::Unsupported, "derivative of an evaluated coefficient");
  if (is_zero()) return *this;
  const Var pa = static_cast<Var>(a);
  const Poly pvar = Poly::var(pa);
  ScalarCoeff out(ring_, num_.diff(pa), den_);
  if (num_.involves(Var::AbsP)) {
    auto den = den_;
    den.emplace_back(ring_->abs_p_sq, 1);
    out = out + ScalarCoeff(ring_, num_.diff(Var::AbsP) * pvar * Poly::var(Var::AbsP), std::move(den));
  }
  if (num_.involves(Var::Energy)) {
    auto den = den_;
    den.emplace_back(ring_->energy_sq, 1);
    out = out + ScalarCoeff(ring_, num_.diff(Var::Energy) * pvar * Poly::var(Var::Energy), std::move(den));
  }
  for (std::size_t k = 0; k < den_.size(); ++k) {
    Poly df = den_[k].first.diff(pa);
    if (df.is_zero()) continue;
    auto den = den_;
    den[k].second += 1;
    out = out + ScalarCoeff(ring_, (num_ * df).scaled(GaussQ(-den_[k].second)), std::move(den));
  }
  return out;
}

ScalarCoeff ScalarCoeff::evaluate_at(const RingRef& target) const {
  if (target->kind != RingKind::Evaluated || target->massless != ring_->massless ||
      ring_->kind == RingKind::Evaluated)
    throw AlgebraError(AlgebraErrorKind::RingMismatch, "evaluate_at needs a symbolic source and an evaluated target");
  const GaussQ k(target->kappa);
  auto subst = [&](const Poly& p) {
    return p.substitute(Var::P1, GaussQ(0)).substitute(Var::P2, GaussQ(0)).substitute(Var::P3, k).substitute(Var::AbsP, k);
  };
  std::vector<Factor> den;
  for (const auto& [f, e] : den_) {
    Poly g = subst(f);
    if (g.is_zero())
      throw AlgebraError(AlgebraErrorKind::EvaluationPole,
                         "denominator factor " + f.debug_str() + " vanishes at P = (0,0," + target->kappa.get_str() + ")");
    den.emplace_back(std::move(g), e);
  }
  return ScalarCoeff(target, subst(num_), std::move(den));
}

std::complex<double> ScalarCoeff::eval(double m, double p1, double p2, double p3) const {
  const double s = p1 * p1 + p2 * p2 + p3 * p3;
  std::array<std::complex<double>, kNumVars> x{m, p1, p2, p3, std::sqrt(s), std::sqrt(s + m * m)};
  if (ring_->kind == RingKind::Evaluated) x = {m, 0, 0, 0, 0, std::sqrt(ring_->kappa.get_d() * ring_->kappa.get_d() + m * m)};
  std::complex<double> d = 1;
  for (const auto& [f, e] : den_) d *= std::pow(f.eval(x), e);
  return num_.eval(x) / d;
}

bool ScalarCoeff::identical(const ScalarCoeff& o) const {
  if (!same_ring(ring_, o.ring_) || num_ != o.num_ || den_.size() != o.den_.size()) return false;
  for (std::size_t k = 0; k < den_.size(); ++k)
    if (den_[k].second != o.den_[k].second || den_[k].first != o.den_[k].first) return false;
  return true;
}

std::string ScalarCoeff::debug_str() const {
  std::ostringstream os;
  os << "(" << num_.debug_str() << ")";
  if (!den_.empty()) {
    os << "/(";
    for (std::size_t k = 0; k < den_.size(); ++k) {
      if (k) os << " * ";
      os << "(" << den_[k].first.debug_str() << ")^" << den_[k].second;
    }
    os << ")";
  }
  return os.str();
}

}  // namespace splitlab
