#include "splitlab/algebra/operator_expr.hpp"

#include <sstream>

namespace splitlab {

namespace {

int levi(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1)) ? 1 : -1;
}

struct GenTerm {
  GaussQ coef;
  Gen gen;
};

// [X, Y] for basis generators; at most one term.
std::optional<GenTerm> gen_bracket(const Ring& ring, Gen x, Gen y) {
  const int a = gen_index(x), b = gen_index(y);
  if (a == b) return std::nullopt;
  const int c = 6 - a - b;
  const GaussQ ie(mpq_class(0), mpq_class(levi(a, b, c)));
  const bool kx = is_boost(x), ky = is_boost(y);
  if (!kx && !ky) return GenTerm{ie, gen_J(c)};
  if (kx != ky) return GenTerm{ie, gen_K(c)};
  return GenTerm{ie * GaussQ(ring.boost_sign), gen_J(c)};
}

using ConstMap = std::map<Word, GaussQ, WordLess>;
using ExpandCache = std::map<Word, ConstMap>;

const ConstMap& expand(const Ring& ring, const Word& w, ExpandCache& cache) {
  auto it = cache.find(w);
  if (it != cache.end()) return it->second;
  ConstMap out;
  std::size_t i = 0;
  while (i + 1 < w.size() && w[i] <= w[i + 1]) ++i;
  if (i + 1 >= w.size()) {
    out.emplace(w, GaussQ(1));
  } else {
    Word swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    auto acc = [&out](const ConstMap& m, const GaussQ& s) {
      for (const auto& [u, g] : m) {
        auto [pos, inserted] = out.emplace(u, g * s);
        if (!inserted) {
          pos->second += g * s;
          if (pos->second.is_zero()) out.erase(pos);
        }
      }
    };
    ConstMap first = expand(ring, swapped, cache);
    acc(first, GaussQ(1));
    if (auto br = gen_bracket(ring, w[i], w[i + 1])) {
      Word shorter;
      shorter.reserve(w.size() - 1);
      shorter.insert(shorter.end(), w.begin(), w.begin() + static_cast<long>(i));
      shorter.push_back(br->gen);
      shorter.insert(shorter.end(), w.begin() + static_cast<long>(i) + 2, w.end());
      ConstMap second = expand(ring, shorter, cache);
      acc(second, br->coef);
    }
  }
  return cache.emplace(w, std::move(out)).first->second;
}

bool depends_on_momentum(const ScalarCoeff& c) {
  if (!c.denominator().empty()) return true;
  const Poly& n = c.numerator();
  return n.involves(Var::P1) || n.involves(Var::P2) || n.involves(Var::P3) || n.involves(Var::AbsP) ||
         n.involves(Var::Energy);
}

void add_into(OperatorExpr::TermMap& m, const Word& w, const ScalarCoeff& c) {
  if (c.is_zero()) return;
  auto it = m.find(w);
  if (it == m.end()) {
    m.emplace(w, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) m.erase(it);
}

// w * c rewritten as a sum of c_i * u_i with every u_i a sub-word of w.
OperatorExpr::TermMap move_right(const Word& w, const ScalarCoeff& c) {
  OperatorExpr::TermMap cur;
  cur.emplace(Word{}, c);
  for (std::size_t k = w.size(); k-- > 0;) {
    OperatorExpr::TermMap next;
    for (const auto& [u, ci] : cur) {
      Word xu;
      xu.reserve(u.size() + 1);
      xu.push_back(w[k]);
      xu.insert(xu.end(), u.begin(), u.end());
      add_into(next, xu, ci);
      if (depends_on_momentum(ci)) add_into(next, u, generator_scalar_bracket(w[k], ci));
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

std::string word_str(const Word& w) {
  std::string s;
  for (Gen g : w) {
    s += is_boost(g) ? "K" : "J";
    s += std::to_string(gen_index(g));
  }
  return s.empty() ? "1" : s;
}

ScalarCoeff generator_scalar_bracket(Gen x, const ScalarCoeff& c) {
  const RingRef& r = c.ring();
  if (!depends_on_momentum(c)) return ScalarCoeff(r);
  const int a = gen_index(x);
  const ScalarCoeff i = ScalarCoeff::imag(r);
  if (is_boost(x)) return i * ScalarCoeff::energy(r) * c.derivative(a);
  const int b = a % 3 + 1, d = b % 3 + 1;  // (a, b, d) cyclic
  return i * (ScalarCoeff::momentum(r, d) * c.derivative(b) - ScalarCoeff::momentum(r, b) * c.derivative(d));
}

OperatorExpr::OperatorExpr(RingRef ring) : ring_(std::move(ring)) {}

OperatorExpr OperatorExpr::scalar(const ScalarCoeff& c) {
  OperatorExpr e(c.ring());
  e.add_term({}, c);
  return e;
}

OperatorExpr OperatorExpr::generator(const RingRef& r, Gen g) {
  OperatorExpr e(r);
  e.add_term({g}, ScalarCoeff(r, GaussQ(1)));
  return e;
}

OperatorExpr OperatorExpr::Phat(const RingRef& r, int a) {
  return scalar(ScalarCoeff::momentum(r, a) * ScalarCoeff::abs_momentum(r).inverse());
}

void OperatorExpr::add_term(const Word& w, const ScalarCoeff& c) {
  if (!same_ring(ring_, c.ring()))
    throw AlgebraError(AlgebraErrorKind::RingMismatch, "term from ring " + c.ring()->label + " added to " + ring_->label);
  add_into(terms_, w, c);
}

bool OperatorExpr::is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

std::optional<ScalarCoeff> OperatorExpr::as_scalar() const {
  if (terms_.empty()) return ScalarCoeff(ring_);
  if (is_scalar()) return terms_.begin()->second;
  return std::nullopt;
}

std::size_t OperatorExpr::max_word_length() const {
  std::size_t n = 0;
  for (const auto& t : terms_) n = std::max(n, t.first.size());
  return n;
}

OperatorExpr OperatorExpr::operator+(const OperatorExpr& o) const {
  OperatorExpr r = *this;
  for (const auto& [w, c] : o.terms_) r.add_term(w, c);
  return r;
}

OperatorExpr OperatorExpr::operator-() const {
  OperatorExpr r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

OperatorExpr OperatorExpr::operator-(const OperatorExpr& o) const { return *this + (-o); }

OperatorExpr OperatorExpr::scaled(const ScalarCoeff& c) const { return scalar(c) * *this; }

OperatorExpr OperatorExpr::scaled(const GaussQ& c) const {
  OperatorExpr r(ring_);
  if (c.is_zero()) return r;
  r = *this;
  for (auto& t : r.terms_) t.second = t.second.scaled(c);
  return r;
}

OperatorExpr OperatorExpr::operator*(const OperatorExpr& o) const {
  if (!same_ring(ring_, o.ring_))
    throw AlgebraError(AlgebraErrorKind::RingMismatch, "product of operators from " + ring_->label + " and " + o.ring_->label);
  OperatorExpr out(ring_);
  ExpandCache cache;
  for (const auto& [wa, ca] : terms_) {
    for (const auto& [wb, cb] : o.terms_) {
      for (const auto& [u, cu] : move_right(wa, cb)) {
        const ScalarCoeff coef = ca * cu;
        if (coef.is_zero()) continue;
        Word joined = u;
        joined.insert(joined.end(), wb.begin(), wb.end());
        const ConstMap expanded = expand(*ring_, joined, cache);
        for (const auto& [w, g] : expanded) add_into(out.terms_, w, coef.scaled(g));
      }
    }
  }
  return out;
}

OperatorExpr OperatorExpr::pow(int n) const {
  if (n < 0) {
    auto s = as_scalar();
    if (!s) throw AlgebraError(AlgebraErrorKind::Unsupported, "negative power of a non-scalar operator");
    return scalar(s->pow(n));
  }
  OperatorExpr r = constant(ring_, GaussQ(1));
  for (int k = 0; k < n; ++k) r = r * *this;
  return r;
}

bool OperatorExpr::identical(const OperatorExpr& o) const {
  if (!same_ring(ring_, o.ring_) || terms_.size() != o.terms_.size()) return false;
  auto it = o.terms_.begin();
  for (const auto& [w, c] : terms_) {
    if (w != it->first || !c.identical(it->second)) return false;
    ++it;
  }
  return true;
}

std::string OperatorExpr::debug_str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.debug_str() << "*" << word_str(w);
  }
  return os.str();
}

OperatorExpr normal_form(const OperatorExpr& e) {
  // Stored expressions are canonical; rebuild term by term so a caller-made
  // map is re-canonicalized as well.
  OperatorExpr out(e.ring());
  for (const auto& [w, c] : e.terms()) {
    OperatorExpr t = OperatorExpr::scalar(c);
    for (Gen g : w) t = t * OperatorExpr::generator(e.ring(), g);
    out = out + t;
  }
  return out;
}

OperatorExpr normal_form(const RingRef& ring, const std::vector<RawProduct>& sum) {
  OperatorExpr out(ring);
  for (const auto& prod : sum) {
    OperatorExpr t = OperatorExpr::constant(ring, GaussQ(1));
    for (const auto& f : prod) {
      if (std::holds_alternative<Gen>(f)) {
        t = t * OperatorExpr::generator(ring, std::get<Gen>(f));
      } else {
        t = t * OperatorExpr::scalar(std::get<ScalarCoeff>(f));
      }
    }
    out = out + t;
  }
  return out;
}

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b) { return a * b - b * a; }

OperatorExpr adjoint(const OperatorExpr& e) {
  OperatorExpr out(e.ring());
  for (const auto& [w, c] : e.terms()) {
    OperatorExpr t = OperatorExpr::constant(e.ring(), GaussQ(1));
    for (std::size_t k = w.size(); k-- > 0;) t = t * OperatorExpr::generator(e.ring(), w[k]);
    out = out + t * OperatorExpr::scalar(c.conj());
  }
  return out;
}

OperatorExpr evaluate_at(const OperatorExpr& e, const mpq_class& kappa) {
  RingRef target = evaluated_ring(e.ring(), kappa);
  OperatorExpr out(target);
  for (const auto& [w, c] : e.terms()) out.add_term(w, c.evaluate_at(target));
  return out;
}

VectorExpr VectorExpr::J(const RingRef& r) { return {OperatorExpr::J(r, 1), OperatorExpr::J(r, 2), OperatorExpr::J(r, 3)}; }
VectorExpr VectorExpr::K(const RingRef& r) { return {OperatorExpr::K(r, 1), OperatorExpr::K(r, 2), OperatorExpr::K(r, 3)}; }
VectorExpr VectorExpr::P(const RingRef& r) { return {OperatorExpr::P(r, 1), OperatorExpr::P(r, 2), OperatorExpr::P(r, 3)}; }
VectorExpr VectorExpr::Phat(const RingRef& r) {
  return {OperatorExpr::Phat(r, 1), OperatorExpr::Phat(r, 2), OperatorExpr::Phat(r, 3)};
}

VectorExpr VectorExpr::operator+(const VectorExpr& o) const { return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]}; }
VectorExpr VectorExpr::operator-(const VectorExpr& o) const { return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2]}; }
VectorExpr VectorExpr::operator-() const { return {-c[0], -c[1], -c[2]}; }

bool VectorExpr::identical(const VectorExpr& o) const {
  return c[0].identical(o.c[0]) && c[1].identical(o.c[1]) && c[2].identical(o.c[2]);
}

VectorExpr operator*(const OperatorExpr& s, const VectorExpr& v) { return {s * v[0], s * v[1], s * v[2]}; }
VectorExpr operator*(const VectorExpr& v, const OperatorExpr& s) { return {v[0] * s, v[1] * s, v[2] * s}; }

OperatorExpr vec_dot(const VectorExpr& a, const VectorExpr& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

VectorExpr vec_cross(const VectorExpr& a, const VectorExpr& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

VectorExpr adjoint(const VectorExpr& v) { return {adjoint(v[0]), adjoint(v[1]), adjoint(v[2])}; }

}  // namespace splitlab
