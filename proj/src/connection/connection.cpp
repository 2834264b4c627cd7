#include "splitlab/connection/connection.hpp"

#include <cmath>
// Boost 1.74 pchip.hpp calls unqualified isnan.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <numbers>
#include <random>

namespace splitlab {

namespace {

const cplx I(0, 1);
constexpr double kPi = std::numbers::pi;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 unit(const Vec3& a) { return scale(a, 1.0 / std::sqrt(dot(a, a))); }

// Fixed smooth field for the Chern perturbation.
Vec3 perturbation_field(const Vec3& kh) {
  const Vec3 u{0.3, -0.5, 0.8}, w{1.0, 0.2, -0.4};
  return add(cross(u, kh), scale(cross(kh, w), dot(u, kh)));
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Profiles and connections

Profile Profile::energy_over_mass(double lambda) {
  Profile p;
  char buf[64];
  if (lambda == 1.0) {
    p.name_ = "H/m";
  } else if (lambda == -1.0) {
    p.name_ = "-H/m";
  } else {
    std::snprintf(buf, sizeof buf, "%g*H/m", lambda);
    p.name_ = buf;
  }
  p.needs_mass_ = true;
  p.eval_ = [lambda](double r, double m) { return lambda * std::sqrt(r * r + m * m) / m; };
  return p;
}

Profile Profile::constant(double c) {
  Profile p;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", c);
  p.name_ = buf;
  p.eval_ = [c](double, double) { return c; };
  return p;
}

Profile Profile::table(std::vector<double> r, std::vector<double> f) {
  if (r.size() != f.size() || r.size() < 4) throw ConnectionError("profile table needs >= 4 (r, f) pairs");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw ConnectionError("profile table radii must be strictly increasing");
  const double lo = r.front(), hi = r.back();
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(r), std::move(f));
  Profile p;
  p.name_ = "table";
  p.eval_ = [spline, lo, hi](double x, double) {
    if (x < lo || x > hi) throw ConnectionError("radius " + std::to_string(x) + " outside the profile table");
    return (*spline)(x);
  };
  return p;
}

Profile Profile::parse(const std::string& text) {
  if (text == "H/m") return energy_over_mass(1.0);
  if (text == "-H/m") return energy_over_mass(-1.0);
  const auto star = text.find("*H/m");
  try {
    std::size_t used = 0;
    if (star != std::string::npos && star + 4 == text.size()) {
      const double lam = std::stod(text.substr(0, star), &used);
      if (used == star) return energy_over_mass(lam);
    } else {
      const double c = std::stod(text, &used);
      if (used == text.size()) return constant(c);
    }
  } catch (const std::logic_error&) {
  }
  throw ConnectionError("cannot parse profile '" + text + "'");
}

Connection Connection::parse(const std::string& name) {
  if (name == "boost") return boost();
  if (name == "rotation") return rotation();
  if (name == "flat") return flat_massive();
  if (name.rfind("affine:", 0) == 0) return affine(Profile::parse(name.substr(7)));
  throw ConnectionError("unknown connection '" + name + "'");
}

std::string Connection::name() const {
  std::string s;
  switch (kind) {
    case Kind::Boost: s = "boost"; break;
    case Kind::Rotation: s = "rotation"; break;
    case Kind::Affine: s = "affine:" + profile->name(); break;
    case Kind::FlatMassive: s = "flat"; break;
  }
  if (drop_cross_term) s += "-dropped";
  if (symmetry_breaking != 0) s += "-broken";
  if (perturbation != 0) s += "-perturbed";
  return s;
}

void Connection::check(const RepSpec& rep) const {
  if (kind == Kind::FlatMassive && !(rep.mass > 0))
    throw ConnectionError("flat connection f = H/m is singular at m = 0 (no flat connection on massless bundles)");
  if (kind == Kind::Affine) {
    if (!profile) throw ConnectionError("affine connection without a profile");
    if (profile->needs_mass() && !(rep.mass > 0))
      throw ConnectionError("profile " + profile->name() + " is singular at m = 0");
  }
}

double Connection::weight(const RepSpec& rep, double r) const {
  switch (kind) {
    case Kind::Boost: return 1.0;
    case Kind::Rotation: return 0.0;
    case Kind::Affine: return (*profile)(r, rep.mass);
    case Kind::FlatMassive: return std::sqrt(r * r + rep.mass * rep.mass) / rep.mass;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------------------------
// Tangent fields

namespace {

TangentField named_field(const MomentumGrid& g, const std::string& name, TangentField::Named kind,
                         const std::function<Vec3(std::size_t)>& f) {
  TangentField t;
  t.name = name;
  t.named = kind;
  t.v.resize(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) t.v[n] = f(n);
  return t;
}

}  // namespace

TangentField TangentField::radial(const MomentumGrid& g) {
  return named_field(g, "e_k", Named::Radial, [&](std::size_t n) { return g.khat(n); });
}

TangentField TangentField::theta(const MomentumGrid& g) {
  auto t = named_field(g, "e_theta", Named::Theta,
                       [&](std::size_t n) { return g.e_theta(g.theta_index(n), g.phi_index(n)); });
  t.parity = -1;
  return t;
}

TangentField TangentField::phi(const MomentumGrid& g) {
  auto t = named_field(g, "e_phi", Named::Phi, [&](std::size_t n) { return g.e_phi(g.theta_index(n), g.phi_index(n)); });
  t.parity = -1;
  return t;
}

TangentField TangentField::constant(const MomentumGrid& g, Vec3 u) {
  auto t = named_field(g, "constant", Named::Constant, [&](std::size_t) { return u; });
  t.param = u;
  return t;
}

TangentField TangentField::rotation(const MomentumGrid& g, int a) {
  if (a < 1 || a > 3) throw ConnectionError("rotation field index must be 1, 2 or 3");
  Vec3 e{0, 0, 0};
  e[a - 1] = 1;
  auto t = named_field(g, "e" + std::to_string(a) + "xk", Named::Rotation, [&](std::size_t n) { return cross(e, g.k(n)); });
  t.param = {static_cast<double>(a), 0, 0};
  return t;
}

TangentField TangentField::zero(const MomentumGrid& g) {
  return named_field(g, "zero", Named::Constant, [](std::size_t) { return Vec3{0, 0, 0}; });
}

TangentField TangentField::random_smooth(const MomentumGrid& g, std::uint64_t seed, bool tangential) {
  std::mt19937_64 eng(seed);
  auto uni = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53 * 2 - 1; };
  Vec3 a{uni(), uni(), uni()}, b{uni(), uni(), uni()}, c{uni(), uni(), uni()};
  const double s = uni();
  auto t = named_field(g, "random", Named::None, [&](std::size_t n) {
    const Vec3 kh = g.khat(n);
    // smooth field: a + (b . khat) c + s khat, made tangential on request
    Vec3 v = add(a, scale(c, dot(b, kh)));
    v = add(v, scale(kh, s));
    if (tangential) v = add(v, scale(kh, -dot(v, kh)));
    return v;
  });
  return t;
}

TangentField TangentField::scaled(const std::vector<double>& f) const {
  TangentField t;
  t.name = name + "*f";
  t.parity = parity;
  t.v = v;
  for (std::size_t n = 0; n < v.size(); ++n) t.v[n] = scale(v[n], f[n]);
  return t;
}

std::array<GridFunction, 3> scalar_gradient(const MomentumGrid& g, const GridFunction& f, int parity) {
  // Any rank-1 representation gives the same spatial gradient.
  GridRef ref(std::shared_ptr<const MomentumGrid>(), &g);
  Section s(ref, RepSpec::massive(1.0, 0), f);
  s.set_parity(parity);
  const Triple grad = gradient(s);
  return {grad[0].data(), grad[1].data(), grad[2].data()};
}

TangentField bracket(const MomentumGrid& g, const TangentField& x, const TangentField& y) {
  using N = TangentField::Named;
  TangentField out;
  out.name = "[" + x.name + "," + y.name + "]";
  out.parity = x.parity * y.parity;
  out.v.assign(g.size(), Vec3{0, 0, 0});
  if (x.named != N::None && x.named == y.named && x.param == y.param) return out;
  if (x.named == N::Constant && y.named == N::Constant) return out;
  auto sphere = [&](auto&& f) {
    for (std::size_t n = 0; n < g.size(); ++n) out.v[n] = f(n);
    return out;
  };
  const auto cot = [&](std::size_t n) { return std::cos(g.theta(g.theta_index(n))) / std::sin(g.theta(g.theta_index(n))); };
  if (x.named == N::Theta && y.named == N::Phi)
    return sphere([&](std::size_t n) { return scale(y.v[n], -cot(n) / g.radius(n)); });
  if (x.named == N::Phi && y.named == N::Theta)
    return sphere([&](std::size_t n) { return scale(x.v[n], cot(n) / g.radius(n)); });
  if (x.named == N::Radial && (y.named == N::Theta || y.named == N::Phi))
    return sphere([&](std::size_t n) { return scale(y.v[n], -1.0 / g.radius(n)); });
  if (y.named == N::Radial && (x.named == N::Theta || x.named == N::Phi))
    return sphere([&](std::size_t n) { return scale(x.v[n], 1.0 / g.radius(n)); });
  if (x.named == N::Rotation && y.named == N::Rotation) {
    // [e_a x k, e_b x k] = -eps_abc e_c x k
    const int a = static_cast<int>(x.param[0]) - 1, b = static_cast<int>(y.param[0]) - 1, c = 3 - a - b;
    const double e = ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
    Vec3 ec{0, 0, 0};
    ec[c] = 1;
    return sphere([&](std::size_t n) { return scale(cross(ec, g.k(n)), -e); });
  }
  // General fields: [X, Y]^i = X . grad Y^i - Y . grad X^i
  for (int i = 0; i < 3; ++i) {
    GridFunction xi(g.size()), yi(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
      xi[n] = x.v[n][i];
      yi[n] = y.v[n][i];
    }
    const auto gx = scalar_gradient(g, xi, x.parity), gy = scalar_gradient(g, yi, y.parity);
    for (std::size_t n = 0; n < g.size(); ++n) {
      double s = 0;
      for (int a = 0; a < 3; ++a) s += x.v[n][a] * gy[a][n].real() - y.v[n][a] * gx[a][n].real();
      out.v[n][i] = s;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Applying connections

ConnectionApplier::ConnectionApplier(const Connection& c, const Section& psi) : conn_(c), psi_(psi) {
  c.check(psi.rep());
  need_k_ = true;
  need_j_ = c.kind != Connection::Kind::Boost && !c.drop_cross_term;
  const GeneratorOptions loose{-1};
  if (need_k_) k_ = apply_K(psi, loose);
  if (need_j_) j_ = apply_J(psi, loose);
}

Section ConnectionApplier::apply(const TangentField& x) const {
  const MomentumGrid& g = *psi_.grid();
  const RepSpec& rep = psi_.rep();
  const int d = psi_.dim();
  Section out = psi_.zeros_like();
  out.set_parity(psi_.parity() * x.parity);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3& X = x.v[n];
    const Vec3 kh = g.khat(n);
    const double r = g.radius(n), h = energy(rep, r);
    const double xk = dot(X, kh) * r;
    const double f = conn_.weight(rep, r);
    const Vec3 xcross = cross(X, kh);  // X . (khat x J) = (X x khat) . J
    for (int c = 0; c < d; ++c) {
      const cplx psi = psi_.at(n, c);
      cplx xK(0, 0), kK(0, 0);
      for (int a = 0; a < 3; ++a) {
        xK += X[a] * k_[a].at(n, c);
        kK += kh[a] * k_[a].at(n, c);
      }
      const cplx dk = -I * xK / h - xk / (2 * h * h) * psi;
      cplx value = f * dk;
      if (f != 1.0) {
        cplx cross_term(0, 0);
        if (need_j_)
          for (int a = 0; a < 3; ++a) cross_term += xcross[a] * j_[a].at(n, c);
        const cplx dr = -I * (cross_term / r + dot(X, kh) * kK / h - I * 0.5 * xk / (h * h) * psi);
        value += (1.0 - f) * dr;
      }
      if (conn_.symmetry_breaking != 0) value += I * conn_.symmetry_breaking * X[2] * psi;
      if (conn_.perturbation != 0) value += I * conn_.perturbation * dot(X, perturbation_field(kh)) * psi;
      out.at(n, c) = value;
    }
  }
  return out;
}

Section apply_connection(const Connection& c, const TangentField& x, const Section& psi) {
  return ConnectionApplier(c, psi).apply(x);
}

double leibniz_residual(const Connection& c, const TangentField& x, const GridFunction& f, const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const Section fpsi = psi.times(f);
  Section res = apply_connection(c, x, fpsi) - apply_connection(c, x, psi).times(f);
  const auto grad = scalar_gradient(g, f);
  GridFunction df(g.size());  // odd when X is
  for (std::size_t n = 0; n < g.size(); ++n)
    df[n] = x.v[n][0] * grad[0][n] + x.v[n][1] * grad[1][n] + x.v[n][2] * grad[2][n];
  Section leib = psi.times(df);
  leib.set_parity(psi.parity() * x.parity);
  res -= leib;
  return norm(res) / norm(psi);
}

Section curvature_commutator(const Connection& c, const TangentField& x, const TangentField& y, const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const ConnectionApplier base(c, psi);
  const Section dx = base.apply(x), dy = base.apply(y);
  const Section dxy = ConnectionApplier(c, dy).apply(x);
  const Section dyx = ConnectionApplier(c, dx).apply(y);
  return dxy - dyx - base.apply(bracket(g, x, y));
}

Section helicity_part(const Section& psi) { return apply_chi(psi); }

// ---------------------------------------------------------------------------------------------
// Cross commutators of the boost and rotation connections

namespace {

Section frame_component(const Triple& v, const TangentField& x) {
  const auto& e = x.v;
  Section out = v[0].zeros_like();
  out.set_parity(v[0].parity() * x.parity);
  for (std::size_t n = 0; n < out.nodes(); ++n)
    for (int c = 0; c < out.dim(); ++c)
      out.at(n, c) = e[n][0] * v[0].at(n, c) + e[n][1] * v[1].at(n, c) + e[n][2] * v[2].at(n, c);
  return out;
}

// f must be odd under the pole reflection (every factor used here carries one cot(theta)).
Section with_odd_factor(const Section& s, const std::function<cplx(std::size_t)>& f) {
  Section out = s;
  out.set_parity(-s.parity());
  for (std::size_t n = 0; n < s.nodes(); ++n)
    for (int c = 0; c < s.dim(); ++c) out.at(n, c) *= f(n);
  return out;
}

}  // namespace

CrossCommutatorReport cross_commutator_check(const Section& psi) {
  if (psi.rep().is_massless()) throw ConnectionError("cross commutator check needs a massive representation");
  const MomentumGrid& g = *psi.grid();
  const RepSpec& rep = psi.rep();
  const Connection ck = Connection::boost(), cr = Connection::rotation();
  const TangentField th = TangentField::theta(g), ph = TangentField::phi(g);
  const double base = norm(psi);

  const ConnectionApplier k0(ck, psi), r0(cr, psi);
  const Section kth = k0.apply(th), kph = k0.apply(ph), rth = r0.apply(th), rph = r0.apply(ph);
  const Section kr = ConnectionApplier(ck, rph).apply(th) - ConnectionApplier(cr, kth).apply(ph);
  const Section rk = ConnectionApplier(cr, kph).apply(th) - ConnectionApplier(ck, rth).apply(ph);
  const Section swapped = ConnectionApplier(cr, kth).apply(ph) - ConnectionApplier(ck, rph).apply(th);

  const Section jk = helicity_part(psi);
  const Section k_phi = frame_component(apply_K(psi, GeneratorOptions{-1}), ph);
  const Section j_theta = frame_component(apply_J(psi, GeneratorOptions{-1}), th);
  auto cot = [&](std::size_t n) { return 1.0 / std::tan(g.theta(g.theta_index(n))); };
  auto inv_r2 = [&](std::size_t n) { return I / (g.radius(n) * g.radius(n)); };
  Section common = jk;
  for (std::size_t n = 0; n < common.nodes(); ++n)
    for (int c = 0; c < common.dim(); ++c) common.at(n, c) *= inv_r2(n);
  const Section kr_rhs = common + with_odd_factor(k_phi, [&](std::size_t n) {
                           return I * cot(n) / (energy(rep, g.radius(n)) * g.radius(n));
                         });
  const Section rk_kphi = common + with_odd_factor(k_phi, [&](std::size_t n) { return cot(n) * inv_r2(n); });
  const Section rk_fixed = common + with_odd_factor(j_theta, [&](std::size_t n) { return cot(n) * inv_r2(n); });

  CrossCommutatorReport rep_out;
  rep_out.kr = norm(kr - kr_rhs) / base;
  rep_out.rk_kphi = norm(rk - rk_kphi) / base;
  rep_out.rk = norm(rk - rk_fixed) / base;
  rep_out.kr_swapped = norm(swapped + kr_rhs) / base;
  return rep_out;
}

// ---------------------------------------------------------------------------------------------
// Connection forms and transport

FiberMatrix connection_form(const Connection& c, const RepSpec& rep, const Vec3& k, const Vec3& x) {
  c.check(rep);
  if (c.drop_cross_term) throw ConnectionError("the mutated rotation operator is not a connection");
  const int d = rep.dim();
  const double r = std::sqrt(dot(k, k));
  const Vec3 kh = scale(k, 1.0 / r);
  const double w = std::sqrt(r * r + rep.mass * rep.mass);
  const double f = c.weight(rep, r);
  const double g_boost = rep.is_massless() ? 1.0 / r : -rep.sigma * r / (w * (w + rep.mass));
  const double g = f * g_boost + (1 - f) / r;
  const auto S = spin_matrices(rep);
  const Vec3 xc = cross(x, kh);  // X . (khat x S) = (X x khat) . S
  FiberMatrix a = FiberMatrix::Identity(d, d) * cplx(-dot(x, k) / (2 * w * w), 0);
  for (int i = 0; i < 3; ++i) a += (-I * g * xc[i]) * S[i];
  if (c.symmetry_breaking != 0) a += FiberMatrix::Identity(d, d) * (I * c.symmetry_breaking * x[2]);
  if (c.perturbation != 0) a += FiberMatrix::Identity(d, d) * (I * c.perturbation * dot(x, perturbation_field(kh)));
  return a;
}

FiberMatrix transport(const Connection& c, const RepSpec& rep, const std::function<Vec3(double)>& k,
                      const std::function<Vec3(double)>& dk, int steps) {
  const int d = rep.dim();
  FiberMatrix u = FiberMatrix::Identity(d, d);
  const double h = 1.0 / steps;
  auto rhs = [&](double t, const FiberMatrix& m) -> FiberMatrix { return -connection_form(c, rep, k(t), dk(t)) * m; };
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const FiberMatrix k1 = rhs(t, u);
    const FiberMatrix k2 = rhs(t + h / 2, u + (h / 2) * k1);
    const FiberMatrix k3 = rhs(t + h / 2, u + (h / 2) * k2);
    const FiberMatrix k4 = rhs(t + h, u + h * k3);
    u += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return u;
}

double spherical_polygon_area(const std::vector<Vec3>& v) {
  Vec3 c{0, 0, 0};
  for (const auto& p : v) c = add(c, p);
  c = unit(c);
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3& a = v[i];
    const Vec3& b = v[(i + 1) % v.size()];
    const double num = dot(c, cross(a, b));
    const double den = 1 + dot(c, a) + dot(a, b) + dot(b, c);
    total += 2 * std::atan2(num, den);
  }
  return total;
}

HolonomyLoop HolonomyLoop::cap(double radius, const Vec3& center, double solid_angle, int n_vertices) {
  if (n_vertices < 3) throw ConnectionError("a loop needs at least 3 vertices");
  if (!(solid_angle > 0) || solid_angle >= 2 * kPi) throw ConnectionError("loop solid angle must be in (0, 2 pi)");
  const Vec3 n0 = unit(center);
  const Vec3 helper = std::abs(n0[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  const Vec3 u = unit(cross(helper, n0));
  const Vec3 v = cross(n0, u);
  auto polygon = [&](double beta) {
    std::vector<Vec3> pts;
    for (int i = 0; i < n_vertices; ++i) {
      const double t = 2 * kPi * i / n_vertices;
      pts.push_back(add(scale(n0, std::cos(beta)), scale(add(scale(u, std::cos(t)), scale(v, std::sin(t))), std::sin(beta))));
    }
    return pts;
  };
  double lo = 0, hi = kPi / 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (spherical_polygon_area(polygon(mid)) < solid_angle ? lo : hi) = mid;
  }
  HolonomyLoop loop;
  loop.radius = radius;
  loop.vertices = polygon(0.5 * (lo + hi));
  loop.solid_angle = spherical_polygon_area(loop.vertices);
  return loop;
}

HolonomyLoop HolonomyLoop::degenerate(double radius, const Vec3& at) {
  HolonomyLoop loop;
  loop.radius = radius;
  const Vec3 p = unit(at);
  const Vec3 helper = std::abs(p[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  const Vec3 q = unit(add(p, scale(unit(cross(helper, p)), 0.05)));
  loop.vertices = {p, q};  // out and back along the same arc
  loop.solid_angle = 0;
  return loop;
}

FiberMatrix holonomy(const Connection& c, const RepSpec& rep, const HolonomyLoop& loop, const TransportOptions& opt) {
  const int d = rep.dim();
  FiberMatrix total = FiberMatrix::Identity(d, d);
  const std::size_t nv = loop.vertices.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec3 a = loop.vertices[i], b = loop.vertices[(i + 1) % nv];
    const double omega = std::acos(std::clamp(dot(a, b), -1.0, 1.0));
    if (omega == 0) continue;
    const double so = std::sin(omega), R = loop.radius;
    auto k = [&](double t) { return scale(add(scale(a, std::sin((1 - t) * omega)), scale(b, std::sin(t * omega))), R / so); };
    auto dk = [&](double t) {
      return scale(add(scale(a, -std::cos((1 - t) * omega)), scale(b, std::cos(t * omega))), R * omega / so);
    };
    const int steps = std::max(1, static_cast<int>(std::ceil(omega / opt.max_step)));
    total = transport(c, rep, k, dk, steps) * total;
  }
  const double defect = (total.adjoint() * total - FiberMatrix::Identity(d, d)).norm();
  if (defect > opt.unitarity_tol)
    throw ConnectionError("transport map is not unitary (defect " + std::to_string(defect) + "); refine the step");
  return total;
}

// ---------------------------------------------------------------------------------------------
// Lattice Chern number

Eigen::Vector3cd helicity_frame(const Vec3& kh, int h) {
  Eigen::Vector3cd best;
  double best_norm = -1;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 c{0, 0, 0};
    c[axis] = 1;
    const Vec3 cp = add(c, scale(kh, -dot(c, kh)));
    const Vec3 x = cross(kh, cp);
    Eigen::Vector3cd v;
    for (int i = 0; i < 3; ++i) v[i] = 0.5 * cplx(cp[i], h * x[i]);
    const double nv = v.norm();
    if (nv > best_norm) {
      best_norm = nv;
      best = v / nv;
    }
  }
  return best;
}

ChernResult chern_number(const Connection& c, const RepSpec& rep, const ChernOptions& opt) {
  if (!rep.is_massless()) throw ConnectionError("the Chern number is defined here for massless line bundles");
  c.check(rep);
  const int nt = opt.n_theta, np = opt.n_phi;
  const double R = opt.radius, dth = kPi / nt, dph = 2 * kPi / np;
  auto th = [&](int j) { return (j + 0.5) * dth; };
  auto point = [&](double t, double p) { return Vec3{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)}; };
  auto frame = [&](int j, int k) -> Eigen::VectorXcd {
    if (rep.dim() == 1) return Eigen::VectorXcd::Ones(1);
    return helicity_frame(point(th(j), k * dph), rep.helicity);
  };
  std::vector<Eigen::VectorXcd> frames(static_cast<std::size_t>(nt) * np);
  for (int j = 0; j < nt; ++j)
    for (int k = 0; k < np; ++k) frames[static_cast<std::size_t>(j) * np + k] = frame(j, k);
  auto fr = [&](int j, int k) -> const Eigen::VectorXcd& { return frames[static_cast<std::size_t>(j) * np + ((k % np) + np) % np]; };
  auto unit_link = [](cplx z) {
    const double a = std::abs(z);
    if (a < 1e-12) throw ConnectionError("degenerate link variable");
    return z / a;
  };
  // link_t(j,k): (j,k) -> (j+1,k) along the meridian; link_p(j,k): (j,k) -> (j,k+1) along the latitude
  std::vector<cplx> link_t(static_cast<std::size_t>(nt) * np), link_p(static_cast<std::size_t>(nt) * np);
  for (int j = 0; j < nt; ++j)
    for (int k = 0; k < np; ++k) {
      const double p0 = k * dph, t0 = th(j);
      if (j + 1 < nt) {
        const FiberMatrix u = transport(
            c, rep, [&](double s) { return scale(point(t0 + s * dth, p0), R); },
            [&](double s) {
              const double t = t0 + s * dth;
              return Vec3{R * dth * std::cos(t) * std::cos(p0), R * dth * std::cos(t) * std::sin(p0), -R * dth * std::sin(t)};
            },
            opt.substeps);
        link_t[static_cast<std::size_t>(j) * np + k] = unit_link(fr(j + 1, k).dot(u * fr(j, k)));
      }
      const FiberMatrix u = transport(
          c, rep, [&](double s) { return scale(point(t0, p0 + s * dph), R); },
          [&](double s) {
            const double p = p0 + s * dph;
            return Vec3{-R * dph * std::sin(t0) * std::sin(p), R * dph * std::sin(t0) * std::cos(p), 0.0};
          },
          opt.substeps);
      link_p[static_cast<std::size_t>(j) * np + k] = unit_link(fr(j, k + 1).dot(u * fr(j, k)));
    }
  auto lt = [&](int j, int k) { return link_t[static_cast<std::size_t>(j) * np + (k % np)]; };
  auto lp = [&](int j, int k) { return link_p[static_cast<std::size_t>(j) * np + (k % np)]; };

  ChernResult res;
  double total = 0;
  auto add_phase = [&](cplx w) {
    const double phase = std::arg(w);
    res.max_plaquette_phase = std::max(res.max_plaquette_phase, std::abs(phase));
    if (std::abs(phase) > kPi - opt.branch_margin)
      throw ConnectionError("plaquette phase " + std::to_string(phase) + " is at the branch cut; refine the mesh");
    total += phase;
    ++res.plaquettes;
  };
  // Positively oriented plaquettes (counterclockwise seen from outside): +theta first, then +phi.
  for (int j = 0; j + 1 < nt; ++j)
    for (int k = 0; k < np; ++k) add_phase(lt(j, k) * lp(j + 1, k) * std::conj(lt(j, k + 1)) * std::conj(lp(j, k)));
  cplx north(1, 0), south(1, 0);
  for (int k = 0; k < np; ++k) {
    north *= lp(0, k);
    south *= std::conj(lp(nt - 1, k));
  }
  add_phase(north);
  add_phase(south);
  res.raw = total / (2 * kPi);
  res.value = static_cast<int>(std::lround(res.raw));
  return res;
}

}  // namespace splitlab
