#include <doctest.h>

#include "splitlab/connection/connection.hpp"

#include <cmath>

using namespace splitlab;

namespace {

const cplx I(0, 1);

GridRef mid_grid() {
  static GridRef g = make_grid(6, 24, 48, 0.9, 1.1);
  return g;
}

Section times_node(const Section& s, const std::function<cplx(std::size_t)>& f) {
  Section out = s;
  for (std::size_t n = 0; n < s.nodes(); ++n)
    for (int c = 0; c < s.dim(); ++c) out.at(n, c) *= f(n);
  return out;
}

double angle_of(const FiberMatrix& u, const FiberMatrix& axis_spin) {
  Eigen::ComplexEigenSolver<FiberMatrix> es(u);
  FiberMatrix lg = FiberMatrix::Zero(u.rows(), u.cols());
  for (int i = 0; i < u.rows(); ++i) lg(i, i) = std::log(es.eigenvalues()[i]);
  const FiberMatrix gen = I * es.eigenvectors() * lg * es.eigenvectors().inverse();
  return ((gen * axis_spin).trace() / (axis_spin * axis_spin).trace()).real();
}

}  // namespace

TEST_CASE("profiles and connection names") {
  CHECK(Profile::parse("H/m")(0.0, 2.0) == doctest::Approx(1.0));
  CHECK(Profile::parse("0.5*H/m")(std::sqrt(3.0), 1.0) == doctest::Approx(1.0));
  CHECK(Profile::parse("0.25")(7.0, 1.0) == 0.25);
  CHECK_THROWS_AS(Profile::parse("H/q"), ConnectionError);
  const Profile t = Profile::table({0.8, 0.9, 1.0, 1.1, 1.2}, {0.0, 0.1, 0.4, 0.9, 1.0});
  CHECK(t(1.0, 1.0) == doctest::Approx(0.4));
  const double mid = t(1.05, 1.0);
  CHECK(mid > 0.4);
  CHECK(mid < 0.9);
  CHECK_THROWS_AS(t(1.3, 1.0), ConnectionError);
  CHECK_THROWS_AS(Profile::table({1, 0.5, 2, 3}, {0, 0, 0, 0}), ConnectionError);
  CHECK(Connection::parse("affine:H/m").name() == "affine:H/m");
  CHECK(Connection::parse("rotation").kind == Connection::Kind::Rotation);
  CHECK_THROWS_AS(Connection::parse("levi-civita"), ConnectionError);
}

TEST_CASE("flat connection is singular on massless bundles") {
  CHECK_THROWS_AS(Connection::flat_massive().check(RepSpec::massless(1)), ConnectionError);
  CHECK_THROWS_AS(Connection::affine(Profile::energy_over_mass(0.5)).check(RepSpec::massless(0)), ConnectionError);
  CHECK_NOTHROW(Connection::affine(Profile::constant(0.5)).check(RepSpec::massless(0)));
}

TEST_CASE("connections act as derivative plus connection form") {
  auto g = mid_grid();
  for (const RepSpec& rep : {RepSpec::massive(1, 1), RepSpec::massless(1), RepSpec::massless(-1)})
    for (const Connection& c : {Connection::boost(), Connection::rotation(), Connection::affine(Profile::constant(0.3))}) {
      CAPTURE(rep.label());
      CAPTURE(c.name());
      const Section psi = random_test_section(rep, g, 4);
      const TangentField x = TangentField::random_smooth(*g, 17, false);
      const Triple grad = gradient(psi);
      Section expect = psi.zeros_like();
      for (std::size_t n = 0; n < g->size(); ++n) {
        const FiberMatrix a = connection_form(c, rep, g->k(n), x.v[n]);
        for (int q = 0; q < psi.dim(); ++q) {
          cplx v = 0;
          for (int i = 0; i < 3; ++i) v += x.v[n][i] * grad[i].at(n, q);
          for (int e = 0; e < psi.dim(); ++e) v += a(q, e) * psi.at(n, e);
          expect.at(n, q) = v;
        }
      }
      CHECK(norm(apply_connection(c, x, psi) - expect) < 1e-6 * norm(psi));
    }
}

TEST_CASE("zero field and Leibniz rule") {
  auto g = mid_grid();
  const Section psi = random_test_section(RepSpec::massive(1, 1), g, 4);
  CHECK(norm(apply_connection(Connection::rotation(), TangentField::zero(*g), psi)) == 0.0);
  const GridFunction one(g->size(), cplx(1, 0));
  CHECK(leibniz_residual(Connection::boost(), TangentField::theta(*g), one, psi) < 1e-14);
  const GridFunction f = random_scalar_function(*g, 8);
  for (const Connection& c : {Connection::boost(), Connection::rotation(), Connection::flat_massive()}) {
    CHECK(leibniz_residual(c, TangentField::theta(*g), f, psi) < 1e-6);
    CHECK(leibniz_residual(c, TangentField::random_smooth(*g, 2, false), f, psi) < 1e-6);
  }
  Connection broken = Connection::rotation();
  broken.drop_cross_term = true;
  auto gc = make_grid(4, 12, 24, 0.9, 1.1);
  const double coarse = leibniz_residual(broken, TangentField::theta(*gc), random_scalar_function(*gc, 8),
                                         random_test_section(RepSpec::massive(1, 1), gc, 4));
  const double fine = leibniz_residual(broken, TangentField::theta(*g), f, psi);
  CHECK(fine > 0.1);
  CHECK(fine > 0.5 * coarse);
}

TEST_CASE("massless degeneracy and massive radial agreement") {
  auto g = mid_grid();
  const Section h = random_test_section(RepSpec::massless(1), g, 6);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const TangentField x = TangentField::random_smooth(*g, seed, false);
    CHECK(norm(apply_connection(Connection::boost(), x, h) - apply_connection(Connection::rotation(), x, h)) < 1e-10 * norm(h));
  }
  const Section m = random_test_section(RepSpec::massive(1, 1), g, 6);
  const TangentField er = TangentField::radial(*g);
  CHECK(norm(apply_connection(Connection::boost(), er, m) - apply_connection(Connection::rotation(), er, m)) < 1e-10 * norm(m));
  const TangentField x = TangentField::random_smooth(*g, 1, true);
  CHECK(norm(apply_connection(Connection::boost(), x, m) - apply_connection(Connection::rotation(), x, m)) > 1e-2 * norm(m));
}

TEST_CASE("Jacobi-Lie brackets") {
  auto g = mid_grid();
  const auto th = TangentField::theta(*g), ph = TangentField::phi(*g);
  const auto analytic = bracket(*g, th, ph);
  // numerical route: strip the names
  TangentField a = th, b = ph;
  a.named = b.named = TangentField::Named::None;
  const auto numeric = bracket(*g, a, b);
  double err = 0;
  for (std::size_t n = 0; n < g->size(); ++n)
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(analytic.v[n][i] - numeric.v[n][i]));
  CHECK(err < 1e-8);
  const auto r12 = bracket(*g, TangentField::rotation(*g, 1), TangentField::rotation(*g, 2));
  const auto x3 = TangentField::rotation(*g, 3);
  for (std::size_t n = 0; n < g->size(); n += 97)
    for (int i = 0; i < 3; ++i) CHECK(r12.v[n][i] == doctest::Approx(-x3.v[n][i]));
}

TEST_CASE("curvature of boost and rotation connections") {
  auto g = mid_grid();
  const auto th = TangentField::theta(*g), ph = TangentField::phi(*g);
  for (const RepSpec& rep : {RepSpec::massive(1, 1), RepSpec::massless(1), RepSpec::massless(-1)}) {
    const Section psi = random_test_section(rep, g, 7);
    const Section jk = helicity_part(psi);
    const Section fk = curvature_commutator(Connection::boost(), th, ph, psi);
    const Section fr = curvature_commutator(Connection::rotation(), th, ph, psi);
    const Section pk = times_node(jk, [&](std::size_t n) { const double w = energy(rep, g->radius(n)); return I / (w * w); });
    const Section pr = times_node(jk, [&](std::size_t n) { return I / (g->radius(n) * g->radius(n)); });
    CHECK(norm(fk - pk) < 1e-5 * norm(psi));
    CHECK(norm(fr - pr) < 1e-5 * norm(psi));
    // antisymmetry
    CHECK(norm(fk + curvature_commutator(Connection::boost(), ph, th, psi)) < 1e-5 * norm(psi));
  }
  const Section m = random_test_section(RepSpec::massive(1, 1), g, 7);
  CHECK(norm(curvature_commutator(Connection::flat_massive(), th, ph, m)) < 1e-5 * norm(m));
  // tensoriality in the section
  const GridFunction f = random_scalar_function(*g, 5);
  const Section a = curvature_commutator(Connection::boost(), th, ph, m.times(f));
  const Section b = curvature_commutator(Connection::boost(), th, ph, m).times(f);
  CHECK(norm(a - b) < 1e-5 * norm(m));
}

TEST_CASE("cross commutators") {
  const Section psi = random_test_section(RepSpec::massive(1, 1), mid_grid(), 3);
  const auto r = cross_commutator_check(psi);
  CHECK(r.kr < 1e-5);
  CHECK(r.kr_swapped < 1e-5);
  CHECK(r.rk < 1e-5);
  CHECK(r.rk_kphi > 0.1);
  const auto s0 = cross_commutator_check(random_test_section(RepSpec::massive(1, 0), mid_grid(), 3));
  CHECK(s0.kr < 1e-5);
  CHECK(s0.rk < 1e-5);
  CHECK_THROWS_AS(cross_commutator_check(random_test_section(RepSpec::massless(1), mid_grid(), 3)), ConnectionError);
}

TEST_CASE("loops and holonomy") {
  const Vec3 n0{0.36, -0.48, 0.8};
  const auto loop = HolonomyLoop::cap(1.0, n0, 0.05);
  CHECK(loop.solid_angle == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(spherical_polygon_area({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == doctest::Approx(M_PI / 2));
  const RepSpec s1 = RepSpec::massive(1, 1);
  const auto sp = spin_matrices(s1);
  const FiberMatrix ns = n0[0] * sp[0] + n0[1] * sp[1] + n0[2] * sp[2];
  for (double area : {0.01, 0.05}) {
    const auto l = HolonomyLoop::cap(1.0, n0, area);
    const double alpha = angle_of(holonomy(Connection::boost(), s1, l), ns);
    CHECK(alpha == doctest::Approx(area / 2.0).epsilon(0.01));  // r^2 / H^2 = 1/2
    CHECK((holonomy(Connection::flat_massive(), s1, l) - FiberMatrix::Identity(3, 3)).norm() < 1e-8);
  }
  const auto deg = HolonomyLoop::degenerate(1.0, n0);
  CHECK((holonomy(Connection::boost(), s1, deg) - FiberMatrix::Identity(3, 3)).norm() < 1e-12);
  const RepSpec h1 = RepSpec::massless(1);
  const FiberMatrix u = holonomy(Connection::boost(), h1, loop);
  const Eigen::Vector3cd e = helicity_frame(loop.vertices[0], 1);
  CHECK(std::arg(e.dot(u * e)) == doctest::Approx(-0.05).epsilon(1e-3));
  TransportOptions coarse;
  coarse.max_step = 2.0;
  coarse.unitarity_tol = 1e-14;
  CHECK_THROWS_AS(holonomy(Connection::boost(), s1, HolonomyLoop::cap(1.0, n0, 1.5, 4), coarse), ConnectionError);
}

TEST_CASE("lattice Chern numbers") {
  ChernOptions opt;
  opt.n_theta = 24;
  opt.n_phi = 48;
  for (int h : {-1, 0, 1})
    for (const Connection& c : {Connection::boost(), Connection::rotation(), Connection::affine(Profile::constant(2.0))}) {
      const auto r = chern_number(c, RepSpec::massless(h), opt);
      CHECK(r.value == -2 * h);
      CHECK(std::abs(r.raw - r.value) < 0.05);
    }
  Connection pert = Connection::boost();
  pert.perturbation = 0.7;
  const auto p = chern_number(pert, RepSpec::massless(1), opt);
  CHECK(p.value == -2);
  CHECK(std::abs(p.raw + 2) < 0.05);
  CHECK_THROWS_AS(chern_number(Connection::boost(), RepSpec::massive(1, 1), opt), ConnectionError);
  opt.n_theta = 4;
  opt.n_phi = 4;
  opt.branch_margin = 3.0;
  CHECK_THROWS_AS(chern_number(Connection::boost(), RepSpec::massless(1), opt), ConnectionError);
}
