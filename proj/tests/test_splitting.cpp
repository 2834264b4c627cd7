#include <doctest.h>

#include "splitlab/splitting/splitting.hpp"

using namespace splitlab;

namespace {

GridRef grid() {
  static GridRef g = make_grid(6, 24, 48, 0.9, 1.1);
  return g;
}

}  // namespace

TEST_CASE("L + S = J exactly") {
  for (const RepSpec& rep : {RepSpec::massive(1, 1), RepSpec::massless(1)})
    for (const Connection& c : {Connection::boost(), Connection::rotation()}) {
      const Section psi = random_test_section(rep, grid(), 1);
      const SplitOperators ops(c, rep);
      const auto [l, s] = ops.LS(psi);
      const Triple j = apply_J(psi);
      for (int a = 0; a < 3; ++a) CHECK(norm(l[a] + s[a] - j[a]) <= 1e-15 * norm(psi));
    }
}

TEST_CASE("induced L operators match the transverse angular momentum") {
  const Section h = random_test_section(RepSpec::massless(1), grid(), 2);
  CHECK(split_vs_jperp(SplitOperators(Connection::boost(), RepSpec::massless(1)), h) < 1e-12);
  const Section m = random_test_section(RepSpec::massive(1, 1), grid(), 2);
  CHECK(split_vs_jperp(SplitOperators(Connection::rotation(), RepSpec::massive(1, 1)), m) < 1e-12);
  CHECK(split_vs_jperp(SplitOperators(Connection::boost(), RepSpec::massive(1, 1)), m) > 1e-2);
}

TEST_CASE("vector operators and internality") {
  const Section h = random_test_section(RepSpec::massless(1), grid(), 3);
  const SplitOperators boost(Connection::boost(), RepSpec::massless(1));
  const auto v = vector_op_residual(boost, h);
  CHECK(v.L < 1e-5);
  CHECK(v.S < 1e-5);
  const Section m0 = random_test_section(RepSpec::massive(1, 0), grid(), 3);
  const SplitOperators rot0(Connection::rotation(), RepSpec::massive(1, 0));
  const auto s0 = rot0.S(m0);
  for (int a = 0; a < 3; ++a) CHECK(norm(s0[a]) < 1e-12 * norm(m0));

  Connection broken = Connection::rotation();
  broken.symmetry_breaking = 0.3;
  const Section m = random_test_section(RepSpec::massive(1, 1), grid(), 3);
  CHECK(vector_op_residual(SplitOperators(broken, RepSpec::massive(1, 1)), m).L > 0.05);

  const GridFunction f = random_scalar_function(*grid(), 4);
  const auto in = internality_residual(boost, f, h);
  CHECK(in.S < 1e-12);
  CHECK(in.L == doctest::Approx(leibniz_term(f, h)).epsilon(1e-6));
  CHECK(in.L > 1e-4);
  const GridFunction c(grid()->size(), cplx(2.5, 0));
  CHECK(internality_residual(boost, c, h).L < 1e-14);
}

TEST_CASE("so(3) relations hold exactly for the flat connection") {
  const RepSpec rep = RepSpec::massive(1, 1);
  const Section m = random_test_section(rep, grid(), 5);
  const auto flat = so3_residual(SplitOperators(Connection::flat_massive(), rep), m);
  CHECK(flat.L < 1e-5);
  CHECK(flat.S < 1e-5);
  const auto d = defect_identity(SplitOperators(Connection::flat_massive(), rep), m);
  CHECK(d.curvature < 1e-5);
  CHECK(d.identity < 1e-10);
}

TEST_CASE("curvature obstructs the massless splitting") {
  const RepSpec rep = RepSpec::massless(1);
  const Section h = random_test_section(rep, grid(), 5);
  const SplitOperators boost(Connection::boost(), rep);
  const auto d = defect_identity(boost, h);
  CHECK(d.so3 > 0.1);
  CHECK(d.so3 == doctest::Approx(d.curvature).epsilon(1e-6));
  CHECK(d.analytic < 1e-5);
  CHECK(jperp_comm_residual(h) < 1e-5);
  const auto r = defect_identity(SplitOperators(Connection::rotation(), RepSpec::massive(1, 1)),
                                 random_test_section(RepSpec::massive(1, 1), grid(), 5));
  CHECK(r.analytic < 1e-5);
  CHECK(r.curvature > 0.1);
}

TEST_CASE("Newton-Wigner operator") {
  for (int s : {0, 1}) {
    const Section m = random_test_section(RepSpec::massive(1, s), grid(), 6);
    CHECK(nw_match_residual(m) < 1e-12);
    CHECK(nw_gradient_residual(m) < 1e-4);
  }
  CHECK_THROWS_AS(newton_wigner_closed(random_test_section(RepSpec::massless(1), grid(), 6)), ConnectionError);
}

TEST_CASE("parallel frame of the flat connection") {
  const auto g = make_grid(4, 12, 24, 0.9, 1.1);
  const auto frame = parallel_frame(g, RepSpec::massive(1, 1));
  const auto rep = frame_report(frame, 8);
  CHECK(rep.orthonormality < 1e-8);
  CHECK(rep.holonomy_defect < 1e-8);
  CHECK(rep.boost_defect > 1e-3);
  const auto frame0 = parallel_frame(g, RepSpec::massive(1, 0));
  CHECK(frame0.sections.size() == 1);
  CHECK(frame_report(frame0, 4).spin_matrix < 1e-12);
  CHECK_THROWS_AS(parallel_frame(g, RepSpec::massless(1)), ConnectionError);
}

TEST_CASE("affine scan selects lambda = 1") {
  const Section m = random_test_section(RepSpec::massive(1, 1), grid(), 7);
  const auto scan = affine_scan(m, {0.5, 0.9, 1.0, 1.1, 2.0});
  std::size_t best = 0;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan[i].measured < scan[best].measured) best = i;
    CHECK(scan[i].deviation < 1e-5);
  }
  CHECK(scan[best].lambda == 1.0);
}
