#include <doctest.h>

#include "splitlab/bundle/generators.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

using namespace splitlab;

namespace {
const cplx I(0, 1);
}

TEST_CASE("grid validation and indexing") {
  CHECK_THROWS_AS(MomentumGrid(3, 12, 24, 0.9, 1.1), GridError);
  CHECK_THROWS_AS(MomentumGrid(4, 12, 23, 0.9, 1.1), GridError);
  CHECK_THROWS_AS(MomentumGrid(4, 12, 24, 0.0, 1.1), GridError);
  CHECK_THROWS_AS(MomentumGrid(4, 12, 24, 1.1, 0.9), GridError);
  const MomentumGrid g(5, 8, 16, 0.9, 1.1);
  CHECK(g.size() == 5u * 8 * 16);
  const std::size_t n = g.index(3, 5, 7);
  CHECK(g.r_index(n) == 3);
  CHECK(g.theta_index(n) == 5);
  CHECK(g.phi_index(n) == 7);
  double vol = 0;
  for (std::size_t q = 0; q < g.size(); ++q) vol += g.volume_weight(q);
  CHECK(vol == doctest::Approx(4.0 * M_PI / 3.0 * (1.331 - 0.729)).epsilon(1e-12));
}

TEST_CASE("spectral derivatives") {
  auto g = make_grid(6, 16, 32, 0.9, 1.1);
  const RepSpec rep = RepSpec::massive(1, 0);
  // gradient of a quadratic is exact
  const Section q(g, rep, grid_function(*g, [](const Vec3& k) { return cplx(k[0] * k[1] + 2 * k[2], 0); }));
  const Triple grad = gradient(q);
  double err = 0;
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Vec3 k = g->k(n);
    err = std::max(err, std::abs(grad[0].at(n, 0) - k[1]) + std::abs(grad[1].at(n, 0) - k[0]) +
                            std::abs(grad[2].at(n, 0) - 2.0));
  }
  CHECK(err < 1e-11);

  // an odd function under the pole reflection: e_theta . u, whose theta-derivative is -khat . u
  const Vec3 u{0.3, -0.2, 0.9};
  Section odd(g, rep);
  odd.set_parity(-1);
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Vec3 e = g->e_theta(g->theta_index(n), g->phi_index(n));
    odd.at(n, 0) = e[0] * u[0] + e[1] * u[1] + e[2] * u[2];
  }
  const Partials pd = partials(odd);
  double perr = 0;
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Vec3 kh = g->khat(n);
    perr = std::max(perr, std::abs(pd.dt[n] + (kh[0] * u[0] + kh[1] * u[1] + kh[2] * u[2])));
  }
  CHECK(perr < 1e-11);
  odd.set_parity(1);
  const Partials wrong = partials(odd);
  double werr = 0;
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Vec3 kh = g->khat(n);
    werr = std::max(werr, std::abs(wrong.dt[n] + (kh[0] * u[0] + kh[1] * u[1] + kh[2] * u[2])));
  }
  CHECK(werr > 1e-2);
}

TEST_CASE("sections: arithmetic, compatibility and test data") {
  auto g = make_grid(4, 12, 24, 0.9, 1.1);
  auto g2 = make_grid(4, 12, 24, 0.8, 1.1);
  const Section a = random_test_section(RepSpec::massive(1, 1), g, 3);
  const Section b = random_test_section(RepSpec::massive(1, 1), g, 3);
  CHECK(norm(a - b) == 0.0);
  CHECK(norm(a - random_test_section(RepSpec::massive(1, 1), g, 4)) > 0.0);
  CHECK_THROWS_AS(a + random_test_section(RepSpec::massive(1, 0), g, 3), SectionError);
  CHECK_THROWS_AS(a + random_test_section(RepSpec::massive(1, 1), g2, 3), SectionError);
  Section odd = b;
  odd.set_parity(-1);
  CHECK_THROWS_AS(a + odd, SectionError);
  CHECK(std::abs(inner(a, a) - norm(a) * norm(a)) < 1e-12 * norm(a) * norm(a));

  for (int h : {-1, 1}) {
    const Section t = random_test_section(RepSpec::massless(h), g, 9, TestProfile::MultiBump);
    CHECK(transversality_defect(t) < 1e-14);
    // helicity eigenline: chi psi = h psi
    CHECK(norm(apply_chi(t) - cplx(h, 0) * t) < 1e-12 * norm(t));
  }
  CHECK(parse_profile("multi-bump") == TestProfile::MultiBump);
  CHECK_THROWS(parse_profile("gauss"));
}

TEST_CASE("section binary format round trip") {
  auto g = make_grid(4, 12, 24, 0.9, 1.1);
  const Section s = random_test_section(RepSpec::massless(1), g, 5);
  const auto dir = std::filesystem::temp_directory_path() / "splitlab_test_io";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "psi.sect").string();
  write_section(s, path);
  CHECK(std::filesystem::file_size(path) == 72 + g->size() * 3 * 16);
  const Section r = read_section(path);
  CHECK(r.rep() == s.rep());
  CHECK(r.grid()->same_as(*s.grid()));
  CHECK(norm(r - s) == 0.0);
  const auto side = nlohmann::json::parse(section_sidecar_json(s, path));
  CHECK(side.contains("payload_fnv1a64"));
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_section(path), SectionError);
  std::filesystem::resize_file(path, 100);
  CHECK_THROWS_AS(read_section(path), SectionError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("generator names") {
  CHECK(generator_name(parse_generator("Jperp2")) == "Jperp2");
  CHECK(parse_generator("H").kind == GenKind::H);
  CHECK(parse_generator("chi").kind == GenKind::Chi);
  CHECK_THROWS(parse_generator("J4"));
  CHECK_THROWS(parse_generator("Q1"));
}

TEST_CASE("multiplication operators commute to rounding") {
  auto g = make_grid(4, 12, 24, 0.9, 1.1);
  const Section psi = random_test_section(RepSpec::massive(1, 1), g, 2);
  CHECK(algebra_residual(psi, "PP") < 1e-15);
  CHECK(algebra_residual(psi, "HH") < 1e-15);
  CHECK(algebra_residual(psi, "PH") < 1e-15);
}

TEST_CASE("Poincare algebra converges on every representation") {
  const std::vector<RepSpec> reps{RepSpec::massive(1, 0), RepSpec::massive(1, 1), RepSpec::massless(-1),
                                  RepSpec::massless(0), RepSpec::massless(1)};
  for (const auto& rep : reps) {
    CAPTURE(rep.label());
    double coarse = 0, fine = 0;
    auto g1 = make_grid(4, 12, 24, 0.9, 1.1), g2 = make_grid(6, 24, 48, 0.9, 1.1);
    const Section p1 = random_test_section(rep, g1, 7), p2 = random_test_section(rep, g2, 7);
    for (const auto& fam : relation_families()) {
      const double r1 = algebra_residual(p1, fam), r2 = algebra_residual(p2, fam);
      coarse = std::max(coarse, r1);
      fine = std::max(fine, r2);
      if (fam != "KK" && fam != "KH") CHECK(r2 < 1e-3);
    }
    CHECK(fine < coarse / 4);
  }
}

TEST_CASE("sign of the spin term in K is fixed by the algebra") {
  auto g = make_grid(6, 24, 48, 0.9, 1.1);
  RepSpec rep = RepSpec::massive(1, 1);
  const double good = algebra_residual(random_test_section(rep, g, 7), "KK");
  rep.sigma = 1;
  const double bad = algebra_residual(random_test_section(rep, g, 7), "KK");
  CHECK(good < 1e-2);
  CHECK(bad > 0.5);
}

TEST_CASE("massless constraint drift is detected") {
  auto g = make_grid(4, 12, 24, 0.9, 1.1);
  const RepSpec rep = RepSpec::massless(1);
  Section longitudinal(g, rep);
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Vec3 kh = g->khat(n);
    const double bump = std::exp(4 * (kh[0] - 1));
    for (int c = 0; c < 3; ++c) longitudinal.at(n, c) = kh[c] * bump * (1.0 + I * kh[1]);
  }
  CHECK_THROWS_AS(apply_J(longitudinal), ConstraintDrift);
  CHECK_NOTHROW(apply_J(longitudinal, GeneratorOptions{-1}));
  CHECK_NOTHROW(apply_K(random_test_section(rep, g, 1)));
}
