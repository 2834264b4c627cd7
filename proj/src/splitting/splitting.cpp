#include "splitlab/splitting/splitting.hpp"

#include <cmath>

namespace splitlab {

namespace {

const cplx I(0, 1);
const GeneratorOptions kLoose{-1};

double eps(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

int third(int a, int b) { return 3 - a - b; }

double rel(const Section& s, double base) { return norm(s) / base; }

Section scaled_by(const Section& s, const std::function<cplx(std::size_t)>& f) {
  Section out = s;
  for (std::size_t n = 0; n < s.nodes(); ++n)
    for (int c = 0; c < s.dim(); ++c) out.at(n, c) *= f(n);
  return out;
}

}  // namespace

SplitOperators::SplitOperators(Connection c, RepSpec rep) : conn_(std::move(c)), rep_(rep) { conn_.check(rep_); }

Triple SplitOperators::L(const Section& psi) const {
  const MomentumGrid& g = *psi.grid();
  const ConnectionApplier app(conn_, psi);
  Triple out;
  for (int a = 0; a < 3; ++a) out[a] = -I * app.apply(TangentField::rotation(g, a + 1));
  return out;
}

std::pair<Triple, Triple> SplitOperators::LS(const Section& psi) const {
  Triple l = L(psi);
  Triple s = apply_J(psi, kLoose);
  for (int a = 0; a < 3; ++a) s[a] -= l[a];
  return {std::move(l), std::move(s)};
}

Triple SplitOperators::S(const Section& psi) const { return LS(psi).second; }

PairResidual vector_op_residual(const SplitOperators& ops, const Section& psi) {
  const double base = norm(psi);
  const auto [l, s] = ops.LS(psi);
  const Triple j = apply_J(psi, kLoose);
  std::array<Triple, 3> jl, js, lj, sj;  // jl[a][b] = J_b L_a psi, lj[b][a] = L_a J_b psi
  for (int a = 0; a < 3; ++a) {
    jl[a] = apply_J(l[a], kLoose);
    js[a] = apply_J(s[a], kLoose);
    std::tie(lj[a], sj[a]) = ops.LS(j[a]);
  }
  PairResidual res;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Section rl = lj[b][a] - jl[a][b];
      Section rs = sj[b][a] - js[a][b];
      if (a != b) {
        const int c = third(a, b);
        rl -= (I * eps(a, b, c)) * l[c];
        rs -= (I * eps(a, b, c)) * s[c];
      }
      res.L = std::max(res.L, rel(rl, base));
      res.S = std::max(res.S, rel(rs, base));
    }
  return res;
}

PairResidual so3_residual(const SplitOperators& ops, const Section& psi) {
  const double base = norm(psi);
  const auto [l, s] = ops.LS(psi);
  std::array<Triple, 3> ll, ss;  // ll[a][b] = L_b L_a psi
  for (int a = 0; a < 3; ++a) {
    ll[a] = ops.L(l[a]);
    ss[a] = ops.S(s[a]);
  }
  PairResidual res;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const int c = third(a, b);
      const Section rl = ll[b][a] - ll[a][b] - (I * eps(a, b, c)) * l[c];
      const Section rs = ss[b][a] - ss[a][b] - (I * eps(a, b, c)) * s[c];
      res.L = std::max(res.L, rel(rl, base));
      res.S = std::max(res.S, rel(rs, base));
    }
  return res;
}

PairResidual internality_residual(const SplitOperators& ops, const GridFunction& f, const Section& psi) {
  const double base = norm(psi);
  const auto [l1, s1] = ops.LS(psi.times(f));
  const auto [l0, s0] = ops.LS(psi);
  PairResidual res;
  for (int a = 0; a < 3; ++a) {
    res.L = std::max(res.L, rel(l1[a] - l0[a].times(f), base));
    res.S = std::max(res.S, rel(s1[a] - s0[a].times(f), base));
  }
  return res;
}

double leibniz_term(const GridFunction& f, const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const auto grad = scalar_gradient(g, f);
  double worst = 0;
  for (int a = 0; a < 3; ++a) {
    const TangentField x = TangentField::rotation(g, a + 1);
    GridFunction df(g.size());
    for (std::size_t n = 0; n < g.size(); ++n)
      df[n] = x.v[n][0] * grad[0][n] + x.v[n][1] * grad[1][n] + x.v[n][2] * grad[2][n];
    worst = std::max(worst, norm(psi.times(df)) / norm(psi));
  }
  return worst;
}

DefectReport defect_identity(const SplitOperators& ops, const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const double base = norm(psi);
  const Triple l = ops.L(psi);
  std::array<Triple, 3> ll;
  for (int a = 0; a < 3; ++a) ll[a] = ops.L(l[a]);
  const RepSpec& rs = psi.rep();
  const Section jk = helicity_part(psi);
  DefectReport rep;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const int c = third(a, b);
      const Section comm = ll[b][a] - ll[a][b] - (I * eps(a, b, c)) * l[c];
      const Section f = curvature_commutator(ops.connection(), TangentField::rotation(g, a + 1),
                                             TangentField::rotation(g, b + 1), psi);
      rep.identity = std::max(rep.identity, rel(comm + f, base));
      rep.curvature = std::max(rep.curvature, rel(f, base));
      rep.so3 = std::max(rep.so3, rel(comm, base));
      const Section closed = scaled_by(jk, [&](std::size_t n) {
        const double r = g.radius(n), w = energy(rs, r), fw = ops.connection().weight(rs, r);
        return I * r * r * eps(a, b, c) * g.khat(n)[c] * (fw * fw / (w * w) + (1 - fw * fw) / (r * r));
      });
      rep.analytic = std::max(rep.analytic, rel(comm + closed, base));
      rep.closed_curvature = std::max(rep.closed_curvature, rel(closed, base));
    }
  return rep;
}

double jperp_comm_residual(const Section& psi) {
  const double base = norm(psi);
  Triple perp, par;
  std::array<Triple, 3> pp;  // pp[a][b] = Jperp_b Jperp_a psi
  for (int a = 0; a < 3; ++a) {
    perp[a] = apply_generator(psi, {GenKind::Jperp, a + 1}, kLoose);
    par[a] = apply_generator(psi, {GenKind::Jpar, a + 1}, kLoose);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) pp[a][b] = apply_generator(perp[a], {GenKind::Jperp, b + 1}, kLoose);
  double worst = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const int c = third(a, b);
      const Section r = pp[b][a] - pp[a][b] - (I * eps(a, b, c)) * (perp[c] - par[c]);
      worst = std::max(worst, rel(r, base));
    }
  return worst;
}

double split_vs_jperp(const SplitOperators& ops, const Section& psi) {
  const double base = norm(psi);
  const Triple l = ops.L(psi);
  double worst = 0;
  for (int a = 0; a < 3; ++a)
    worst = std::max(worst, rel(l[a] - apply_generator(psi, {GenKind::Jperp, a + 1}, kLoose), base));
  return worst;
}

Triple newton_wigner_closed(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const RepSpec& rep = psi.rep();
  if (!(rep.mass > 0)) throw ConnectionError("the Newton-Wigner operator needs m > 0");
  const double m = rep.mass;
  const Triple k = apply_K(psi, kLoose), j = apply_J(psi, kLoose);
  Triple out{psi.zeros_like(), psi.zeros_like(), psi.zeros_like()};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3 p = g.k(n);
    const double w = energy(rep, g.radius(n));
    for (int c = 0; c < psi.dim(); ++c) {
      std::array<cplx, 3> pk{}, v{};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int e = 0; e < 3; ++e) pk[a] += eps(a, b, e) * p[b] * k[e].at(n, c);
      for (int a = 0; a < 3; ++a) v[a] = w * j[a].at(n, c) + pk[a];
      for (int a = 0; a < 3; ++a) {
        cplx pv(0, 0);
        for (int b = 0; b < 3; ++b)
          for (int e = 0; e < 3; ++e) pv += eps(a, b, e) * p[b] * v[e];
        out[a].at(n, c) = (k[a].at(n, c) - I * p[a] / (2 * w) * psi.at(n, c)) / w - pv / (m * w * (w + m));
      }
    }
  }
  return out;
}

Triple newton_wigner_connection(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const ConnectionApplier app(Connection::flat_massive(), psi);
  Triple out;
  for (int a = 0; a < 3; ++a) {
    Vec3 e{0, 0, 0};
    e[a] = 1;
    out[a] = I * app.apply(TangentField::constant(g, e));
  }
  return out;
}

double nw_match_residual(const Section& psi) {
  const Triple q1 = newton_wigner_connection(psi), q2 = newton_wigner_closed(psi);
  double worst = 0;
  for (int a = 0; a < 3; ++a) worst = std::max(worst, rel(q1[a] - q2[a], norm(psi)));
  return worst;
}

double nw_gradient_residual(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const RepSpec& rep = psi.rep();
  auto inv_sqrt_w = [&](std::size_t n) { return cplx(1.0 / std::sqrt(energy(rep, g.radius(n))), 0); };
  const Triple q = newton_wigner_closed(psi);
  const Section phi = scaled_by(psi, inv_sqrt_w);
  const Triple grad = gradient(phi);
  double worst = 0;
  for (int a = 0; a < 3; ++a) worst = std::max(worst, rel(scaled_by(q[a], inv_sqrt_w) - I * grad[a], norm(psi)));
  return worst;
}

ParallelFrame parallel_frame(const GridRef& grid, const RepSpec& rep, int substeps) {
  const MomentumGrid& g = *grid;
  const Connection plus = Connection::flat_massive();
  plus.check(rep);
  const int nr = g.n_r(), nt = g.n_theta(), np = g.n_phi(), d = rep.dim();
  const int ir0 = nr / 2, it0 = nt / 2, ip0 = 0;
  const double r0 = g.r(ir0);
  auto point = [](double r, double t, double p) {
    return Vec3{r * std::sin(t) * std::cos(p), r * std::sin(t) * std::sin(p), r * std::cos(t)};
  };
  auto meridian = [&](double r, double t0, double t1, double p) {
    return transport(
        plus, rep, [&](double s) { return point(r, t0 + s * (t1 - t0), p); },
        [&](double s) {
          const double t = t0 + s * (t1 - t0), dt = t1 - t0;
          return Vec3{r * dt * std::cos(t) * std::cos(p), r * dt * std::cos(t) * std::sin(p), -r * dt * std::sin(t)};
        },
        substeps);
  };
  auto latitude = [&](double r, double t, double p0, double p1) {
    return transport(
        plus, rep, [&](double s) { return point(r, t, p0 + s * (p1 - p0)); },
        [&](double s) {
          const double p = p0 + s * (p1 - p0), dp = p1 - p0;
          return Vec3{-r * dp * std::sin(t) * std::sin(p), r * dp * std::sin(t) * std::cos(p), 0.0};
        },
        substeps);
  };
  auto radial = [&](double ra, double rb, double t, double p) {
    const Vec3 u = point(1.0, t, p);
    return transport(
        plus, rep, [&](double s) { return point(ra + s * (rb - ra), t, p); },
        [&](double) { return Vec3{(rb - ra) * u[0], (rb - ra) * u[1], (rb - ra) * u[2]}; }, substeps);
  };

  std::vector<FiberMatrix> u(g.size());
  const double w0 = energy(rep, r0);
  u[g.index(ir0, it0, ip0)] = FiberMatrix::Identity(d, d) * std::sqrt(w0);
  // meridian through the reference node
  for (int it = it0 + 1; it < nt; ++it)
    u[g.index(ir0, it, ip0)] = meridian(r0, g.theta(it - 1), g.theta(it), g.phi(ip0)) * u[g.index(ir0, it - 1, ip0)];
  for (int it = it0 - 1; it >= 0; --it)
    u[g.index(ir0, it, ip0)] = meridian(r0, g.theta(it + 1), g.theta(it), g.phi(ip0)) * u[g.index(ir0, it + 1, ip0)];
  // latitudes
  for (int it = 0; it < nt; ++it)
    for (int ip = ip0 + 1; ip < np; ++ip)
      u[g.index(ir0, it, ip)] = latitude(r0, g.theta(it), g.phi(ip - 1), g.phi(ip)) * u[g.index(ir0, it, ip - 1)];
  // radial spokes
  for (int it = 0; it < nt; ++it)
    for (int ip = 0; ip < np; ++ip) {
      for (int ir = ir0 + 1; ir < nr; ++ir)
        u[g.index(ir, it, ip)] = radial(g.r(ir - 1), g.r(ir), g.theta(it), g.phi(ip)) * u[g.index(ir - 1, it, ip)];
      for (int ir = ir0 - 1; ir >= 0; --ir)
        u[g.index(ir, it, ip)] = radial(g.r(ir + 1), g.r(ir), g.theta(it), g.phi(ip)) * u[g.index(ir + 1, it, ip)];
    }

  ParallelFrame frame;
  frame.grid = grid;
  frame.rep = rep;
  frame.reference = g.index(ir0, it0, ip0);
  frame.tree = "meridian phi=" + std::to_string(g.phi(ip0)) + " through the reference node, then latitudes in +phi, then radial spokes";
  for (int c = 0; c < d; ++c) {
    Section e(grid, rep);
    for (std::size_t n = 0; n < g.size(); ++n)
      for (int q = 0; q < d; ++q) e.at(n, q) = u[n](q, c);
    frame.sections.push_back(std::move(e));
  }
  return frame;
}

FrameReport frame_report(const ParallelFrame& frame, int samples) {
  const MomentumGrid& g = *frame.grid;
  const RepSpec& rep = frame.rep;
  const int d = rep.dim();
  FrameReport out;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double w = energy(rep, g.radius(n));
    for (int c = 0; c < d; ++c)
      for (int e = 0; e < d; ++e) {
        cplx ip(0, 0);
        for (int q = 0; q < d; ++q) ip += std::conj(frame.sections[c].at(n, q)) * frame.sections[e].at(n, q);
        out.orthonormality = std::max(out.orthonormality, std::abs(ip / w - (c == e ? 1.0 : 0.0)));
      }
  }
  const SplitOperators ops(Connection::flat_massive(), rep);
  std::vector<Triple> s;
  for (int c = 0; c < d; ++c) s.push_back(ops.S(frame.sections[c]));
  const auto standard = spin_matrices(rep);
  const std::size_t stride = std::max<std::size_t>(1, g.size() / static_cast<std::size_t>(samples));
  for (std::size_t n = stride / 2; n < g.size(); n += stride) {
    ++out.sampled_nodes;
    const double w = energy(rep, g.radius(n));
    for (int a = 0; a < 3; ++a) {
      FiberMatrix m(d, d);
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          cplx ip(0, 0);
          for (int q = 0; q < d; ++q) ip += std::conj(frame.sections[c].at(n, q)) * s[e][a].at(n, q);
          m(c, e) = ip / w;
        }
      out.spin_matrix = std::max(out.spin_matrix, (m - standard[a]).cwiseAbs().maxCoeff());
    }
  }
  const double r = g.r(g.n_r() / 2);
  const std::vector<Vec3> centers{{0, 0, 1}, {1, 0, 0}, {0.6, -0.48, 0.64}};
  for (const Vec3& c : centers)
    for (double area : {0.01, 0.05}) {
      const HolonomyLoop loop = HolonomyLoop::cap(r, c, area);
      const FiberMatrix id = FiberMatrix::Identity(d, d);
      out.holonomy_defect = std::max(out.holonomy_defect, (holonomy(Connection::flat_massive(), rep, loop) - id).norm());
      out.boost_defect = std::max(out.boost_defect, (holonomy(Connection::boost(), rep, loop) - id).norm());
    }
  return out;
}

std::vector<AffineScanEntry> affine_scan(const Section& psi, const std::vector<double>& lambdas) {
  const MomentumGrid& g = *psi.grid();
  if (!(psi.rep().mass > 0)) throw ConnectionError("the affine scan f = lambda H/m needs m > 0");
  const double base = norm(psi);
  const TangentField th = TangentField::theta(g), ph = TangentField::phi(g);
  const Section jk = scaled_by(helicity_part(psi), [&](std::size_t n) { return I / (g.radius(n) * g.radius(n)); });
  std::vector<AffineScanEntry> out;
  for (double lam : lambdas) {
    const Section f = curvature_commutator(Connection::affine(Profile::energy_over_mass(lam)), th, ph, psi);
    const Section pred = (1 - lam * lam) * jk;
    AffineScanEntry e;
    e.lambda = lam;
    e.measured = rel(f, base);
    e.predicted = rel(pred, base);
    e.deviation = rel(f - pred, base);
    e.scale = rel(jk, base);
    out.push_back(e);
  }
  return out;
}

}  // namespace splitlab
