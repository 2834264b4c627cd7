#include "splitlab/report/suites.hpp"

#include "splitlab/algebra/identities.hpp"
#include "splitlab/lang/fuzz.hpp"
#include "splitlab/splitting/splitting.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace splitlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kI{0, 1};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Accumulates one value per ladder rung for each named check.
class Collector {
 public:
  explicit Collector(const RunConfig& cfg) : cfg_(cfg) {}

  void rung(const GridDims& d) { dims_ = d; }

  void at_most(const std::string& name, const std::string& anchor, const std::string& desc, double tol, double v,
               bool order = false) {
    auto& r = slot(name, anchor, desc, Compare::AtMost);
    r.tolerance = cfg_.tolerance(name, tol);
    r.order_required = order;
    r.rungs.push_back({dims_, v});
  }
  void at_least(const std::string& name, const std::string& anchor, const std::string& desc, double bound,
                double v) {
    auto& r = slot(name, anchor, desc, Compare::AtLeast);
    r.tolerance = cfg_.tolerance(name, bound);
    r.rungs.push_back({dims_, v});
  }
  void equal(const std::string& name, const std::string& anchor, const std::string& desc, double expected,
             double tol, double v) {
    auto& r = slot(name, anchor, desc, Compare::Equal);
    r.expected = expected;
    r.tolerance = cfg_.tolerance(name, tol);
    r.rungs.push_back({dims_, v});
  }
  void info(const std::string& name, const std::string& anchor, const std::string& desc, double v) {
    slot(name, anchor, desc, Compare::Info).rungs.push_back({dims_, v});
  }
  void note(const std::string& name, const std::string& text) {
    auto it = idx_.find(name);
    if (it == idx_.end()) return;
    auto& n = recs_[it->second].note;
    if (n.find(text) == std::string::npos) n += (n.empty() ? "" : "; ") + text;
  }

  std::vector<CheckRecord> finish() {
    for (auto& r : recs_) {
      if (r.rungs.size() == 1 && r.rungs[0].grid == GridDims{0, 0, 0}) {
        r.measured = r.rungs[0].value;  // not grid based
        r.rungs.clear();
      }
      if (r.order_required && r.rungs.size() < 2) {
        r.order_required = false;
        note(r.name, "single rung: convergence order not estimated");
      }
      r.finalize();
      if (r.non_monotone && r.compare == Compare::AtMost) note(r.name, "non-monotone across the ladder");
    }
    return std::move(recs_);
  }

 private:
  CheckRecord& slot(const std::string& name, const std::string& anchor, const std::string& desc, Compare c) {
    auto it = idx_.find(name);
    if (it != idx_.end()) return recs_[it->second];
    idx_[name] = recs_.size();
    CheckRecord r;
    r.name = name;
    r.anchor = anchor;
    r.description = desc;
    r.compare = c;
    recs_.push_back(std::move(r));
    return recs_.back();
  }

  const RunConfig& cfg_;
  GridDims dims_{0, 0, 0};
  std::vector<CheckRecord> recs_;
  std::map<std::string, std::size_t> idx_;
};

struct Rung {
  GridDims dims;
  GridRef grid;
  bool reference = false;
};

std::vector<Rung> ladder(const RunConfig& cfg) {
  std::vector<Rung> out;
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    const auto& d = cfg.ladder[i];
    out.push_back({d, make_grid(d[0], d[1], d[2], cfg.r_min, cfg.r_max), i + 1 == cfg.ladder.size()});
  }
  return out;
}

Section test_section(const RepSpec& rep, const GridRef& g, const RunConfig& cfg) {
  return random_test_section(rep, g, cfg.seed, parse_profile(cfg.test_profile));
}

Section multiply(const Section& s, const std::function<cplx(std::size_t node)>& f) {
  Section o = s;
  for (std::size_t n = 0; n < s.nodes(); ++n) {
    const cplx w = f(n);
    for (int c = 0; c < s.dim(); ++c) o.at(n, c) *= w;
  }
  return o;
}

double rel(const Section& a, const Section& psi) { return norm(a) / norm(psi); }

// i (f^2/H^2 + (1 - f^2)/|k|^2) J_k psi: curvature of f D^K + (1 - f) D^R on (e_theta, e_phi).
Section predicted_curvature(const Connection& c, const Section& psi) {
  const auto& g = *psi.grid();
  const Section jk = helicity_part(psi);
  return multiply(jk, [&](std::size_t n) {
    const double r = g.radius(n), h = energy(psi.rep(), r), f = c.weight(psi.rep(), r);
    return kI * (f * f / (h * h) + (1 - f * f) / (r * r));
  });
}

std::vector<RepSpec> massive_reps(const RunConfig& cfg) {
  std::vector<RepSpec> out;
  for (const auto& [m, s] : cfg.massive) out.push_back(RepSpec::massive(m, s));
  return out;
}

std::vector<RepSpec> massless_reps(const RunConfig& cfg) {
  std::vector<RepSpec> out;
  for (int h : cfg.massless) out.push_back(RepSpec::massless(h));
  return out;
}

// ---------------------------------------------------------------- symbolic

std::vector<CheckRecord> suite_symbolic(const RunConfig& cfg) {
  Collector col(cfg);
  for (const auto& r : identity_suite()) {
    const std::string name = "symbolic." + r.ring + "." + r.name;
    col.equal(name, r.anchor, "nonzero normal-form components of lhs - rhs (exact)", 0, 0,
              static_cast<double>(r.nonzero_components));
    if (!r.zero) col.note(name, "residual " + r.residual);
  }
  return col.finish();
}

// ---------------------------------------------------------------- algebra

std::vector<CheckRecord> suite_algebra(const RunConfig& cfg) {
  Collector col(cfg);
  for (const auto& rung : ladder(cfg)) {
    col.rung(rung.dims);
    for (const auto& rep : configured_reps(cfg)) {
      const Section psi = test_section(rep, rung.grid, cfg);
      for (const auto& fam : relation_families()) {
        double worst = 0;
        for (const auto& [id, v] : family_residuals(psi, fam)) worst = std::max(worst, v);
        col.at_most("algebra." + rep_tag(rep) + "." + fam, "poincare_algebra",
                    "max relative commutator residual of the family", 1e-3, worst, true);
      }
    }
  }
  return col.finish();
}

// ---------------------------------------------------------------- chern

std::vector<CheckRecord> suite_chern(const RunConfig& cfg) {
  Collector col(cfg);
  struct Kind {
    std::string tag;
    Connection conn;
  };
  Connection perturbed = Connection::boost();
  perturbed.perturbation = 0.3;
  const std::vector<Kind> kinds{{"boost", Connection::boost()},
                                {"rotation", Connection::rotation()},
                                {"affine_0.5", Connection::affine(Profile::constant(0.5))},
                                {"perturbed", perturbed}};
  for (const auto& d : cfg.ladder) {
    col.rung(d);
    for (const auto& rep : massless_reps(cfg)) {
      const std::string base = "chern." + rep_tag(rep);
      const double expected = rep.helicity == 0 ? 0.0 : -2.0 * rep.helicity;
      std::vector<int> values;
      bool all_ok = true;
      for (const auto& k : kinds) {
        ChernOptions opt;
        opt.n_theta = d[1];
        opt.n_phi = d[2];
        opt.radius = cfg.chern_radius;
        opt.substeps = cfg.chern_substeps;
        opt.branch_margin = cfg.chern_branch_margin;
        const std::string name = base + "." + k.tag;
        try {
          const ChernResult r = chern_number(k.conn, rep, opt);
          col.equal(name, "nogo_thm", "lattice Chern number (pre-rounding value) on one shell", expected,
                    0.05, r.raw);
          values.push_back(r.value);
        } catch (const ConnectionError& e) {
          col.equal(name, "nogo_thm", "lattice Chern number (pre-rounding value) on one shell", expected,
                    0.05, kNaN);
          col.note(name, std::to_string(d[1]) + "x" + std::to_string(d[2]) + ": " + e.what());
          all_ok = false;
        }
      }
      const bool same = all_ok && std::all_of(values.begin(), values.end(), [&](int v) { return v == values[0]; });
      col.equal(base + ".connection_independent", "nogo_thm",
                "1 when every connection kind gives the same integer", 1, 0, same ? 1.0 : 0.0);
    }
  }
  return col.finish();
}

// ---------------------------------------------------------------- curvature

std::vector<CheckRecord> suite_curvature(const RunConfig& cfg) {
  Collector col(cfg);
  for (const auto& rung : ladder(cfg)) {
    col.rung(rung.dims);
    const auto& g = *rung.grid;
    const auto th = TangentField::theta(g), ph = TangentField::phi(g);
    for (const auto& rep : configured_reps(cfg)) {
      const std::string tag = rep_tag(rep);
      const Section psi = test_section(rep, rung.grid, cfg);
      const Connection bk = Connection::boost(), br = Connection::rotation();
      const Section fk = curvature_commutator(bk, th, ph, psi);
      const Section fr = curvature_commutator(br, th, ph, psi);
      col.at_most("curvature." + tag + ".boost", "boost_curvature",
                  "||F_K(e_theta,e_phi) psi - (i/H^2) J_k psi|| / ||psi||", 1e-3,
                  rel(fk - predicted_curvature(bk, psi), psi), true);
      col.at_most("curvature." + tag + ".rotation", "rotation_curvature",
                  "||F_R(e_theta,e_phi) psi - (i/|P|^2) J_k psi|| / ||psi||", 1e-3,
                  rel(fr - predicted_curvature(br, psi), psi), true);
      col.at_most("curvature." + tag + ".antisymmetry", "curvature",
                  "||(F_K(e_theta,e_phi) + F_K(e_phi,e_theta)) psi|| / ||psi||", 1e-3,
                  rel(fk + curvature_commutator(bk, ph, th, psi), psi));
      if (rung.reference) {
        GridFunction fz = random_scalar_function(g, cfg.seed + 101);
        std::vector<double> f(fz.size());
        for (std::size_t n = 0; n < f.size(); ++n) f[n] = fz[n].real();
        const Section lhs = curvature_commutator(bk, th.scaled(f), ph, psi);
        col.at_most("curvature." + tag + ".tensoriality", "curvature",
                    "||F_K(f e_theta, e_phi) psi - f F_K(e_theta, e_phi) psi|| / ||psi||", 1e-3,
                    rel(lhs - fk.times(f), psi));
      }
      if (rep.is_massless()) continue;

      const auto cc = cross_commutator_check(psi);
      col.at_most("cross." + tag + ".kr", "F_f", "[D^K_theta, D^R_phi] closed form", 1e-3, cc.kr,
                  true);
      col.at_most("cross." + tag + ".rk", "F_f",
                  "[D^R_theta, D^K_phi] closed form with the J_theta cotangent term", 1e-3, cc.rk, true);
      col.at_most("cross." + tag + ".kr_swapped", "F_f", "[D^R_phi, D^K_theta] closed form", 1e-3,
                  cc.kr_swapped, true);
      col.info("cross." + tag + ".rk_kphi_variant", "F_f",
               "[D^R_theta, D^K_phi] variant with a K_phi cotangent term (does not hold; diagnostic)", cc.rk_kphi);

      const Connection flat = Connection::flat_massive();
      col.at_most("curvature." + tag + ".flat", "F_f", "||F^{H/m}(e_theta,e_phi) psi|| / ||psi||", 1e-3,
                  rel(curvature_commutator(flat, th, ph, psi), psi), true);
      for (double c : {0.0, 0.5, 2.0}) {
        const Connection a = Connection::affine(Profile::constant(c));
        col.at_most("curvature." + tag + ".affine_" + fmt(c), "F_f",
                    "||F^f(e_theta,e_phi) psi - i (f^2/H^2 + (1-f^2)/|P|^2) J_k psi|| / ||psi||, constant f", 1e-3,
                    rel(curvature_commutator(a, th, ph, psi) - predicted_curvature(a, psi), psi), true);
      }
      for (const auto& [pname, table] : cfg.profiles) {
        const std::string name = "curvature." + tag + ".profile." + pname;
        try {
          const Connection a = Connection::affine(Profile::table(table.r, table.f));
          col.at_most(name, "F_f", "F^f against the closed form for a tabulated profile f(|k|)", 1e-3,
                      rel(curvature_commutator(a, th, ph, psi) - predicted_curvature(a, psi), psi));
        } catch (const ConnectionError& e) {
          col.at_most(name, "F_f", "F^f against the closed form for a tabulated profile f(|k|)", 1e-3, kNaN);
          col.note(name, e.what());
        }
      }
    }
  }
  return col.finish();
}

// ---------------------------------------------------------------- flatness

std::vector<CheckRecord> suite_flatness(const RunConfig& cfg) {
  Collector col(cfg);
  for (const auto& rung : ladder(cfg)) {
    col.rung(rung.dims);
    const auto& g = *rung.grid;
    const GridFunction f = random_scalar_function(g, cfg.seed + 202);
    for (const auto& rep : configured_reps(cfg)) {
      const std::string tag = rep_tag(rep);
      const Section psi = test_section(rep, rung.grid, cfg);
      std::vector<std::pair<std::string, Connection>> kinds;
      if (rep.is_massless()) {
        kinds = {{"boost", Connection::boost()}};
      } else {
        kinds = {{"flat", Connection::flat_massive()}, {"boost", Connection::boost()}, {"rotation", Connection::rotation()}};
      }
      for (const auto& [kname, conn] : kinds) {
        const SplitOperators ops(conn, rep);
        const std::string base = "split." + tag + "." + kname;
        const auto vo = vector_op_residual(ops, psi);
        col.at_most(base + ".vector_op.L", "poincare_symm", "max ||([L_a,J_b] - i eps L_c) psi|| / ||psi||",
                    1e-3, vo.L, true);
        col.at_most(base + ".vector_op.S", "poincare_symm", "max ||([S_a,J_b] - i eps S_c) psi|| / ||psi||",
                    1e-3, vo.S, true);
        if (rung.reference) {
          const auto in = internality_residual(ops, f, psi);
          col.at_most(base + ".internal.S", "Leibniz", "max ||S_a(f psi) - f S_a psi|| / ||psi||", 1e-3,
                      in.S);
          const double lt = leibniz_term(f, psi);
          col.at_most(base + ".internal.L_leibniz", "Leibniz",
                      "|L-internality residual - ||psi df(e_a x k)||| relative to the Leibniz term", 1e-3,
                      std::abs(in.L - lt) / lt);
          const auto [l, s] = ops.LS(psi);
          const Triple j = apply_J(psi);
          double dec = 0;
          for (int a = 0; a < 3; ++a) dec = std::max(dec, rel(l[a] + s[a] - j[a], psi));
          col.at_most(base + ".decomposition", "LD", "max ||(L_a + S_a - J_a) psi|| / ||psi||", 1e-12, dec);
        }

        const bool flat = (conn.kind == Connection::Kind::FlatMassive);
        const bool curved = !flat && (rep.is_massless() ? rep.helicity != 0 : rep.spin > 0);
        if (!flat && !curved) continue;
        const auto d = defect_identity(ops, psi);
        if (flat) {
          col.at_most(base + ".so3.L", "curvature_comm", "max ||([L_a,L_b] - i eps L_c) psi|| / ||psi||", 1e-3, d.so3,
                      true);
          col.at_most(base + ".so3.S", "curvature_comm", "max ||([S_a,S_b] - i eps S_c) psi|| / ||psi||", 1e-3,
                      so3_residual(ops, psi).S, true);
          col.at_most(base + ".curvature", "F_f", "max ||F(e_a x k, e_b x k) psi|| / ||psi||", 1e-3, d.curvature, true);
        } else {
          col.at_least(base + ".so3.L", "curvature_comm",
                       "so3 residual of L on a curved bundle (converges to a nonzero value)", 1e-2, d.so3);
          col.at_most(base + ".so3_vs_curvature", "curvature_comm",
                      "|so3 residual - closed-form curvature norm| / closed-form curvature norm", 1e-3,
                      std::abs(d.so3 - d.closed_curvature) / d.closed_curvature, true);
          col.info(base + ".curvature", "curvature_comm", "max ||F(e_a x k, e_b x k) psi|| / ||psi||, measured",
                   d.curvature);
          col.at_most(base + ".defect_identity", "curvature_comm",
                      "max ||([L_a,L_b] - i eps L_c + F(X_a,X_b)) psi|| / ||psi||, measured F", 1e-3, d.identity);
          col.at_most(base + ".defect_closed_form", "curvature_comm",
                      "same identity with F replaced by its closed form", 1e-3, d.analytic, true);
        }
      }
      if (rep.is_massless() && rep.helicity != 0) {
        col.at_most("split." + tag + ".jperp_comm", "J_perp_comm",
                    "max ||([Jperp_a,Jperp_b] - i eps (Jperp_c - Jpar_c)) psi|| / ||psi||", 1e-3,
                    jperp_comm_residual(psi), true);
        col.at_most("split." + tag + ".boost.L_is_jperp", "massless_splitting", "max ||(L^K_a - Jperp_a) psi|| / ||psi||", 1e-3,
                    split_vs_jperp(SplitOperators(Connection::boost(), rep), psi), true);
      }
      if (!rep.is_massless() && rep.spin > 0) {
        col.at_most("split." + tag + ".rotation.L_is_jperp", "LR", "max ||(L^R_a - Jperp_a) psi|| / ||psi||", 1e-3,
                    split_vs_jperp(SplitOperators(Connection::rotation(), rep), psi), true);
        if (rung.reference) {
          Connection broken = Connection::rotation();
          broken.symmetry_breaking = 0.3;
          col.at_least("mutation." + tag + ".symmetry_breaking", "plumbing",
                       "vector-operator residual of L for a rotation connection plus 0.3 i X_z (must be detected)",
                       1e-2, vector_op_residual(SplitOperators(broken, rep), psi).L);
          Connection dropped = Connection::rotation();
          dropped.drop_cross_term = true;
          col.at_least("mutation." + tag + ".dropped_cross_term", "plumbing",
                       "Leibniz residual of D^R without its Phat x J term (must be detected)", 1e-2,
                       std::max(leibniz_residual(dropped, TangentField::theta(g), f, psi),
                                leibniz_residual(dropped, TangentField::phi(g), f, psi)));
        }
      }
    }
  }
  return col.finish();
}

// ---------------------------------------------------------------- newton-wigner

std::vector<CheckRecord> suite_newton_wigner(const RunConfig& cfg) {
  Collector col(cfg);
  for (const auto& rung : ladder(cfg)) {
    col.rung(rung.dims);
    for (const auto& rep : massive_reps(cfg)) {
      const std::string tag = rep_tag(rep);
      const Section psi = test_section(rep, rung.grid, cfg);
      col.at_most("nw." + tag + ".match", "NW_Jordan", "max ||(i D^+_a - Q^NW_a) psi|| / ||psi||", 1e-6,
                  nw_match_residual(psi));
      col.at_most("nw." + tag + ".gradient", "NW_complicated",
                  "max ||w^-1/2 Q_a psi - i d_a (w^-1/2 psi)|| / ||psi|| in the D^+-parallel frame", 1e-6,
                  nw_gradient_residual(psi));
      if (!rung.reference) continue;
      const ParallelFrame frame = parallel_frame(rung.grid, rep);
      const FrameReport fr = frame_report(frame);
      const std::string base = "frame." + tag;
      col.at_most(base + ".orthonormality", "massive_splitting", "max |<E_c,E_d>/w - delta_cd|", 1e-8,
                  fr.orthonormality);
      col.at_most(base + ".spin_matrices", "massive_splitting", "max deviation of S_a in the frame from standard S_a",
                  1e-6, fr.spin_matrix);
      col.at_most(base + ".holonomy_defect", "NW_simple", "max ||U - 1|| of D^+ around the probe loops", 1e-8,
                  fr.holonomy_defect);
      if (rep.spin > 0)
        col.at_least(base + ".boost_holonomy", "boost_curvature",
                     "max ||U - 1|| of D^K around the same loops (Wigner rotation, nonzero)", 1e-3, fr.boost_defect);
      col.note(base + ".orthonormality", "tree: " + frame.tree);
    }
  }
  return col.finish();
}

// ---------------------------------------------------------------- degeneracy

std::vector<CheckRecord> suite_degeneracy(const RunConfig& cfg) {
  Collector col(cfg);
  for (const auto& rung : ladder(cfg)) {
    col.rung(rung.dims);
    const auto& g = *rung.grid;
    for (const auto& rep : configured_reps(cfg)) {
      const std::string tag = rep_tag(rep);
      const Section psi = test_section(rep, rung.grid, cfg);
      const ConnectionApplier dk(Connection::boost(), psi), dr(Connection::rotation(), psi);
      if (rep.is_massless()) {
        double worst = 0;
        for (int i = 0; i < cfg.frames; ++i) {
          const auto x = TangentField::random_smooth(g, cfg.seed + 1000 + i, false);
          worst = std::max(worst, rel(dk.apply(x) - dr.apply(x), psi));
        }
        col.at_most("degeneracy." + tag + ".massless", "massless_degeneracy",
                    "max over random frames X of ||(D^K_X - D^R_X) psi|| / ||psi||", 1e-6, worst);
        if (!rung.reference) continue;
        const auto x = TangentField::random_smooth(g, cfg.seed + 999, false);
        const Section kx = dk.apply(x);
        double fam = 0;
        for (double c : {0.0, 0.5, 1.0, 2.0}) {
          const Section fx = apply_connection(Connection::affine(Profile::constant(c)), x, psi);
          fam = std::max(fam, rel(fx - kx, psi));
        }
        col.at_most("degeneracy." + tag + ".affine_family", "massless_degeneracy",
                    "max over f in {0, 1/2, 1, 2} of ||(D^f_X - D^K_X) psi|| / ||psi||", 1e-6, fam);
      } else if (rep.spin > 0) {
        double lowest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < cfg.frames; ++i) {
          const auto x = TangentField::random_smooth(g, cfg.seed + 1000 + i, true);
          lowest = std::min(lowest, rel(dk.apply(x) - dr.apply(x), psi));
        }
        col.at_least("degeneracy." + tag + ".massive_lower_bound", "massless_degeneracy",
                     "min over transverse random frames X of ||(D^K_X - D^R_X) psi|| / ||psi|| (m > 0)", 1e-3,
                     lowest);
      }
    }
  }
  auto recs = col.finish();
  // Refinement stability of the massive lower bound: relative change over the last ladder step.
  std::vector<CheckRecord> extra;
  for (const auto& r : recs) {
    if (r.name.size() < 20 || r.name.find(".massive_lower_bound") == std::string::npos || r.rungs.size() < 2) continue;
    const double a = r.rungs[r.rungs.size() - 2].value, b = r.rungs.back().value;
    CheckRecord s;
    s.name = r.name + "_stability";
    s.anchor = r.anchor;
    s.description = "|bound(ref) - bound(previous rung)| / bound(ref)";
    s.compare = Compare::AtMost;
    s.tolerance = cfg.tolerance(s.name, 1e-2);
    s.measured = std::abs(a - b) / b;
    s.finalize();
    extra.push_back(std::move(s));
  }
  recs.insert(recs.end(), extra.begin(), extra.end());
  return recs;
}

// ---------------------------------------------------------------- affine

std::vector<CheckRecord> suite_affine(const RunConfig& cfg) {
  Collector col(cfg);
  const auto rungs = ladder(cfg);
  const Rung& ref = rungs.back();
  col.rung(ref.dims);
  for (const auto& rep : massive_reps(cfg)) {
    if (rep.spin == 0) continue;
    const std::string tag = rep_tag(rep);
    const Section psi = test_section(rep, ref.grid, cfg);
    const auto scan = affine_scan(psi, cfg.lambdas);
    double best = kNaN, best_norm = std::numeric_limits<double>::infinity();
    for (const auto& e : scan) {
      const std::string base = "affine." + tag + ".lambda_" + fmt(e.lambda);
      col.info(base + ".measured", "F_f", "||F^f(e_theta,e_phi) psi|| / ||psi||, f = lambda H/m", e.measured);
      col.info(base + ".predicted", "F_f", "||(1 - lambda^2) |k|^-2 J_k psi|| / ||psi||", e.predicted);
      col.at_most(base + ".deviation", "F_f",
                  "||(F^f - predicted operator) psi|| relative to the curvature scale ||J_k psi / |k|^2||", 1e-2,
                  e.deviation / e.scale);
      if (e.predicted > 1e-3 * e.scale)
        col.at_most(base + ".norm_match", "F_f", "|measured - predicted| / predicted", 1e-2,
                    std::abs(e.measured - e.predicted) / e.predicted);
      if (e.measured < best_norm) {
        best_norm = e.measured;
        best = e.lambda;
      }
    }
    col.equal("affine." + tag + ".argmin", "F_f", "lambda minimizing the measured curvature norm", 1.0, 0.0, best);
  }
  return col.finish();
}

// ---------------------------------------------------------------- holonomy

double rotation_angle(const FiberMatrix& u, const RepSpec& rep, const Vec3& axis) {
  const auto s = spin_matrices(rep);
  const FiberMatrix ns = axis[0] * s[0] + axis[1] * s[1] + axis[2] * s[2];
  Eigen::ComplexEigenSolver<FiberMatrix> es(u);
  const FiberMatrix v = es.eigenvectors();
  FiberMatrix lg = FiberMatrix::Zero(u.rows(), u.cols());
  for (int i = 0; i < u.rows(); ++i) lg(i, i) = std::log(es.eigenvalues()[i]);
  const FiberMatrix gen = kI * v * lg * v.inverse();
  return ((gen * ns).trace() / (ns * ns).trace()).real();
}

std::vector<CheckRecord> suite_holonomy(const RunConfig& cfg) {
  Collector col(cfg);
  col.rung(cfg.ladder.back());
  Vec3 axis{cfg.loop_center[0], cfg.loop_center[1], cfg.loop_center[2]};
  const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  for (auto& x : axis) x /= len;
  const double r = cfg.loop_radius;
  for (double area : cfg.loop_areas) {
    const HolonomyLoop loop = HolonomyLoop::cap(r, axis, area, cfg.loop_vertices);
    const std::string at = "A_" + fmt(area);
    for (const auto& rep : massive_reps(cfg)) {
      const std::string base = "holonomy." + rep_tag(rep) + "." + at;
      const FiberMatrix id = FiberMatrix::Identity(rep.dim(), rep.dim());
      const FiberMatrix uf = holonomy(Connection::flat_massive(), rep, loop);
      col.at_most(base + ".flat_defect", "NW_simple", "||U - 1|| of D^+ around the loop", 1e-8, (uf - id).norm());
      if (rep.spin == 0) continue;
      const FiberMatrix uk = holonomy(Connection::boost(), rep, loop);
      const double h = energy(rep, r);
      const double predicted = loop.solid_angle * r * r / (h * h);
      const double alpha = rotation_angle(uk, rep, axis);
      col.info(base + ".boost_angle", "boost_curvature", "Wigner rotation angle of the D^K holonomy", alpha);
      col.at_most(base + ".boost_angle_error", "boost_curvature",
                  "|angle - A |k|^2/H^2| / (A |k|^2/H^2)", 1e-2, std::abs(alpha - predicted) / predicted);
    }
    for (const auto& rep : massless_reps(cfg)) {
      const std::string base = "holonomy." + rep_tag(rep) + "." + at;
      const FiberMatrix uk = holonomy(Connection::boost(), rep, loop);
      const FiberMatrix ur = holonomy(Connection::rotation(), rep, loop);
      double phase = 0, phase_r = 0;
      if (rep.helicity == 0) {
        phase = std::arg(uk(0, 0));
        phase_r = std::arg(ur(0, 0));
      } else {
        const Eigen::Vector3cd e0 = helicity_frame(loop.vertices[0], rep.helicity);
        phase = std::arg(e0.dot(uk * e0));
        phase_r = std::arg(e0.dot(ur * e0));
      }
      const double predicted = -rep.helicity * loop.solid_angle;
      col.info(base + ".phase", "boost_curvature", "helicity phase of the D^K holonomy", phase);
      if (rep.helicity == 0)
        col.at_most(base + ".phase_error", "boost_curvature", "|phase| (scalar bundle is flat)", 1e-8, std::abs(phase));
      else
        col.at_most(base + ".phase_error", "boost_curvature", "|phase + h A| / |h A|", 1e-2,
                    std::abs(phase - predicted) / std::abs(predicted));
      col.at_most(base + ".rotation_matches_boost", "massless_degeneracy", "|phase(D^R) - phase(D^K)|", 1e-8,
                  std::abs(phase_r - phase));
    }
  }
  for (const auto& rep : massive_reps(cfg)) {
    const FiberMatrix u = holonomy(Connection::boost(), rep, HolonomyLoop::degenerate(r, axis));
    col.at_most("holonomy." + rep_tag(rep) + ".degenerate_loop", "plumbing", "||U - 1|| for a zero-area loop", 1e-12,
                (u - FiberMatrix::Identity(rep.dim(), rep.dim())).norm());
  }
  return col.finish();
}

// ---------------------------------------------------------------- parser

std::vector<CheckRecord> suite_parser(const RunConfig& cfg) {
  Collector col(cfg);
  const auto rt = lang::catalog_round_trip();
  col.equal("parser.catalog_round_trip", "plumbing", "catalog expressions whose print-parse-lower differs", 0, 0,
            rt.expressions - rt.identical);
  col.info("parser.catalog_expressions", "plumbing", "catalog expressions printed and re-parsed", rt.expressions);
  if (!rt.first_failure.empty()) col.note("parser.catalog_round_trip", rt.first_failure);
  const auto fz = lang::fuzz(cfg.fuzz_seed, cfg.fuzz_cases);
  col.equal("parser.fuzz_unstructured", "plumbing", "fuzz inputs that raised anything but a structured error", 0, 0,
            fz.unstructured);
  col.equal("parser.fuzz_round_trip", "plumbing", "accepted fuzz inputs whose printed form does not re-lower equal", 0,
            0, fz.round_trip_failures);
  col.info("parser.fuzz_cases", "plumbing", "fuzz cases", fz.cases);
  col.info("parser.fuzz_accepted", "plumbing", "fuzz cases accepted", fz.accepted);
  col.info("parser.fuzz_rejected", "plumbing", "fuzz cases rejected with a structured error", fz.rejected);
  if (!fz.first_failure.empty()) {
    col.note("parser.fuzz_unstructured", fz.first_failure);
    col.note("parser.fuzz_round_trip", fz.first_failure);
  }
  return col.finish();
}

void write_sections(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.sections_dir);
  const auto& d = cfg.ladder.back();
  const GridRef g = make_grid(d[0], d[1], d[2], cfg.r_min, cfg.r_max);
  for (const auto& rep : configured_reps(cfg)) {
    const Section psi = test_section(rep, g, cfg);
    const std::string bin = (fs::path(cfg.sections_dir) / ("test_" + rep_tag(rep) + ".sect")).string();
    write_section(psi, bin);
    std::ofstream(bin + ".json") << section_sidecar_json(psi, bin) << "\n";
  }
}

}  // namespace

std::string rep_tag(const RepSpec& rep) {
  if (rep.is_massless()) {
    if (rep.helicity == 0) return "h0";
    return std::string("h") + (rep.helicity > 0 ? "+" : "-") + std::to_string(std::abs(rep.helicity));
  }
  return "m" + fmt(rep.mass) + "s" + std::to_string(rep.spin);
}

std::vector<RepSpec> configured_reps(const RunConfig& cfg) {
  auto out = massive_reps(cfg);
  for (const auto& r : massless_reps(cfg)) out.push_back(r);
  return out;
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
  using Fn = std::vector<CheckRecord> (*)(const RunConfig&);
  static const std::map<std::string, Fn> table{
      {"symbolic", suite_symbolic},   {"algebra", suite_algebra},       {"chern", suite_chern},
      {"curvature", suite_curvature}, {"flatness", suite_flatness},     {"newton-wigner", suite_newton_wigner},
      {"degeneracy", suite_degeneracy}, {"affine", suite_affine},       {"holonomy", suite_holonomy},
      {"parser", suite_parser}};
  SuiteResult res;
  res.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown suite '" + name + "'");
    res.records = it->second(cfg);
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  res.seconds = seconds_since(t0);
  return res;
}

Report run(const RunConfig& cfg, const std::function<void(const SuiteResult&)>& on_done) {
  cfg.validate();
  Report rep;
  rep.config = cfg;
  const auto t0 = std::chrono::steady_clock::now();
  if (!cfg.sections_dir.empty()) write_sections(cfg);

  const std::size_t n = cfg.suites.size();
  rep.suites.resize(n);
  unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                     : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  std::mutex done_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      rep.suites[i] = run_suite(cfg.suites[i], cfg);
      if (on_done) {
        std::lock_guard lock(done_mu);
        on_done(rep.suites[i]);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  rep.seconds = seconds_since(t0);
  return rep;
}

int exit_code(const Report& r) {
  if (r.crashed()) return kExitCrash;
  return r.failures() == 0 ? 0 : kExitFailures;
}

}  // namespace splitlab
