#include "splitlab/algebra/identities.hpp"

#include <chrono>

namespace splitlab {

namespace {

using Op = OperatorExpr;
using Vec = VectorExpr;

int levi(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1)) ? 1 : -1;
}

Op c(const RingRef& r, long n) { return Op::constant(r, GaussQ(n)); }
Op q(const RingRef& r, long n, long d) { return Op::constant(r, GaussQ(mpq_class(n, d))); }
Op iu(const RingRef& r) { return Op::imag(r); }
Op Hn(const RingRef& r, int n) { return Op::H(r).pow(n); }
Op Rn(const RingRef& r, int n) { return Op::abs_P(r).pow(n); }
Op m_(const RingRef& r) { return Op::mass(r); }

Op component(const Vec& v, int a) { return v[a - 1]; }

// [X_a, Y_b] against i eps_abc Z_c over all nine index pairs.
IdentitySides closure(const RingRef& r, const Vec& x, const Vec& y, const Vec& z, const Op& factor) {
  IdentitySides s;
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) {
      s.lhs.push_back(commutator(component(x, a), component(y, b)));
      Op rhs(r);
      for (int d = 1; d <= 3; ++d)
        if (levi(a, b, d) != 0) rhs = rhs + factor * c(r, levi(a, b, d)) * iu(r) * component(z, d);
      s.rhs.push_back(rhs);
    }
  return s;
}

IdentitySides vec_sides(const Vec& l, const Vec& rr) { return {{l[0], l[1], l[2]}, {rr[0], rr[1], rr[2]}}; }

std::vector<Op> b_family(const RingRef& r) { return {Op::H(r), Op::abs_P(r), Op::H(r) + m_(r)}; }

std::vector<IdentitySpec> build_catalog() {
  std::vector<IdentitySpec> cat;
  const std::string alg = "poincare_algebra";

  cat.push_back({"algebra.JJ", alg, false, [](const RingRef& r) {
                   return closure(r, Vec::J(r), Vec::J(r), Vec::J(r), c(r, 1));
                 }});
  cat.push_back({"algebra.JK", alg, false, [](const RingRef& r) {
                   return closure(r, Vec::J(r), Vec::K(r), Vec::K(r), c(r, 1));
                 }});
  cat.push_back({"algebra.KK", alg, false, [](const RingRef& r) {
                   return closure(r, Vec::K(r), Vec::K(r), Vec::J(r), c(r, -1));
                 }});
  cat.push_back({"algebra.JP", alg, false, [](const RingRef& r) {
                   return closure(r, Vec::J(r), Vec::P(r), Vec::P(r), c(r, 1));
                 }});
  cat.push_back({"algebra.KP", alg, false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a)
                     for (int b = 1; b <= 3; ++b) {
                       s.lhs.push_back(commutator(Op::K(r, a), Op::P(r, b)));
                       s.rhs.push_back(a == b ? iu(r) * Op::H(r) : Op(r));
                     }
                   return s;
                 }});
  cat.push_back({"algebra.KH", alg, false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a) {
                     s.lhs.push_back(commutator(Op::K(r, a), Op::H(r)));
                     s.rhs.push_back(iu(r) * Op::P(r, a));
                   }
                   return s;
                 }});
  cat.push_back({"algebra.JH", alg, false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a) {
                     s.lhs.push_back(commutator(Op::J(r, a), Op::H(r)));
                     s.rhs.push_back(Op(r));
                   }
                   return s;
                 }});
  cat.push_back({"algebra.PH", alg, false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a) {
                     s.lhs.push_back(commutator(Op::P(r, a), Op::H(r)));
                     s.rhs.push_back(Op(r));
                   }
                   return s;
                 }});
  cat.push_back({"algebra.PP", alg, false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a)
                     for (int b = 1; b <= 3; ++b) {
                       s.lhs.push_back(commutator(Op::P(r, a), Op::P(r, b)));
                       s.rhs.push_back(Op(r));
                     }
                   return s;
                 }});
  cat.push_back({"algebra.HH", alg, false, [](const RingRef& r) {
                   return IdentitySides{{commutator(Op::H(r), Op::H(r))}, {Op(r)}};
                 }});
  cat.push_back({"algebra.quotient", alg, false, [](const RingRef& r) {
                   return IdentitySides{{Op::H(r) * Op::H(r)}, {vec_dot(Vec::P(r), Vec::P(r)) + m_(r) * m_(r)}};
                 }});

  cat.push_back({"inverse_comm", "inverse_comm", false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a)
                     for (const Op& b : b_family(r)) {
                       if (b.is_zero()) continue;
                       const Op binv = b.pow(-1);
                       for (const Op& x : {Op::K(r, a), Op::J(r, a)}) {
                         s.lhs.push_back(commutator(x, binv));
                         s.rhs.push_back(-(binv * commutator(x, b) * binv));
                       }
                     }
                   return s;
                 }});
  cat.push_back({"power_comm", "power_comm", false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a)
                     for (const Op& b : b_family(r)) {
                       const Op kb = commutator(Op::K(r, a), b);
                       for (int n = -3; n <= 3; ++n) {
                         s.lhs.push_back(commutator(Op::K(r, a), b.pow(n)));
                         s.rhs.push_back(c(r, n) * kb * b.pow(n - 1));
                       }
                     }
                   return s;
                 }});
  cat.push_back({"comm_Ka_hn", "comm_Ka_hn", false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a)
                     for (int n = -3; n <= 3; ++n) {
                       s.lhs.push_back(commutator(Op::K(r, a), Hn(r, n)));
                       s.rhs.push_back(iu(r) * c(r, n) * Op::P(r, a) * Hn(r, n - 1));
                     }
                   return s;
                 }});
  cat.push_back({"comm_Ka_P", "comm_Ka_P", false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a)
                     for (int n = -3; n <= 3; ++n) {
                       s.lhs.push_back(commutator(Op::K(r, a), Rn(r, n)));
                       s.rhs.push_back(iu(r) * c(r, n) * Op::H(r) * Op::P(r, a) * Rn(r, n - 2));
                     }
                   return s;
                 }});
  cat.push_back({"comm.PdotK_Pa", "generator_commutators", false, [](const RingRef& r) {
                   IdentitySides s;
                   const Op pk = vec_dot(Vec::P(r), Vec::K(r));
                   for (int a = 1; a <= 3; ++a) {
                     s.lhs.push_back(commutator(pk, Op::P(r, a)));
                     s.rhs.push_back(iu(r) * Op::H(r) * Op::P(r, a));
                   }
                   return s;
                 }});
  cat.push_back({"comm.Phat_K", "generator_commutators", false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int a = 1; a <= 3; ++a)
                     for (int b = 1; b <= 3; ++b) {
                       s.lhs.push_back(commutator(Op::Phat(r, a), Op::K(r, b)));
                       Op rhs = iu(r) * Op::H(r) * Op::P(r, a) * Op::P(r, b) * Rn(r, -3);
                       if (a == b) rhs = rhs - iu(r) * Op::H(r) * Rn(r, -1);
                       s.rhs.push_back(rhs);
                     }
                   return s;
                 }});
  cat.push_back({"comm_id_hm_k_hn_p", "comm_id_hm_k_hn_p", false, [](const RingRef& r) {
                   IdentitySides s;
                   for (int mm = -1; mm <= 1; ++mm)
                     for (int n = -1; n <= 1; ++n)
                       for (int a = 1; a <= 3; ++a)
                         for (int b = 1; b <= 3; ++b) {
                           s.lhs.push_back(commutator(Hn(r, mm) * Op::K(r, a), Hn(r, n) * Op::P(r, b)));
                           Op rhs = iu(r) * c(r, n) * Op::P(r, a) * Op::P(r, b) * Hn(r, mm + n - 1);
                           if (a == b) rhs = rhs + iu(r) * Hn(r, mm + n + 1);
                           s.rhs.push_back(rhs);
                         }
                   return s;
                 }});
  cat.push_back({"comm.PhatK_KPhat", "generator_commutators", false, [](const RingRef& r) {
                   return IdentitySides{{vec_dot(Vec::Phat(r), Vec::K(r)) - vec_dot(Vec::K(r), Vec::Phat(r))},
                                        {c(r, -2) * iu(r) * Op::H(r) * Rn(r, -1)}};
                 }});
  cat.push_back({"comm.PK_KP", "generator_commutators", false, [](const RingRef& r) {
                   return IdentitySides{{vec_dot(Vec::P(r), Vec::K(r)) - vec_dot(Vec::K(r), Vec::P(r))},
                                        {c(r, -3) * iu(r) * Op::H(r)}};
                 }});
  cat.push_back({"bac_abc", "bac_abc", false, [](const RingRef& r) {
                   IdentitySides s;
                   const std::vector<Vec> ab = {Vec::P(r), Vec::Phat(r)};
                   const std::vector<Vec> cs = {Vec::J(r), Vec::K(r)};
                   for (const Vec& a : ab)
                     for (const Vec& b : ab)
                       for (const Vec& cc : cs) {
                         const Vec lhs = vec_cross(a, vec_cross(b, cc));
                         const Op ac = vec_dot(a, cc);
                         const Op abd = vec_dot(a, b);
                         for (int k = 0; k < 3; ++k) {
                           s.lhs.push_back(lhs[k]);
                           s.rhs.push_back(b[k] * ac - abd * cc[k]);
                         }
                       }
                   return s;
                 }});
  cat.push_back({"decomp.J", "bac_abc", false, [](const RingRef& r) {
                   const Vec ph = Vec::Phat(r), j = Vec::J(r);
                   const Vec par = ph * vec_dot(ph, j);
                   const Vec perp = -vec_cross(ph, vec_cross(ph, j));
                   return vec_sides(j, par + perp);
                 }});
  cat.push_back({"decomp.K", "K_decomp", false, [](const RingRef& r) {
                   const Vec ph = Vec::Phat(r), k = Vec::K(r);
                   const Vec par = ph * vec_dot(ph, k);
                   const Vec perp = -vec_cross(ph, vec_cross(ph, k));
                   return vec_sides(k, par + perp);
                 }});
  cat.push_back({"rotation.bridge", "DR_1", false, [](const RingRef& r) {
                   const Vec ph = Vec::Phat(r);
                   const Op hinv = Hn(r, -1);
                   const Vec lhs = hinv * ph * vec_dot(ph, Vec::K(r));
                   const Vec rhs = vec_dot(Vec::K(r), ph) * ph * hinv + (iu(r) * Hn(r, -2)) * Vec::P(r) -
                                   (c(r, 2) * iu(r) * Rn(r, -1)) * ph;
                   return vec_sides(lhs, rhs);
                 }});
  cat.push_back({"rotation.forms", "DR_2", false, [](const RingRef& r) {
                   return vec_sides(rotation_connection(r), rotation_connection_sym(r));
                 }});
  cat.push_back({"cartesian_curvature.KK", "boost_curvature", false, [](const RingRef& r) {
                   const Op hi = Hn(r, -1);
                   const Op lhs = commutator(hi * Op::K(r, 1), hi * Op::K(r, 2));
                   const Op rhs = -(iu(r) * Hn(r, -2) * Op::J(r, 3)) +
                                  iu(r) * Hn(r, -3) * (Op::P(r, 2) * Op::K(r, 1) - Op::P(r, 1) * Op::K(r, 2));
                   return IdentitySides{{lhs}, {rhs}};
                 }});
  cat.push_back({"cartesian_curvature.KP", "boost_curvature", false, [](const RingRef& r) {
                   const Op p12 = Op::P(r, 1) * Op::P(r, 2) * Hn(r, -4);
                   return IdentitySides{{commutator(Hn(r, -1) * Op::K(r, 1), Hn(r, -2) * Op::P(r, 2)),
                                         commutator(Hn(r, -2) * Op::P(r, 1), Hn(r, -1) * Op::K(r, 2))},
                                        {c(r, -2) * iu(r) * p12, c(r, 2) * iu(r) * p12}};
                 }});
  cat.push_back({"cartesian_curvature.pointwise", "boost_curvature", false, [](const RingRef& r) {
                   const Vec dk = boost_connection(r);
                   const Op f = commutator(dk[0], dk[1]);
                   IdentitySides s;
                   for (const mpq_class& kappa : {mpq_class(3, 4), mpq_class(2)}) {
                     const Op at = evaluate_at(f, kappa);
                     const RingRef er = at.ring();
                     s.lhs.push_back(at);
                     s.rhs.push_back(iu(er) * Op::H(er).pow(-2) * Op::J(er, 3));
                   }
                   return s;
                 }});
  cat.push_back({"hermiticity.PxJ", "QK_proof", false, [](const RingRef& r) {
                   const Vec pj = vec_cross(Vec::P(r), Vec::J(r));
                   return vec_sides(adjoint(pj), pj - (c(r, 2) * iu(r)) * Vec::P(r));
                 }});
  cat.push_back({"hermiticity.iDK", "DK_b", false, [](const RingRef& r) {
                   const Vec q = iu(r) * boost_connection(r);
                   return vec_sides(adjoint(q), q);
                 }});
  cat.push_back({"hermiticity.iDR", "QK_proof", false, [](const RingRef& r) {
                   const Vec q = iu(r) * rotation_connection(r);
                   return vec_sides(adjoint(q), q);
                 }});
  cat.push_back({"newton_wigner.closed", "NW_Jordan", true, [](const RingRef& r) {
                   return vec_sides(iu(r) * flat_connection(r), newton_wigner_closed(r));
                 }});
  cat.push_back({"newton_wigner.expanded", "NW_complicated", true, [](const RingRef& r) {
                   const Vec p = Vec::P(r);
                   const Op pref = iu(r) * (Op::H(r) * m_(r) * (Op::H(r) + m_(r))).pow(-1);
                   const Vec rhs = -(iu(r) * Hn(r, -1)) * (Vec::K(r) - (iu(r) * q(r, 1, 2) * Hn(r, -1)) * p) +
                                   pref * vec_cross(p, Op::H(r) * Vec::J(r) + vec_cross(p, Vec::K(r)));
                   return vec_sides(flat_connection(r), rhs);
                 }});
  cat.push_back({"newton_wigner.hermitian", "NW_Jordan", true, [](const RingRef& r) {
                   const Vec q = newton_wigner_closed(r);
                   return vec_sides(adjoint(q), q);
                 }});
  return cat;
}

}  // namespace

VectorExpr boost_connection(const RingRef& r) {
  const Op hi = Hn(r, -1);
  return (-(iu(r) * hi)) * (Vec::K(r) - (iu(r) * q(r, 1, 2) * hi) * Vec::P(r));
}

VectorExpr rotation_connection(const RingRef& r) {
  const Vec ph = Vec::Phat(r);
  const Vec inner = Rn(r, -1) * vec_cross(ph, Vec::J(r)) + Hn(r, -1) * ph * vec_dot(ph, Vec::K(r)) -
                    (iu(r) * q(r, 1, 2) * Hn(r, -2)) * Vec::P(r);
  return (-iu(r)) * inner;
}

VectorExpr rotation_connection_sym(const RingRef& r) {
  const Vec ph = Vec::Phat(r);
  const Vec first = Rn(r, -1) * vec_cross(ph, Vec::J(r)) - (iu(r) * Rn(r, -1)) * ph;
  const Vec second = Hn(r, -1) * ph * vec_dot(ph, Vec::K(r)) + vec_dot(Vec::K(r), ph) * ph * Hn(r, -1);
  return (-iu(r)) * first - (iu(r) * q(r, 1, 2)) * second;
}

VectorExpr flat_connection(const RingRef& r) {
  const Op f = Op::H(r) * m_(r).pow(-1);
  return f * boost_connection(r) + (c(r, 1) - f) * rotation_connection(r);
}

VectorExpr newton_wigner_closed(const RingRef& r) {
  const Vec p = Vec::P(r);
  const Op hi = Hn(r, -1);
  const Op pref = (m_(r) * Op::H(r) * (Op::H(r) + m_(r))).pow(-1);
  return hi * (Vec::K(r) - (iu(r) * q(r, 1, 2) * hi) * p) -
         pref * vec_cross(p, Op::H(r) * Vec::J(r) + vec_cross(p, Vec::K(r)));
}

const std::vector<IdentitySpec>& identity_catalog() {
  static const std::vector<IdentitySpec> cat = build_catalog();
  return cat;
}

IdentityResult run_identity(const IdentitySpec& entry, const RingRef& ring) {
  const auto t0 = std::chrono::steady_clock::now();
  IdentityResult res;
  res.name = entry.name;
  res.anchor = entry.anchor;
  res.ring = ring->label;
  const IdentitySides sides = entry.build(ring);
  res.components = sides.lhs.size();
  for (std::size_t k = 0; k < sides.lhs.size(); ++k) {
    const OperatorExpr d = sides.lhs[k] - sides.rhs[k];
    if (!d.is_zero()) {
      if (res.nonzero_components == 0) res.residual = d.debug_str();
      ++res.nonzero_components;
    }
  }
  res.zero = res.nonzero_components == 0;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<IdentityResult> identity_suite(const RingRef& ring) {
  std::vector<IdentityResult> out;
  for (const auto& entry : identity_catalog()) {
    if (entry.needs_mass && ring->massless) continue;
    out.push_back(run_identity(entry, ring));
  }
  return out;
}

std::vector<IdentityResult> identity_suite() {
  auto out = identity_suite(massive_ring());
  auto more = identity_suite(massless_ring());
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

}  // namespace splitlab
