#pragma once

#include "splitlab/connection/connection.hpp"

#include <vector>

namespace splitlab {

// L_a = -i D_{e_a x k},  S_a = J_a - L_a.
class SplitOperators {
 public:
  SplitOperators(Connection c, RepSpec rep);

  const Connection& connection() const { return conn_; }
  const RepSpec& rep() const { return rep_; }

  Triple L(const Section& psi) const;
  Triple S(const Section& psi) const;
  // Both at once; shares the J application.
  std::pair<Triple, Triple> LS(const Section& psi) const;

 private:
  Connection conn_;
  RepSpec rep_;
};

struct PairResidual {
  double L = 0;
  double S = 0;
};

// max_{a,b} ||([X_a, J_b] - i eps_abc X_c) psi|| / ||psi||, X in {L, S}.
PairResidual vector_op_residual(const SplitOperators& ops, const Section& psi);
// max_{a<b} ||([X_a, X_b] - i eps_abc X_c) psi|| / ||psi||.
PairResidual so3_residual(const SplitOperators& ops, const Section& psi);
// max_a ||X_a(f psi) - f X_a psi|| / ||psi||.
PairResidual internality_residual(const SplitOperators& ops, const GridFunction& f, const Section& psi);
// max_a ||psi df(e_a x k)|| / ||psi||: the expected L-part of internality_residual.
double leibniz_term(const GridFunction& f, const Section& psi);

struct DefectReport {
  double identity = 0;   // max_{a<b} ||([L_a,L_b] - i eps L_c + F(e_a x k, e_b x k)) psi|| / ||psi||
  double curvature = 0;  // max_{a<b} ||F(e_a x k, e_b x k) psi|| / ||psi||
  double so3 = 0;        // so3_residual(...).L
  // Same identity with F replaced by its closed form i |k|^2 eps_abc khat_c (f^2/H^2 + (1 - f^2)/|k|^2) J_k.
  double analytic = 0;
  double closed_curvature = 0;  // max_{a<b} ||closed-form F psi|| / ||psi||
};
DefectReport defect_identity(const SplitOperators& ops, const Section& psi);

// Massless: max_{a<b} ||([Jperp_a, Jperp_b] - i eps_abc (Jperp_c - Jpar_c)) psi|| / ||psi||.
double jperp_comm_residual(const Section& psi);

// ||(L_a - Y_a) psi|| / ||psi|| maximized over a, with Y the transverse angular momentum J - khat chi.
double split_vs_jperp(const SplitOperators& ops, const Section& psi);

// Newton-Wigner position operator in closed form:
//   Q = H^-1 (K - P / 2H) - (m H (H + m))^-1 P x (H J + P x K).
Triple newton_wigner_closed(const Section& psi);
// i D^+_{e_a} psi.
Triple newton_wigner_connection(const Section& psi);
// max_a ||(i D^+_{e_a} - Q_a) psi|| / ||psi||.
double nw_match_residual(const Section& psi);
// In the D^+-parallel frame (components w^{-1/2} psi), Q acts as i grad:
// max_a ||w^{-1/2} Q_a psi - i d_a (w^{-1/2} psi)|| / ||psi||.
double nw_gradient_residual(const Section& psi);

struct ParallelFrame {
  GridRef grid;
  RepSpec rep;
  std::size_t reference = 0;
  std::string tree;                 // spanning-tree description
  std::vector<Section> sections;    // d frame sections
};

// D^+-parallel transport of the standard fiber basis from the reference node along meridian, latitude and
// radial edges; substeps RK4 steps per edge.
ParallelFrame parallel_frame(const GridRef& grid, const RepSpec& rep, int substeps = 4);

struct FrameReport {
  double orthonormality = 0;  // max over nodes of |<E_c, E_d>/w - delta_cd|
  double spin_matrix = 0;     // max over sampled nodes, a of |[S_a in frame] - standard S_a|
  double holonomy_defect = 0; // max ||U - 1|| of D^+ around the probe loops
  double boost_defect = 0;    // max ||U - 1|| of D^K around the same loops
  int sampled_nodes = 0;
};
FrameReport frame_report(const ParallelFrame& frame, int samples = 16);

struct AffineScanEntry {
  double lambda = 0;
  double measured = 0;    // ||F^f(e_theta, e_phi) psi|| / ||psi||
  double predicted = 0;   // ||(1 - lambda^2) |k|^-2 J_k psi|| / ||psi||
  double deviation = 0;   // ||(F^f - predicted operator) psi|| / ||psi||
  double scale = 0;       // ||J_k psi / |k|^2|| / ||psi||
};
// f = lambda H / m; requires m > 0.
std::vector<AffineScanEntry> affine_scan(const Section& psi, const std::vector<double>& lambdas);

}  // namespace splitlab
