#pragma once

#include "splitlab/bundle/generators.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace splitlab {

struct ConnectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Radial weight f(|k|) of the affine family f D^K + (1 - f) D^R.
class Profile {
 public:
  static Profile energy_over_mass(double lambda = 1.0);  // lambda * H / m
  static Profile constant(double c);
  // Sampled table (|k|_i, f_i), monotone cubic (PCHIP) interpolation; needs >= 4 strictly increasing nodes.
  static Profile table(std::vector<double> r, std::vector<double> f);
  // "H/m", "-H/m", "lambda*H/m" (e.g. "0.5*H/m"), or a number.
  static Profile parse(const std::string& text);

  double operator()(double r, double mass) const { return eval_(r, mass); }
  const std::string& name() const { return name_; }
  bool needs_mass() const { return needs_mass_; }

 private:
  std::string name_;
  bool needs_mass_ = false;
  std::function<double(double, double)> eval_;
};

// Connections built from the generator actions.
//  Boost:    D^K_X = -i H^-1 (X.K) - (X.P) / (2 H^2)
//  Rotation: D^R_X = -i [ |P|^-1 X.(Phat x J) + H^-1 (X.Phat)(Phat.K) - (i/2) H^-2 (X.P) ]
//  Affine:   f D^K + (1 - f) D^R;  FlatMassive is Affine(H/m) and requires m > 0.
struct Connection {
  enum class Kind { Boost, Rotation, Affine, FlatMassive };
  Kind kind = Kind::Boost;
  std::optional<Profile> profile;  // Affine only
  // Mutation controls. drop_cross_term removes the |P|^-1 Phat x J piece of D^R (breaks Leibniz);
  // symmetry_breaking adds c * (X . e_3) to the connection (breaks rotational symmetry).
  bool drop_cross_term = false;
  double symmetry_breaking = 0.0;
  // Smooth real 1-form perturbation, D_X += i eps (X . v(k)) with v = u x khat + (u . khat) khat x w,
  // used to check connection-independence of the Chern number.
  double perturbation = 0.0;

  static Connection boost() { return {Kind::Boost, std::nullopt}; }
  static Connection rotation() { return {Kind::Rotation, std::nullopt}; }
  static Connection affine(Profile p) { return {Kind::Affine, std::move(p)}; }
  static Connection flat_massive() { return {Kind::FlatMassive, std::nullopt}; }
  static Connection parse(const std::string& name);  // boost | rotation | flat | affine:<profile>
  std::string name() const;

  // Affine weight at radius r (1 for Boost, 0 for Rotation).
  double weight(const RepSpec& rep, double r) const;
  void check(const RepSpec& rep) const;
};

// Tangent vector fields on momentum space (Cartesian components per node).
struct TangentField {
  enum class Named { None, Radial, Theta, Phi, Constant, Rotation };
  std::string name;
  Named named = Named::None;
  Vec3 param{0, 0, 0};  // constant vector, or axis index in param[0] for Rotation
  int parity = 1;       // -1 for e_theta, e_phi (see Section::parity)
  std::vector<Vec3> v;

  static TangentField radial(const MomentumGrid& g);            // e_k
  static TangentField theta(const MomentumGrid& g);             // e_theta
  static TangentField phi(const MomentumGrid& g);               // e_phi
  static TangentField constant(const MomentumGrid& g, Vec3 u);  // u
  static TangentField rotation(const MomentumGrid& g, int a);   // e_a x k, a in 1..3
  static TangentField random_smooth(const MomentumGrid& g, std::uint64_t seed, bool tangential);
  static TangentField zero(const MomentumGrid& g);
  TangentField scaled(const std::vector<double>& f) const;
};

// Jacobi-Lie bracket; analytic for named frame pairs, spectral differencing otherwise.
TangentField bracket(const MomentumGrid& g, const TangentField& x, const TangentField& y);

// Gradient of a scalar grid function (same scheme as the generator actions).
std::array<GridFunction, 3> scalar_gradient(const MomentumGrid& g, const GridFunction& f, int parity = 1);

// Generator data reused across several directions X for a fixed section.
class ConnectionApplier {
 public:
  ConnectionApplier(const Connection& c, const Section& psi);
  Section apply(const TangentField& x) const;

 private:
  Connection conn_;
  Section psi_;
  Triple k_, j_;
  bool need_k_ = false, need_j_ = false;
};

Section apply_connection(const Connection& c, const TangentField& x, const Section& psi);

double leibniz_residual(const Connection& c, const TangentField& x, const GridFunction& f, const Section& psi);

// F(X, Y) psi = D_X D_Y psi - D_Y D_X psi - D_[X,Y] psi
Section curvature_commutator(const Connection& c, const TangentField& x, const TangentField& y, const Section& psi);

// Pointwise fiber operators used by curvature predictions.
Section helicity_part(const Section& psi);  // J_k psi = (khat . S) psi

// Connection form: D_X psi = X . grad psi + A(X) psi at a point k (fiber matrix).
FiberMatrix connection_form(const Connection& c, const RepSpec& rep, const Vec3& k, const Vec3& x);

struct CrossCommutatorReport {
  double kr = 0;          // [D^K_th, D^R_ph] - i J_k/|P|^2 - (i cot/(H|P|)) K_ph
  double rk = 0;          // [D^R_th, D^K_ph] - i J_k/|P|^2 - (i cot/|P|^2) J_th
  double kr_swapped = 0;  // [D^R_ph, D^K_th] + i J_k/|P|^2 + (i cot/(H|P|)) K_ph
  double rk_kphi = 0;     // variant with K_ph in place of J_th; does not hold
};
CrossCommutatorReport cross_commutator_check(const Section& psi);

// Closed spherical polygon on one shell; edges are great-circle arcs.
struct HolonomyLoop {
  double radius = 1.0;
  std::vector<Vec3> vertices;  // unit vectors, counterclockwise seen from outside
  double solid_angle = 0.0;    // spherical excess
  static HolonomyLoop cap(double radius, const Vec3& center, double solid_angle, int n_vertices = 64);
  static HolonomyLoop degenerate(double radius, const Vec3& at);
};
double spherical_polygon_area(const std::vector<Vec3>& vertices);

struct TransportOptions {
  double max_step = 0.25 * 3.14159265358979323846 / 48;  // angular step (radians): mesh spacing / 4
  double unitarity_tol = 1e-6;
};

// End-to-start fiber map of parallel transport D_{dk/dt} psi = 0 around the loop (classic RK4).
FiberMatrix holonomy(const Connection& c, const RepSpec& rep, const HolonomyLoop& loop, const TransportOptions& opt = {});

// Transport along a path k(t), t in [0, 1], with derivative dk(t).
FiberMatrix transport(const Connection& c, const RepSpec& rep, const std::function<Vec3(double)>& k,
                      const std::function<Vec3(double)>& dk, int steps);

struct ChernResult {
  int value = 0;
  double raw = 0;
  double max_plaquette_phase = 0;
  int plaquettes = 0;
};
struct ChernOptions {
  int n_theta = 48;
  int n_phi = 96;
  double radius = 1.0;
  int substeps = 4;
  double branch_margin = 0.5;
};
ChernResult chern_number(const Connection& c, const RepSpec& rep, const ChernOptions& opt = {});

// Unit vector spanning the helicity-h line at khat (massless |h| = 1) in some fixed local gauge.
Eigen::Vector3cd helicity_frame(const Vec3& khat, int h);

}  // namespace splitlab
