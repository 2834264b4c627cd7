#pragma once

#include "splitlab/bundle/grid.hpp"
#include "splitlab/bundle/rep.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace splitlab {

using cplx = std::complex<double>;
// Complex scalar function sampled at grid nodes.
using GridFunction = std::vector<cplx>;

struct SectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fiber values at every node, component index innermost: data[node * dim + c].
class Section {
 public:
  Section() = default;
  Section(GridRef grid, RepSpec rep);
  Section(GridRef grid, RepSpec rep, std::vector<cplx> data);

  const GridRef& grid() const { return grid_; }
  const RepSpec& rep() const { return rep_; }
  int dim() const { return dim_; }
  std::size_t nodes() const { return grid_->size(); }
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }
  cplx& at(std::size_t node, int c) { return data_[node * dim_ + c]; }
  const cplx& at(std::size_t node, int c) const { return data_[node * dim_ + c]; }

  Section zeros_like() const {
    Section z(grid_, rep_);
    z.parity_ = parity_;
    return z;
  }
  // Sign picked up under the pole reflection (theta, phi) -> (-theta, phi + pi) of the doubled polar circle.
  // Cartesian components of smooth fields are even; contracting with e_theta or e_phi makes them odd.
  int parity() const { return parity_; }
  void set_parity(int p) { parity_ = p; }
  Section& operator+=(const Section& o);
  Section& operator-=(const Section& o);
  Section& operator*=(cplx s);
  friend Section operator+(Section a, const Section& b) { return a += b; }
  friend Section operator-(Section a, const Section& b) { return a -= b; }
  friend Section operator*(cplx s, Section a) { return a *= s; }
  Section times(const GridFunction& f) const;
  Section times(const std::vector<double>& f) const;

  void check_compatible(const Section& o) const;

 private:
  GridRef grid_;
  RepSpec rep_;
  int dim_ = 0;
  int parity_ = 1;
  std::vector<cplx> data_;
};

// <psi, phi> = integral conj(psi) . phi d^3k / w(k), w = sqrt(|k|^2 + m^2).
cplx inner(const Section& psi, const Section& phi);
double norm(const Section& psi);
double max_abs(const Section& psi);
// max over nodes of |khat . psi| (massless |h| = 1 only; 0 otherwise).
double transversality_defect(const Section& psi);

double energy(const RepSpec& rep, double r);
GridFunction grid_function(const MomentumGrid& g, const std::function<cplx(const Vec3& k)>& f);

enum class TestProfile { GaussianBump, MultiBump };
TestProfile parse_profile(const std::string& name);
std::string profile_name(TestProfile p);

// Smooth deterministic test section: angular von Mises bumps centered away from the poles, times a
// radial profile that vanishes at both shell boundaries. Massless |h| = 1 outputs are projected onto the
// transverse helicity-h eigenline at every node.
Section random_test_section(const RepSpec& rep, const GridRef& grid, std::uint64_t seed,
                            TestProfile profile = TestProfile::GaussianBump);
// Smooth real scalar test function (Gaussian bump) for Leibniz and internality checks.
GridFunction random_scalar_function(const MomentumGrid& g, std::uint64_t seed);

// Binary layout (all little-endian):
//   offset  0: magic "SPLSECT1" (8 bytes)
//   offset  8: uint32 format version (1)
//   offset 12: uint32 kind (0 massive, 1 massless)
//   offset 16: int32 spin, int32 helicity, int32 boost sign
//   offset 28: uint32 fiber dimension
//   offset 32: float64 mass, float64 r_min, float64 r_max
//   offset 56: uint32 n_r, n_theta, n_phi
//   offset 68: uint32 scalar size in bytes (16: complex128)
//   offset 72: payload, nodes * dim complex values (real, imag) in node order, component innermost.
void write_section(const Section& s, const std::string& path);
Section read_section(const std::string& path);
// JSON sidecar describing the binary file (layout, rep, grid, norm, checksum).
std::string section_sidecar_json(const Section& s, const std::string& binary_path);

}  // namespace splitlab
