#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace splitlab {

using Vec3 = std::array<double, 3>;

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor-product momentum grid on a spherical shell r_min <= |k| <= r_max.
//  r: Chebyshev-Gauss-Lobatto nodes (endpoints included, both > 0).
//  theta: staggered midpoints (j + 1/2) pi / n_theta, so no node sits on a pole.
//  phi: uniform 2 pi j / n_phi, n_phi even (the double-Fourier-sphere extension pairs phi with phi + pi).
// Node order is r-major, then theta, then phi; section components are innermost.
class MomentumGrid {
 public:
  MomentumGrid(int n_r, int n_theta, int n_phi, double r_min, double r_max);

  int n_r() const { return nr_; }
  int n_theta() const { return nt_; }
  int n_phi() const { return np_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  std::size_t size() const { return static_cast<std::size_t>(nr_) * nt_ * np_; }
  std::size_t index(int ir, int it, int ip) const { return (static_cast<std::size_t>(ir) * nt_ + it) * np_ + ip; }
  std::size_t angular_size() const { return static_cast<std::size_t>(nt_) * np_; }

  double r(int ir) const { return r_[ir]; }
  double theta(int it) const { return theta_[it]; }
  double phi(int ip) const { return phi_[ip]; }
  const std::vector<double>& r_nodes() const { return r_; }
  const std::vector<double>& theta_nodes() const { return theta_; }
  const std::vector<double>& phi_nodes() const { return phi_; }

  // Unit frame at angular node (it, ip).
  Vec3 khat(int it, int ip) const;
  Vec3 e_theta(int it, int ip) const;
  Vec3 e_phi(int it, int ip) const;
  Vec3 k(std::size_t node) const;
  Vec3 khat(std::size_t node) const;
  double radius(std::size_t node) const { return r_[node / angular_size()]; }
  int r_index(std::size_t node) const { return static_cast<int>(node / angular_size()); }
  int theta_index(std::size_t node) const { return static_cast<int>((node / np_) % nt_); }
  int phi_index(std::size_t node) const { return static_cast<int>(node % np_); }

  // Quadrature: sum_n w(n) f(n) ~ integral of f r^2 dr dOmega over the shell.
  double volume_weight(std::size_t node) const;
  const std::vector<double>& radial_weights() const { return wr_; }  // for integral dr
  const std::vector<double>& polar_weights() const { return wt_; }   // for integral sin(theta) dtheta
  double azimuthal_weight() const { return wp_; }

  // Dense spectral differentiation matrices (row-major).
  const std::vector<double>& d_r() const { return dr_; }          // n_r x n_r, includes 2/(r_max - r_min)
  const std::vector<double>& d_theta_ext() const { return dt_; }  // 2 n_theta x 2 n_theta on the doubled circle
  const std::vector<double>& d_phi() const { return dp_; }        // n_phi x n_phi

  bool same_as(const MomentumGrid& o) const {
    return nr_ == o.nr_ && nt_ == o.nt_ && np_ == o.np_ && r_min_ == o.r_min_ && r_max_ == o.r_max_;
  }

 private:
  int nr_, nt_, np_;
  double r_min_, r_max_;
  std::vector<double> r_, theta_, phi_, sin_t_, cos_t_, sin_p_, cos_p_;
  std::vector<double> wr_, wt_;
  double wp_;
  std::vector<double> dr_, dt_, dp_;
};

using GridRef = std::shared_ptr<const MomentumGrid>;

GridRef make_grid(int n_r, int n_theta, int n_phi, double r_min, double r_max);

}  // namespace splitlab
