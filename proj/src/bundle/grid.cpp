#include "splitlab/bundle/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace splitlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic spectral first-derivative matrix on m equispaced points of a 2 pi circle (m even).
std::vector<double> fourier_diff(int m) {
  std::vector<double> d(static_cast<std::size_t>(m) * m, 0.0);
  const double h = 2 * kPi / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const int k = i - j;
      d[static_cast<std::size_t>(i) * m + j] = 0.5 * ((k % 2 == 0) ? 1.0 : -1.0) / std::tan(k * h / 2);
    }
  return d;
}

}  // namespace

MomentumGrid::MomentumGrid(int n_r, int n_theta, int n_phi, double r_min, double r_max)
    : nr_(n_r), nt_(n_theta), np_(n_phi), r_min_(r_min), r_max_(r_max) {
  if (n_r < 4 || n_theta < 4 || n_phi < 4)
    throw GridError("grid sizes must be >= 4, got (" + std::to_string(n_r) + ", " + std::to_string(n_theta) + ", " +
                    std::to_string(n_phi) + ")");
  if (n_phi % 2 != 0) throw GridError("n_phi must be even");
  if (!(r_min > 0)) throw GridError("r_min must be > 0 (the origin is excluded)");
  if (!(r_max > r_min)) throw GridError("r_max must exceed r_min");

  const double center = 0.5 * (r_min + r_max), half = 0.5 * (r_max - r_min);
  const int n = nr_ - 1;
  std::vector<double> x(nr_);
  for (int j = 0; j < nr_; ++j) x[j] = -std::cos(kPi * j / n);
  x[0] = -1.0;
  x[n] = 1.0;
  r_.resize(nr_);
  for (int j = 0; j < nr_; ++j) r_[j] = center + half * x[j];
  r_[0] = r_min;
  r_[n] = r_max;

  // Chebyshev differentiation matrix; diagonal by negative row sums.
  dr_.assign(static_cast<std::size_t>(nr_) * nr_, 0.0);
  auto c = [&](int j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
  for (int i = 0; i < nr_; ++i) {
    double row = 0;
    for (int j = 0; j < nr_; ++j) {
      if (i == j) continue;
      const double v = (c(i) / c(j)) * (((i + j) % 2 == 0) ? 1.0 : -1.0) / (x[i] - x[j]);
      dr_[static_cast<std::size_t>(i) * nr_ + j] = v / half;
      row += v;
    }
    dr_[static_cast<std::size_t>(i) * nr_ + i] = -row / half;
  }

  // Clenshaw-Curtis weights for integral over [r_min, r_max].
  wr_.assign(nr_, 0.0);
  for (int j = 0; j < nr_; ++j) {
    const double th = kPi * j / n;
    double s = 1.0;
    for (int k = 1; k <= n / 2; ++k) {
      const double b = (2 * k == n) ? 1.0 : 2.0;
      s -= b * std::cos(2 * k * th) / (4.0 * k * k - 1);
    }
    wr_[j] = (j == 0 || j == n ? 1.0 : 2.0) * s / n * half;
  }

  theta_.resize(nt_);
  sin_t_.resize(nt_);
  cos_t_.resize(nt_);
  wt_.assign(nt_, 0.0);
  for (int j = 0; j < nt_; ++j) {
    theta_[j] = (j + 0.5) * kPi / nt_;
    sin_t_[j] = std::sin(theta_[j]);
    cos_t_[j] = std::cos(theta_[j]);
    double s = 1.0;
    for (int k = 1; k <= nt_ / 2; ++k) s -= 2 * std::cos(2 * k * theta_[j]) / (4.0 * k * k - 1);
    wt_[j] = 2.0 / nt_ * s;  // Fejer's first rule in cos(theta)
  }
  phi_.resize(np_);
  sin_p_.resize(np_);
  cos_p_.resize(np_);
  for (int j = 0; j < np_; ++j) {
    phi_[j] = 2 * kPi * j / np_;
    sin_p_[j] = std::sin(phi_[j]);
    cos_p_[j] = std::cos(phi_[j]);
  }
  wp_ = 2 * kPi / np_;
  dt_ = fourier_diff(2 * nt_);
  dp_ = fourier_diff(np_);
}

Vec3 MomentumGrid::khat(int it, int ip) const {
  return {sin_t_[it] * cos_p_[ip], sin_t_[it] * sin_p_[ip], cos_t_[it]};
}
Vec3 MomentumGrid::e_theta(int it, int ip) const {
  return {cos_t_[it] * cos_p_[ip], cos_t_[it] * sin_p_[ip], -sin_t_[it]};
}
Vec3 MomentumGrid::e_phi(int, int ip) const { return {-sin_p_[ip], cos_p_[ip], 0.0}; }

Vec3 MomentumGrid::khat(std::size_t node) const { return khat(theta_index(node), phi_index(node)); }

Vec3 MomentumGrid::k(std::size_t node) const {
  const Vec3 u = khat(node);
  const double rr = radius(node);
  return {rr * u[0], rr * u[1], rr * u[2]};
}

double MomentumGrid::volume_weight(std::size_t node) const {
  const double rr = radius(node);
  return wr_[r_index(node)] * rr * rr * wt_[theta_index(node)] * wp_;
}

GridRef make_grid(int n_r, int n_theta, int n_phi, double r_min, double r_max) {
  return std::make_shared<const MomentumGrid>(n_r, n_theta, n_phi, r_min, r_max);
}

}  // namespace splitlab
