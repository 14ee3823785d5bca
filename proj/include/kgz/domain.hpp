#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace kgz {

/// Dirichlet Laplacian on a box (0,L_1)x...x(0,L_n), truncated to the first
/// N modes per axis. The eigenbasis is analytic,
///   phi_k(x) = prod_i sqrt(2/L_i) sin(k_i pi x_i / L_i),
///   lambda_k = sum_i (k_i pi / L_i)^2,  1 <= k_i <= N,
/// and all fractional powers act diagonally on the coefficients.
///
/// Immutable after construction and safe to share across threads.
class Domain {
 public:
  Domain(int dim, int modes_per_axis, std::vector<double> side_lengths);
  Domain(int dim, int modes_per_axis, double side_length);

  int dim() const { return dim_; }
  int modes_per_axis() const { return modes_; }
  Eigen::Index num_modes() const { return static_cast<Eigen::Index>(lam_.size()); }
  const std::vector<double>& side_lengths() const { return lengths_; }

  /// lambda_k for a multi-index k (components in 1..N).
  double eigenvalue(const std::vector<int>& k) const;

  /// Smallest eigenvalue, sum_i (pi/L_i)^2.
  double lambda1() const { return lambda1_; }

  /// Volume of the box.
  double volume() const { return volume_; }

  /// Quadrature weight of one interior grid node, prod_i L_i/(N+1).
  double quad_weight() const { return quad_weight_; }

  const Eigen::ArrayXd& eigenvalues() const { return lam_; }
  const Eigen::ArrayXd& sqrt_eigenvalues() const { return sqrt_lam_; }

  /// Flat index of a multi-index (axis 0 slowest).
  Eigen::Index flat_index(const std::vector<int>& k) const;
  std::vector<int> multi_index(Eigen::Index flat) const;

  /// Coefficients -> values on the interior grid (type-I sine transform per axis).
  Eigen::ArrayXd synthesize(const Eigen::ArrayXd& coeffs) const;
  /// Values on the interior grid -> coefficients; exact inverse of synthesize.
  Eigen::ArrayXd analyze(const Eigen::ArrayXd& grid) const;

  /// Same box with (factor*(N+1) - 1) modes per axis; cached. Used for
  /// de-aliased quadrature of pointwise nonlinear terms.
  std::shared_ptr<const Domain> refined(int factor) const;

  bool same_box(const Domain& other) const;

 private:
  // out = S in with S(j,k) = sin((j+1)(k+1) pi/(N+1)); its own inverse up to 2/(N+1)
  void dst_line(const double* in, double* out) const;
  void transform_all_axes(Eigen::ArrayXd& data, bool forward) const;

  int dim_;
  int modes_;
  std::vector<double> lengths_;
  double lambda1_;
  double volume_;
  double quad_weight_;
  Eigen::ArrayXd lam_;
  Eigen::ArrayXd sqrt_lam_;
  Eigen::ArrayXd sin_table_;   // sin(m pi/(N+1)), m in [0, 2(N+1))
  Eigen::MatrixXd sine_matrix_;  // built when N is small enough to afford it

  mutable std::mutex refine_mutex_;
  mutable std::map<int, std::shared_ptr<const Domain>> refined_;
};

std::shared_ptr<const Domain> make_domain(int dim, int modes_per_axis,
                                          double side_length = 3.14159265358979323846);

}  // namespace kgz
