#pragma once

#include <Eigen/Dense>
#include <memory>

#include "kgz/domain.hpp"

namespace kgz {

/// Scalar field on a Domain, stored as its coefficient vector in the
/// Dirichlet eigenbasis. Value type; cheap to move.
struct SpectralField {
  std::shared_ptr<const Domain> domain;
  Eigen::ArrayXd coeffs;

  SpectralField() = default;
  explicit SpectralField(std::shared_ptr<const Domain> dom)
      : domain(std::move(dom)), coeffs(Eigen::ArrayXd::Zero(domain->num_modes())) {}
  SpectralField(std::shared_ptr<const Domain> dom, Eigen::ArrayXd c);
};

SpectralField zero_field(std::shared_ptr<const Domain> dom);

/// Field with a single unit coefficient on mode k (multi-index, 1-based).
SpectralField unit_mode(std::shared_ptr<const Domain> dom, const std::vector<int>& k,
                        double amplitude = 1.0);

/// Values of the field on the interior grid.
Eigen::ArrayXd to_grid(const SpectralField& f);

/// Coefficients of the sine interpolant of grid values; inverse of to_grid.
SpectralField to_coeff(const std::shared_ptr<const Domain>& dom, const Eigen::ArrayXd& grid);

/// A^alpha f: coefficient k multiplied by lambda_k^alpha. Any real alpha.
SpectralField apply_fractional(const SpectralField& f, double alpha);

/// ||A^alpha f||_X.
double norm_alpha(const SpectralField& f, double alpha);
double norm_alpha_sq(const SpectralField& f, double alpha);

/// L^2 inner product via coefficients.
double inner_X(const SpectralField& a, const SpectralField& b);

/// Quadrature of the grid values of a and b: sum_j w a(x_j) b(x_j).
/// Equals inner_X exactly (discrete orthogonality of the sine basis).
double grid_inner(const SpectralField& a, const SpectralField& b);

void require_same_domain(const SpectralField& a, const SpectralField& b);

}  // namespace kgz
