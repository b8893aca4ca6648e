#pragma once

// Dense linear-algebra helpers shared by the algebra, matrix-semigroup and
// Monte-Carlo modules.

#include <Eigen/Dense>
#include <limits>

namespace cocycle_lab::linalg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Singular values of a square complex matrix.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);

// (1/N) * sum_i sigma_i^p. The sum is taken over sigma_i / sigma_max and
// rescaled afterwards so large p does not overflow.
double normalized_power_trace(const Eigen::VectorXd& sigma, double p);

// Normalized Schatten norm ((1/N) sum sigma_i^p)^{1/p}; p = inf gives the
// largest singular value.
double normalized_schatten(const Eigen::VectorXd& sigma, double p);

// Hermitian part of m after checking ||m - m^dagger||_max <= tol * (1 + ||m||_max).
// Throws DomainError otherwise.
Eigen::MatrixXcd checked_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-10);

// Eigenvalues (ascending) of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

// Smallest eigenvalue of a real symmetric matrix and its eigenvector.
struct MinEigen {
  double value;
  Eigen::VectorXd vector;
  double spectral_norm;
};
MinEigen symmetric_min_eigen(const Eigen::MatrixXd& m);

}  // namespace cocycle_lab::linalg
