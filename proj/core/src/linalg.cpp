#include "cocycle_lab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "cocycle_lab/errors.hpp"

namespace cocycle_lab::linalg {

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  if (m.rows() <= 16) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  }
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
}

double normalized_power_trace(const Eigen::VectorXd& sigma, double p) {
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    acc += std::pow(std::abs(sigma[i]) / top, p);
  }
  return std::pow(top, p) * acc / static_cast<double>(sigma.size());
}

double normalized_schatten(const Eigen::VectorXd& sigma, double p) {
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.cwiseAbs().maxCoeff();
  if (std::isinf(p) || top == 0.0) return top;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    acc += std::pow(std::abs(sigma[i]) / top, p);
  }
  return top * std::pow(acc / static_cast<double>(sigma.size()), 1.0 / p);
}

Eigen::MatrixXcd checked_hermitian(const Eigen::MatrixXcd& m, double tol) {
  const Eigen::MatrixXcd adj = m.adjoint();
  const double skew = (m - adj).cwiseAbs().maxCoeff();
  const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  if (skew > tol * (1.0 + scale)) {
    throw DomainError("matrix is not Hermitian (max |M - M^*| = " +
                      std::to_string(skew) + ")");
  }
  return 0.5 * (m + adj);
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

MinEigen symmetric_min_eigen(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const auto& w = es.eigenvalues();
  const double norm = std::max(std::abs(w[0]), std::abs(w[w.size() - 1]));
  return {w[0], es.eigenvectors().col(0), norm};
}

}  // namespace cocycle_lab::linalg
