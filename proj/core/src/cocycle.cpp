#include "cocycle_lab/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/linalg.hpp"

namespace cocycle_lab {

LengthFunction::LengthFunction(GroupPtr group, std::vector<double> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (!group_) throw ValidationError("length function needs a group");
  const auto& g = *group_;
  if (values_.size() != g.order()) {
    throw ValidationError("length function has " + std::to_string(values_.size()) +
                          " values for a group of order " + std::to_string(g.order()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw ValidationError("psi(" + std::to_string(i) + ") = " +
                            std::to_string(values_[i]) + " is not a nonnegative real");
    }
  }
  if (values_[0] > 1e-12) {
    throw ValidationError("psi(e) = " + std::to_string(values_[0]) + " must be 0");
  }
  values_[0] = 0.0;
  for (Element x = 1; x < g.order(); ++x) {
    const Element y = g.inv(x);
    const double a = values_[x];
    const double b = values_[y];
    if (std::abs(a - b) > 1e-12 * (1.0 + std::max(a, b))) {
      throw ValidationError("psi(" + std::to_string(x) + ") != psi(" + std::to_string(y) +
                            ") although they are mutually inverse");
    }
    // Bitwise symmetry keeps the Gromov form exactly symmetric.
    const double mean = 0.5 * (a + b);
    values_[x] = mean;
    values_[y] = mean;
  }
}

LengthFunction LengthFunction::scaled(double c) const {
  if (!(c >= 0.0)) throw InvalidParameter("length functions scale by c >= 0 only");
  std::vector<double> v(values_);
  for (auto& x : v) x *= c;
  return LengthFunction(group_, std::move(v));
}

double LengthFunction::max() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

double LengthFunction::min_positive(double zero_tol) const noexcept {
  double best = 0.0;
  for (double v : values_) {
    if (v > zero_tol && (best == 0.0 || v < best)) best = v;
  }
  return best;
}

GromovForm gromov_form(const LengthFunction& psi) {
  const auto& g = psi.group();
  const auto n = static_cast<Element>(g.order());
  Eigen::MatrixXd k(n, n);
  for (Element s = 0; s < n; ++s) {
    const Element s_inv = g.inv(s);
    for (Element t = 0; t < n; ++t) {
      k(s, t) = 0.5 * (psi(s) + psi(t) - psi(g.mul(s_inv, t)));
    }
  }
  return {psi.group_ptr(), std::move(k)};
}

CnVerdict is_psd_kernel(const Eigen::MatrixXd& k, double tol) {
  const auto me = linalg::symmetric_min_eigen(k);
  return {me.value >= -tol * (1.0 + me.spectral_norm), me.value, me.spectral_norm};
}

CnVerdict is_conditionally_negative(const LengthFunction& psi, double tol) {
  return is_psd_kernel(gromov_form(psi).kernel, tol);
}

double CocycleResiduals::max() const noexcept {
  return std::max({gram, cocycle_law, orthogonality, homomorphism});
}

CocycleResiduals cocycle_residuals(const CocycleRealization& c, const GromovForm& k) {
  const auto& g = *c.group;
  const auto n = static_cast<Element>(g.order());
  const Eigen::MatrixXd& b = c.vectors;
  CocycleResiduals r;
  r.gram = (b.transpose() * b - k.kernel).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(c.dimension, c.dimension);
  for (Element x = 0; x < n; ++x) {
    const auto& ax = c.reps[x];
    if (c.dimension > 0) {
      r.orthogonality = std::max(r.orthogonality,
                                 (ax.transpose() * ax - id).cwiseAbs().maxCoeff());
    }
    const Eigen::MatrixXd moved = ax * b;
    for (Element y = 0; y < n; ++y) {
      const Eigen::VectorXd diff = b.col(g.mul(x, y)) - b.col(x) - moved.col(y);
      if (diff.size()) r.cocycle_law = std::max(r.cocycle_law, diff.cwiseAbs().maxCoeff());
      if (c.dimension > 0) {
        const Eigen::MatrixXd hom = (c.reps[g.mul(x, y)] - ax * c.reps[y]) * b;
        r.homomorphism = std::max(r.homomorphism, hom.cwiseAbs().maxCoeff());
      }
    }
  }
  return r;
}

CocycleRealization realize_cocycle(const GromovForm& k, double tol) {
  const auto psd = is_psd_kernel(k.kernel, tol);
  if (!psd.verdict) {
    throw DomainError("Gromov form is not positive semidefinite (min eigenvalue " +
                      std::to_string(psd.min_eig) + ")");
  }
  const auto& g = *k.group;
  const auto n = static_cast<Element>(g.order());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.kernel);
  const Eigen::VectorXd& w = es.eigenvalues();
  const double cutoff = tol * std::max(1.0, w.maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = w.size(); i-- > 0;) {
    if (w[i] > cutoff) keep.push_back(i);
  }
  const auto d = static_cast<Eigen::Index>(keep.size());

  Eigen::MatrixXd u_r(n, d);
  Eigen::VectorXd sqrt_w(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    u_r.col(i) = es.eigenvectors().col(keep[i]);
    sqrt_w[i] = std::sqrt(w[keep[i]]);
  }

  CocycleRealization c;
  c.group = k.group;
  c.dimension = static_cast<std::size_t>(d);
  c.vectors = sqrt_w.asDiagonal() * u_r.transpose();  // d x n
  // vectors * right_inverse = I_d
  const Eigen::MatrixXd right_inverse = u_r * sqrt_w.cwiseInverse().asDiagonal();

  c.reps.reserve(n);
  Eigen::MatrixXd moved(d, n);
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) moved.col(y) = c.vectors.col(g.mul(x, y)) - c.vectors.col(x);
    c.reps.push_back(moved * right_inverse);
  }

  const auto res = cocycle_residuals(c, k);
  const double limit = 10.0 * tol * std::max(1.0, psd.spectral_norm);
  if (res.cocycle_law > limit || res.orthogonality > limit || res.homomorphism > limit) {
    throw NumericalRankError(
        "cocycle system inconsistent: law residual " + std::to_string(res.cocycle_law) +
            ", orthogonality residual " + std::to_string(res.orthogonality) +
            ", homomorphism residual " + std::to_string(res.homomorphism),
        res.max());
  }
  return c;
}

CocycleRealization word_length_cocycle(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw DomainError("word-length cocycle needs even n >= 2; embed Z_n into Z_2n for odd n");
  }
  const std::size_t d = n / 2;
  auto group = std::make_shared<const FiniteGroup>(build_cyclic(n));

  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t j = 0; j + 1 < d; ++j) shift(j + 1, j) = 1.0;
  shift(0, d - 1) = -1.0;

  CocycleRealization c;
  c.group = group;
  c.dimension = d;
  c.vectors = Eigen::MatrixXd::Zero(d, n);
  for (std::size_t k = 1; k < n; ++k) {
    if (k <= d) {
      for (std::size_t i = 0; i < k; ++i) c.vectors(i, k) = 1.0;
    } else {
      for (std::size_t i = k - d; i < d; ++i) c.vectors(i, k) = 1.0;
    }
  }
  c.reps.reserve(n);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    c.reps.push_back(power);
    power = shift * power;
  }
  return c;
}

Eigen::MatrixXd word_length_kernel(std::size_t n) {
  if (n < 2) throw InvalidParameter("word-length kernel needs n >= 2");
  auto psi = [n](std::size_t k) { return static_cast<double>(std::min(k, n - k)); };
  Eigen::MatrixXd k(n - 1, n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      k(i - 1, j - 1) = 0.5 * (psi(i) + psi(j) - psi((j + n - i) % n));
    }
  }
  return k;
}

SchurIdentityResult verify_schur_identity(std::size_t n) {
  return verify_schur_identity(n, word_length_kernel);
}

SchurIdentityResult verify_schur_identity(
    std::size_t n, const std::function<Eigen::MatrixXd(std::size_t)>& kernel_family) {
  if (n < 4 || n % 2 != 0) throw DomainError("Schur identity needs even n >= 4");
  const Eigen::MatrixXd k = kernel_family(n);
  const auto size = static_cast<Eigen::Index>(n - 1);
  if (k.rows() != size || k.cols() != size) {
    throw DomainError("kernel family returned a matrix of the wrong size");
  }
  const Eigen::MatrixXd lhs = k.cwiseProduct(k) - k;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(size, size);
  const std::size_t terms = n / 2 - 1;
  for (std::size_t l = 1; l <= terms; ++l) {
    const std::size_t m = 2 * l;
    const Eigen::MatrixXd km = kernel_family(m);
    const auto offset = static_cast<Eigen::Index>((n - m) / 2);
    rhs.block(offset, offset, km.rows(), km.cols()) += 2.0 * km;
  }
  return {(lhs - rhs).cwiseAbs().maxCoeff(), terms};
}

}  // namespace cocycle_lab
