#pragma once

#include <Eigen/Dense>
#include <complex>

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/random.hpp"
#include <nlohmann/json.hpp>

namespace cocycle_lab {

using Complex = std::complex<double>;

// f = sum_g a_g lambda(g) in the group algebra.
class AlgebraElement {
 public:
  AlgebraElement(GroupPtr group, Eigen::VectorXcd coeffs);

  static AlgebraElement zero(GroupPtr group);
  static AlgebraElement identity(GroupPtr group);
  static AlgebraElement lambda(GroupPtr group, Element g, Complex c = 1.0);
  // Coefficients with independent standard normal real and imaginary parts.
  static AlgebraElement random(GroupPtr group, rng::Stream& stream);

  const FiniteGroup& group() const noexcept { return *group_; }
  const GroupPtr& group_ptr() const noexcept { return group_; }
  const Eigen::VectorXcd& coeffs() const noexcept { return coeffs_; }
  Complex operator[](Element g) const { return coeffs_[g]; }

  AlgebraElement adjoint() const;
  Complex tau() const { return coeffs_[0]; }

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;  // convolution
  AlgebraElement operator*(Complex c) const;

 private:
  GroupPtr group_;
  Eigen::VectorXcd coeffs_;
};

AlgebraElement power(const AlgebraElement& f, unsigned k);
void require_same_group(const AlgebraElement& f, const AlgebraElement& g);

// {"coeffs": [[re, im], ...]} in group element order.
AlgebraElement element_from_json(const nlohmann::json& j, GroupPtr group);
nlohmann::json element_to_json(const AlgebraElement& f);

// M[x, y] = a_{x y^-1}.
Eigen::MatrixXcd regular_rep(const AlgebraElement& f);

// ((1/|G|) sum sigma_i^p)^{1/p} over singular values of regular_rep(f).
double lp_norm(const AlgebraElement& f, double p);

// Heat semigroup T_t lambda(g) = exp(-t psi(g)) lambda(g).
class Semigroup {
 public:
  explicit Semigroup(LengthFunction psi) : psi_(std::move(psi)) {}

  const LengthFunction& psi() const noexcept { return psi_; }
  const GroupPtr& group_ptr() const noexcept { return psi_.group_ptr(); }

  AlgebraElement apply(const AlgebraElement& f, double t) const;
  AlgebraElement generator(const AlgebraElement& f) const;
  // Keeps the coefficients with psi(g) <= zero_tol.
  AlgebraElement fix_project(const AlgebraElement& f) const;
  bool in_fix(Element g) const { return psi_(g) <= kZeroTol; }

  static constexpr double kZeroTol = 1e-12;

 private:
  LengthFunction psi_;
};

enum class GammaPath { kernel, definitional };

AlgebraElement gamma(const Semigroup& sg, const AlgebraElement& f, const AlgebraElement& g,
                     GammaPath path = GammaPath::kernel);
AlgebraElement gamma2(const Semigroup& sg, const AlgebraElement& f, const AlgebraElement& g,
                      GammaPath path = GammaPath::kernel);

struct PositivityResult {
  bool psd;
  double min_eig;
};

// Smallest eigenvalue of regular_rep(f) for Hermitian f; psd iff
// min_eig >= -tol * (1 + ||f||_inf). Throws DomainError if f* != f.
PositivityResult operator_positivity(const AlgebraElement& f, double tol = 1e-9);

}  // namespace cocycle_lab
