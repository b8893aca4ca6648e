#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "cocycle_lab/group.hpp"

namespace cocycle_lab {

// psi: G -> [0, inf) with psi(e) = 0 and psi(g) = psi(g^-1).
class LengthFunction {
 public:
  LengthFunction(GroupPtr group, std::vector<double> values);

  const FiniteGroup& group() const noexcept { return *group_; }
  const GroupPtr& group_ptr() const noexcept { return group_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(Element g) const { return values_[g]; }
  std::size_t size() const noexcept { return values_.size(); }

  LengthFunction scaled(double c) const;
  double max() const noexcept;
  // Smallest value strictly above `zero_tol`; 0 when psi vanishes identically.
  double min_positive(double zero_tol = 1e-12) const noexcept;

 private:
  GroupPtr group_;
  std::vector<double> values_;
};

// K(s,t) = (psi(s) + psi(t) - psi(s^-1 t)) / 2 over all of G.
struct GromovForm {
  GroupPtr group;
  Eigen::MatrixXd kernel;
};

GromovForm gromov_form(const LengthFunction& psi);

struct CnVerdict {
  bool verdict;
  double min_eig;
  double spectral_norm;
};

// True iff lambda_min(K) >= -tol * (1 + ||K||_2).
CnVerdict is_conditionally_negative(const LengthFunction& psi, double tol = 1e-9);
CnVerdict is_psd_kernel(const Eigen::MatrixXd& k, double tol = 1e-9);

// Vectors b(g) in R^d and orthogonal alpha_g with b(gh) = b(g) + alpha_g b(h).
struct CocycleRealization {
  GroupPtr group;
  std::size_t dimension = 0;
  Eigen::MatrixXd vectors;             // d x |G|, column g is b(g)
  std::vector<Eigen::MatrixXd> reps;   // alpha_g, d x d

  Eigen::VectorXd b(Element g) const { return vectors.col(g); }
};

struct CocycleResiduals {
  double gram = 0;            // max |<b(g), b(h)> - K(g,h)|
  double cocycle_law = 0;     // max |b(gh) - b(g) - alpha_g b(h)|
  double orthogonality = 0;   // max |alpha_g^T alpha_g - I|
  double homomorphism = 0;    // max |alpha_gh b - alpha_g alpha_h b| on the b-span
  double max() const noexcept;
};

CocycleResiduals cocycle_residuals(const CocycleRealization& c, const GromovForm& k);

// Rank-revealing factor K = L L^T from the symmetric eigendecomposition
// (eigenvalues below tol * max(1, lambda_max) are dropped), then alpha_g is
// solved on the span of the b(g). Throws DomainError if K is not PSD and
// NumericalRankError if the residuals exceed 10 * tol.
CocycleRealization realize_cocycle(const GromovForm& k, double tol = 1e-9);

// Explicit realization of the word length min{k, n-k} on Z_n (n even) in
// R^{n/2}: b(k) = e_1 + ... + e_k for k <= n/2, e_{k-n/2+1} + ... + e_{n/2}
// above, and alpha_1 the signed cyclic shift e_j -> e_{j+1}, e_{n/2} -> -e_1.
CocycleRealization word_length_cocycle(std::size_t n);

// (n-1)x(n-1) word-length Gromov matrix of Z_n over the non-identity elements.
Eigen::MatrixXd word_length_kernel(std::size_t n);

struct SchurIdentityResult {
  double residual;
  std::size_t terms;
};

// Max-abs residual of K_n o K_n - K_n = 2 sum_{l=1}^{n/2-1} Ktilde_{2l},
// where Ktilde_m embeds K_m centred in the (n-1)x(n-1) frame.
SchurIdentityResult verify_schur_identity(std::size_t n);

// Same identity for an arbitrary family m -> (m-1)x(m-1) kernel.
SchurIdentityResult verify_schur_identity(
    std::size_t n, const std::function<Eigen::MatrixXd(std::size_t)>& kernel_family);

}  // namespace cocycle_lab
