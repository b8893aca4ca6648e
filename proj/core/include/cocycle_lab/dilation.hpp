#pragma once

// Monte-Carlo model of the Gaussian dilation pi_t(lambda(g)) =
// exp(i beta_t(b(g))) x| lambda(g). Each Brownian sample is realized as a
// |G| x |G| matrix whose (h, g^-1 h) entry carries the twisted phase
// exp(i <alpha_{h^-1} b(g), B_t>). Brownian coordinates have variance 2t.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/cocycle.hpp"

namespace cocycle_lab {

struct BrownianScenario {
  std::size_t d = 0;
  std::size_t steps = 0;
  double delta = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool has_copy = false;
  std::vector<Eigen::MatrixXd> increments;       // per sample, steps x d
  std::vector<Eigen::MatrixXd> copy_increments;  // independent copy

  double horizon() const noexcept { return static_cast<double>(steps) * delta; }
  // B_{t_k} for k = 0..steps, as a (steps+1) x d matrix.
  Eigen::MatrixXd path(std::size_t sample) const;
};

// Increment dB_k^j of one sample; a pure function of its coordinates.
double brownian_increment(std::uint64_t seed, bool copy, std::size_t sample, std::size_t k,
                          std::size_t j, std::size_t d, double delta);

BrownianScenario sample_scenario(const CocycleRealization& cocycle, std::size_t steps,
                                 double delta, std::size_t samples, std::uint64_t seed,
                                 bool with_copy = true);

// Semigroup, cocycle and the twisted vectors eta(h, g) = alpha_{h^-1} b(g).
class DilationModel {
 public:
  explicit DilationModel(const Semigroup& sg);
  DilationModel(const Semigroup& sg, CocycleRealization cocycle);

  const Semigroup& semigroup() const noexcept { return sg_; }
  const CocycleRealization& cocycle() const noexcept { return cocycle_; }
  const FiniteGroup& group() const noexcept { return *sg_.group_ptr(); }
  std::size_t order() const noexcept { return group().order(); }
  // Column h * |G| + g.
  Eigen::Ref<const Eigen::VectorXd> eta(Element h, Element g) const {
    return eta_.col(static_cast<Eigen::Index>(h * order() + g));
  }
  const Eigen::MatrixXd& eta_table() const noexcept { return eta_; }

 private:
  Semigroup sg_;
  CocycleRealization cocycle_;
  Eigen::MatrixXd eta_;
};

// Grid index of t; DomainError when t is off the grid.
std::size_t grid_index(const BrownianScenario& s, double t);

Eigen::MatrixXcd dilation_matrix(const DilationModel& m, const AlgebraElement& x, double t,
                                 const BrownianScenario& s, std::size_t sample);

// coeff * exp(i beta(xi)) x| lambda(g), with beta evaluated at a grid time.
struct CrossedTerm {
  Complex coeff;
  Eigen::VectorXd xi;
  Element g;
};
using CrossedElement = std::vector<CrossedTerm>;

Eigen::MatrixXcd crossed_matrix(const DilationModel& m, const CrossedElement& a,
                                const BrownianScenario& s, std::size_t sample, std::size_t k);
// (e^{i beta(xi1)} x| lambda(g1)) (e^{i beta(xi2)} x| lambda(g2))
//   = e^{i beta(xi1 + alpha_{g1} xi2)} x| lambda(g1 g2)
CrossedElement crossed_product(const DilationModel& m, const CrossedElement& a,
                               const CrossedElement& b);
CrossedElement crossed_adjoint(const DilationModel& m, const CrossedElement& a);

// Per-sample realization of the discretized martingale transform
//   i sum_{g,j,k} x_g b(g)_j e^{-(L - t_k) psi(g)} e^{i beta_{t_k}(b(g))} dB_{t_k}^j x| lambda(g)
// with L = steps * delta; `decoupled` drives it with the independent copy.
std::vector<Eigen::MatrixXcd> martingale_transform(const DilationModel& m, const AlgebraElement& x,
                                                   const BrownianScenario& s, bool decoupled);

struct MCEstimate {
  double value = 0;
  double se = 0;
};

// Mean and standard error of (1/|G|) tr |X_w|^p across samples.
MCEstimate mc_power_mean(const std::vector<Eigen::MatrixXcd>& per_sample, double p);
// (E tr|X|^p)^{1/p} with delta-method standard error.
MCEstimate mc_lp_norm(const std::vector<Eigen::MatrixXcd>& per_sample, double p);

// Analytic E ||M(x)||_2^2 = sum_{g,k} |x_g|^2 psi(g) 2 delta e^{-2 (L - t_k) psi(g)}.
double ito_isometry_analytic(const DilationModel& m, const AlgebraElement& x,
                             const BrownianScenario& s);

// Entrywise comparison of the sample mean of dilation_matrix(x, t) with
// regular_rep(T_t x). Entries with zero sample spread must match to 1e-12.
struct MarkovCheck {
  double max_z = 0;
  double max_deterministic_error = 0;
  bool passed = false;   // max_z <= z_limit
};
MarkovCheck markov_check(const DilationModel& m, const AlgebraElement& x, double t,
                         const BrownianScenario& s, double z_limit = 5.0);

struct BracketEstimates {
  MCEstimate hc;
  MCEstimate hr;
  MCEstimate hd;
};

// Conditioned square functions at the scenario's partition; p in {2,4,6,8}.
BracketEstimates bracket_estimates(const DilationModel& m, const AlgebraElement& x,
                                   const BrownianScenario& s, double p);

struct InequalityReport {
  double p = 0;
  MCEstimate coupled;
  MCEstimate decoupled;
  MCEstimate decoupling_ratio;
  MCEstimate bdg_ratio;
  BracketEstimates brackets;
  std::optional<double> alpha;
  std::optional<double> bracket_envelope;
  std::optional<MCEstimate> bracket_slack;   // envelope - max{hc, hr}
};

// Envelope ((1 - e^{-2 alpha L}) / alpha)^{1/2} max{||Gamma(x,x)||_{p/2}, ||Gamma(x*,x*)||_{p/2}}^{1/2}.
double bracket_envelope(const Semigroup& sg, const AlgebraElement& x, double alpha, double L,
                        double p);

InequalityReport inequality_report(const DilationModel& m, const AlgebraElement& x,
                                   const BrownianScenario& s, double p,
                                   std::optional<double> alpha = std::nullopt);

void check_mc_p(double p);

}  // namespace cocycle_lab
