#pragma once

// L_p Poincare ratios ||f - E_Fix f||_p / max{||Gamma(f,f)||_{p/2}^{1/2},
// ||Gamma(f*,f*)||_{p/2}^{1/2}} and their empirical suprema. The optimizer
// only ever produces lower bounds on the best constant.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/sphere_search.hpp"

namespace cocycle_lab {

inline constexpr double kMinP = 2.0;
inline constexpr double kMaxP = 16.0;

double poincare_ratio(const Semigroup& sg, const AlgebraElement& f, double p);

// (min{psi(g) : psi(g) > 0})^{-1/2}; DomainError when psi vanishes.
double l2_oracle(const Semigroup& sg);

// A ratio over real parameter vectors, already restricted to the
// complement of the fixed-point space by `project`.
struct RatioProblem {
  std::size_t dim = 0;
  std::function<double(const Eigen::VectorXd&)> ratio;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project;
};

struct WorstConstant {
  double constant = 0;
  Eigen::VectorXd witness;      // real parameters (real parts, then imaginary parts)
  double optimizer_gap = 0;     // best minus runner-up start
  std::size_t evaluations = 0;
};

WorstConstant worst_constant(const RatioProblem& problem, std::size_t budget, std::uint64_t seed);
WorstConstant worst_constant(const Semigroup& sg, double p, std::size_t budget,
                             std::uint64_t seed);
RatioProblem algebra_ratio_problem(const Semigroup& sg, double p);
AlgebraElement element_from_params(const GroupPtr& group, const Eigen::VectorXd& x);

struct LogLogFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
  double residual = 0;   // root of the residual sum of squares
};

LogLogFit fit_loglog(const std::vector<double>& p, const std::vector<double>& c);

struct PoincareReport {
  std::vector<double> p_grid;
  std::vector<double> constants;          // lower bounds
  std::vector<double> optimizer_gaps;
  std::vector<Eigen::VectorXd> maximizers;
  LogLogFit fit;
  std::optional<double> alpha_used;
  std::vector<double> envelope;           // C_2 sqrt(p / alpha), when alpha_used
};

// Runs one worst-constant search per p and fits log C_p against log p. The
// envelope is reported only for alpha > kAlphaZero.
PoincareReport sweep_and_fit(const std::function<RatioProblem(double)>& make_problem,
                             const std::vector<double>& p_grid, std::size_t budget,
                             std::uint64_t seed, std::optional<double> alpha = std::nullopt);
PoincareReport sweep_and_fit(const Semigroup& sg, const std::vector<double>& p_grid,
                             std::size_t budget, std::uint64_t seed,
                             std::optional<double> alpha = std::nullopt);

void check_p_grid(const std::vector<double>& p_grid);

}  // namespace cocycle_lab
