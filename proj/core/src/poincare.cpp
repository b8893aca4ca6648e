#include "cocycle_lab/poincare.hpp"

#include <cmath>

#include "cocycle_lab/bakry_emery.hpp"
#include "cocycle_lab/errors.hpp"

namespace cocycle_lab {

namespace {

void check_p(double p) {
  if (!(p >= kMinP && p <= kMaxP)) {
    throw DomainError("p must lie in [2, 16], got " + std::to_string(p));
  }
}

}  // namespace

void check_p_grid(const std::vector<double>& p_grid) {
  if (p_grid.empty()) throw DomainError("empty p grid");
  for (double p : p_grid) check_p(p);
}

double poincare_ratio(const Semigroup& sg, const AlgebraElement& f, double p) {
  check_p(p);
  const auto centred = f - sg.fix_project(f);
  if (centred.coeffs().cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("element lies in the fixed-point algebra");
  }
  const double num = lp_norm(centred, p);
  const auto fs = f.adjoint();
  const double d1 = lp_norm(gamma(sg, f, f), p / 2);
  const double d2 = lp_norm(gamma(sg, fs, fs), p / 2);
  const double den = std::sqrt(std::max(d1, d2));
  if (!(den > 0.0)) throw DomainError("zero gradient form");
  return num / den;
}

double l2_oracle(const Semigroup& sg) {
  const double m = sg.psi().min_positive(Semigroup::kZeroTol);
  if (m == 0.0) throw DomainError("psi vanishes identically; no spectral gap");
  return 1.0 / std::sqrt(m);
}

AlgebraElement element_from_params(const GroupPtr& group, const Eigen::VectorXd& x) {
  const auto n = static_cast<Eigen::Index>(group->order());
  Eigen::VectorXcd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = {x[i], x[n + i]};
  return {group, std::move(c)};
}

RatioProblem algebra_ratio_problem(const Semigroup& sg, double p) {
  check_p(p);
  const auto group = sg.group_ptr();
  const auto n = static_cast<Eigen::Index>(group->order());
  std::vector<Eigen::Index> fixed;
  for (Eigen::Index g = 0; g < n; ++g) {
    if (sg.in_fix(static_cast<Element>(g))) fixed.push_back(g);
  }
  RatioProblem prob;
  prob.dim = static_cast<std::size_t>(2 * n);
  prob.project = [fixed, n](const Eigen::VectorXd& v) {
    Eigen::VectorXd w = v;
    for (auto g : fixed) {
      w[g] = 0;
      w[n + g] = 0;
    }
    return w;
  };
  prob.ratio = [&sg, group, p](const Eigen::VectorXd& x) {
    return poincare_ratio(sg, element_from_params(group, x), p);
  };
  return prob;
}

WorstConstant worst_constant(const RatioProblem& problem, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw DomainError("budget must be at least 1");
  SphereProblem sp;
  sp.dim = problem.dim;
  sp.objective = problem.ratio;
  sp.project = problem.project;
  SearchOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  const auto r = maximize_on_sphere(sp, opt);
  WorstConstant w;
  w.constant = r.best;
  w.witness = r.argmax;
  w.optimizer_gap = r.best - r.runner_up;
  w.evaluations = r.evaluations;
  return w;
}

WorstConstant worst_constant(const Semigroup& sg, double p, std::size_t budget,
                             std::uint64_t seed) {
  return worst_constant(algebra_ratio_problem(sg, p), budget, seed);
}

LogLogFit fit_loglog(const std::vector<double>& p, const std::vector<double>& c) {
  if (p.size() != c.size() || p.size() < 2) {
    throw DomainError("log-log fit needs at least two (p, C) pairs");
  }
  const auto n = static_cast<double>(p.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0 && c[i] > 0)) throw DomainError("log-log fit needs positive data");
    mx += std::log(p[i]);
    my += std::log(c[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double dx = std::log(p[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(c[i]) - my);
  }
  if (!(sxx > 0)) throw DomainError("log-log fit needs distinct p values");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double e = std::log(c[i]) - (f.intercept + f.slope * std::log(p[i]));
    ssr += e * e;
  }
  f.residual = std::sqrt(ssr);
  f.slope_se = p.size() > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return f;
}

PoincareReport sweep_and_fit(const std::function<RatioProblem(double)>& make_problem,
                             const std::vector<double>& p_grid, std::size_t budget,
                             std::uint64_t seed, std::optional<double> alpha) {
  check_p_grid(p_grid);
  PoincareReport r;
  r.p_grid = p_grid;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const auto w = worst_constant(make_problem(p_grid[i]), budget, seed);
    r.constants.push_back(w.constant);
    r.optimizer_gaps.push_back(w.optimizer_gap);
    r.maximizers.push_back(w.witness);
  }
  if (p_grid.size() >= 2) r.fit = fit_loglog(r.p_grid, r.constants);
  if (alpha && *alpha > kAlphaZero) {
    r.alpha_used = alpha;
    // C_2: the constant at the smallest p of the grid.
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < p_grid.size(); ++i) {
      if (p_grid[i] < p_grid[lowest]) lowest = i;
    }
    const double c2 = r.constants[lowest];
    for (double p : p_grid) r.envelope.push_back(c2 * std::sqrt(p / *alpha));
  }
  return r;
}

PoincareReport sweep_and_fit(const Semigroup& sg, const std::vector<double>& p_grid,
                             std::size_t budget, std::uint64_t seed, std::optional<double> alpha) {
  return sweep_and_fit([&sg](double p) { return algebra_ratio_problem(sg, p); }, p_grid, budget,
                       seed, alpha);
}

}  // namespace cocycle_lab
