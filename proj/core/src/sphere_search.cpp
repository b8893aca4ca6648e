#include "cocycle_lab/sphere_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/parallel.hpp"

namespace cocycle_lab {

namespace {

struct StartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
  std::size_t evaluations = 0;
};

class Runner {
 public:
  Runner(const SphereProblem& p, const SearchOptions& o, std::size_t budget)
      : p_(p), o_(o), budget_(budget) {}

  Eigen::VectorXd project(const Eigen::VectorXd& v) const {
    return p_.project ? p_.project(v) : v;
  }

  // Projected and normalized; empty when v has no component in the subspace.
  Eigen::VectorXd to_sphere(const Eigen::VectorXd& v) const {
    Eigen::VectorXd w = project(v);
    const double n = w.norm();
    if (!(n > 1e-300)) return {};
    return w / n;
  }

  double eval(const Eigen::VectorXd& x) {
    ++used_;
    return p_.objective(x);
  }

  bool exhausted(std::size_t extra = 0) const { return used_ + extra > budget_; }

  StartOutcome climb(Eigen::VectorXd x) {
    StartOutcome out;
    double val = eval(x);
    double step = o_.initial_step;
    const std::size_t dim = static_cast<std::size_t>(x.size());
    Eigen::VectorXd grad(x.size());
    while (!exhausted(2 * dim + 1)) {
      for (std::size_t i = 0; i < dim; ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[static_cast<Eigen::Index>(i)] += o_.fd_step;
        xm[static_cast<Eigen::Index>(i)] -= o_.fd_step;
        grad[static_cast<Eigen::Index>(i)] = (eval(xp) - eval(xm)) / (2.0 * o_.fd_step);
      }
      grad = project(grad);
      grad -= grad.dot(x) * x;
      const double gn = grad.norm();
      if (!(gn > 1e-14 * (1.0 + std::abs(val)))) break;
      bool improved = false;
      while (!exhausted(1) && step > 1e-12) {
        Eigen::VectorXd cand = to_sphere(x + step * grad / gn);
        if (cand.size() == 0) break;
        const double cv = eval(cand);
        if (cv > val) {
          const double gain = (cv - val) / std::max(std::abs(val), 1e-300);
          x = std::move(cand);
          val = cv;
          step *= 1.5;
          improved = gain >= o_.rel_tol;
          if (!improved) step = 0;  // converged
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    out.value = val;
    out.x = std::move(x);
    out.evaluations = used_;
    return out;
  }

 private:
  const SphereProblem& p_;
  const SearchOptions& o_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

}  // namespace

SearchResult maximize_on_sphere(const SphereProblem& problem, const SearchOptions& options) {
  if (options.budget < 1) throw DomainError("search budget must be at least 1");
  if (problem.dim == 0) throw DomainError("empty search space");
  const std::size_t starts = std::max<std::size_t>(options.starts, 32);
  const std::size_t per_start = std::max<std::size_t>(1, options.budget / starts);

  std::vector<StartOutcome> outcomes(starts);
  parallel_for(starts, [&](std::size_t s) {
    Runner run(problem, options, per_start);
    Eigen::VectorXd x;
    if (s < problem.seeds.size()) x = run.to_sphere(problem.seeds[s]);
    rng::Stream stream(options.seed, options.tag, s);
    for (int attempt = 0; x.size() == 0 && attempt < 16; ++attempt) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(problem.dim));
      for (auto& c : v) c = stream.normal();
      x = run.to_sphere(v);
    }
    if (x.size() == 0) throw DomainError("search subspace is empty after projection");
    outcomes[s] = run.climb(std::move(x));
  });

  SearchResult r;
  std::size_t best = 0;
  for (std::size_t s = 0; s < starts; ++s) {
    r.start_values.push_back(outcomes[s].value);
    r.evaluations += outcomes[s].evaluations;
    if (outcomes[s].value > outcomes[best].value) best = s;
  }
  r.best = outcomes[best].value;
  r.argmax = outcomes[best].x;
  r.runner_up = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    if (s != best) r.runner_up = std::max(r.runner_up, outcomes[s].value);
  }
  return r;
}

}  // namespace cocycle_lab
