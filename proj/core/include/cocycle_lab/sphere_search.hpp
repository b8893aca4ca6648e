#pragma once

// Multi-start projected gradient ascent on the unit sphere of a linear
// subspace of R^dim. Gradients are central differences.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "cocycle_lab/random.hpp"

namespace cocycle_lab {

struct SphereProblem {
  std::size_t dim = 0;
  std::function<double(const Eigen::VectorXd&)> objective;
  // Orthogonal projection onto the search subspace; identity when empty.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project;
  // Extra deterministic starting points (projected and normalized first).
  std::vector<Eigen::VectorXd> seeds;
};

struct SearchOptions {
  std::size_t starts = 32;         // raised to 32 if lower
  std::size_t budget = 20000;      // objective evaluations over all starts
  std::uint64_t seed = 0;
  double fd_step = 1e-6;
  double rel_tol = 1e-8;
  double initial_step = 0.25;
  rng::Tag tag = rng::Tag::optimizer;
};

struct SearchResult {
  double best = 0;
  Eigen::VectorXd argmax;
  double runner_up = 0;                // best value among the other starts
  std::vector<double> start_values;    // final value per start
  std::size_t evaluations = 0;
};

// Throws DomainError on budget < 1 or an empty search subspace.
SearchResult maximize_on_sphere(const SphereProblem& problem, const SearchOptions& options);

}  // namespace cocycle_lab
