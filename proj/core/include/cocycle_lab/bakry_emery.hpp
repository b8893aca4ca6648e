#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/cocycle.hpp"

namespace cocycle_lab {

enum class AlphaMethod { bisection, pencil };
std::string to_string(AlphaMethod m);

// Largest alpha with K o K - alpha K positive semidefinite.
struct AlphaCertificate {
  double alpha_star = 0;
  AlphaMethod method = AlphaMethod::bisection;
  bool fell_back = false;       // pencil requested but bisection used
  Eigen::VectorXd witness;      // min eigenvector of K o K - alpha K just above alpha_star
  double residual = 0;          // min eigenvalue of K o K - alpha_star K
  double min_eig_above = 0;     // same, at alpha_star + step
  double step = 0;
};

inline constexpr double kAlphaTol = 1e-12;
inline constexpr double kAlphaWidth = 1e-10;
// Below this the criterion is treated as failing (no positive alpha).
inline constexpr double kAlphaZero = 1e-8;

// Feasibility is lambda_min(K o K - alpha K) >= -tol * (1 + ||K o K||_2).
AlphaCertificate best_alpha_bisection(const GromovForm& k, double tol = kAlphaTol);
AlphaCertificate best_alpha_pencil(const GromovForm& k, double tol = kAlphaTol);
AlphaCertificate best_alpha(const GromovForm& k, AlphaMethod method, double tol = kAlphaTol);

// lambda_min(K o K - alpha K).
double kernel_gap(const Eigen::MatrixXd& k, double alpha);

// operator_positivity of Gamma_2(f,f) - alpha Gamma(f,f).
PositivityResult check_element(const Semigroup& sg, const AlgebraElement& f, double alpha,
                               double tol = 1e-9);

struct ViolationSearch {
  bool found = false;
  double min_eig = 0;            // most negative eigenvalue reached
  std::optional<AlgebraElement> element;
};

// Minimizes the smallest eigenvalue of Gamma_2(f,f) - alpha Gamma(f,f) over
// unit coefficient vectors, starting from the kernel witness at alpha and
// random points.
ViolationSearch search_violation(const Semigroup& sg, double alpha, std::size_t budget,
                                 std::uint64_t seed, double tol = 1e-9);

}  // namespace cocycle_lab
