#pragma once

// Semigroups on M_n: the clock/shift Fourier multiplier and commuting
// Lindblad generators. Superoperators are stored densely as n^2 x n^2
// matrices acting on column-major vec(x).

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/poincare.hpp"
#include <nlohmann/json.hpp>

namespace cocycle_lab {

using MatrixElement = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxMatrixN = 12;

struct ClockShift {
  std::vector<MatrixElement> u;  // u_k = diag(exp(2 pi i k (j-1) / n))
  std::vector<MatrixElement> v;  // v_k e_j = e_{j+k mod n}
};
ClockShift clock_shift_basis(std::size_t n);

// <x, y> = tr(x^dagger y) / n.
Complex trace_pairing(const MatrixElement& x, const MatrixElement& y);
// ((1/n) sum sigma_i^p)^{1/p}.
double matrix_lp_norm(const MatrixElement& x, double p);

Eigen::VectorXcd vec(const MatrixElement& x);
MatrixElement unvec(const Eigen::VectorXcd& v, std::size_t n);

class Superoperator {
 public:
  // Checks A(1) = 0 and self-adjointness for the trace pairing.
  Superoperator(std::size_t n, Eigen::MatrixXcd matrix);

  std::size_t n() const noexcept { return n_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  MatrixElement apply(const MatrixElement& x) const;

 private:
  std::size_t n_;
  Eigen::MatrixXcd matrix_;
};

enum class MultiplierMode { delta, wordlength };
MultiplierMode multiplier_mode_from_string(const std::string& s);
std::string to_string(MultiplierMode m);

// psi(b, c) for the multiplier acting on v_c u_b.
double multiplier_psi(std::size_t n, MultiplierMode mode, std::size_t b, std::size_t c);
Superoperator heisenberg_multiplier(std::size_t n, MultiplierMode mode);

// A(x) = sum_j x a_j^2 + a_j^2 x - 2 a_j x a_j for commuting Hermitian a_j.
Superoperator lindblad_generator(const std::vector<MatrixElement>& a);

// {"n": int, "a": [[[re, im]]]} with each a_j row-major.
std::vector<MatrixElement> hermitian_family_from_json(const nlohmann::json& j);
nlohmann::json hermitian_family_to_json(const std::vector<MatrixElement>& a);

MatrixElement superop_gamma(const Superoperator& A, const MatrixElement& x, const MatrixElement& y);
MatrixElement superop_gamma2(const Superoperator& A, const MatrixElement& x,
                             const MatrixElement& y);

// Orthogonal projection onto ker(A), as an n^2 x n^2 matrix.
Eigen::MatrixXcd fix_projector(const Superoperator& A);
MatrixElement fix_project(const Superoperator& A, const MatrixElement& x);
// exp(-t A) by Pade scaling and squaring.
Eigen::MatrixXcd semigroup_matrix(const Superoperator& A, double t);
MatrixElement semigroup_apply(const Superoperator& A, const MatrixElement& x, double t);

// (smallest nonzero eigenvalue of A)^{-1/2}: the exact best L_2 constant.
double spectral_oracle(const Superoperator& A);

double matrix_poincare_ratio(const Superoperator& A, const MatrixElement& x, double p);
RatioProblem matrix_ratio_problem(const Superoperator& A, double p);
MatrixElement matrix_from_params(const Eigen::VectorXd& x, std::size_t n);
PoincareReport matrix_poincare(const Superoperator& A, const std::vector<double>& p_grid,
                               std::size_t budget, std::uint64_t seed,
                               std::optional<double> alpha = std::nullopt);

// Largest alpha with the block matrix Q_alpha[(I,a),(J,b)] =
// (Gamma_2 - alpha Gamma)(E_I, E_J)_{ab} positive semidefinite. Sufficient
// for Gamma_2(x,x) >= alpha Gamma(x,x) for every x.
struct SuperopAlpha {
  double alpha = 0;
  double min_eig = 0;   // of Q at alpha
};
SuperopAlpha superop_alpha_sufficient(const Superoperator& A);

// Random x with ||x||_2 = 1; reports the smallest eigenvalue of
// Gamma_2(x,x) - alpha Gamma(x,x) over the batch.
struct MatrixBattery {
  std::size_t count = 0;
  double min_eig = 0;
  bool passed = false;   // min_eig >= -tol
};
MatrixBattery matrix_alpha_battery(const Superoperator& A, double alpha, std::size_t count,
                                   std::uint64_t seed, double tol = 1e-9);

MatrixElement random_matrix(std::size_t n, rng::Stream& stream);

}  // namespace cocycle_lab
