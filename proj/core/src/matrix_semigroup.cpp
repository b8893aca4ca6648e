#include "cocycle_lab/matrix_semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "cocycle_lab/bakry_emery.hpp"
#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/parallel.hpp"

namespace cocycle_lab {

namespace {

void check_n(std::size_t n) {
  if (n < 2) throw InvalidParameter("matrix size n must be at least 2");
  if (n > kMaxMatrixN) throw SizeError("matrix size n above the cap of 12");
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

void require_size(const Superoperator& A, const MatrixElement& x) {
  const auto n = static_cast<Eigen::Index>(A.n());
  if (x.rows() != n || x.cols() != n) throw DomainError("matrix size does not match superoperator");
}

}  // namespace

ClockShift clock_shift_basis(std::size_t n) {
  check_n(n);
  const auto nn = static_cast<Eigen::Index>(n);
  ClockShift cs;
  for (std::size_t k = 0; k < n; ++k) {
    MatrixElement u = MatrixElement::Zero(nn, nn);
    MatrixElement v = MatrixElement::Zero(nn, nn);
    for (std::size_t j = 0; j < n; ++j) {
      // (j-1) with 1-based j is the 0-based index here.
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) /
                           static_cast<double>(n);
      u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = std::polar(1.0, phase);
      v(static_cast<Eigen::Index>((j + k) % n), static_cast<Eigen::Index>(j)) = 1.0;
    }
    cs.u.push_back(std::move(u));
    cs.v.push_back(std::move(v));
  }
  return cs;
}

Complex trace_pairing(const MatrixElement& x, const MatrixElement& y) {
  return (x.adjoint() * y).trace() / static_cast<double>(x.rows());
}

double matrix_lp_norm(const MatrixElement& x, double p) {
  if (!(p >= 1.0)) throw DomainError("L_p norm needs p >= 1");
  return linalg::normalized_schatten(linalg::singular_values(x), p);
}

Eigen::VectorXcd vec(const MatrixElement& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

MatrixElement unvec(const Eigen::VectorXcd& v, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  return Eigen::Map<const MatrixElement>(v.data(), nn, nn);
}

Superoperator::Superoperator(std::size_t n, Eigen::MatrixXcd matrix)
    : n_(n), matrix_(std::move(matrix)) {
  check_n(n);
  const auto nn = static_cast<Eigen::Index>(n * n);
  if (matrix_.rows() != nn || matrix_.cols() != nn) {
    throw SizeError("superoperator matrix must be n^2 x n^2");
  }
  const double scale = 1.0 + max_abs(matrix_);
  const double skew = max_abs(matrix_ - matrix_.adjoint());
  if (skew > 1e-10 * scale) {
    throw DomainError("superoperator is not self-adjoint (skew " + std::to_string(skew) + ")");
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  const auto one = MatrixElement::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double a1 = max_abs(apply(one));
  if (a1 > 1e-10 * scale) {
    throw DomainError("superoperator does not annihilate the identity (" + std::to_string(a1) + ")");
  }
}

MatrixElement Superoperator::apply(const MatrixElement& x) const {
  return unvec(matrix_ * vec(x), n_);
}

MultiplierMode multiplier_mode_from_string(const std::string& s) {
  if (s == "delta") return MultiplierMode::delta;
  if (s == "wordlength") return MultiplierMode::wordlength;
  throw InvalidParameter("multiplier mode must be delta or wordlength, got '" + s + "'");
}

std::string to_string(MultiplierMode m) {
  return m == MultiplierMode::delta ? "delta" : "wordlength";
}

double multiplier_psi(std::size_t n, MultiplierMode mode, std::size_t b, std::size_t c) {
  b %= n;
  c %= n;
  if (mode == MultiplierMode::delta) return (b != 0 ? 1.0 : 0.0) + (c != 0 ? 1.0 : 0.0);
  return static_cast<double>(std::min(b, n - b) + std::min(c, n - c));
}

Superoperator heisenberg_multiplier(std::size_t n, MultiplierMode mode) {
  const auto cs = clock_shift_basis(n);
  const auto nn = static_cast<Eigen::Index>(n * n);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(nn, nn);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t c = 0; c < n; ++c) {
      const double psi = multiplier_psi(n, mode, b, c);
      if (psi == 0.0) continue;
      const Eigen::VectorXcd w = vec(cs.v[c] * cs.u[b]);
      s += (psi / static_cast<double>(n)) * (w * w.adjoint());
    }
  }
  return {n, std::move(s)};
}

Superoperator lindblad_generator(const std::vector<MatrixElement>& a) {
  if (a.empty()) throw InvalidParameter("Lindblad family is empty");
  const auto n = static_cast<std::size_t>(a[0].rows());
  check_n(n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != a[i].cols() || static_cast<std::size_t>(a[i].rows()) != n) {
      throw DomainError("Lindblad family members must all be n x n");
    }
    const double skew = max_abs(a[i] - a[i].adjoint());
    if (skew > 1e-10 * (1.0 + max_abs(a[i]))) {
      throw DomainError("a_" + std::to_string(i) + " is not Hermitian");
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double comm = max_abs(a[i] * a[j] - a[j] * a[i]);
      if (comm > 1e-10 * (1.0 + max_abs(a[i]) * max_abs(a[j]))) {
        throw DomainError("a_" + std::to_string(i) + " and a_" + std::to_string(j) +
                          " do not commute");
      }
    }
  }
  const auto nn = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(nn * nn, nn * nn);
  for (const auto& aj : a) {
    const Eigen::MatrixXcd h = 0.5 * (aj + aj.adjoint());
    const Eigen::MatrixXcd sq = h * h;
    // vec(x a^2) = (a^2)^T (x) I, vec(a^2 x) = I (x) a^2, vec(a x a) = a^T (x) a
    s += Eigen::kroneckerProduct(sq.transpose(), id).eval();
    s += Eigen::kroneckerProduct(id, sq).eval();
    s -= 2.0 * Eigen::kroneckerProduct(h.transpose(), h).eval();
  }
  return {n, std::move(s)};
}

std::vector<MatrixElement> hermitian_family_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    check_n(n);
    const auto nn = static_cast<Eigen::Index>(n);
    std::vector<MatrixElement> out;
    for (const auto& mj : j.at("a")) {
      if (mj.size() != n) throw ParseError("Hermitian family: matrix has wrong row count");
      MatrixElement m(nn, nn);
      for (std::size_t r = 0; r < n; ++r) {
        if (mj[r].size() != n) throw ParseError("Hermitian family: matrix has wrong column count");
        for (std::size_t c = 0; c < n; ++c) {
          const auto& v = mj[r][c];
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              v.is_number() ? Complex(v.get<double>(), 0.0)
                            : Complex(v.at(0).get<double>(), v.at(1).get<double>());
        }
      }
      out.push_back(std::move(m));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("Hermitian family: ") + e.what());
  }
}

nlohmann::json hermitian_family_to_json(const std::vector<MatrixElement>& a) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : a) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
      rows.push_back(row);
    }
    arr.push_back(rows);
  }
  return {{"n", a.empty() ? 0 : a[0].rows()}, {"a", arr}};
}

MatrixElement superop_gamma(const Superoperator& A, const MatrixElement& x, const MatrixElement& y) {
  require_size(A, x);
  require_size(A, y);
  const MatrixElement xs = x.adjoint();
  return 0.5 * (A.apply(xs) * y + xs * A.apply(y) - A.apply(xs * y));
}

MatrixElement superop_gamma2(const Superoperator& A, const MatrixElement& x,
                             const MatrixElement& y) {
  return 0.5 * (superop_gamma(A, A.apply(x), y) + superop_gamma(A, x, A.apply(y)) -
                A.apply(superop_gamma(A, x, y)));
}

namespace {

struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  double cutoff;
};

Spectrum spectrum(const Superoperator& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.matrix());
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  return {es.eigenvalues(), es.eigenvectors(), 1e-10 * std::max(1.0, top)};
}

}  // namespace

Eigen::MatrixXcd fix_projector(const Superoperator& A) {
  const auto sp = spectrum(A);
  const auto nn = sp.values.size();
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (std::abs(sp.values[i]) <= sp.cutoff) p += sp.vectors.col(i) * sp.vectors.col(i).adjoint();
  }
  return p;
}

MatrixElement fix_project(const Superoperator& A, const MatrixElement& x) {
  require_size(A, x);
  return unvec(fix_projector(A) * vec(x), A.n());
}

Eigen::MatrixXcd semigroup_matrix(const Superoperator& A, double t) {
  if (!(t >= 0.0)) throw DomainError("semigroup time must be nonnegative");
  const Eigen::MatrixXcd m = -t * A.matrix();
  return m.exp();
}

MatrixElement semigroup_apply(const Superoperator& A, const MatrixElement& x, double t) {
  require_size(A, x);
  return unvec(semigroup_matrix(A, t) * vec(x), A.n());
}

double spectral_oracle(const Superoperator& A) {
  const auto sp = spectrum(A);
  double m = 0.0;
  for (Eigen::Index i = 0; i < sp.values.size(); ++i) {
    if (sp.values[i] > sp.cutoff && (m == 0.0 || sp.values[i] < m)) m = sp.values[i];
  }
  if (m == 0.0) throw DomainError("generator has no nonzero eigenvalue; no spectral gap");
  return 1.0 / std::sqrt(m);
}

namespace {

double matrix_poincare_ratio_with(const Superoperator& A, const Eigen::MatrixXcd& proj,
                                  const MatrixElement& x, double p) {
  check_p_grid({p});
  require_size(A, x);
  const Eigen::VectorXcd v = vec(x);
  const MatrixElement centred = unvec(v - proj * v, A.n());
  if (!(max_abs(centred) > 1e-12 * max_abs(x))) {
    throw DomainError("element lies in the kernel of the generator");
  }
  const double num = matrix_lp_norm(centred, p);
  const MatrixElement xs = x.adjoint();
  const double d1 = matrix_lp_norm(superop_gamma(A, x, x), p / 2);
  const double d2 = matrix_lp_norm(superop_gamma(A, xs, xs), p / 2);
  const double den = std::sqrt(std::max(d1, d2));
  if (!(den > 0.0)) throw DomainError("zero gradient form");
  return num / den;
}

}  // namespace

double matrix_poincare_ratio(const Superoperator& A, const MatrixElement& x, double p) {
  return matrix_poincare_ratio_with(A, fix_projector(A), x, p);
}

MatrixElement matrix_from_params(const Eigen::VectorXd& x, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n * n);
  Eigen::VectorXcd v(nn);
  for (Eigen::Index i = 0; i < nn; ++i) v[i] = {x[i], x[nn + i]};
  return unvec(v, n);
}

namespace {

Eigen::VectorXd params_from_vec(const Eigen::VectorXcd& v) {
  Eigen::VectorXd x(2 * v.size());
  x.head(v.size()) = v.real();
  x.tail(v.size()) = v.imag();
  return x;
}

}  // namespace

RatioProblem matrix_ratio_problem(const Superoperator& A, double p) {
  check_p_grid({p});
  const Eigen::MatrixXcd proj = fix_projector(A);
  const std::size_t n = A.n();
  RatioProblem prob;
  prob.dim = 2 * n * n;
  prob.project = [proj, n](const Eigen::VectorXd& x) {
    const Eigen::VectorXcd v = vec(matrix_from_params(x, n));
    return params_from_vec(v - proj * v);
  };
  prob.ratio = [&A, proj, n, p](const Eigen::VectorXd& x) {
    return matrix_poincare_ratio_with(A, proj, matrix_from_params(x, n), p);
  };
  return prob;
}

PoincareReport matrix_poincare(const Superoperator& A, const std::vector<double>& p_grid,
                               std::size_t budget, std::uint64_t seed,
                               std::optional<double> alpha) {
  return sweep_and_fit([&A](double p) { return matrix_ratio_problem(A, p); }, p_grid, budget, seed,
                       alpha);
}

namespace {

// Q[(I,a),(J,b)] = F(E_I, E_J)_{ab}, I and J in vec order.
Eigen::MatrixXcd block_form(const Superoperator& A, bool second_order) {
  const std::size_t n = A.n();
  const auto nn = static_cast<Eigen::Index>(n);
  const auto n2 = nn * nn;
  std::vector<MatrixElement> units(static_cast<std::size_t>(n2));
  for (Eigen::Index i = 0; i < n2; ++i) {
    units[static_cast<std::size_t>(i)] = MatrixElement::Zero(nn, nn);
    units[static_cast<std::size_t>(i)](i % nn, i / nn) = 1.0;
  }
  Eigen::MatrixXcd q(n2 * nn, n2 * nn);
  parallel_for(static_cast<std::size_t>(n2), [&](std::size_t i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(n2); ++j) {
      const MatrixElement f = second_order ? superop_gamma2(A, units[i], units[j])
                                           : superop_gamma(A, units[i], units[j]);
      q.block(static_cast<Eigen::Index>(i) * nn, static_cast<Eigen::Index>(j) * nn, nn, nn) = f;
    }
  });
  return 0.5 * (q + q.adjoint());
}

double hermitian_min(const Eigen::MatrixXcd& m) { return linalg::hermitian_eigenvalues(m)[0]; }

}  // namespace

SuperopAlpha superop_alpha_sufficient(const Superoperator& A) {
  const Eigen::MatrixXcd q1 = block_form(A, false);
  const Eigen::MatrixXcd q2 = block_form(A, true);
  const double scale = 1.0 + linalg::hermitian_eigenvalues(q2).cwiseAbs().maxCoeff();
  const double slack = kAlphaTol * scale;
  auto gap = [&](double a) { return hermitian_min(q2 - a * q1); };
  SuperopAlpha out;
  if (gap(0.0) < -slack) {
    out.alpha = 0.0;
    out.min_eig = gap(0.0);
    return out;
  }
  double lo = 0.0;
  double hi = 2.0 * std::max(1e-300, linalg::hermitian_eigenvalues(A.matrix()).cwiseAbs().maxCoeff());
  if (gap(hi) >= -slack) {
    lo = hi;
  } else {
    while (hi - lo > kAlphaWidth) {
      const double mid = 0.5 * (lo + hi);
      (gap(mid) >= -slack ? lo : hi) = mid;
    }
  }
  out.alpha = lo;
  out.min_eig = gap(lo);
  return out;
}

MatrixElement random_matrix(std::size_t n, rng::Stream& stream) {
  const auto nn = static_cast<Eigen::Index>(n);
  MatrixElement x(nn, nn);
  for (Eigen::Index c = 0; c < nn; ++c) {
    for (Eigen::Index r = 0; r < nn; ++r) {
      const double re = stream.normal();
      const double im = stream.normal();
      x(r, c) = {re, im};
    }
  }
  return x;
}

MatrixBattery matrix_alpha_battery(const Superoperator& A, double alpha, std::size_t count,
                                   std::uint64_t seed, double tol) {
  std::vector<double> mins(count);
  parallel_for(count, [&](std::size_t i) {
    rng::Stream stream(seed, rng::Tag::battery, i);
    MatrixElement x = random_matrix(A.n(), stream);
    x /= matrix_lp_norm(x, 2.0);
    const MatrixElement h = superop_gamma2(A, x, x) - alpha * superop_gamma(A, x, x);
    mins[i] = linalg::hermitian_eigenvalues(linalg::checked_hermitian(h))[0];
  });
  MatrixBattery b;
  b.count = count;
  b.min_eig = count ? *std::min_element(mins.begin(), mins.end()) : 0.0;
  b.passed = b.min_eig >= -tol;
  return b;
}

}  // namespace cocycle_lab
