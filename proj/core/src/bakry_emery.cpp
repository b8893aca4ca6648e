#include "cocycle_lab/bakry_emery.hpp"

#include <algorithm>
#include <cmath>

#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/sphere_search.hpp"

namespace cocycle_lab {

std::string to_string(AlphaMethod m) {
  return m == AlphaMethod::pencil ? "pencil" : "bisection";
}

namespace {

void require_psd(const Eigen::MatrixXd& k) {
  const auto v = is_psd_kernel(k);
  if (!v.verdict) {
    throw DomainError("Gromov form is not positive semidefinite (min eigenvalue " +
                      std::to_string(v.min_eig) + ")");
  }
}

double max_diagonal(const Eigen::MatrixXd& k) {
  return k.size() ? std::max(0.0, k.diagonal().maxCoeff()) : 0.0;
}

}  // namespace

double kernel_gap(const Eigen::MatrixXd& k, double alpha) {
  return linalg::symmetric_min_eigen(k.cwiseProduct(k) - alpha * k).value;
}

AlphaCertificate best_alpha_bisection(const GromovForm& form, double tol) {
  const Eigen::MatrixXd& k = form.kernel;
  require_psd(k);
  const Eigen::MatrixXd kk = k.cwiseProduct(k);
  const double slack = tol * (1.0 + linalg::symmetric_min_eigen(kk).spectral_norm);
  auto probe = [&](double a) { return linalg::symmetric_min_eigen(kk - a * k); };
  auto feasible = [&](double a) { return probe(a).value >= -slack; };

  AlphaCertificate c;
  c.method = AlphaMethod::bisection;
  c.step = kAlphaWidth;
  double lo = 0.0;
  double hi = max_diagonal(k);  // diagonal psi^2 - alpha psi forbids more
  if (feasible(hi)) {
    lo = hi;
  } else {
    while (hi - lo > kAlphaWidth) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }
  c.alpha_star = lo;
  c.residual = probe(lo).value;
  const auto above = probe(lo + kAlphaWidth);
  c.min_eig_above = above.value;
  c.witness = above.vector;
  return c;
}

AlphaCertificate best_alpha_pencil(const GromovForm& form, double tol) {
  const Eigen::MatrixXd& k = form.kernel;
  require_psd(k);
  const Eigen::MatrixXd kk = k.cwiseProduct(k);
  const auto n = k.rows();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double lam_max = n ? std::max(0.0, lam.maxCoeff()) : 0.0;
  std::vector<Eigen::Index> range, kernel;
  for (Eigen::Index i = 0; i < n; ++i) {
    (lam[i] > 1e-9 * lam_max && lam[i] > 0 ? range : kernel).push_back(i);
  }

  AlphaCertificate c;
  c.method = AlphaMethod::pencil;
  c.step = kAlphaWidth;
  if (range.empty()) {
    c.alpha_star = 0;
    c.residual = c.min_eig_above = n ? linalg::symmetric_min_eigen(kk).value : 0.0;
    c.witness = Eigen::VectorXd::Zero(n);
    return c;
  }

  const auto r = static_cast<Eigen::Index>(range.size());
  const auto z = static_cast<Eigen::Index>(kernel.size());
  Eigen::MatrixXd ur(n, r), u0(n, z);
  Eigen::VectorXd lr(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    ur.col(i) = es.eigenvectors().col(range[i]);
    lr[i] = lam[range[i]];
  }
  for (Eigen::Index i = 0; i < z; ++i) u0.col(i) = es.eigenvectors().col(kernel[i]);

  const Eigen::MatrixXd m_rr = ur.transpose() * kk * ur;
  const Eigen::MatrixXd m_r0 = ur.transpose() * kk * u0;
  const Eigen::MatrixXd m_00 = u0.transpose() * kk * u0;
  const double scale = std::max(1.0, kk.cwiseAbs().maxCoeff());

  Eigen::MatrixXd s = m_rr;
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(z, r);  // v_0 = back * v_r
  if (z > 0) {
    // Pseudo-inverse with an absolute cutoff: a relative one amplifies
    // roundoff couplings into spurious directions.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e0(m_00);
    const double cut = 1e-10 * scale;
    Eigen::VectorXd inv = e0.eigenvalues();
    for (auto& v : inv) v = v > cut ? 1.0 / v : 0.0;
    const Eigen::MatrixXd pinv =
        e0.eigenvectors() * inv.asDiagonal() * e0.eigenvectors().transpose();
    const Eigen::MatrixXd m_0r = m_r0.transpose();
    const double coupling = (m_0r - m_00 * (pinv * m_0r)).cwiseAbs().maxCoeff();
    if (coupling > 1e-8 * scale) {
      auto fb = best_alpha_bisection(form, tol);
      fb.fell_back = true;
      return fb;
    }
    back = -pinv * m_0r;
    s -= m_r0 * pinv * m_0r;
  }

  const Eigen::VectorXd isq = lr.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd pencil = isq.asDiagonal() * s * isq.asDiagonal();
  pencil = 0.5 * (pencil + pencil.transpose());
  const auto me = linalg::symmetric_min_eigen(pencil);
  c.alpha_star = std::clamp(me.value, 0.0, max_diagonal(k));
  const Eigen::VectorXd vr = isq.asDiagonal() * me.vector;
  Eigen::VectorXd w = ur * vr + u0 * (back * vr);
  if (w.norm() > 0) w.normalize();
  c.witness = w;
  c.residual = kernel_gap(k, c.alpha_star);
  c.min_eig_above = kernel_gap(k, c.alpha_star + kAlphaWidth);
  (void)tol;
  return c;
}

AlphaCertificate best_alpha(const GromovForm& k, AlphaMethod method, double tol) {
  return method == AlphaMethod::pencil ? best_alpha_pencil(k, tol) : best_alpha_bisection(k, tol);
}

PositivityResult check_element(const Semigroup& sg, const AlgebraElement& f, double alpha,
                               double tol) {
  if (!(alpha >= 0.0)) throw InvalidParameter("alpha must be nonnegative");
  const auto h = gamma2(sg, f, f) - gamma(sg, f, f) * Complex(alpha);
  return operator_positivity(h, tol);
}

ViolationSearch search_violation(const Semigroup& sg, double alpha, std::size_t budget,
                                 std::uint64_t seed, double tol) {
  const auto& group = sg.group_ptr();
  const auto n = static_cast<Eigen::Index>(group->order());
  auto to_element = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXcd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = {x[i], x[n + i]};
    return AlgebraElement(group, std::move(c));
  };

  SphereProblem prob;
  prob.dim = static_cast<std::size_t>(2 * n);
  prob.objective = [&](const Eigen::VectorXd& x) {
    const auto f = to_element(x);
    const auto h = gamma2(sg, f, f) - gamma(sg, f, f) * Complex(alpha);
    return -linalg::hermitian_eigenvalues(linalg::checked_hermitian(regular_rep(h)))[0];
  };
  const auto form = gromov_form(sg.psi());
  const auto gap = linalg::symmetric_min_eigen(form.kernel.cwiseProduct(form.kernel) -
                                               alpha * form.kernel);
  Eigen::VectorXd s0 = Eigen::VectorXd::Zero(2 * n);
  s0.head(n) = gap.vector;
  prob.seeds.push_back(s0);

  SearchOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  const auto res = maximize_on_sphere(prob, opt);

  ViolationSearch out;
  out.min_eig = -res.best;
  const auto f = to_element(res.argmax);
  const auto check = check_element(sg, f, alpha, tol);
  out.found = !check.psd;
  out.min_eig = check.min_eig;
  out.element = f;
  return out;
}

}  // namespace cocycle_lab
