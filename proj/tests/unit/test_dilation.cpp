#include <doctest.h>

#include "cocycle_lab/bakry_emery.hpp"
#include "cocycle_lab/builtins.hpp"
#include "cocycle_lab/dilation.hpp"
#include "cocycle_lab/errors.hpp"
#include "support.hpp"

using namespace cocycle_lab;
using doctest::Approx;

namespace {

const Semigroup& walsh_sg() {
  static const Semigroup sg(builtins::walsh(2, 2));
  return sg;
}

const DilationModel& walsh_model() {
  static const DilationModel m(walsh_sg());
  return m;
}

// E|N(0, s2)|^p for even p
double gaussian_moment(double s2, unsigned p) {
  double dbl_fact = 1;
  for (unsigned k = p - 1; k > 1; k -= 2) dbl_fact *= k;
  return dbl_fact * std::pow(s2, p / 2.0);
}

}  // namespace

TEST_CASE("Brownian scenario statistics and determinism") {
  const auto& m = walsh_model();
  const auto s = sample_scenario(m.cocycle(), 100, 0.01, 4096, 83);
  REQUIRE(s.d == m.cocycle().dimension);
  CHECK(s.horizon() == Approx(1.0));
  for (std::size_t j = 0; j < s.d; ++j) {
    double sum = 0, sum2 = 0;
    for (std::size_t w = 0; w < s.samples; ++w) {
      const double b = s.path(w)(100, static_cast<Eigen::Index>(j));
      sum += b;
      sum2 += b * b;
    }
    const double n = static_cast<double>(s.samples);
    const double var = sum2 / n - (sum / n) * (sum / n);
    // Var of the sample variance of N(0, 2) is about 2 * 2^2 / n
    CHECK(std::abs(var - 2.0) <= 5.0 * std::sqrt(8.0 / n));
  }
  CHECK(s.path(7).row(0).cwiseAbs().maxCoeff() == 0.0);

  const auto again = sample_scenario(m.cocycle(), 100, 0.01, 4096, 83);
  CHECK(again.increments == s.increments);
  CHECK(again.copy_increments == s.copy_increments);
  CHECK(s.increments[5](3, 1) == brownian_increment(83, false, 5, 3, 1, s.d, 0.01));
  CHECK(s.copy_increments[5](3, 1) == brownian_increment(83, true, 5, 3, 1, s.d, 0.01));
  CHECK(s.copy_increments[5](3, 1) != s.increments[5](3, 1));

  CHECK_THROWS_AS(sample_scenario(m.cocycle(), 10, 0.0, 8, 1), DomainError);
  CHECK_THROWS_AS(sample_scenario(m.cocycle(), 10, -1.0, 8, 1), DomainError);
}

TEST_CASE("twisted vectors have norm psi") {
  const auto& m = walsh_model();
  for (Element h = 0; h < m.order(); ++h)
    for (Element g = 0; g < m.order(); ++g)
      CHECK(m.eta(h, g).squaredNorm() == Approx(walsh_sg().psi()(g)).epsilon(1e-10));
}

TEST_CASE("dilation matrices") {
  const auto& m = walsh_model();
  const auto s = sample_scenario(m.cocycle(), 8, 0.125, 2048, 89);
  const auto x = support::random_element(walsh_sg().group_ptr(), 97, 0);
  CHECK(dilation_matrix(m, x, 0.0, s, 3) == regular_rep(x));
  CHECK_THROWS_AS(dilation_matrix(m, x, 0.3, s, 0), DomainError);
  CHECK(grid_index(s, 0.5) == 4);

  // linear in x
  const auto y = support::random_element(walsh_sg().group_ptr(), 97, 1);
  CHECK(support::max_abs(dilation_matrix(m, x + y, 0.5, s, 2) - dilation_matrix(m, x, 0.5, s, 2) -
                         dilation_matrix(m, y, 0.5, s, 2)) < 1e-13);

  for (double t : {0.25, 1.0}) {
    const auto check = markov_check(m, x, t, s);
    CHECK(check.passed);
    CHECK(check.max_deterministic_error <= 1e-12);
  }

  // pi_t is a trace-preserving *-homomorphism
  for (double p : {2.0, 4.0}) {
    std::vector<Eigen::MatrixXcd> mats;
    for (std::size_t w = 0; w < s.samples; ++w) mats.push_back(dilation_matrix(m, x, 1.0, s, w));
    const auto est = mc_lp_norm(mats, p);
    CHECK(std::abs(est.value - lp_norm(x, p)) <= 5 * est.se + 1e-10);
  }
  const auto a = dilation_matrix(m, x, 1.0, s, 4), b = dilation_matrix(m, y, 1.0, s, 4);
  CHECK(support::max_abs(dilation_matrix(m, x * y, 1.0, s, 4) - a * b) < 1e-12);
  CHECK(support::max_abs(dilation_matrix(m, x.adjoint(), 1.0, s, 4) - a.adjoint()) < 1e-13);
}

TEST_CASE("crossed product arithmetic") {
  const Semigroup sg(builtins::heisenberg_wordlength(2));
  const DilationModel m(sg);
  const auto s = sample_scenario(m.cocycle(), 4, 0.25, 16, 101);
  rng::Stream rs(103, rng::Tag::battery, 0);
  auto term = [&](Element g) {
    Eigen::VectorXd xi(static_cast<Eigen::Index>(m.cocycle().dimension));
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = rs.normal();
    return CrossedTerm{Complex(rs.normal(), rs.normal()), xi, g};
  };
  for (int trial = 0; trial < 10; ++trial) {
    const CrossedElement a{term(trial % 8), term((3 * trial + 1) % 8)};
    const CrossedElement b{term((trial + 5) % 8)};
    for (std::size_t w : {0u, 9u}) {
      const auto ma = crossed_matrix(m, a, s, w, 2), mb = crossed_matrix(m, b, s, w, 2);
      CHECK(support::max_abs(crossed_matrix(m, crossed_product(m, a, b), s, w, 2) - ma * mb) < 1e-10);
      CHECK(support::max_abs(crossed_matrix(m, crossed_adjoint(m, a), s, w, 2) - ma.adjoint()) <
            1e-10);
    }
  }
  const CrossedElement one{{Complex(1), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.cocycle().dimension)), 0}};
  CHECK(crossed_matrix(m, one, s, 0, 4).trace() / static_cast<double>(m.order()) == Complex(1));
}

TEST_CASE("martingale transform") {
  const auto& m = walsh_model();
  const auto g = walsh_sg().group_ptr();
  const auto s = sample_scenario(m.cocycle(), 16, 0.0625, 2048, 107);

  for (const auto& mat : martingale_transform(m, AlgebraElement::identity(g), s, false))
    CHECK(mat.cwiseAbs().maxCoeff() == 0.0);

  const auto x = support::random_element(g, 109, 0);
  const double ito = ito_isometry_analytic(m, x, s);
  const auto coupled = mc_power_mean(martingale_transform(m, x, s, false), 2);
  const auto decoupled = mc_power_mean(martingale_transform(m, x, s, true), 2);
  CHECK(std::abs(coupled.value - ito) <= 5 * coupled.se);
  CHECK(std::abs(decoupled.value - ito) <= 5 * decoupled.se);

  // one step: ||M(lambda(g))||_2^2 = psi(g) 2 delta e^{-2 L psi(g)}
  const auto one = sample_scenario(m.cocycle(), 1, 0.5, 4096, 113);
  for (Element e = 1; e < 4; ++e) {
    const auto l = AlgebraElement::lambda(g, e, Complex(0.0, 2.0));
    const double psi = walsh_sg().psi()(e);
    const double analytic = 4.0 * psi * 2 * 0.5 * std::exp(-2 * 0.5 * psi);
    CHECK(ito_isometry_analytic(m, l, one) == Approx(analytic).epsilon(1e-12));
    const auto est = mc_power_mean(martingale_transform(m, l, one, false), 2);
    CHECK(std::abs(est.value - analytic) <= 5 * est.se);
  }

  const auto no_copy = sample_scenario(m.cocycle(), 4, 0.25, 8, 1, false);
  CHECK_THROWS_AS(martingale_transform(m, x, no_copy, true), DomainError);
}

TEST_CASE("brackets of a single group element") {
  const auto& m = walsh_model();
  const auto g = walsh_sg().group_ptr();
  const auto s = sample_scenario(m.cocycle(), 16, 0.0625, 1024, 127);
  for (Element e = 1; e < 4; ++e) {
    const double psi = walsh_sg().psi()(e);
    double sum = 0;
    for (std::size_t k = 0; k < s.steps; ++k)
      sum += std::exp(-2 * (s.horizon() - k * s.delta) * psi);
    const double closed = 2 * s.delta * psi * sum;
    for (double p : {2.0, 4.0, 8.0}) {
      const auto br = bracket_estimates(m, AlgebraElement::lambda(g, e), s, p);
      CHECK(br.hc.value * br.hc.value == Approx(closed).epsilon(1e-10));
      CHECK(br.hr.value == Approx(br.hc.value).epsilon(1e-10));
      CHECK(br.hc.se < 1e-12);
    }
    // hd^p = sum_k e^{-p (L - t_k) psi} E|N(0, 2 delta psi)|^p
    for (unsigned p : {2u, 4u}) {
      double analytic = 0;
      for (std::size_t k = 0; k < s.steps; ++k)
        analytic += std::exp(-static_cast<double>(p) * (s.horizon() - k * s.delta) * psi) *
                    gaussian_moment(2 * s.delta * psi, p);
      const auto hd = bracket_estimates(m, AlgebraElement::lambda(g, e), s, p).hd;
      const double total = std::pow(hd.value, p);
      const double total_se = p * std::pow(hd.value, p - 1) * hd.se;
      CHECK(std::abs(total - analytic) <= 5 * total_se + 1e-12);
    }
  }
  const auto zero = bracket_estimates(m, AlgebraElement::zero(g), s, 4);
  CHECK(zero.hc.value == 0.0);
  CHECK(zero.hd.value == 0.0);
  CHECK_THROWS_AS(bracket_estimates(m, AlgebraElement::zero(g), s, 3), DomainError);
  CHECK_THROWS_AS(bracket_estimates(m, AlgebraElement::zero(g), s, 10), DomainError);
}

TEST_CASE("conditioned square function at p = 2 is the Ito sum") {
  const auto& m = walsh_model();
  const auto s = sample_scenario(m.cocycle(), 8, 0.125, 256, 131);
  const auto x = support::random_element(walsh_sg().group_ptr(), 137, 0);
  const auto br = bracket_estimates(m, x, s, 2);
  CHECK(br.hc.value * br.hc.value == Approx(ito_isometry_analytic(m, x, s)).epsilon(1e-10));
}

TEST_CASE("refinement of the partition") {
  const auto& m = walsh_model();
  const auto x = support::random_element(walsh_sg().group_ptr(), 139, 0);
  const auto coarse = sample_scenario(m.cocycle(), 16, 0.0625, 2048, 149);
  const auto fine = sample_scenario(m.cocycle(), 32, 0.03125, 2048, 151);
  const auto a = bracket_estimates(m, x, coarse, 4).hc;
  const auto b = bracket_estimates(m, x, fine, 4).hc;
  // the left-point sums differ deterministically by the Riemann error, which
  // is exact at p = 2
  const double bias = std::abs(std::sqrt(ito_isometry_analytic(m, x, coarse)) -
                               std::sqrt(ito_isometry_analytic(m, x, fine)));
  CHECK(std::abs(a.value - b.value) <= 5 * std::hypot(a.se, b.se) + bias);
}

TEST_CASE("inequality report on Walsh test vectors") {
  const auto& m = walsh_model();
  const auto g = walsh_sg().group_ptr();
  const double alpha = best_alpha_bisection(gromov_form(walsh_sg().psi())).alpha_star;
  const auto s = sample_scenario(m.cocycle(), 16, 0.125, 1024, 157);
  const std::vector<AlgebraElement> xs{AlgebraElement::lambda(g, 3) + AlgebraElement::lambda(g, 1),
                                       support::random_element(g, 163, 0)};
  for (const auto& x : xs) {
    double lo = 1e300, hi = 0;
    for (double p : {2.0, 4.0, 8.0}) {
      const auto r = inequality_report(m, x, s, p, alpha);
      if (p == 4.0) CHECK(r.decoupling_ratio.value <= 4 + 3 * r.decoupling_ratio.se);
      REQUIRE(r.bracket_slack.has_value());
      CHECK(r.bracket_slack->value >= -3 * r.bracket_slack->se);
      lo = std::min(lo, r.bdg_ratio.value);
      hi = std::max(hi, r.bdg_ratio.value);
    }
    CHECK(hi <= 2.0);
    CHECK(lo > 0.0);
  }
  CHECK(bracket_envelope(walsh_sg(), xs[0], 1.0, 1e6, 2) ==
        Approx(std::sqrt(lp_norm(gamma(walsh_sg(), xs[0], xs[0]), 1))));
  CHECK_FALSE(inequality_report(m, xs[0], s, 2).bracket_slack.has_value());
}
