#include <doctest.h>

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/bakry_emery.hpp"
#include "cocycle_lab/builtins.hpp"
#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/linalg.hpp"
#include "batteries.hpp"
#include "support.hpp"

using namespace cocycle_lab;
using doctest::Approx;

namespace {

std::vector<LengthFunction> family() {
  return {builtins::walsh(2, 3), builtins::delta(4), builtins::wordlength(8),
          builtins::heisenberg_delta(2), builtins::heisenberg_wordlength(3), builtins::cosine(6)};
}

double sum_psi_abs2(const Semigroup& sg, const AlgebraElement& f) {
  double s = 0;
  for (Element g = 0; g < f.group().order(); ++g) s += sg.psi()(g) * std::norm(f[g]);
  return s;
}

}  // namespace

TEST_CASE("regular representation") {
  const auto z3 = support::share(build_cyclic(3));
  const auto id = regular_rep(AlgebraElement::identity(z3));
  CHECK(support::max_abs(id - Eigen::MatrixXcd::Identity(3, 3)) == 0.0);

  const auto perm = regular_rep(AlgebraElement::lambda(z3, 1));
  for (Eigen::Index c = 0; c < 3; ++c) CHECK(perm.col(c).cwiseAbs().sum() == 1.0);

  const auto f = AlgebraElement::lambda(z3, 1) + AlgebraElement::lambda(z3, 2);
  const auto m = regular_rep(f);
  CHECK(m(0, 0) == Complex(0));
  CHECK(m(1, 0) == Complex(1));
  CHECK(m(2, 0) == Complex(1));
  const auto ff = f * f;
  CHECK(ff[0] == Complex(2));
  CHECK(ff[1] == Complex(1));
  CHECK(ff[2] == Complex(1));
  CHECK(support::max_abs(m * m - regular_rep(ff)) < 1e-15);
}

TEST_CASE("*-homomorphism on random pairs") {
  for (const auto& psi : family()) {
    const auto& g = psi.group_ptr();
    for (std::uint64_t i = 0; i < 100 / family().size() + 1; ++i) {
      const auto f = support::random_element(g, 1, 2 * i);
      const auto h = support::random_element(g, 1, 2 * i + 1);
      CHECK(support::max_abs(regular_rep(f * h) - regular_rep(f) * regular_rep(h)) < 1e-12);
      CHECK(support::max_abs(regular_rep(f.adjoint()) - regular_rep(f).adjoint()) == 0.0);
      CHECK(support::max_abs((f * h).coeffs() - support::convolve(*g, f.coeffs(), h.coeffs())) <
            1e-12);
      const Complex tr = regular_rep(f).trace() / static_cast<double>(g->order());
      CHECK(std::abs(tr - f.tau()) < 1e-12);
    }
  }
}

TEST_CASE("L_p norms") {
  const auto z2 = support::share(build_cyclic(2));
  const auto one_plus = AlgebraElement::identity(z2) + AlgebraElement::lambda(z2, 1);
  CHECK(lp_norm(one_plus, 2) == Approx(std::sqrt(2.0)));
  CHECK(lp_norm(one_plus, linalg::kInfinity) == Approx(2.0));
  CHECK_THROWS_AS(lp_norm(one_plus, 0.5), DomainError);

  const auto h = support::share(build_heisenberg(2));
  for (double p : {1.0, 2.0, 3.0, 8.0, linalg::kInfinity}) {
    CHECK(lp_norm(AlgebraElement::lambda(h, 5), p) == Approx(1.0));
  }
  // Parseval: tau(f* f) = sum |a_g|^2
  const auto f = support::random_element(h, 4, 0);
  CHECK(lp_norm(f, 2) * lp_norm(f, 2) == Approx(f.coeffs().squaredNorm()).epsilon(1e-12));
}

TEST_CASE("semigroup, generator and fixed points") {
  const auto psi = builtins::wordlength(6);
  const Semigroup sg(psi);
  const auto f = support::random_element(psi.group_ptr(), 9, 0);
  CHECK(support::max_abs(sg.apply(f, 0).coeffs() - f.coeffs()) == 0.0);
  for (Element g = 0; g < 6; ++g) {
    const auto l = AlgebraElement::lambda(psi.group_ptr(), g);
    const auto a = sg.apply(sg.apply(l, 0.3), 0.5);
    const auto b = sg.apply(l, 0.8);
    CHECK(std::abs(a[g] - b[g]) < 1e-15);
    CHECK(sg.generator(l)[g] == Complex(psi(g)));
  }
  const auto e = sg.fix_project(f);
  CHECK(support::max_abs(e.coeffs() - AlgebraElement::identity(psi.group_ptr()).coeffs() * f.tau()) == 0.0);
  CHECK(support::max_abs(sg.fix_project(e).coeffs() - e.coeffs()) == 0.0);
  CHECK(e.tau() == f.tau());
  CHECK_THROWS_AS(sg.apply(f, -1.0), DomainError);

  // a psi with a nontrivial kernel: Walsh on Z_2^2 restricted to the first coordinate
  auto g = support::share(build_product(std::vector<FiniteGroup>{build_cyclic(2), build_cyclic(2)}));
  const Semigroup part(LengthFunction(g, {0, 0, 1, 1}));
  const auto x = support::random_element(g, 9, 1);
  const auto px = part.fix_project(x);
  CHECK(px[1] == x[1]);
  CHECK(px[2] == Complex(0));
}

TEST_CASE("semigroup contracts every L_p") {
  for (const auto& psi : family()) {
    const Semigroup sg(psi);
    for (std::uint64_t i = 0; i < 4; ++i) {
      const auto f = support::random_element(psi.group_ptr(), 5, i);
      for (double t : {0.1, 1.0})
        for (double p : {1.0, 2.0, 4.0, linalg::kInfinity})
          CHECK(lp_norm(sg.apply(f, t), p) <= lp_norm(f, p) * (1 + 1e-12));
    }
  }
}

TEST_CASE("Gamma and Gamma_2") {
  const auto wl4 = builtins::wordlength(4);
  const Semigroup sg4(wl4);
  const auto g = wl4.group_ptr();
  for (Element x = 0; x < 4; ++x) {
    const auto l = AlgebraElement::lambda(g, x);
    const auto gm = gamma(sg4, l, l);
    const auto g2 = gamma2(sg4, l, l);
    CHECK(gm[0] == Complex(wl4(x)));
    CHECK(g2[0] == Complex(wl4(x) * wl4(x)));
    CHECK(gm.coeffs().tail(3).cwiseAbs().maxCoeff() == 0.0);
  }
  const auto f = AlgebraElement::lambda(g, 1) + AlgebraElement::lambda(g, 2);
  for (auto path : {GammaPath::kernel, GammaPath::definitional}) {
    CHECK(gamma(sg4, f, f, path)[0].real() == Approx(3.0));
  }

  for (const auto& psi : family()) {
    const Semigroup sg(psi);
    for (std::uint64_t i = 0; i < 5; ++i) {
      const auto a = support::random_element(psi.group_ptr(), 11, 2 * i);
      const auto b = support::random_element(psi.group_ptr(), 11, 2 * i + 1);
      const auto k1 = gamma(sg, a, b), d1 = gamma(sg, a, b, GammaPath::definitional);
      const auto k2 = gamma2(sg, a, b), d2 = gamma2(sg, a, b, GammaPath::definitional);
      const double s1 = 1 + support::max_abs(k1.coeffs()), s2 = 1 + support::max_abs(k2.coeffs());
      CHECK(support::max_abs(k1.coeffs() - d1.coeffs()) <= 1e-12 * s1);
      CHECK(support::max_abs(k2.coeffs() - d2.coeffs()) <= 1e-12 * s2);
      CHECK(gamma(sg, a, a).tau().real() == Approx(sum_psi_abs2(sg, a)).epsilon(1e-12));
      CHECK(operator_positivity(gamma(sg, a, a)).psd);
      CHECK(operator_positivity(gamma2(sg, a, a)).psd);
      // Gamma_2 vanishes on Fix
      const auto fixed = sg.fix_project(a);
      CHECK(support::max_abs(gamma2(sg, fixed, fixed).coeffs()) == 0.0);
    }
  }

  // K(s,t) (psi(s) + psi(t) - psi(s^-1 t)) / 2 = K(s,t)^2 entrywise
  const auto wl8 = builtins::wordlength(8);
  const auto k = gromov_form(wl8).kernel;
  const auto& z8 = wl8.group();
  for (Element s = 0; s < 8; ++s)
    for (Element t = 0; t < 8; ++t)
      CHECK(0.5 * (wl8(s) + wl8(t) - wl8(z8.mul(z8.inv(s), t))) * k(s, t) == k(s, t) * k(s, t));

  const auto other = support::share(build_cyclic(5));
  CHECK_THROWS_AS(gamma(sg4, AlgebraElement::identity(other), AlgebraElement::identity(other)),
                  DomainError);
}

TEST_CASE("operator positivity") {
  const auto z4 = support::share(build_cyclic(4));
  const auto one = AlgebraElement::identity(z4);
  const auto r1 = operator_positivity(one);
  CHECK(r1.psd);
  CHECK(r1.min_eig == Approx(1.0));

  const auto l1 = AlgebraElement::lambda(z4, 1);
  const auto h = l1 + l1.adjoint() - one * Complex(3);
  const auto r2 = operator_positivity(h);
  CHECK_FALSE(r2.psd);
  CHECK(r2.min_eig == Approx(-5.0));   // 2 cos(pi) - 3
  CHECK_THROWS_AS(operator_positivity(l1), DomainError);
}

TEST_CASE("Bakry-Emery decay when the kernel criterion holds") {
  for (const auto& psi : family()) {
    const Semigroup sg(psi);
    const double alpha = best_alpha_bisection(gromov_form(psi)).alpha_star;
    for (std::uint64_t i = 0; i < 4; ++i) {
      const auto f = support::random_element(psi.group_ptr(), 21, i);
      for (double t : {0.1, 0.5}) {
        const auto tf = sg.apply(f, t);
        const auto lhs = sg.apply(gamma(sg, f, f), t) * Complex(std::exp(-2 * alpha * t)) -
                         gamma(sg, tf, tf);
        CHECK(operator_positivity(lhs, 1e-9).psd);
      }
    }
  }
}

TEST_CASE("element JSON round trip") {
  const auto g = support::share(build_cyclic(3));
  const auto f = support::random_element(g, 2, 0);
  const auto back = element_from_json(element_to_json(f), g);
  CHECK(support::max_abs(back.coeffs() - f.coeffs()) == 0.0);
  CHECK_THROWS_AS(element_from_json(nlohmann::json{{"coeffs", {1, 2}}}, g), ValidationError);
  CHECK_THROWS_AS(element_from_json(nlohmann::json{{"c", 1}}, g), ParseError);
}

TEST_CASE("Cauchy-Schwarz for Gamma") {
  for (const auto& psi : family()) {
    const Semigroup sg(psi);
    for (double p : {1.0, 2.0, 4.0}) CHECK(batteries::cauchy_schwarz_slack(sg, p, 8, 3) >= -1e-10);
  }
}

TEST_CASE("regularity inequality for positive elements") {
  for (const auto& psi : family()) {
    const Semigroup sg(psi);
    CHECK(batteries::regularity_slack(sg, 2, 6, 5) >= -1e-9);
    CHECK(batteries::regularity_slack(sg, 4, 6, 5) >= -1e-9);
  }
}
