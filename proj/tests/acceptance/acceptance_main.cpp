// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "batteries.hpp"
#include "cocycle_lab/bakry_emery.hpp"
#include "cocycle_lab/builtins.hpp"
#include "cocycle_lab/dilation.hpp"
#include "cocycle_lab/experiment.hpp"
#include "cocycle_lab/matrix_semigroup.hpp"
#include "cocycle_lab/poincare.hpp"

using namespace cocycle_lab;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& why) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << why << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double time_limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > time_limit_s) {
    o.ok = false;
    o.detail << " [over time limit " << time_limit_s << " s]";
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d  %s:%s (%.2f s)\n", o.ok ? "PASS" : "FAIL", id, title, o.detail.str().c_str(),
              secs);
  std::fflush(stdout);
}

AlgebraElement unit_element(const GroupPtr& g, std::uint64_t seed, std::uint64_t i) {
  auto f = batteries::draw(g, seed, i);
  return f * Complex(1.0 / f.coeffs().norm());
}

std::vector<LengthFunction> example_family() {
  return {builtins::walsh(2, 3),           builtins::walsh(3, 2),
          builtins::walsh(4, 1),           builtins::heisenberg_delta(2),
          builtins::heisenberg_wordlength(3), builtins::wordlength(8),
          builtins::wordlength(16),        builtins::cosine(7)};
}

MatrixElement diagonal(std::initializer_list<double> d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v[i++] = x;
  return v.asDiagonal();
}

}  // namespace

int main() {
  criterion(1, "alpha*(Z_n, 1 - delta) = (n+2)/(2n), n = 2..12, both methods", 1.0, [](Outcome& o) {
    double worst = 0;
    for (std::size_t n = 2; n <= 12; ++n) {
      const auto k = gromov_form(builtins::delta(n));
      const double want = (n + 2.0) / (2.0 * n);
      const auto b = best_alpha_bisection(k), p = best_alpha_pencil(k);
      worst = std::max({worst, std::abs(b.alpha_star - want), std::abs(p.alpha_star - want)});
      o.require(p.method == AlphaMethod::pencil, "pencil fell back at n=" + std::to_string(n));
    }
    o.detail << " max error " << worst;
    o.require(worst <= 1e-8, "error above 1e-8");
  });

  criterion(2, "Schur identity for word length, even n = 4..32; delta control", 1.0, [](Outcome& o) {
    double worst = 0;
    for (std::size_t n = 4; n <= 32; n += 2) worst = std::max(worst, verify_schur_identity(n).residual);
    const auto delta_family = [](std::size_t m) {
      return gromov_form(builtins::delta(m)).kernel.bottomRightCorner(m - 1, m - 1).eval();
    };
    const double control = verify_schur_identity(4, delta_family).residual;
    o.detail << " max residual " << worst << ", control residual " << control;
    o.require(worst <= 1e-12, "residual above 1e-12");
    o.require(control > 0.1, "control residual not above 0.1");
  });

  criterion(3, "alpha*(Z_n word length) = 1, n = 4, 6, 8, 10", 10.0, [](Outcome& o) {
    double worst = 0;
    for (std::size_t n : {4u, 6u, 8u, 10u}) {
      const auto k = gromov_form(builtins::wordlength(n));
      worst = std::max({worst, std::abs(best_alpha_bisection(k).alpha_star - 1.0),
                        std::abs(best_alpha_pencil(k).alpha_star - 1.0)});
    }
    o.detail << " max error " << worst;
    o.require(worst <= 1e-8, "error above 1e-8");
  });

  criterion(4, "kernel and definitional Gamma / Gamma_2 agree on 200 random elements", 10.0,
            [](Outcome& o) {
              const auto fam = example_family();
              const std::size_t per = 200 / fam.size();
              double worst = 0;
              std::size_t count = 0;
              for (std::size_t gi = 0; gi < fam.size(); ++gi) {
                const Semigroup sg(fam[gi]);
                for (std::size_t i = 0; i < per; ++i, ++count) {
                  const auto f = unit_element(sg.group_ptr(), 401 + gi, 2 * i);
                  const auto h = unit_element(sg.group_ptr(), 401 + gi, 2 * i + 1);
                  for (const auto* y : {&f, &h}) {
                    const double e1 = (gamma(sg, f, *y) - gamma(sg, f, *y, GammaPath::definitional))
                                          .coeffs().cwiseAbs().maxCoeff();
                    const double e2 = (gamma2(sg, f, *y) - gamma2(sg, f, *y, GammaPath::definitional))
                                          .coeffs().cwiseAbs().maxCoeff();
                    worst = std::max({worst, e1, e2});
                  }
                }
              }
              o.detail << " " << count << " elements over " << fam.size() << " groups, max difference "
                       << worst;
              o.require(count >= 200, "fewer than 200 elements");
              o.require(worst <= 1e-12, "difference above 1e-12");
            });

  criterion(5, "worst constant at p = 2 meets the exact L2 oracle", 60.0, [](Outcome& o) {
    const std::vector<std::pair<std::string, LengthFunction>> cases{
        {"walsh Z_2^3", builtins::walsh(2, 3)},
        {"delta Z_3", builtins::delta(3)},
        {"word length Z_8", builtins::wordlength(8)}};
    for (const auto& [name, psi] : cases) {
      const Semigroup sg(psi);
      const auto w = worst_constant(sg, 2.0, 20000, 5);
      const double oracle = l2_oracle(sg);
      o.detail << " " << name << " " << w.constant << "/" << oracle << ";";
      o.require(std::abs(w.constant - oracle) <= 1e-4, name + " off by more than 1e-4");
      o.require(w.constant <= oracle + 1e-8, name + " above the oracle");
    }
  });

  criterion(6, "fitted exponent of C_p over p = 2..16 is at most 0.6", 600.0, [](Outcome& o) {
    const std::vector<double> grid{2, 4, 6, 8, 12, 16};
    const Semigroup walsh(builtins::walsh(2, 3));
    const double wa = best_alpha_bisection(gromov_form(walsh.psi())).alpha_star;
    const auto w = sweep_and_fit(walsh, grid, 20000, 6, wa);
    const auto A = heisenberg_multiplier(2, MultiplierMode::delta);
    const auto m = matrix_poincare(A, grid, 20000, 6, superop_alpha_sufficient(A).alpha);
    o.detail << " walsh Z_2^3 slope " << w.fit.slope << " (se " << w.fit.slope_se << "), M_2 slope "
             << m.fit.slope << " (se " << m.fit.slope_se << ")";
    o.require(w.fit.slope <= 0.6, "walsh slope above 0.6");
    o.require(m.fit.slope <= 0.6, "M_2 slope above 0.6");
  });

  criterion(7, "matrix algebra: Gamma_2 - (n+2)/(2n) Gamma >= -1e-9; Lindblad commutator form", 30.0,
            [](Outcome& o) {
              for (std::size_t n : {2u, 3u, 4u}) {
                const auto b = matrix_alpha_battery(heisenberg_multiplier(n, MultiplierMode::delta),
                                                    (n + 2.0) / (2.0 * n), 200, 700 + n);
                o.detail << " n=" << n << " min eig " << b.min_eig << ";";
                o.require(b.count == 200 && b.min_eig >= -1e-9, "battery failed at n=" + std::to_string(n));
              }
              const std::vector<MatrixElement> fam{diagonal({0, 1, 0, 1}), diagonal({0, 0, 1, 1})};
              const auto L = lindblad_generator(fam);
              double worst = 0;
              for (std::uint64_t i = 0; i < 100; ++i) {
                rng::Stream s(77, rng::Tag::battery, i);
                const auto x = random_matrix(4, s);
                MatrixElement oracle = MatrixElement::Zero(4, 4);
                for (const auto& a : fam) {
                  const MatrixElement c = a * x - x * a;
                  oracle += c.adjoint() * c;
                }
                worst = std::max(worst, (superop_gamma(L, x, x) - oracle).cwiseAbs().maxCoeff());
              }
              o.detail << " Lindblad max difference " << worst;
              o.require(worst <= 1e-10, "Lindblad Gamma differs from the commutator form");
            });

  criterion(8, "dilation statistics (4096 samples)", 300.0, [](Outcome& o) {
    const Semigroup sg(builtins::walsh(2, 2));
    const DilationModel model(sg);
    const double alpha = best_alpha_bisection(gromov_form(sg.psi())).alpha_star;
    const auto s = sample_scenario(model.cocycle(), 32, 1.0 / 16, 4096, 8);
    const auto g = sg.group_ptr();
    const std::vector<AlgebraElement> xs{
        AlgebraElement::lambda(g, 1) + AlgebraElement::lambda(g, 2),
        AlgebraElement::lambda(g, 3) + AlgebraElement::lambda(g, 1, Complex(0, 1)),
        batteries::draw(g, 88, 0)};
    double markov_z = 0, ito_z = 0, bdg_max = 0, deco_max = 0;
    for (const auto& x : xs) {
      for (double t : {0.5, s.horizon()}) {
        const auto mk = markov_check(model, x, t, s);
        markov_z = std::max(markov_z, mk.max_z);
        o.require(mk.passed, "Markov moment check");
      }
      const auto m2 = mc_power_mean(martingale_transform(model, x, s, false), 2);
      const double z = std::abs(m2.value - ito_isometry_analytic(model, x, s)) / m2.se;
      ito_z = std::max(ito_z, z);
      o.require(z <= 5, "Ito isometry beyond 5 SE");
      for (double p : {2.0, 4.0, 8.0}) {
        const auto r = inequality_report(model, x, s, p, alpha);
        if (p == 4.0) {
          deco_max = std::max(deco_max, r.decoupling_ratio.value);
          o.require(r.decoupling_ratio.value <= 4 + 3 * r.decoupling_ratio.se, "decoupling ratio");
        }
        bdg_max = std::max(bdg_max, r.bdg_ratio.value);
      }
    }
    o.detail << " Markov max z " << markov_z << ", Ito max z " << ito_z
             << ", decoupling ratio at p=4 up to " << deco_max << ", BDG ratio up to " << bdg_max;
    o.require(bdg_max <= 2.0, "BDG ratio above the common bound 2");
  });

  criterion(9, "Cauchy-Schwarz for Gamma and the regularity inequality", 60.0, [](Outcome& o) {
    const auto fam = example_family();
    const std::size_t per = (100 + fam.size() - 1) / fam.size();
    double cs = 1e300, reg = 1e300;
    for (std::size_t gi = 0; gi < fam.size(); ++gi) {
      const Semigroup sg(fam[gi]);
      for (double p : {1.0, 2.0, 4.0})
        cs = std::min(cs, batteries::cauchy_schwarz_slack(sg, p, per, 900 + gi));
      for (unsigned p : {2u, 4u}) reg = std::min(reg, batteries::regularity_slack(sg, p, per, 950 + gi));
    }
    o.detail << " " << per * fam.size() << " instances each, min slack " << cs << " and " << reg;
    o.require(cs >= -1e-9, "Cauchy-Schwarz slack");
    o.require(reg >= -1e-9, "regularity slack");
  });

  criterion(10, "gallery rerun with the same seed is byte identical", 120.0, [](Outcome& o) {
    const auto a = experiment::dump(experiment::run(experiment::gallery_config(10)));
    const auto b = experiment::dump(experiment::run(experiment::gallery_config(10)));
    const auto replayed = experiment::replay(nlohmann::json::parse(a));
    o.detail << " " << a.size() << " bytes";
    o.require(a == b, "reports differ");
    o.require(replayed.ok, "stored report does not replay: " + replayed.message);
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
