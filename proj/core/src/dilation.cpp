#include "cocycle_lab/dilation.hpp"

#include <cmath>

#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/parallel.hpp"
#include "cocycle_lab/random.hpp"

namespace cocycle_lab {

namespace {

constexpr Complex kI{0.0, 1.0};

MCEstimate mean_and_se(const std::vector<double>& y) {
  MCEstimate e;
  if (y.empty()) return e;
  const auto n = static_cast<double>(y.size());
  double sum = 0;
  for (double v : y) sum += v;
  e.value = sum / n;
  if (y.size() > 1) {
    double ss = 0;
    for (double v : y) ss += (v - e.value) * (v - e.value);
    e.se = std::sqrt(ss / (n - 1) / n);
  }
  return e;
}

// m^{1/q} with the delta-method error.
MCEstimate root(const MCEstimate& m, double q) {
  if (!(m.value > 0)) return {0.0, 0.0};
  const double v = std::pow(m.value, 1.0 / q);
  return {v, v / (q * m.value) * m.se};
}

// a / b treating the two estimates as independent.
MCEstimate ratio(const MCEstimate& a, const MCEstimate& b) {
  if (!(b.value > 0)) return {0.0, 0.0};
  const double r = a.value / b.value;
  const double ra = a.value > 0 ? a.se / a.value : 0.0;
  const double rb = b.se / b.value;
  return {r, std::abs(r) * std::sqrt(ra * ra + rb * rb)};
}

double power_trace(const Eigen::MatrixXcd& m, double p) {
  return linalg::normalized_power_trace(linalg::singular_values(m), p);
}

}  // namespace

void check_mc_p(double p) {
  if (!(p == 2.0 || p == 4.0 || p == 6.0 || p == 8.0)) {
    throw DomainError("Monte-Carlo p must be one of 2, 4, 6, 8");
  }
}

Eigen::MatrixXd BrownianScenario::path(std::size_t sample) const {
  const auto& inc = increments.at(sample);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(steps + 1),
                                            static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(steps); ++k) {
    b.row(k + 1) = b.row(k) + inc.row(k);
  }
  return b;
}

double brownian_increment(std::uint64_t seed, bool copy, std::size_t sample, std::size_t k,
                          std::size_t j, std::size_t d, double delta) {
  const auto key = rng::derive_key(seed, copy ? rng::Tag::brownian_copy : rng::Tag::brownian,
                                   sample);
  return std::sqrt(2.0 * delta) * rng::normal_at(key, k * d + j);
}

BrownianScenario sample_scenario(const CocycleRealization& cocycle, std::size_t steps,
                                 double delta, std::size_t samples, std::uint64_t seed,
                                 bool with_copy) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("time step must be positive");
  if (steps < 1) throw InvalidParameter("need at least one time step");
  if (samples < 1) throw InvalidParameter("need at least one sample");
  BrownianScenario s;
  s.d = cocycle.dimension;
  s.steps = steps;
  s.delta = delta;
  s.samples = samples;
  s.seed = seed;
  s.has_copy = with_copy;
  s.increments.resize(samples);
  if (with_copy) s.copy_increments.resize(samples);
  const auto rows = static_cast<Eigen::Index>(steps);
  const auto cols = static_cast<Eigen::Index>(s.d);
  parallel_for(samples, [&](std::size_t w) {
    for (int copy = 0; copy < (with_copy ? 2 : 1); ++copy) {
      Eigen::MatrixXd m(rows, cols);
      for (Eigen::Index k = 0; k < rows; ++k) {
        for (Eigen::Index j = 0; j < cols; ++j) {
          m(k, j) = brownian_increment(seed, copy == 1, w, static_cast<std::size_t>(k),
                                       static_cast<std::size_t>(j), s.d, delta);
        }
      }
      (copy ? s.copy_increments : s.increments)[w] = std::move(m);
    }
  });
  return s;
}

DilationModel::DilationModel(const Semigroup& sg)
    : DilationModel(sg, realize_cocycle(gromov_form(sg.psi()))) {}

DilationModel::DilationModel(const Semigroup& sg, CocycleRealization cocycle)
    : sg_(sg), cocycle_(std::move(cocycle)) {
  const auto& g = group();
  if (!(*cocycle_.group == g)) throw DomainError("cocycle and semigroup live over different groups");
  const std::size_t n = g.order();
  const auto d = static_cast<Eigen::Index>(cocycle_.dimension);
  eta_.resize(d, static_cast<Eigen::Index>(n * n));
  for (Element h = 0; h < n; ++h) {
    const auto& rep = cocycle_.reps[g.inv(h)];
    for (Element x = 0; x < n; ++x) {
      eta_.col(static_cast<Eigen::Index>(h * n + x)) = rep * cocycle_.vectors.col(x);
    }
  }
}

std::size_t grid_index(const BrownianScenario& s, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const double k = std::round(t / s.delta);
  if (k > static_cast<double>(s.steps) ||
      std::abs(k * s.delta - t) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw DomainError("time " + std::to_string(t) + " is not on the grid");
  }
  return static_cast<std::size_t>(k);
}

Eigen::MatrixXcd dilation_matrix(const DilationModel& m, const AlgebraElement& x, double t,
                                 const BrownianScenario& s, std::size_t sample) {
  const auto& g = m.group();
  if (!(x.group() == g)) throw DomainError("element and model live over different groups");
  const auto k = static_cast<Eigen::Index>(grid_index(s, t));
  const Eigen::VectorXd b = s.path(sample).row(k).transpose();
  const auto n = static_cast<Element>(g.order());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Element h = 0; h < n; ++h) {
    for (Element y = 0; y < n; ++y) {
      if (x[y] == Complex{}) continue;
      out(h, g.mul(g.inv(y), h)) = x[y] * std::exp(kI * m.eta(h, y).dot(b));
    }
  }
  return out;
}

Eigen::MatrixXcd crossed_matrix(const DilationModel& m, const CrossedElement& a,
                                const BrownianScenario& s, std::size_t sample, std::size_t k) {
  if (k > s.steps) throw DomainError("grid index out of range");
  const auto& g = m.group();
  const auto n = static_cast<Element>(g.order());
  const Eigen::VectorXd b = s.path(sample).row(static_cast<Eigen::Index>(k)).transpose();
  const auto& reps = m.cocycle().reps;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& term : a) {
    for (Element h = 0; h < n; ++h) {
      const double phase = (reps[g.inv(h)] * term.xi).dot(b);
      out(h, g.mul(g.inv(term.g), h)) += term.coeff * std::exp(kI * phase);
    }
  }
  return out;
}

CrossedElement crossed_product(const DilationModel& m, const CrossedElement& a,
                               const CrossedElement& b) {
  const auto& g = m.group();
  const auto& reps = m.cocycle().reps;
  CrossedElement out;
  for (const auto& s : a) {
    for (const auto& t : b) {
      out.push_back({s.coeff * t.coeff, s.xi + reps[s.g] * t.xi, g.mul(s.g, t.g)});
    }
  }
  return out;
}

CrossedElement crossed_adjoint(const DilationModel& m, const CrossedElement& a) {
  const auto& g = m.group();
  const auto& reps = m.cocycle().reps;
  CrossedElement out;
  for (const auto& s : a) {
    const Element gi = g.inv(s.g);
    out.push_back({std::conj(s.coeff), -(reps[gi] * s.xi), gi});
  }
  return out;
}

namespace {

// Per (h, g) the weight e^{-(L - t_k) psi(g)} for each k.
Eigen::MatrixXd decay_weights(const DilationModel& m, const BrownianScenario& s) {
  const auto n = static_cast<Eigen::Index>(m.order());
  const auto steps = static_cast<Eigen::Index>(s.steps);
  const double L = s.horizon();
  Eigen::MatrixXd w(steps, n);
  for (Eigen::Index g = 0; g < n; ++g) {
    const double psi = m.semigroup().psi()(static_cast<Element>(g));
    for (Eigen::Index k = 0; k < steps; ++k) {
      w(k, g) = std::exp(-(L - static_cast<double>(k) * s.delta) * psi);
    }
  }
  return w;
}

void require_group(const DilationModel& m, const AlgebraElement& x) {
  if (!(x.group() == m.group())) throw DomainError("element and model live over different groups");
}

// C_k^j for all j at one sample and step: entry (h, g^-1 h) is
// i x_g e^{-(L-t_k) psi(g)} e^{i <eta, B_{t_k}>} eta_j.
void step_coefficients(const DilationModel& m, const AlgebraElement& x, const Eigen::MatrixXd& w,
                       const Eigen::MatrixXd& path, Eigen::Index k,
                       std::vector<Eigen::MatrixXcd>& c) {
  const auto& g = m.group();
  const auto n = static_cast<Element>(g.order());
  const auto d = m.cocycle().dimension;
  const Eigen::VectorXd b = path.row(k).transpose();
  for (auto& cj : c) cj.setZero(n, n);
  for (Element y = 0; y < n; ++y) {
    if (x[y] == Complex{} || m.semigroup().psi()(y) == 0.0) continue;
    const Complex base = kI * x[y] * w(k, y);
    for (Element h = 0; h < n; ++h) {
      const auto eta = m.eta(h, y);
      const Complex coeff = base * std::exp(kI * eta.dot(b));
      const Element col = g.mul(g.inv(y), h);
      for (std::size_t j = 0; j < d; ++j) {
        c[j](h, col) = coeff * eta[static_cast<Eigen::Index>(j)];
      }
    }
  }
}

}  // namespace

std::vector<Eigen::MatrixXcd> martingale_transform(const DilationModel& m, const AlgebraElement& x,
                                                   const BrownianScenario& s, bool decoupled) {
  require_group(m, x);
  if (decoupled && !s.has_copy) throw DomainError("scenario carries no independent copy");
  if (s.d != m.cocycle().dimension) throw DomainError("scenario dimension does not match cocycle");
  const auto w = decay_weights(m, s);
  const auto n = static_cast<Eigen::Index>(m.order());
  std::vector<Eigen::MatrixXcd> out(s.samples);
  parallel_for(s.samples, [&](std::size_t sample) {
    const Eigen::MatrixXd path = s.path(sample);
    const auto& inc = decoupled ? s.copy_increments[sample] : s.increments[sample];
    std::vector<Eigen::MatrixXcd> c(s.d);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(s.steps); ++k) {
      step_coefficients(m, x, w, path, k, c);
      for (std::size_t j = 0; j < s.d; ++j) acc += c[j] * inc(k, static_cast<Eigen::Index>(j));
    }
    out[sample] = std::move(acc);
  });
  return out;
}

MCEstimate mc_power_mean(const std::vector<Eigen::MatrixXcd>& per_sample, double p) {
  std::vector<double> y(per_sample.size());
  parallel_for(per_sample.size(), [&](std::size_t i) { y[i] = power_trace(per_sample[i], p); });
  return mean_and_se(y);
}

MCEstimate mc_lp_norm(const std::vector<Eigen::MatrixXcd>& per_sample, double p) {
  return root(mc_power_mean(per_sample, p), p);
}

double ito_isometry_analytic(const DilationModel& m, const AlgebraElement& x,
                             const BrownianScenario& s) {
  require_group(m, x);
  const auto w = decay_weights(m, s);
  double total = 0;
  for (Element g = 0; g < m.order(); ++g) {
    const double psi = m.semigroup().psi()(g);
    double sum = 0;
    for (Eigen::Index k = 0; k < w.rows(); ++k) sum += w(k, g) * w(k, g);
    total += std::norm(x[g]) * psi * 2.0 * s.delta * sum;
  }
  return total;
}

MarkovCheck markov_check(const DilationModel& m, const AlgebraElement& x, double t,
                         const BrownianScenario& s, double z_limit) {
  require_group(m, x);
  std::vector<Eigen::MatrixXcd> mats(s.samples);
  parallel_for(s.samples, [&](std::size_t i) { mats[i] = dilation_matrix(m, x, t, s, i); });
  const auto n = static_cast<Eigen::Index>(m.order());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& a : mats) sum += a;
  const auto count = static_cast<double>(s.samples);
  const Eigen::MatrixXcd mean = sum / count;
  Eigen::MatrixXd var_re = Eigen::MatrixXd::Zero(n, n), var_im = Eigen::MatrixXd::Zero(n, n);
  for (const auto& a : mats) {
    const Eigen::MatrixXcd dev = a - mean;
    var_re += dev.real().cwiseAbs2();
    var_im += dev.imag().cwiseAbs2();
  }
  const double denom = s.samples > 1 ? (count - 1) * count : 1.0;
  const Eigen::MatrixXcd target = regular_rep(m.semigroup().apply(x, t));
  const double scale = 1.0 + x.coeffs().cwiseAbs().maxCoeff();

  MarkovCheck c;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex diff = mean(i, j) - target(i, j);
      const double parts[2][2] = {{std::abs(diff.real()), std::sqrt(var_re(i, j) / denom)},
                                  {std::abs(diff.imag()), std::sqrt(var_im(i, j) / denom)}};
      for (const auto& part : parts) {
        if (part[1] <= 1e-14 * scale) {
          c.max_deterministic_error = std::max(c.max_deterministic_error, part[0]);
        } else {
          c.max_z = std::max(c.max_z, part[0] / part[1]);
        }
      }
    }
  }
  c.passed = c.max_z <= z_limit && c.max_deterministic_error <= 1e-12 * scale;
  return c;
}

BracketEstimates bracket_estimates(const DilationModel& m, const AlgebraElement& x,
                                   const BrownianScenario& s, double p) {
  check_mc_p(p);
  require_group(m, x);
  if (s.d != m.cocycle().dimension) throw DomainError("scenario dimension does not match cocycle");
  const auto w = decay_weights(m, s);
  const auto n = static_cast<Eigen::Index>(m.order());
  std::vector<double> yc(s.samples), yr(s.samples), yd(s.samples);
  parallel_for(s.samples, [&](std::size_t sample) {
    const Eigen::MatrixXd path = s.path(sample);
    const auto& inc = s.increments[sample];
    std::vector<Eigen::MatrixXcd> c(s.d);
    Eigen::MatrixXcd hc = Eigen::MatrixXcd::Zero(n, n), hr = Eigen::MatrixXcd::Zero(n, n);
    double hd = 0;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(s.steps); ++k) {
      step_coefficients(m, x, w, path, k, c);
      Eigen::MatrixXcd dx = Eigen::MatrixXcd::Zero(n, n);
      for (std::size_t j = 0; j < s.d; ++j) {
        hc.noalias() += c[j].adjoint() * c[j];
        hr.noalias() += c[j] * c[j].adjoint();
        dx += c[j] * inc(k, static_cast<Eigen::Index>(j));
      }
      hd += power_trace(dx, p);
    }
    yc[sample] = power_trace(2.0 * s.delta * hc, p / 2);
    yr[sample] = power_trace(2.0 * s.delta * hr, p / 2);
    yd[sample] = hd;
  });
  BracketEstimates b;
  b.hc = root(mean_and_se(yc), p);
  b.hr = root(mean_and_se(yr), p);
  b.hd = root(mean_and_se(yd), p);
  return b;
}

double bracket_envelope(const Semigroup& sg, const AlgebraElement& x, double alpha, double L,
                        double p) {
  if (!(alpha > 0.0)) throw DomainError("bracket envelope needs alpha > 0");
  const auto xs = x.adjoint();
  const double g = std::max(lp_norm(gamma(sg, x, x), p / 2), lp_norm(gamma(sg, xs, xs), p / 2));
  return std::sqrt((1.0 - std::exp(-2.0 * alpha * L)) / alpha) * std::sqrt(g);
}

InequalityReport inequality_report(const DilationModel& m, const AlgebraElement& x,
                                   const BrownianScenario& s, double p,
                                   std::optional<double> alpha) {
  check_mc_p(p);
  InequalityReport r;
  r.p = p;
  r.coupled = mc_lp_norm(martingale_transform(m, x, s, false), p);
  r.decoupled = mc_lp_norm(martingale_transform(m, x, s, true), p);
  r.decoupling_ratio = ratio(r.coupled, r.decoupled);
  r.brackets = bracket_estimates(m, x, s, p);
  const MCEstimate& top =
      r.brackets.hc.value >= r.brackets.hr.value ? r.brackets.hc : r.brackets.hr;
  const double sp = std::sqrt(p);
  r.bdg_ratio = ratio(r.coupled, {sp * top.value, sp * top.se});
  if (alpha && *alpha > 0.0) {
    r.alpha = alpha;
    r.bracket_envelope = bracket_envelope(m.semigroup(), x, *alpha, s.horizon(), p);
    r.bracket_slack = MCEstimate{*r.bracket_envelope - top.value, top.se};
  }
  return r;
}

}  // namespace cocycle_lab
