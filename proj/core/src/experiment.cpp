#include "cocycle_lab/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/bakry_emery.hpp"
#include "cocycle_lab/builtins.hpp"
#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/dilation.hpp"
#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/matrix_semigroup.hpp"
#include "cocycle_lab/parallel.hpp"
#include "cocycle_lab/poincare.hpp"

namespace cocycle_lab::experiment {

namespace {

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(name + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
}

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json to_json(const MCEstimate& e) { return {{"value", e.value}, {"se", e.se}}; }

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Eigen::VectorXd(m.row(r))));
  return rows;
}

const Json& params_of(const Json& c) {
  static const Json empty = Json::object();
  return c.contains("params") ? c.at("params") : empty;
}

std::uint64_t seed_of(const Json& c) { return c.value("seed", std::uint64_t{0}); }

LengthFunction psi_of(const Json& c) {
  return stage("psi", [&] { return builtins::psi_from_json(c.at("psi")); });
}

std::vector<double> p_grid_of(const Json& p, std::vector<double> fallback) {
  if (!p.contains("p")) return fallback;
  const auto& v = p.at("p");
  if (v.is_number()) return {v.get<double>()};
  return v.get<std::vector<double>>();
}

Json certificate_json(const AlphaCertificate& c) {
  return {{"alpha_star", c.alpha_star},
          {"method", to_string(c.method)},
          {"fell_back", c.fell_back},
          {"min_eig_at_alpha", c.residual},
          {"min_eig_above", c.min_eig_above},
          {"step", c.step},
          {"criterion_holds", c.alpha_star > kAlphaZero}};
}

Json report_json(const PoincareReport& r) {
  Json j{{"p_grid", r.p_grid},
         {"constants", r.constants},
         {"constants_are_lower_bounds", true},
         {"optimizer_gaps", r.optimizer_gaps},
         {"slope", r.fit.slope},
         {"slope_se", r.fit.slope_se},
         {"fit_residual", r.fit.residual}};
  Json maxs = Json::array();
  for (const auto& m : r.maximizers) maxs.push_back(to_json(m));
  j["maximizers"] = maxs;
  if (r.alpha_used) {
    j["alpha_used"] = *r.alpha_used;
    j["envelope"] = r.envelope;
  } else {
    j["alpha_used"] = nullptr;
  }
  return j;
}

Json cmd_group(const Json& c) {
  const auto g = stage("group", [&] { return build_group(GroupSpec::from_json(c.at("group"))); });
  Json j = group_to_json(g);
  j["abelian"] = g.is_abelian();
  j["associativity_exhaustive"] = g.order() <= kExhaustiveCheckOrder;
  return j;
}

Json cmd_cn_check(const Json& c) {
  const auto psi = psi_of(c);
  const double tol = params_of(c).value("tol", 1e-9);
  const auto v = is_conditionally_negative(psi, tol);
  return {{"verdict", v.verdict}, {"min_eig", v.min_eig}, {"spectral_norm", v.spectral_norm},
          {"tol", tol}, {"order", psi.size()}};
}

Json cmd_realize(const Json& c) {
  const auto psi = psi_of(c);
  const double tol = params_of(c).value("tol", 1e-9);
  const auto form = gromov_form(psi);
  const auto v = is_psd_kernel(form.kernel, tol);
  const auto r = stage("realize", [&] { return realize_cocycle(form, tol); });
  const auto res = cocycle_residuals(r, form);
  return {{"verdict", v.verdict},
          {"min_eig", v.min_eig},
          {"dimension", r.dimension},
          {"residuals",
           {{"gram", res.gram},
            {"cocycle_law", res.cocycle_law},
            {"orthogonality", res.orthogonality},
            {"homomorphism", res.homomorphism}}},
          {"vectors", matrix_rows(r.vectors.transpose())}};
}

Eigen::MatrixXd delta_kernel(std::size_t m) {
  const auto s = static_cast<Eigen::Index>(m - 1);
  return 0.5 * (Eigen::MatrixXd::Identity(s, s) + Eigen::MatrixXd::Ones(s, s));
}

Json cmd_schur(const Json& c) {
  const auto& p = params_of(c);
  std::size_t n = 0;
  if (p.contains("n")) {
    n = p.at("n").get<std::size_t>();
  } else if (c.contains("psi") && c.at("psi").contains("n")) {
    n = c.at("psi").at("n").get<std::size_t>();
  } else {
    throw InvalidParameter("schur-identity: n missing");
  }
  const std::string kernel = p.value("kernel", std::string("wordlength"));
  const auto r = stage("schur-identity", [&] {
    if (kernel == "wordlength") return verify_schur_identity(n);
    if (kernel == "delta") return verify_schur_identity(n, delta_kernel);
    throw InvalidParameter("kernel must be wordlength or delta");
  });
  return {{"n", n}, {"kernel", kernel}, {"residual", r.residual}, {"terms", r.terms}};
}

Json cmd_alpha(const Json& c) {
  const auto psi = psi_of(c);
  const auto& p = params_of(c);
  const std::string method = p.value("method", std::string("bisection"));
  const double tol = p.value("tol", kAlphaTol);
  const auto form = gromov_form(psi);
  return stage("alpha", [&]() -> Json {
    if (method == "bisection" || method == "bisect") {
      return certificate_json(best_alpha_bisection(form, tol));
    }
    if (method == "pencil") return certificate_json(best_alpha_pencil(form, tol));
    if (method == "both") {
      const auto b = best_alpha_bisection(form, tol);
      const auto q = best_alpha_pencil(form, tol);
      Json j = certificate_json(b);
      j["pencil"] = certificate_json(q);
      j["agreement"] = std::abs(b.alpha_star - q.alpha_star);
      return j;
    }
    throw InvalidParameter("method must be bisection, pencil or both");
  });
}

Json cmd_gamma(const Json& c) {
  const auto psi = psi_of(c);
  const Semigroup sg(psi);
  const auto& p = params_of(c);
  const auto f = stage("f", [&] { return element_from_json(p.at("f"), psi.group_ptr()); });
  const auto g = p.contains("g")
                     ? stage("g", [&] { return element_from_json(p.at("g"), psi.group_ptr()); })
                     : f;
  const std::string path = p.value("path", std::string("kernel"));
  if (path != "kernel" && path != "definitional" && path != "both") {
    throw InvalidParameter("path must be kernel, definitional or both");
  }
  const auto chosen = path == "definitional" ? GammaPath::definitional : GammaPath::kernel;
  const auto g1 = stage("gamma", [&] { return gamma(sg, f, g, chosen); });
  const auto g2 = stage("gamma2", [&] { return gamma2(sg, f, g, chosen); });
  Json j{{"path", path},
         {"gamma", element_to_json(g1)["coeffs"]},
         {"gamma2", element_to_json(g2)["coeffs"]},
         {"tau_gamma", {g1.tau().real(), g1.tau().imag()}}};
  if (path == "both") {
    const auto d1 = gamma(sg, f, g, GammaPath::definitional);
    const auto d2 = gamma2(sg, f, g, GammaPath::definitional);
    j["agreement"] = std::max((g1 - d1).coeffs().cwiseAbs().maxCoeff(),
                              (g2 - d2).coeffs().cwiseAbs().maxCoeff());
  }
  return j;
}

Json cmd_poincare(const Json& c) {
  const auto psi = psi_of(c);
  const Semigroup sg(psi);
  const auto& p = params_of(c);
  const auto grid = p_grid_of(p, {2, 4, 8, 16});
  const auto budget = p.value("budget", std::size_t{20000});
  std::optional<double> alpha;
  if (p.value("envelope", true)) {
    alpha = stage("alpha", [&] { return best_alpha_bisection(gromov_form(psi)).alpha_star; });
  }
  const auto r =
      stage("poincare", [&] { return sweep_and_fit(sg, grid, budget, seed_of(c), alpha); });
  Json j = report_json(r);
  j["l2_oracle"] = stage("l2-oracle", [&] { return l2_oracle(sg); });
  j["alpha_star"] = alpha ? Json(*alpha) : Json(nullptr);
  j["budget"] = budget;
  return j;
}

Json superop_summary(const Superoperator& A, const Json& p, std::uint64_t seed) {
  Json j;
  j["spectral_oracle"] = stage("spectral-oracle", [&] { return spectral_oracle(A); });
  const auto suff = stage("alpha", [&] { return superop_alpha_sufficient(A); });
  j["alpha_sufficient"] = {{"alpha", suff.alpha}, {"min_eig", suff.min_eig}};
  const double alpha = p.contains("alpha_check") ? p.at("alpha_check").get<double>() : suff.alpha;
  const auto count = p.value("samples", std::size_t{200});
  const auto b = stage("battery", [&] { return matrix_alpha_battery(A, alpha, count, seed); });
  j["battery"] = {{"alpha", alpha}, {"count", b.count}, {"min_eig", b.min_eig},
                  {"passed", b.passed}};
  if (p.contains("p")) {
    const auto grid = p_grid_of(p, {});
    const auto budget = p.value("budget", std::size_t{20000});
    std::optional<double> env;
    if (suff.alpha > kAlphaZero) env = suff.alpha;
    j["poincare"] = report_json(
        stage("poincare", [&] { return matrix_poincare(A, grid, budget, seed, env); }));
  }
  return j;
}

Json cmd_matrix(const Json& c) {
  const auto& p = params_of(c);
  const auto n = p.at("n").get<std::size_t>();
  const auto mode = multiplier_mode_from_string(p.value("mode", std::string("delta")));
  const auto A = stage("generator", [&] { return heisenberg_multiplier(n, mode); });
  Json j = superop_summary(A, p, seed_of(c));
  j["n"] = n;
  j["mode"] = to_string(mode);
  if (mode == MultiplierMode::delta) {
    j["closed_form_alpha"] = static_cast<double>(n + 2) / static_cast<double>(2 * n);
  }
  return j;
}

Json cmd_lindblad(const Json& c) {
  const auto& p = params_of(c);
  const auto a = stage("family", [&] { return hermitian_family_from_json(p.at("family")); });
  const auto A = stage("generator", [&] { return lindblad_generator(a); });
  Json j = superop_summary(A, p, seed_of(c));
  j["n"] = A.n();
  j["family_size"] = a.size();
  return j;
}

Json cmd_dilate(const Json& c) {
  const auto psi = psi_of(c);
  const Semigroup sg(psi);
  const auto& p = params_of(c);
  const auto x = stage("x", [&] { return element_from_json(p.at("x"), psi.group_ptr()); });
  const double L = p.value("L", 2.0);
  const auto steps = p.value("steps", std::size_t{64});
  const auto samples = p.value("samples", std::size_t{4096});
  const auto grid = p_grid_of(p, {4});
  if (!(L > 0)) throw DomainError("dilate: L must be positive");
  const auto cert = stage("alpha", [&] { return best_alpha_bisection(gromov_form(psi)); });
  const DilationModel model = stage("cocycle", [&] { return DilationModel(sg); });
  const auto scen = stage("scenario", [&] {
    return sample_scenario(model.cocycle(), steps, L / static_cast<double>(steps), samples,
                           seed_of(c));
  });
  Json j{{"alpha_star", cert.alpha_star},
         {"criterion_holds", cert.alpha_star > kAlphaZero},
         {"L", L},
         {"steps", steps},
         {"samples", samples},
         {"cocycle_dimension", model.cocycle().dimension}};
  const auto m2 = mc_power_mean(martingale_transform(model, x, scen, false), 2.0);
  const double ito = ito_isometry_analytic(model, x, scen);
  j["ito"] = {{"analytic", ito}, {"mc", to_json(m2)},
              {"z", m2.se > 0 ? std::abs(m2.value - ito) / m2.se : 0.0}};
  const auto mk = stage("markov", [&] { return markov_check(model, x, L, scen); });
  j["markov"] = {{"t", L}, {"max_z", mk.max_z},
                 {"max_deterministic_error", mk.max_deterministic_error}, {"passed", mk.passed}};
  Json ineq = Json::array();
  for (double pp : grid) {
    std::optional<double> alpha;
    if (cert.alpha_star > kAlphaZero) alpha = cert.alpha_star;
    const auto r = stage("inequalities", [&] { return inequality_report(model, x, scen, pp, alpha); });
    Json e{{"p", pp},
           {"coupled_norm", to_json(r.coupled)},
           {"decoupled_norm", to_json(r.decoupled)},
           {"decoupling_ratio", to_json(r.decoupling_ratio)},
           {"bdg_ratio", to_json(r.bdg_ratio)},
           {"hc", to_json(r.brackets.hc)},
           {"hr", to_json(r.brackets.hr)},
           {"hd", to_json(r.brackets.hd)}};
    if (r.bracket_envelope) {
      e["bracket_envelope"] = *r.bracket_envelope;
      e["bracket_slack"] = to_json(*r.bracket_slack);
    }
    ineq.push_back(e);
  }
  j["inequalities"] = ineq;
  return j;
}

// Smallest eigenvalue of Gamma_2 - alpha Gamma over seeded random elements,
// relative to the operator norm of Gamma_2.
Json element_battery(const Semigroup& sg, double alpha, std::size_t count, std::uint64_t seed,
                     std::uint64_t stream_base) {
  std::vector<double> mins(count);
  parallel_for(count, [&](std::size_t i) {
    rng::Stream stream(seed, rng::Tag::gallery, stream_base + i);
    const auto f = AlgebraElement::random(sg.group_ptr(), stream);
    mins[i] = check_element(sg, f, alpha).min_eig / (1.0 + lp_norm(gamma2(sg, f, f), linalg::kInfinity));
  });
  double worst = 0;
  for (double v : mins) worst = std::min(worst, v);
  return {{"count", count}, {"alpha", alpha}, {"min_relative_eig", worst},
          {"passed", worst >= -1e-9}};
}

Json group_row(const std::string& family, Json params, const LengthFunction& psi,
               std::optional<double> closed_form, std::uint64_t seed, std::uint64_t row) {
  const Semigroup sg(psi);
  const auto form = gromov_form(psi);
  const auto cn = is_psd_kernel(form.kernel);
  const auto b = best_alpha_bisection(form);
  const auto q = best_alpha_pencil(form);
  Json j{{"family", family},
         {"params", std::move(params)},
         {"order", psi.size()},
         {"cn", cn.verdict},
         {"cn_min_eig", cn.min_eig},
         {"alpha_bisection", b.alpha_star},
         {"alpha_pencil", q.alpha_star},
         {"pencil_fell_back", q.fell_back},
         {"l2_oracle", l2_oracle(sg)}};
  j["closed_form_alpha"] = closed_form ? Json(*closed_form) : Json(nullptr);
  j["battery"] = element_battery(sg, b.alpha_star, 8, seed, row * 64);
  return j;
}

Json lindblad_row(const std::string& family, const std::vector<MatrixElement>& a,
                  std::uint64_t seed, std::uint64_t row) {
  const auto A = lindblad_generator(a);
  const auto suff = superop_alpha_sufficient(A);
  const auto b = matrix_alpha_battery(A, suff.alpha, 8, rng::derive_key(seed, rng::Tag::gallery, row));
  return {{"family", family},
          {"params", {{"n", A.n()}, {"a", hermitian_family_to_json(a)["a"]}}},
          {"order", A.n() * A.n()},
          {"alpha_sufficient", suff.alpha},
          {"spectral_oracle", spectral_oracle(A)},
          {"battery", {{"count", b.count}, {"alpha", suff.alpha}, {"min_eig", b.min_eig},
                       {"passed", b.passed}}}};
}

MatrixElement diagonal(std::initializer_list<double> d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v[i++] = x;
  return v.asDiagonal();
}

Json cmd_gallery(const Json& c) {
  const auto seed = seed_of(c);
  Json rows = Json::array();
  std::uint64_t row = 0;
  for (std::size_t n : {2, 3, 4}) {
    for (std::size_t m : {1, 2, 3}) {
      rows.push_back(stage("gallery walsh", [&] {
        return group_row("walsh", {{"n", n}, {"m", m}}, builtins::walsh(n, m),
                         static_cast<double>(n + 2) / static_cast<double>(2 * n), seed, row++);
      }));
    }
  }
  for (std::size_t n : {2, 3, 4}) {
    rows.push_back(stage("gallery heisenberg-delta", [&] {
      return group_row("heisenberg-delta", {{"n", n}}, builtins::heisenberg_delta(n),
                       static_cast<double>(n + 2) / static_cast<double>(2 * n), seed, row++);
    }));
  }
  for (std::size_t n = 4; n <= 16; n += 2) {
    rows.push_back(stage("gallery wordlength", [&] {
      return group_row("wordlength", {{"n", n}}, builtins::wordlength(n), 1.0, seed, row++);
    }));
  }
  rows.push_back(stage("gallery lindblad", [&] {
    return lindblad_row("lindblad", {diagonal({0, 1})}, seed, row++);
  }));
  rows.push_back(stage("gallery lindblad", [&] {
    return lindblad_row("lindblad", {diagonal({0, 1, 0, 1}), diagonal({0, 0, 1, 1})}, seed, row++);
  }));
  return {{"rows", rows}, {"row_count", rows.size()}};
}

}  // namespace

std::string tool_version() { return COCYCLE_LAB_VERSION; }

std::string digest(const Json& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json results(const Json& config) {
  if (!config.is_object() || !config.contains("command")) {
    throw ParseError("config: missing \"command\"");
  }
  const auto cmd = config.at("command").get<std::string>();
  return stage(cmd, [&]() -> Json {
    if (cmd == "group") return cmd_group(config);
    if (cmd == "cn-check") return cmd_cn_check(config);
    if (cmd == "realize") return cmd_realize(config);
    if (cmd == "schur-identity") return cmd_schur(config);
    if (cmd == "alpha") return cmd_alpha(config);
    if (cmd == "gamma") return cmd_gamma(config);
    if (cmd == "poincare") return cmd_poincare(config);
    if (cmd == "matrix") return cmd_matrix(config);
    if (cmd == "lindblad") return cmd_lindblad(config);
    if (cmd == "dilate") return cmd_dilate(config);
    if (cmd == "gallery") return cmd_gallery(config);
    throw InvalidParameter("unknown command '" + cmd + "'");
  });
}

Json run(const Json& config) {
  return {{"tool_version", tool_version()},
          {"seed", seed_of(config)},
          {"inputs_digest", digest(config)},
          {"config", config},
          {"results", results(config)}};
}

Json gallery_config(std::uint64_t seed) {
  return {{"command", "gallery"}, {"seed", seed}, {"params", Json::object()}};
}

Replay replay(const Json& document) {
  Replay r;
  const bool is_report = document.is_object() && document.contains("config") &&
                         document.contains("results");
  const Json& config = is_report ? document.at("config") : document;
  if (is_report) {
    const auto stored = document.value("inputs_digest", std::string());
    if (stored != digest(config)) {
      r.message = "inputs digest mismatch: stored " + stored + ", recomputed " + digest(config);
      return r;
    }
    if (document.value("seed", std::uint64_t{0}) != seed_of(config)) {
      r.message = "seed mismatch between report and config";
      return r;
    }
  }
  r.report = run(config);
  if (is_report && dump(r.report) != dump(document)) {
    r.message = "replayed report differs from the stored one";
    return r;
  }
  r.ok = true;
  r.message = is_report ? "replay matches" : "config executed";
  return r;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string poincare_csv(const Json& results) {
  const Json& src = results.contains("poincare") ? results.at("poincare") : results;
  const auto p = src.at("p_grid").get<std::vector<double>>();
  const auto c = src.at("constants").get<std::vector<double>>();
  std::string out = "p,constant\n";
  for (std::size_t i = 0; i < p.size() && i < c.size(); ++i) {
    out += format_double(p[i]) + "," + format_double(c[i]) + "\n";
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cocycle_lab::experiment
