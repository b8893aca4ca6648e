#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cocycle_lab/builtins.hpp"
#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/experiment.hpp"
#include "cocycle_lab/group.hpp"

namespace fs = std::filesystem;
using cocycle_lab::experiment::Json;
namespace ex = cocycle_lab::experiment;

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cocycle_lab::ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw cocycle_lab::ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cocycle_lab::Error("cannot write " + path);
  out << text;
}

struct PsiOptions {
  std::string file;
  std::string builtin;
  std::size_t n = 0;
  std::size_t m = 1;

  void attach(CLI::App* app) {
    app->add_option("--psi", file, "length function JSON {group, psi}");
    app->add_option("--builtin", builtin,
                    "walsh | delta | wordlength | heisenberg-delta | heisenberg-wordlength | cosine");
    app->add_option("--n", n, "builtin size parameter");
    app->add_option("--m", m, "walsh exponent");
  }

  Json to_json() const {
    if (!file.empty()) {
      const Json j = read_json(file);
      return cocycle_lab::builtins::embed_psi_json(j, fs::path(file).parent_path());
    }
    if (builtin.empty()) throw cocycle_lab::InvalidParameter("give --psi FILE or --builtin NAME");
    Json j{{"builtin", builtin}, {"n", n}};
    if (builtin == "walsh") j["m"] = m;
    return j;
  }
};

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw cocycle_lab::InvalidParameter("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw cocycle_lab::InvalidParameter("empty p list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cocycle-lab: length functions, Gamma_2 criteria and dilations on finite groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ex::tool_version());

  std::string out_path;
  std::string csv_path;
  std::uint64_t seed = 0;
  app.add_option("--out", out_path, "write the report here instead of stdout");

  Json config;

  // group
  auto* group = app.add_subcommand("group", "build or validate a finite group");
  group->require_subcommand(1);
  auto* gbuild = group->add_subcommand("build", "write a group table JSON");
  std::string kind = "cyclic";
  std::size_t gn = 0, gm = 1;
  std::string gout;
  gbuild->add_option("--kind", kind, "cyclic | product | heisenberg")->required();
  gbuild->add_option("--n", gn, "size parameter")->required();
  gbuild->add_option("--m", gm, "product exponent (Z_n^m)");
  gbuild->add_option("--out", gout, "output file (group JSON)");
  auto* gcheck = group->add_subcommand("validate", "load a group JSON and report on it");
  std::string gfile;
  gcheck->add_option("--file", gfile, "group JSON")->required()->check(CLI::ExistingFile);

  auto* cn = app.add_subcommand("cn-check", "conditional negativity via the Gromov form");
  PsiOptions cn_psi;
  cn_psi.attach(cn);
  double cn_tol = 1e-9;
  cn->add_option("--tol", cn_tol);

  auto* realize = app.add_subcommand("realize", "explicit 1-cocycle realizing psi");
  PsiOptions re_psi;
  re_psi.attach(realize);
  double re_tol = 1e-9;
  realize->add_option("--tol", re_tol);

  auto* schur = app.add_subcommand("schur-identity", "word-length Schur product identity");
  std::size_t schur_n = 0;
  std::string schur_kernel = "wordlength";
  schur->add_option("--n", schur_n)->required();
  schur->add_option("--kernel", schur_kernel, "wordlength | delta (negative control)");

  auto* alpha = app.add_subcommand("alpha", "best Bakry-Emery constant at kernel level");
  PsiOptions al_psi;
  al_psi.attach(alpha);
  std::string method = "bisect";
  alpha->add_option("--method", method, "bisect | pencil | both");

  auto* gam = app.add_subcommand("gamma", "Gamma and Gamma_2 of algebra elements");
  PsiOptions ga_psi;
  ga_psi.attach(gam);
  std::string f_file, g_file, gpath = "kernel";
  gam->add_option("--f", f_file, "element JSON {coeffs}")->required()->check(CLI::ExistingFile);
  gam->add_option("--g", g_file, "second element (defaults to f)")->check(CLI::ExistingFile);
  gam->add_option("--path", gpath, "kernel | definitional | both");

  auto* poin = app.add_subcommand("poincare", "empirical L_p Poincare constants");
  PsiOptions po_psi;
  po_psi.attach(poin);
  std::string p_list = "2,4,8,16";
  std::size_t budget = 20000;
  poin->add_option("--p", p_list, "comma separated p values in [2,16]");
  poin->add_option("--budget", budget, "objective evaluations per p");
  poin->add_option("--seed", seed);
  poin->add_option("--emit-csv", csv_path, "write (p, constant) rows");

  auto* mat = app.add_subcommand("matrix", "clock/shift multiplier semigroup on M_n");
  std::size_t mat_n = 2;
  std::string mode = "delta";
  std::optional<double> alpha_check;
  std::string mat_p;
  std::size_t mat_samples = 200;
  mat->add_option("--n", mat_n)->required();
  mat->add_option("--mode", mode, "delta | wordlength");
  mat->add_option("--alpha-check", alpha_check, "alpha for the random-x battery");
  mat->add_option("--samples", mat_samples, "battery size");
  mat->add_option("--p", mat_p, "optional p grid for a Poincare sweep");
  mat->add_option("--budget", budget);
  mat->add_option("--seed", seed);
  mat->add_option("--emit-csv", csv_path);

  auto* lind = app.add_subcommand("lindblad", "commuting Lindblad generator on M_n");
  std::string a_file;
  std::string lind_p;
  std::optional<double> lind_alpha;
  lind->add_option("--a", a_file, "Hermitian family JSON {n, a}")->required()->check(CLI::ExistingFile);
  lind->add_option("--p", lind_p, "p grid for a Poincare sweep");
  lind->add_option("--alpha-check", lind_alpha);
  lind->add_option("--samples", mat_samples);
  lind->add_option("--budget", budget);
  lind->add_option("--seed", seed);
  lind->add_option("--emit-csv", csv_path);

  auto* dil = app.add_subcommand("dilate", "Monte-Carlo dilation and martingale inequalities");
  PsiOptions di_psi;
  di_psi.attach(dil);
  std::string x_file;
  double L = 2.0;
  std::size_t steps = 64, samples = 4096;
  std::string dil_p = "4";
  dil->add_option("--x", x_file, "element JSON {coeffs}")->required()->check(CLI::ExistingFile);
  dil->add_option("--L", L, "horizon");
  dil->add_option("--steps", steps);
  dil->add_option("--samples", samples);
  dil->add_option("--p", dil_p, "comma separated, each in {2,4,6,8}");
  dil->add_option("--seed", seed);

  auto* gal = app.add_subcommand("gallery", "run the example suite");
  bool table = false;
  gal->add_option("--seed", seed);
  gal->add_flag("--table", table, "print a summary table to stderr");

  auto* run = app.add_subcommand("run", "execute or replay a config/report file");
  std::string config_file;
  run->add_option("--config", config_file)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<std::string> direct_output;
    if (*gbuild) {
      cocycle_lab::GroupSpec spec;
      if (kind == "cyclic") {
        spec.kind = cocycle_lab::GroupSpec::Kind::cyclic;
      } else if (kind == "product") {
        spec.kind = cocycle_lab::GroupSpec::Kind::product;
        spec.m = gm;
      } else if (kind == "heisenberg") {
        spec.kind = cocycle_lab::GroupSpec::Kind::heisenberg;
      } else {
        throw cocycle_lab::InvalidParameter("unknown group kind '" + kind + "'");
      }
      spec.n = gn;
      const auto g = cocycle_lab::build_group(spec);
      write_text(gout.empty() ? out_path : gout, ex::dump(cocycle_lab::group_to_json(g)));
      return 0;
    }
    if (*gcheck) {
      config = {{"command", "group"}, {"group", read_json(gfile)}};
    } else if (*cn) {
      config = {{"command", "cn-check"}, {"psi", cn_psi.to_json()}, {"params", {{"tol", cn_tol}}}};
    } else if (*realize) {
      config = {{"command", "realize"}, {"psi", re_psi.to_json()}, {"params", {{"tol", re_tol}}}};
    } else if (*schur) {
      config = {{"command", "schur-identity"},
                {"params", {{"n", schur_n}, {"kernel", schur_kernel}}}};
    } else if (*alpha) {
      config = {{"command", "alpha"}, {"psi", al_psi.to_json()}, {"params", {{"method", method}}}};
    } else if (*gam) {
      Json params{{"f", read_json(f_file)}, {"path", gpath}};
      if (!g_file.empty()) params["g"] = read_json(g_file);
      config = {{"command", "gamma"}, {"psi", ga_psi.to_json()}, {"params", params}};
    } else if (*poin) {
      config = {{"command", "poincare"},
                {"seed", seed},
                {"psi", po_psi.to_json()},
                {"params", {{"p", parse_grid(p_list)}, {"budget", budget}}}};
    } else if (*mat) {
      Json params{{"n", mat_n}, {"mode", mode}, {"samples", mat_samples}};
      if (alpha_check) params["alpha_check"] = *alpha_check;
      if (!mat_p.empty()) {
        params["p"] = parse_grid(mat_p);
        params["budget"] = budget;
      }
      config = {{"command", "matrix"}, {"seed", seed}, {"params", params}};
    } else if (*lind) {
      Json params{{"family", read_json(a_file)}, {"samples", mat_samples}};
      if (lind_alpha) params["alpha_check"] = *lind_alpha;
      if (!lind_p.empty()) {
        params["p"] = parse_grid(lind_p);
        params["budget"] = budget;
      }
      config = {{"command", "lindblad"}, {"seed", seed}, {"params", params}};
    } else if (*dil) {
      config = {{"command", "dilate"},
                {"seed", seed},
                {"psi", di_psi.to_json()},
                {"params",
                 {{"x", read_json(x_file)},
                  {"L", L},
                  {"steps", steps},
                  {"samples", samples},
                  {"p", parse_grid(dil_p)}}}};
    } else if (*gal) {
      config = ex::gallery_config(seed);
    } else if (*run) {
      const auto doc = read_json(config_file);
      const auto r = ex::replay(doc);
      if (!r.ok) {
        std::cerr << "cocycle-lab: replay failed: " << r.message << "\n";
        return 3;
      }
      std::cerr << "cocycle-lab: " << r.message << "\n";
      direct_output = ex::dump(r.report);
    }

    Json report;
    if (direct_output) {
      write_text(out_path, *direct_output);
      return 0;
    }
    report = ex::run(config);
    write_text(out_path, ex::dump(report));
    if (!csv_path.empty()) write_text(csv_path, ex::poincare_csv(report.at("results")));
    if (table && *gal) {
      for (const auto& row : report.at("results").at("rows")) {
        std::cerr << row.at("family").get<std::string>() << " " << row.at("params").dump();
        if (row.contains("alpha_bisection")) {
          std::cerr << " alpha*=" << ex::format_double(row.at("alpha_bisection").get<double>());
        } else {
          std::cerr << " alpha>=" << ex::format_double(row.at("alpha_sufficient").get<double>());
        }
        std::cerr << "\n";
      }
    }
  } catch (const cocycle_lab::Error& e) {
    std::cerr << "cocycle-lab: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cocycle-lab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
