#include "cocycle_lab/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "cocycle_lab/errors.hpp"

namespace cocycle_lab::builtins {

namespace {

GroupPtr share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

std::size_t cyclic_abs(std::size_t k, std::size_t n) { return std::min(k, n - k); }

GroupPtr group_from_any(const nlohmann::json& g, const std::filesystem::path& base) {
  if (g.is_string()) {
    std::filesystem::path p = g.get<std::string>();
    if (p.is_relative() && !base.empty()) p = base / p;
    return share(load_group(p));
  }
  if (!g.is_object()) throw ParseError("\"group\" must be a path, a spec or a table");
  return share(build_group(GroupSpec::from_json(g)));
}

}  // namespace

LengthFunction walsh(std::size_t n, std::size_t m) {
  if (n < 1 || m < 1) throw InvalidParameter("walsh needs n >= 1 and m >= 1");
  std::vector<FiniteGroup> factors(m, build_cyclic(n));
  auto g = share(build_product(factors));
  std::vector<double> psi(g->order());
  for (std::size_t x = 0; x < psi.size(); ++x) {
    std::size_t rest = x;
    double v = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (rest % n != 0) v += 1.0;
      rest /= n;
    }
    psi[x] = v;
  }
  return LengthFunction(g, std::move(psi));
}

LengthFunction delta(std::size_t n) { return walsh(n, 1); }

LengthFunction wordlength(std::size_t n) {
  auto g = share(build_cyclic(n));
  std::vector<double> psi(n);
  for (std::size_t k = 0; k < n; ++k) psi[k] = static_cast<double>(cyclic_abs(k, n));
  return LengthFunction(g, std::move(psi));
}

LengthFunction heisenberg_delta(std::size_t n) {
  auto g = share(build_heisenberg(n));
  std::vector<double> psi(g->order());
  for (Element x = 0; x < psi.size(); ++x) {
    const auto c = heisenberg_coords(x, n);
    psi[x] = (c.b != 0 ? 1.0 : 0.0) + (c.c != 0 ? 1.0 : 0.0);
  }
  return LengthFunction(g, std::move(psi));
}

LengthFunction heisenberg_wordlength(std::size_t n) {
  auto g = share(build_heisenberg(n));
  std::vector<double> psi(g->order());
  for (Element x = 0; x < psi.size(); ++x) {
    const auto c = heisenberg_coords(x, n);
    psi[x] = static_cast<double>(cyclic_abs(c.b, n) + cyclic_abs(c.c, n));
  }
  return LengthFunction(g, std::move(psi));
}

LengthFunction cosine(std::size_t n) {
  auto g = share(build_cyclic(n));
  std::vector<double> psi(n);
  for (std::size_t k = 0; k < n; ++k) {
    psi[k] = 1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                            static_cast<double>(n));
  }
  return LengthFunction(g, std::move(psi));
}

LengthFunction by_name(const std::string& name, std::size_t n, std::size_t m) {
  if (name == "walsh") return walsh(n, m);
  if (name == "delta") return delta(n);
  if (name == "wordlength") return wordlength(n);
  if (name == "heisenberg-delta") return heisenberg_delta(n);
  if (name == "heisenberg-wordlength") return heisenberg_wordlength(n);
  if (name == "cosine") return cosine(n);
  throw InvalidParameter("unknown builtin length function '" + name + "'");
}

LengthFunction psi_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  try {
    if (j.contains("builtin")) {
      return by_name(j.at("builtin").get<std::string>(), j.at("n").get<std::size_t>(),
                     j.value("m", std::size_t{1}));
    }
    auto g = group_from_any(j.at("group"), base);
    return LengthFunction(g, j.at("psi").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("length function: ") + e.what());
  }
}

nlohmann::json embed_psi_json(const nlohmann::json& j, const std::filesystem::path& base) {
  if (j.contains("builtin") || !j.contains("group") || !j.at("group").is_string()) return j;
  nlohmann::json out = j;
  out["group"] = group_to_json(*group_from_any(j.at("group"), base));
  return out;
}

nlohmann::json psi_to_json(const LengthFunction& psi) {
  return {{"group", group_to_json(psi.group())},
          {"psi", std::vector<double>(psi.values().begin(), psi.values().end())}};
}

}  // namespace cocycle_lab::builtins
