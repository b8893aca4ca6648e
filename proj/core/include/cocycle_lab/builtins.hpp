#pragma once

// Length functions of the worked examples, plus the JSON form used by
// config files: either {"builtin": name, ...params} or
// {"group": spec-or-table-or-path, "psi": [real]}.

#include <filesystem>
#include <string>

#include "cocycle_lab/cocycle.hpp"
#include <nlohmann/json.hpp>

namespace cocycle_lab::builtins {

// Z_n^m with psi(x) = m - #{i : x_i = 0}.
LengthFunction walsh(std::size_t n, std::size_t m);
// Z_n with psi = 1 - delta_0 (same as walsh(n, 1)).
LengthFunction delta(std::size_t n);
// Z_n with psi(k) = min{k, n-k}.
LengthFunction wordlength(std::size_t n);
// H_3(Z_n) with psi(a,b,c) = 2 - delta_{b,0} - delta_{c,0}.
LengthFunction heisenberg_delta(std::size_t n);
// H_3(Z_n) with psi(a,b,c) = |b| + |c|, |b| = min{b, n-b}.
LengthFunction heisenberg_wordlength(std::size_t n);
// Z_n with psi(k) = 1 - cos(2 pi k / n). Conditionally negative; for odd n
// the kernel-level criterion fails (alpha* = 0) once n >= 5.
LengthFunction cosine(std::size_t n);

LengthFunction by_name(const std::string& name, std::size_t n, std::size_t m = 1);

// Resolves relative group paths against `base`.
LengthFunction psi_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
// Replaces any group path by the table it points to, so the result no
// longer depends on files.
nlohmann::json embed_psi_json(const nlohmann::json& j, const std::filesystem::path& base = {});
nlohmann::json psi_to_json(const LengthFunction& psi);

}  // namespace cocycle_lab::builtins
