#include <doctest.h>

#include <clocale>
#include <set>

#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/experiment.hpp"
#include "cocycle_lab/parallel.hpp"
#include "cocycle_lab/random.hpp"

using namespace cocycle_lab;
namespace ex = cocycle_lab::experiment;
using Json = ex::Json;
using doctest::Approx;

namespace {

Json builtin(const std::string& name, std::size_t n, std::size_t m = 1) {
  return {{"builtin", name}, {"n", n}, {"m", m}};
}

}  // namespace

TEST_CASE("counter-based streams") {
  rng::Stream a(5, rng::Tag::brownian, 3), b(5, rng::Tag::brownian, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_bits() == b.next_bits());
  CHECK(rng::derive_key(5, rng::Tag::brownian, 3) != rng::derive_key(5, rng::Tag::brownian_copy, 3));
  CHECK(rng::derive_key(5, rng::Tag::brownian, 3) != rng::derive_key(6, rng::Tag::brownian, 3));
  CHECK(rng::derive_key(5, rng::Tag::brownian, 3) != rng::derive_key(5, rng::Tag::brownian, 4));

  rng::Stream s(1, rng::Tag::battery, 0);
  const std::uint64_t key = s.key();
  for (int i = 0; i < 10; ++i) s.normal();
  rng::Stream replay(key);
  for (int i = 0; i < 4; ++i) replay.normal();
  CHECK(replay.normal() == rng::normal_at(key, 4));

  // moments of 20000 draws
  double sum = 0, sum2 = 0, lo = 1, hi = 0;
  rng::Stream t(2, rng::Tag::battery, 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = t.normal();
    sum += z;
    sum2 += z * z;
    const double u = t.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(std::abs(sum / n) < 5 / std::sqrt(double(n)));
  CHECK(std::abs(sum2 / n - 1) < 5 * std::sqrt(2.0 / n));
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(worker_count() >= 1);
}

TEST_CASE("digest") {
  const Json a{{"command", "alpha"}, {"seed", 1}, {"psi", builtin("walsh", 2, 3)}};
  const auto d = ex::digest(a);
  CHECK(d.size() == 16);
  CHECK(d.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(ex::digest(a) == d);
  Json b = a;
  b["seed"] = 2;
  CHECK(ex::digest(b) != d);
  CHECK(ex::digest(Json()) != ex::digest(Json::object()));
}

TEST_CASE("alpha command on the Walsh cube") {
  const Json c{{"command", "alpha"}, {"seed", 1}, {"psi", builtin("walsh", 2, 3)}};
  const auto r = ex::run(c);
  CHECK(std::abs(r["results"]["alpha_star"].get<double>() - 1.0) < 1e-8);
  CHECK(r["inputs_digest"] == ex::digest(c));
  CHECK(r["seed"] == 1);
  CHECK(r["tool_version"] == ex::tool_version());
  CHECK(r["results"]["criterion_holds"] == true);

  Json both = c;
  both["params"] = {{"method", "both"}};
  CHECK(ex::results(both)["agreement"].get<double>() < 1e-8);
}

TEST_CASE("schur-identity command") {
  const auto r = ex::results({{"command", "schur-identity"}, {"psi", builtin("wordlength", 4)}});
  CHECK(r["residual"].get<double>() == 0.0);
  const auto d =
      ex::results({{"command", "schur-identity"}, {"params", {{"n", 4}, {"kernel", "delta"}}}});
  CHECK(d["residual"].get<double>() > 0.1);
}

TEST_CASE("errors name the failing stage") {
  CHECK_THROWS_AS(ex::results(Json{{"seed", 1}}), ParseError);
  try {
    ex::results({{"command", "alpha"}, {"psi", {{"builtin", "nope"}, {"n", 3}}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
  CHECK_THROWS_AS(ex::results({{"command", "frobnicate"}}), Error);
}

TEST_CASE("replay") {
  const Json c{{"command", "cn-check"}, {"seed", 3}, {"psi", builtin("heisenberg-delta", 2)}};
  const auto report = ex::run(c);
  const auto text = ex::dump(report);
  const auto ok = ex::replay(Json::parse(text));
  CHECK(ok.ok);
  CHECK(ex::dump(ok.report) == text);

  Json tampered = Json::parse(text);
  tampered["results"]["min_eig"] = 42.0;
  CHECK_FALSE(ex::replay(tampered).ok);

  Json wrong_digest = Json::parse(text);
  wrong_digest["inputs_digest"] = "0000000000000000";
  const auto bad = ex::replay(wrong_digest);
  CHECK_FALSE(bad.ok);
  CHECK(bad.message.find("digest") != std::string::npos);

  Json wrong_seed = Json::parse(text);
  wrong_seed["seed"] = 4;
  CHECK_FALSE(ex::replay(wrong_seed).ok);

  CHECK(ex::replay(c).ok);
}

TEST_CASE("CSV output") {
  const Json r{{"p_grid", {2.0, 4.0}}, {"constants", {1.0, 1.25}}};
  CHECK(ex::poincare_csv(r) == "p,constant\n2,1\n4,1.25\n");
  CHECK(ex::poincare_csv(Json{{"poincare", r}}) == ex::poincare_csv(r));
  // locale does not leak into the output
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
    CHECK(ex::format_double(0.5) == "0.5");
    std::setlocale(LC_NUMERIC, "C");
  }
  CHECK(ex::format_double(0.1) == "0.1");
  CHECK(std::stod(ex::format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("gallery") {
  const auto g = ex::results(ex::gallery_config(7));
  // 9 Walsh, 3 Heisenberg, 7 word length, 2 Lindblad
  CHECK(g["row_count"] == 21);
  CHECK(g["rows"].size() == 21);
  bool z3 = false;
  std::set<std::size_t> wl;
  for (const auto& row : g["rows"]) {
    if (row["family"] == "walsh" && row["params"]["n"] == 3 && row["params"]["m"] == 1) {
      z3 = true;
      CHECK(row["alpha_bisection"].get<double>() == Approx(5.0 / 6).epsilon(1e-9));
    }
    if (row["family"] == "wordlength") {
      CHECK(std::abs(row["alpha_bisection"].get<double>() - 1.0) < 1e-8);
      wl.insert(row["params"]["n"].get<std::size_t>());
    }
    CHECK(row["battery"]["passed"] == true);
  }
  CHECK(z3);
  CHECK(wl.count(4) + wl.count(6) + wl.count(8) == 3);
}
