#include "cocycle_lab/group.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "cocycle_lab/errors.hpp"

namespace cocycle_lab {
namespace {

std::string triple_text(Element a, Element b, Element c) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ", " << c << ")";
  return os.str();
}

// Greedy generating set: grow the right-multiplication closure until it
// covers the whole table.
std::vector<Element> generating_set(std::size_t order, std::span<const Element> t) {
  std::vector<char> reached(order, 0);
  std::vector<Element> gens;
  reached[0] = 1;
  std::size_t count = 1;
  for (Element cand = 1; cand < order && count < order; ++cand) {
    if (reached[cand]) continue;
    gens.push_back(cand);
    // BFS: products x*g for reached x and generators g.
    std::vector<Element> frontier;
    for (Element x = 0; x < order; ++x) {
      if (reached[x]) frontier.push_back(x);
    }
    while (!frontier.empty()) {
      std::vector<Element> next;
      for (Element x : frontier) {
        for (Element g : gens) {
          const Element y = t[x * order + g];
          if (!reached[y]) {
            reached[y] = 1;
            ++count;
            next.push_back(y);
          }
        }
      }
      frontier.swap(next);
    }
  }
  return gens;
}

}  // namespace

void validate_group_table(std::size_t order, std::span<const Element> t) {
  if (order == 0) throw ValidationError("group order must be positive");
  if (t.size() != order * order) {
    throw ValidationError("multiplication table has " + std::to_string(t.size()) +
                          " entries, expected " + std::to_string(order * order));
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= order) {
      throw ValidationError("table entry mul(" + std::to_string(i / order) + ", " +
                            std::to_string(i % order) + ") = " + std::to_string(t[i]) +
                            " is out of range");
    }
  }
  for (Element g = 0; g < order; ++g) {
    if (t[g] != g || t[g * order] != g) {
      throw ValidationError("index 0 is not an identity: fails at element " +
                            std::to_string(g));
    }
  }
  for (Element g = 0; g < order; ++g) {
    bool found = false;
    for (Element h = 0; h < order; ++h) {
      if (t[g * order + h] == 0 && t[h * order + g] == 0) {
        found = true;
        break;
      }
    }
    if (!found) throw ValidationError("element " + std::to_string(g) + " has no inverse");
  }
  if (order <= kExhaustiveCheckOrder) {
    for (Element a = 0; a < order; ++a) {
      for (Element b = 0; b < order; ++b) {
        const Element ab = t[a * order + b];
        for (Element c = 0; c < order; ++c) {
          if (t[ab * order + c] != t[a * order + t[b * order + c]]) {
            throw ValidationError("associativity fails at triple " + triple_text(a, b, c));
          }
        }
      }
    }
    return;
  }
  // Light's test: the elements g with (xg)y = x(gy) for all x, y form a
  // submagma, so checking a generating set suffices.
  for (Element g : generating_set(order, t)) {
    for (Element x = 0; x < order; ++x) {
      const Element xg = t[x * order + g];
      for (Element y = 0; y < order; ++y) {
        if (t[xg * order + y] != t[x * order + t[g * order + y]]) {
          throw ValidationError("associativity fails at triple " + triple_text(x, g, y));
        }
      }
    }
  }
}

FiniteGroup::FiniteGroup(std::size_t order, std::vector<Element> table,
                         std::vector<std::string> labels, std::string convention,
                         Check check)
    : order_(order), table_(std::move(table)), labels_(std::move(labels)),
      convention_(std::move(convention)) {
  if (check == Check::full) {
    validate_group_table(order_, table_);
  } else if (order_ == 0 || table_.size() != order_ * order_) {
    throw ValidationError("malformed multiplication table");
  }
  inverse_.assign(order_, 0);
  for (Element g = 0; g < order_; ++g) {
    for (Element h = 0; h < order_; ++h) {
      if (table_[g * order_ + h] == 0) {
        inverse_[g] = h;
        break;
      }
    }
  }
  if (labels_.empty()) {
    labels_.reserve(order_);
    for (std::size_t g = 0; g < order_; ++g) labels_.push_back(std::to_string(g));
  } else if (labels_.size() != order_) {
    throw ValidationError("expected " + std::to_string(order_) + " labels, got " +
                          std::to_string(labels_.size()));
  }
}

bool FiniteGroup::is_abelian() const noexcept {
  for (Element a = 0; a < order_; ++a) {
    for (Element b = a + 1; b < order_; ++b) {
      if (mul(a, b) != mul(b, a)) return false;
    }
  }
  return true;
}

std::size_t FiniteGroup::element_order(Element g) const noexcept {
  std::size_t k = 1;
  for (Element x = g; x != 0; x = mul(x, g)) ++k;
  return k;
}

bool exhaustive_associativity(const FiniteGroup& g, Element* triple) {
  const auto n = static_cast<Element>(g.order());
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      for (Element c = 0; c < n; ++c) {
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
          if (triple) {
            triple[0] = a;
            triple[1] = b;
            triple[2] = c;
          }
          return false;
        }
      }
    }
  }
  return true;
}

FiniteGroup build_cyclic(std::size_t n) {
  if (n == 0) throw InvalidParameter("cyclic group needs n >= 1");
  if (n > kDefaultOrderCap) {
    throw SizeError("cyclic group order " + std::to_string(n) + " exceeds cap");
  }
  std::vector<Element> t(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i * n + j] = static_cast<Element>((i + j) % n);
  }
  return FiniteGroup(n, std::move(t), {}, {}, FiniteGroup::Check::trusted);
}

FiniteGroup build_product(std::span<const FiniteGroup> factors, std::size_t cap) {
  if (factors.empty()) throw InvalidParameter("product needs at least one factor");
  std::size_t order = 1;
  for (const auto& f : factors) {
    if (order > cap / f.order()) {
      throw SizeError("product order exceeds cap " + std::to_string(cap));
    }
    order *= f.order();
  }
  if (order > cap) throw SizeError("product order exceeds cap " + std::to_string(cap));

  const std::size_t k = factors.size();
  // digits[x * k + i] = coordinate of x in factor i.
  std::vector<Element> digits(order * k);
  for (std::size_t x = 0; x < order; ++x) {
    std::size_t rest = x;
    for (std::size_t i = k; i-- > 0;) {
      digits[x * k + i] = static_cast<Element>(rest % factors[i].order());
      rest /= factors[i].order();
    }
  }
  std::vector<Element> t(order * order);
  for (std::size_t x = 0; x < order; ++x) {
    for (std::size_t y = 0; y < order; ++y) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < k; ++i) {
        idx = idx * factors[i].order() +
              factors[i].mul(digits[x * k + i], digits[y * k + i]);
      }
      t[x * order + y] = static_cast<Element>(idx);
    }
  }
  std::vector<std::string> labels(order);
  for (std::size_t x = 0; x < order; ++x) {
    std::string s = "(";
    for (std::size_t i = 0; i < k; ++i) {
      if (i) s += ",";
      s += factors[i].label(digits[x * k + i]);
    }
    labels[x] = s + ")";
  }
  return FiniteGroup(order, std::move(t), std::move(labels), {},
                     FiniteGroup::Check::trusted);
}

HeisenbergCoords heisenberg_coords(Element g, std::size_t n) noexcept {
  return {g / (n * n), (g / n) % n, g % n};
}

FiniteGroup build_heisenberg(std::size_t n, std::size_t cap) {
  if (n < 2) throw InvalidParameter("Heisenberg group needs n >= 2");
  if (n > cap || n * n > cap / n) {
    throw SizeError("Heisenberg group order n^3 exceeds cap " + std::to_string(cap));
  }
  const std::size_t order = n * n * n;
  std::vector<Element> t(order * order);
  for (Element x = 0; x < order; ++x) {
    const auto [a, b, c] = heisenberg_coords(x, n);
    for (Element y = 0; y < order; ++y) {
      const auto [a2, b2, c2] = heisenberg_coords(y, n);
      const std::size_t ra = (a + a2 + b * c2) % n;
      const std::size_t rb = (b + b2) % n;
      const std::size_t rc = (c + c2) % n;
      t[x * order + y] = static_cast<Element>(ra * n * n + rb * n + rc);
    }
  }
  std::vector<std::string> labels(order);
  for (Element x = 0; x < order; ++x) {
    const auto [a, b, c] = heisenberg_coords(x, n);
    labels[x] = "(" + std::to_string(a) + "," + std::to_string(b) + "," +
                std::to_string(c) + ")";
  }
  const std::string convention =
      "(a,b,c) = [[1,b,a],[0,1,c],[0,0,1]] over Z_" + std::to_string(n) +
      "; (a,b,c)(a',b',c') = (a+a'+b*c', b+b', c+c'); index = a*n^2 + b*n + c";
  return FiniteGroup(order, std::move(t), std::move(labels), convention,
                     FiniteGroup::Check::trusted);
}

nlohmann::json GroupSpec::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case Kind::cyclic:
      j = {{"kind", "cyclic"}, {"n", n}};
      break;
    case Kind::heisenberg:
      j = {{"kind", "heisenberg"}, {"n", n}};
      break;
    case Kind::product:
      j = {{"kind", "product"}};
      if (factors.empty()) {
        j["n"] = n;
        j["m"] = m;
      } else {
        j["factors"] = nlohmann::json::array();
        for (const auto& f : factors) j["factors"].push_back(f.to_json());
      }
      break;
    case Kind::table:
      j = table;
      j["kind"] = "table";
      break;
  }
  return j;
}

GroupSpec GroupSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("group spec must be a JSON object");
  GroupSpec s;
  const std::string kind = j.value("kind", std::string(j.contains("mul") ? "table" : ""));
  try {
    if (kind == "cyclic") {
      s.kind = Kind::cyclic;
      s.n = j.at("n").get<std::size_t>();
    } else if (kind == "heisenberg") {
      s.kind = Kind::heisenberg;
      s.n = j.at("n").get<std::size_t>();
    } else if (kind == "product") {
      s.kind = Kind::product;
      if (j.contains("factors")) {
        for (const auto& f : j.at("factors")) s.factors.push_back(from_json(f));
      } else {
        s.n = j.at("n").get<std::size_t>();
        s.m = j.at("m").get<std::size_t>();
      }
    } else if (kind == "table") {
      s.kind = Kind::table;
      s.table = j;
      s.table.erase("kind");
    } else {
      throw ParseError("unknown group kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad group spec: ") + e.what());
  }
  return s;
}

FiniteGroup build_group(const GroupSpec& spec, std::size_t cap) {
  switch (spec.kind) {
    case GroupSpec::Kind::cyclic:
      return build_cyclic(spec.n);
    case GroupSpec::Kind::heisenberg:
      return build_heisenberg(spec.n, cap);
    case GroupSpec::Kind::product: {
      std::vector<FiniteGroup> fs;
      if (spec.factors.empty()) {
        if (spec.m == 0) throw InvalidParameter("product needs m >= 1");
        for (std::size_t i = 0; i < spec.m; ++i) fs.push_back(build_cyclic(spec.n));
      } else {
        for (const auto& f : spec.factors) fs.push_back(build_group(f, cap));
      }
      return build_product(fs, cap);
    }
    case GroupSpec::Kind::table:
      return group_from_json(spec.table);
  }
  throw InvalidParameter("unhandled group kind");
}

FiniteGroup group_from_json(const nlohmann::json& j) {
  std::size_t order = 0;
  std::vector<Element> table;
  std::vector<std::string> labels;
  try {
    order = j.at("order").get<std::size_t>();
    const auto& rows = j.at("mul");
    if (!rows.is_array() || rows.size() != order) {
      throw ParseError("\"mul\" must have " + std::to_string(order) + " rows");
    }
    table.reserve(order * order);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != order) {
        throw ParseError("every \"mul\" row must have " + std::to_string(order) + " entries");
      }
      for (const auto& v : row) {
        const auto x = v.get<long long>();
        if (x < 0) throw ValidationError("negative table entry");
        table.push_back(static_cast<Element>(x));
      }
    }
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad group JSON: ") + e.what());
  }
  if (order > kDefaultOrderCap) throw SizeError("group order exceeds cap");
  return FiniteGroup(order, std::move(table), std::move(labels),
                     j.value("convention", std::string()));
}

nlohmann::json group_to_json(const FiniteGroup& g) {
  nlohmann::json rows = nlohmann::json::array();
  const auto n = g.order();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < n; ++k) row.push_back(g.table()[i * n + k]);
    rows.push_back(std::move(row));
  }
  nlohmann::json j = {{"order", n}, {"mul", std::move(rows)}, {"labels", g.labels()}};
  if (!g.convention().empty()) j["convention"] = g.convention();
  return j;
}

FiniteGroup load_group(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open group file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return group_from_json(j);
}

}  // namespace cocycle_lab
