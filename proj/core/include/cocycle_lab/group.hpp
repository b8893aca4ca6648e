#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cocycle_lab {

using Element = std::uint32_t;

inline constexpr std::size_t kDefaultOrderCap = 4096;
// Exhaustive triple checks are run up to this order; larger tables use
// Light's test over a generating set.
inline constexpr std::size_t kExhaustiveCheckOrder = 512;

// Finite group given by its multiplication table. Index 0 is always the
// identity. Immutable after construction.
class FiniteGroup {
 public:
  enum class Check { full, trusted };

  // Validates identity, inverses and associativity unless `check` is
  // trusted (used by the built-in constructors, whose tables are correct by
  // construction and covered by tests). Throws ValidationError naming the
  // first offending element or triple.
  FiniteGroup(std::size_t order, std::vector<Element> table,
              std::vector<std::string> labels = {}, std::string convention = {},
              Check check = Check::full);

  std::size_t order() const noexcept { return order_; }
  static constexpr Element identity() noexcept { return 0; }

  Element mul(Element a, Element b) const noexcept { return table_[a * order_ + b]; }
  Element inv(Element g) const noexcept { return inverse_[g]; }

  // Row-major multiplication table.
  std::span<const Element> table() const noexcept { return table_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(Element g) const { return labels_.at(g); }
  // Free-form description of the multiplication convention (Heisenberg).
  const std::string& convention() const noexcept { return convention_; }

  bool is_abelian() const noexcept;
  // Order of g as a group element.
  std::size_t element_order(Element g) const noexcept;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) noexcept {
    return a.order_ == b.order_ && a.table_ == b.table_;
  }

 private:
  std::size_t order_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::vector<std::string> labels_;
  std::string convention_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Checks the group axioms on a raw table; throws ValidationError.
void validate_group_table(std::size_t order, std::span<const Element> table);

// Exhaustive associativity over all order^3 triples; returns false and fills
// `triple` with the first failure.
bool exhaustive_associativity(const FiniteGroup& g, Element* triple = nullptr);

FiniteGroup build_cyclic(std::size_t n);
// Direct product with mixed-radix indices, first factor most significant.
FiniteGroup build_product(std::span<const FiniteGroup> factors,
                          std::size_t cap = kDefaultOrderCap);
// Discrete Heisenberg group H_3(Z_n): (a,b,c)(a',b',c') = (a+a'+b c', b+b', c+c').
// Element index a*n^2 + b*n + c.
FiniteGroup build_heisenberg(std::size_t n, std::size_t cap = kDefaultOrderCap);

// Heisenberg coordinates of an element index.
struct HeisenbergCoords {
  std::size_t a, b, c;
};
HeisenbergCoords heisenberg_coords(Element g, std::size_t n) noexcept;

// Declarative description of a group, as used in config files.
struct GroupSpec {
  enum class Kind { cyclic, product, heisenberg, table };
  Kind kind = Kind::cyclic;
  std::size_t n = 0;
  std::size_t m = 0;                  // product: Z_n^m when factors empty
  std::vector<GroupSpec> factors;     // product: explicit factors
  nlohmann::json table;               // table: {"order", "mul", "labels"?}

  nlohmann::json to_json() const;
  static GroupSpec from_json(const nlohmann::json& j);
};

FiniteGroup build_group(const GroupSpec& spec, std::size_t cap = kDefaultOrderCap);

// Group JSON schema: {"order": int, "mul": [[int]], "labels": [string]?}.
FiniteGroup group_from_json(const nlohmann::json& j);
nlohmann::json group_to_json(const FiniteGroup& g);
FiniteGroup load_group(const std::filesystem::path& path);

}  // namespace cocycle_lab
