#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/group.hpp"
#include "cocycle_lab/random.hpp"

namespace support {

using cocycle_lab::Element;
using cocycle_lab::FiniteGroup;
using cocycle_lab::GroupPtr;

inline GroupPtr share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

// Order of every element by repeated multiplication, sorted.
inline std::vector<std::size_t> order_census(const FiniteGroup& g) {
  std::vector<std::size_t> out;
  for (Element x = 0; x < g.order(); ++x) {
    Element y = x;
    std::size_t k = 1;
    while (y != 0) {
      y = g.mul(y, x);
      ++k;
    }
    out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool brute_associative(const FiniteGroup& g) {
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b)
      for (Element c = 0; c < g.order(); ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) return false;
  return true;
}

// S_3 as permutations of {0,1,2}; element 0 is the identity.
inline std::vector<std::vector<int>> s3_table() {
  const std::vector<std::array<int, 3>> perms = {
      {0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  auto index = [&](const std::array<int, 3>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i)
      if (perms[i] == p) return static_cast<int>(i);
    return -1;
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      std::array<int, 3> c{};
      for (int k = 0; k < 3; ++k) c[k] = perms[i][perms[j][k]];
      t[i][j] = index(c);
    }
  return t;
}

// Naive convolution: (f g)_u = sum over (s, t) with st = u.
inline Eigen::VectorXcd convolve(const FiniteGroup& g, const Eigen::VectorXcd& a,
                                 const Eigen::VectorXcd& b) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(a.size());
  for (Element u = 0; u < g.order(); ++u)
    for (Element s = 0; s < g.order(); ++s)
      for (Element t = 0; t < g.order(); ++t)
        if (g.mul(s, t) == u) c[u] += a[s] * b[t];
  return c;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

inline cocycle_lab::AlgebraElement random_element(const GroupPtr& g, std::uint64_t seed,
                                                  std::uint64_t index) {
  cocycle_lab::rng::Stream s(seed, cocycle_lab::rng::Tag::battery, index);
  return cocycle_lab::AlgebraElement::random(g, s);
}

}  // namespace support
