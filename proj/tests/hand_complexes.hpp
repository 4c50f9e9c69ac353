#pragma once

// Cellular chain complexes written out by hand, used as independent
// references for the built-in models.

#include <map>
#include <stdexcept>
#include <string>

#include "dgc/models.hpp"
#include "oracles.hpp"

namespace oracle {

using dgc::HomologyGroup;
using dgc::IntMatrix;
using dgc::RpCoefficients;

// A bounded complex of free abelian groups given by hand: rank of each
// degree and the matrices D_k : C_k -> C_{k-1}.
struct HandComplex {
  std::map<int, std::size_t> ranks;
  std::map<int, IntMatrix> d;

  std::size_t rank(int k) const {
    auto it = ranks.find(k);
    return it == ranks.end() ? 0 : it->second;
  }
  IntMatrix at(int k) const {
    auto it = d.find(k);
    return it == d.end() ? IntMatrix(rank(k - 1), rank(k)) : it->second;
  }
  HomologyGroup homology(int k) const { return oracle::homology(at(k + 1), at(k)); }
};

// Cells of the line R on the vertices -n..n.
inline HandComplex line(int n) {
  HandComplex c;
  const std::size_t v = static_cast<std::size_t>(2 * n + 1);
  c.ranks = {{0, v}, {1, v - 1}};
  IntMatrix d1(v, v - 1);
  for (std::size_t e = 0; e + 1 < v; ++e) {
    d1(e, e) = -1;
    d1(e + 1, e) = 1;
  }
  c.d[1] = d1;
  return c;
}

// Square cells of the plane on the grid [-n, n]^2.
inline HandComplex plane(int n) {
  const std::size_t s = static_cast<std::size_t>(2 * n + 1);
  auto vertex = [&](std::size_t i, std::size_t j) { return i * s + j; };
  auto horizontal = [&](std::size_t i, std::size_t j) { return i * (s - 1) + j; };
  auto vertical = [&](std::size_t i, std::size_t j) { return s * (s - 1) + i * s + j; };
  HandComplex c;
  c.ranks = {{0, s * s}, {1, 2 * s * (s - 1)}, {2, (s - 1) * (s - 1)}};
  IntMatrix d1(s * s, 2 * s * (s - 1));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j + 1 < s; ++j) {
      d1(vertex(i, j), horizontal(i, j)) = -1;
      d1(vertex(i, j + 1), horizontal(i, j)) = 1;
      d1(vertex(j, i), vertical(j, i)) = -1;
      d1(vertex(j + 1, i), vertical(j, i)) = 1;
    }
  IntMatrix d2(2 * s * (s - 1), (s - 1) * (s - 1));
  for (std::size_t i = 0; i + 1 < s; ++i)
    for (std::size_t j = 0; j + 1 < s; ++j) {
      const std::size_t f = i * (s - 1) + j;
      d2(horizontal(i, j), f) = 1;
      d2(vertical(i, j + 1), f) = 1;
      d2(horizontal(i + 1, j), f) = -1;
      d2(vertical(i, j), f) = -1;
    }
  c.d[1] = d1;
  c.d[2] = d2;
  return c;
}

// Cone of right multiplication by a generator of degree n - 1 on the tensor
// algebra: x^j ⊗ m in degree j(n-1), x^j ⊗ M in degree j(n-1) + n, and
// x^j ⊗ M -> ±x^{j+1} ⊗ m.
inline HandComplex cone_of_x(int n, int top) {
  HandComplex c;
  std::map<int, std::vector<std::pair<char, int>>> cells;
  for (int j = 0; j * (n - 1) <= top; ++j) {
    cells[j * (n - 1)].push_back({'m', j});
    if (j * (n - 1) + n <= top) cells[j * (n - 1) + n].push_back({'M', j});
  }
  for (const auto& [k, list] : cells) c.ranks[k] = list.size();
  for (const auto& [k, list] : cells) {
    if (!cells.count(k - 1)) continue;
    const auto& below = cells[k - 1];
    IntMatrix d(below.size(), list.size());
    for (std::size_t col = 0; col < list.size(); ++col) {
      if (list[col].first != 'M') continue;
      for (std::size_t row = 0; row < below.size(); ++row)
        if (below[row] == std::pair{'m', list[col].second + 1})
          d(row, col) = list[col].second % 2 ? -1 : 1;
    }
    c.d[k] = d;
  }
  return c;
}

// One cell pair per dimension: the group ring of Z/2 on (e, g), with
// D_k multiplication by a + b g.
inline HandComplex projective(int n, RpCoefficients mode) {
  HandComplex c;
  for (int k = 0; k <= n; ++k)
    c.ranks[k] = mode == RpCoefficients::group_ring ? 2 : 1;
  for (int k = 1; k <= n; ++k) {
    const long s = k % 2 == 0 ? 1 : -1;
    switch (mode) {
      case RpCoefficients::group_ring:
        c.d[k] = IntMatrix{{1, s}, {s, 1}};
        break;
      case RpCoefficients::trivial:
        c.d[k] = IntMatrix{{1 + s}};
        break;
      case RpCoefficients::sign:
        c.d[k] = IntMatrix{{1 - s}};
        break;
    }
  }
  return c;
}

// one ⊗ m, u ⊗ m, one ⊗ M, u ⊗ M in degrees 0..3; one ⊗ M -> u ⊗ m.
inline HandComplex hopf_cells() {
  HandComplex c;
  c.ranks = {{0, 1}, {1, 1}, {2, 1}, {3, 1}};
  c.d[2] = IntMatrix{{1}};
  return c;
}

inline HandComplex oracle_for(const std::string& id) {
  if (id == "circle") return line(2);
  if (id == "circle_twisted") {
    HandComplex c;
    c.ranks = {{0, 1}, {1, 1}};
    c.d[1] = IntMatrix{{-2}};
    return c;
  }
  if (id == "sphere2") return cone_of_x(2, dgc::default_truncation);
  if (id == "sphere3") return cone_of_x(3, dgc::default_truncation);
  if (id == "torus") return plane(1);
  if (id == "rp2") return projective(2, RpCoefficients::group_ring);
  if (id == "rp3") return projective(3, RpCoefficients::group_ring);
  if (id == "rp3_trivial") return projective(3, RpCoefficients::trivial);
  if (id == "rp4_sign") return projective(4, RpCoefficients::sign);
  if (id == "hopf") return hopf_cells();
  throw std::invalid_argument("no oracle for " + id);
}


}  // namespace oracle
