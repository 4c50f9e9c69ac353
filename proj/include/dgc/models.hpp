#pragma once

// Built-in example complexes with their expected homology.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dgc/twisted_complex.hpp"

namespace dgc {

struct NamedModel {
  std::string id;
  DgaPtr algebra;
  ModulePtr module;
  std::shared_ptr<const TwistedComplex> complex;
  /// (degree, group) pairs; degrees not listed are not claimed.
  std::vector<std::pair<int, HomologyGroup>> expected_homology;
  /// How the expected values are obtained independently.
  std::string source_note;
};

inline constexpr int default_truncation = 12;

/// Z[t^±1] acting on itself; generators M (degree 1) and m (degree 0) with
/// m(M, m) = t - 1.
NamedModel circle_model();

/// The circle cocycle on Z concentrated in degree 0, with t acting by -1.
NamedModel circle_twisted_model();

/// Z<x> with |x| = n - 1 acting on itself; generators M (degree n) and m
/// (degree 0) with m(M, m) = x. Throws TruncationTooSmall if truncation < 2n.
NamedModel sphere_model(int n, int truncation = default_truncation);

/// Z[t^±1, s^±1] acting on itself; generators T (2), A, B (1), m (0) with the
/// Koszul cocycle of (t - 1, s - 1).
NamedModel torus_model();

enum class RpCoefficients {
  /// Z[g]/(g^2 - 1) acting on itself: the double cover, homology of S^n.
  group_ring,
  /// Z with g acting trivially: cellular homology of RP^n.
  trivial,
  /// Z with g acting by -1: the orientation-twisted cellular homology.
  sign,
};

/// Generators x_0, ..., x_n with m(x_k, x_{k-1}) = 1 + (-1)^k g.
NamedModel rp_model(int n, RpCoefficients mode = RpCoefficients::group_ring);

/// Z<x> with |x| = 1 acting on the two-word module {one, u}, one.x = u;
/// generators M (degree 2) and m (degree 0) with m(M, m) = x.
NamedModel hopf_model(int truncation = default_truncation);

/// All models exercised by the test and acceptance suites.
std::vector<NamedModel> builtin_models();

}  // namespace dgc
