#pragma once

// Continuation cocycles nu (chain maps a ⊗ x -> sum_y a.nu(x, y) ⊗ y) and
// homotopy cocycles h (a ⊗ x -> (-1)^{|a|} sum_y a.h(x, y) ⊗ y) between
// twisted complexes over a common module.

#include <optional>
#include <utility>
#include <vector>

#include "dgc/twisted_complex.hpp"

namespace dgc {

class ContinuationCocycle {
 public:
  /// Throws MixedAlgebra unless both complexes share the module.
  ContinuationCocycle(ComplexPtr source, ComplexPtr target,
                      CocycleEntries entries);

  /// nu(x, x) = unit, every other entry zero.
  static ContinuationCocycle identity(const ComplexPtr& x);

  const ComplexPtr& source() const { return source_; }
  const ComplexPtr& target() const { return target_; }
  const CocycleEntries& entries() const { return entries_; }
  AlgebraElement entry(std::size_t x, std::size_t y) const;

 private:
  ComplexPtr source_;
  ComplexPtr target_;
  CocycleEntries entries_;
};

/// Degree |nu(x,y)| = |x| - |y|, class labels, and per pair
///   d nu(x,y) = sum_z m+(x,z) nu(z,y) + sum_z (-1)^{|x|-|z|-1} nu(x,z) m-(z,y).
ValidationReport validate_continuation(const ContinuationCocycle& nu);

/// d nu(x,y) minus the right-hand side above; nullopt beyond truncation.
std::optional<AlgebraElement> continuation_residual(
    const ContinuationCocycle& nu, std::size_t x, std::size_t y);

/// Psi(z). Also checks D- Psi(z) = Psi D+(z) and throws ChainMapViolation
/// when both sides are representable and differ.
Chain apply(const ContinuationCocycle& nu, const Chain& z);
/// Psi(z) without the check; nullopt when a product leaves the module range.
std::optional<Chain> try_apply(const ContinuationCocycle& nu, const Chain& z);

/// Checks D- Psi = Psi D+ on every source cell with total degree in
/// [lo, hi]; throws ChainMapViolation naming the first failing cell.
void check_chain_map(const ContinuationCocycle& nu, int lo, int hi);

/// Matrix of Psi from the degree-k basis of `source_window` to that of
/// `target_window`. Throws TruncationExceeded if an image leaves the target
/// basis.
IntMatrix continuation_matrix(const ContinuationCocycle& nu,
                              const AssembledComplex& source_window,
                              const AssembledComplex& target_window, int k);

/// (nu12 . nu23)(x, y) = sum_z nu12(x, z) nu23(z, y), realising Psi23 Psi12.
/// Throws EndpointMismatch unless nu12's target is nu23's source.
ContinuationCocycle compose(const ContinuationCocycle& nu12,
                            const ContinuationCocycle& nu23);

/// max over nonzero entries of action(y) - action(x); -inf for the zero
/// cocycle. Psi maps FC^{<b} into FC^{<b+E}. Throws ActionsMissing.
ExtendedRational filtration_shift(const ContinuationCocycle& nu);

/// Psi_* : H_k(source) -> H_k(target) for k in [lo, hi], in the generators
/// chosen by the homology presentations (torsion first, then free).
std::vector<GroupMap> induced_on_homology(const ContinuationCocycle& nu, int lo,
                                          int hi);

/// A finite directed system X_1 -> X_2 -> ... -> X_n of continuation maps:
/// homology of every stage and the ladder of induced maps.
struct TowerHomology {
  int lo = 0;
  int hi = -1;
  /// stages[i][k - lo] = H_k(X_{i+1}).
  std::vector<std::vector<HomologyGroup>> stages;
  /// ladder[i][k - lo] : H_k(X_{i+1}) -> H_k(X_{i+2}).
  std::vector<std::vector<GroupMap>> ladder;
  /// Homology of the last stage.
  const std::vector<HomologyGroup>& limit() const { return stages.back(); }
};

/// Throws EndpointMismatch unless consecutive maps share their endpoint and
/// InvalidDefinition for an empty tower.
TowerHomology tower_homology(const std::vector<ContinuationCocycle>& maps,
                             int lo, int hi);

class HomotopyCocycle {
 public:
  /// Throws EndpointMismatch unless map0 and map1 share source and target.
  HomotopyCocycle(ContinuationCocycle map0, ContinuationCocycle map1,
                  CocycleEntries entries);

  const ContinuationCocycle& map0() const { return map0_; }
  const ContinuationCocycle& map1() const { return map1_; }
  const ComplexPtr& source() const { return map0_.source(); }
  const ComplexPtr& target() const { return map0_.target(); }
  const CocycleEntries& entries() const { return entries_; }
  AlgebraElement entry(std::size_t x, std::size_t y) const;

 private:
  ContinuationCocycle map0_;
  ContinuationCocycle map1_;
  CocycleEntries entries_;
};

/// Degree |h(x,y)| = |x| - |y| + 1 and per pair
///   dh = nu1 - nu0 + sum_z (-1)^{|x|-|z|} m+(x,z) h(z,y)
///                  + sum_z (-1)^{|x|-|z|} h(x,z) m-(z,y).
/// When every pair passes, Psi1 - Psi0 = D- h + h D+ is also checked on the
/// source cells of total degree in [lo, hi] (default: default_window).
ValidationReport validate_homotopy(const HomotopyCocycle& h);
ValidationReport validate_homotopy(const HomotopyCocycle& h, int lo, int hi);

std::optional<AlgebraElement> homotopy_residual(const HomotopyCocycle& h,
                                                std::size_t x, std::size_t y);

struct HomotopySearch {
  /// Laurent entries use exponents in [-exponent_bound, exponent_bound].
  std::int64_t exponent_bound = 2;
};

/// Best effort: a homotopy from nu0 to nu1 whose entries are combinations of
/// the words of degree |x| - |y| + 1, found by an exact integer solve of the
/// (linear) homotopy equation. nullopt when none exists among those words or
/// the candidate fails validate_homotopy.
std::optional<HomotopyCocycle> find_homotopy(const ContinuationCocycle& nu0,
                                             const ContinuationCocycle& nu1,
                                             const HomotopySearch& search = {});

/// The operator h on chains.
std::optional<Chain> try_apply(const HomotopyCocycle& h, const Chain& z);

/// Degrees from the lowest cell up to the highest certified (or present)
/// degree of the complex.
std::pair<int, int> default_window(const TwistedComplex& x);

}  // namespace dgc
