#pragma once

// The spectral sequence of the filtration of a twisted complex by generator
// degree, F_p = span of the cells a ⊗ x with |x| <= p. Pages are indexed by
// (p, q) with p the generator degree and q the module degree, and
// d^r : E^r_{p,q} -> E^r_{p-r,q+r-1}.

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "dgc/chain_maps.hpp"

namespace dgc {

struct Bidegree {
  int p = 0;
  int q = 0;
  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

struct SpectralPage {
  int r = 1;
  /// E^r_{p,q} for every column p and total degree p + q in [lo, hi].
  std::map<Bidegree, Subquotient> groups;
  /// d^r out of (p, q), in the generators of the chosen presentations.
  std::map<Bidegree, GroupMap> differentials;

  /// Trivial when (p, q) is outside the computed range.
  HomologyGroup group(int p, int q) const;
};

class SpectralSequence {
 public:
  /// Total degrees [lo, hi] are reported; the window is assembled on
  /// [lo - 2, hi + 2] so neighbouring pages are available for checks.
  SpectralSequence(const TwistedComplex& x, int lo, int hi);

  const TwistedComplex& complex() const { return *x_; }
  const AssembledComplex& window() const { return window_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int min_column() const { return p_min_; }
  int max_column() const { return p_max_; }
  /// First page index from which every page equals E^∞.
  int limit_page() const { return std::max(1, p_max_ - p_min_ + 1); }

  /// Z^r_{p} in total degree k: chains of F_p whose boundary lies in
  /// F_{p-r}, as columns over the degree-k basis. k in [lo - 1, hi + 2].
  IntMatrix cycles(int r, int p, int k) const;
  /// E^r_{p} in total degree k = Z^r_p / (Z^{r-1}_{p-1} + D Z^{r-1}_{p+r-1}).
  /// k in [lo - 1, hi + 1].
  const Subquotient& presentation(int r, int p, int k) const;
  /// d^r : E^r_{p,k} -> E^r_{p-r,k-1} for k in [lo, hi + 1].
  GroupMap differential(int r, int p, int k) const;

  SpectralPage page(int r) const;
  SpectralPage limit() const { return page(limit_page()); }

 private:
  const TwistedComplex* x_;
  int lo_;
  int hi_;
  int p_min_ = 0;
  int p_max_ = -1;
  AssembledComplex window_;
  mutable std::map<std::tuple<int, int, int>, Subquotient> cache_;
};

/// Pages 1..r_max on total degrees [lo, hi]. Each E^{r+1} group is also
/// recomputed as the homology of (E^r, d^r) and compared with the direct
/// filtration quotient; d^r d^r = 0 is checked as well. Throws
/// SpectralSequenceMismatch on disagreement.
std::vector<SpectralPage> pages(const TwistedComplex& x, int r_max, int lo,
                                int hi);

/// Map of E^r_{p} in total degree k induced by a continuation cocycle.
/// Throws ChainMapViolation if the image leaves the target's Z^r_p.
GroupMap page_map(const ContinuationCocycle& nu, const SpectralSequence& source,
                  const SpectralSequence& target, int r, int p, int k);

/// Complex with chains L_p = ⊕_{|x| = p} H_q(F) and differential
/// [b] ⊗ x -> (-1)^q sum_{|y| = p - 1} [b.m(x, y)] ⊗ y. Over a box module F
/// sits in degree 0 with H_0(F) = F, and L is kept as the twisted complex on
/// the entries between adjacent degrees so the box treatment of `assemble`
/// applies.
struct LocalCoefficientComplex {
  int q = 0;
  int p_min = 0;
  int p_max = -1;
  /// Orders of the generators of L_p.
  std::map<int, std::vector<Integer>> orders;
  /// L_p -> L_{p-1}.
  std::map<int, GroupMap> differentials;
  ComplexPtr over_box;

  HomologyGroup homology(int p) const;
};

/// Throws ActionNotDescending when the image of a cycle is not a cycle or an
/// action leaves the module range.
LocalCoefficientComplex local_coefficient_complex(const TwistedComplex& x,
                                                  int q);

struct ComparisonReport {
  struct Row {
    int p = 0;
    HomologyGroup local;
    HomologyGroup e2;
  };
  int q = 0;
  std::vector<Row> rows;
  bool matches = true;
};

/// H_p of the local-coefficient complex against E^2_{p,q}, column by column.
ComparisonReport e2_matches_local_coefficients(const TwistedComplex& x, int q);

/// A class of H_q(F) in the generators of module_homology_presentation.
struct ModuleClass {
  int degree = 0;
  HomologyGroup group;
  std::vector<Integer> orders;
  IntVector coordinates;
  bool is_zero() const;
};

/// The class of the component of z on `top`. Throws NotTopDegree unless top
/// has maximal generator degree, NotACycle unless Dz = 0.
ModuleClass shriek_to_point(const TwistedComplex& x, std::size_t top,
                            const Chain& z);

/// True iff the class of the cycle z is nonzero in E^∞ of the top column.
bool lives_over_fundamental(const TwistedComplex& x, const Chain& z);

enum class CriterionMode {
  /// ker A against the saturation of ker B: true iff B takes a value of
  /// infinite order on ker A.
  saturated,
  /// ker A against ker B as subgroups.
  raw,
  /// Ranks over Q after discarding torsion.
  rational,
};

/// Lattice in Z^n of lifts of ker f, where n = number of source generators.
IntMatrix kernel_lift(const GroupMap& f);

/// True iff ker A ⊄ ker B (in the sense of `mode`). Throws DimensionMismatch
/// unless A and B share their source presentation.
bool kernel_criterion(const GroupMap& a, const GroupMap& b,
                      CriterionMode mode = CriterionMode::saturated);

}  // namespace dgc
