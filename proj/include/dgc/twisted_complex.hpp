#pragma once

// Twisted complexes F ⊗ <generators> with differential
//   D(a ⊗ x) = da ⊗ x + (-1)^{|a|} sum_y a.m(x, y) ⊗ y
// for a Maurer–Cartan cocycle m, plus action filtrations and spectral numbers.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgc/extended.hpp"
#include "dgc/module.hpp"

namespace dgc {

struct Generator {
  std::string name;
  int degree = 0;
  std::optional<Rational> action;
  std::optional<std::string> class_label;
};

/// Basis cell (module word) ⊗ (generator).
struct Cell {
  std::size_t word = 0;
  std::size_t generator = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A finite Z-combination of cells, with no zero coefficients stored.
class Chain {
 public:
  using Terms = std::map<Cell, Integer>;

  Chain() = default;
  explicit Chain(Terms terms);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Integer coefficient(const Cell& c) const;

  void add_term(const Cell& c, const Integer& v);
  Chain& operator+=(const Chain& o);
  Chain& operator-=(const Chain& o);
  Chain& operator*=(const Integer& c);
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator*(const Integer& c, Chain a) { return a *= c; }
  friend bool operator==(const Chain&, const Chain&) = default;

 private:
  Terms terms_;
};

using CocycleEntries = std::map<std::pair<std::size_t, std::size_t>, AlgebraElement>;

class TwistedComplex;
using ComplexPtr = std::shared_ptr<const TwistedComplex>;

class TwistedComplex {
 public:
  /// Zero entries are dropped. Throws InvalidDefinition on duplicate names or
  /// out-of-range indices and MixedAlgebra on foreign entries.
  TwistedComplex(ModulePtr module, std::vector<Generator> generators,
                 CocycleEntries cocycle);

  const ModulePtr& module() const { return module_; }
  const DgaPtr& algebra() const { return module_->algebra(); }
  const std::vector<Generator>& generators() const { return generators_; }
  const Generator& generator(std::size_t i) const { return generators_.at(i); }
  std::optional<std::size_t> find_generator(std::string_view name) const;
  std::size_t generator_index(std::string_view name) const;  // throws

  const CocycleEntries& cocycle() const { return cocycle_; }
  /// m(x, y), zero if absent.
  AlgebraElement entry(std::size_t x, std::size_t y) const;

  bool has_actions() const;
  int min_generator_degree() const;
  int max_generator_degree() const;

  /// Total degree |a| + |x| of a cell.
  int degree(const Cell& c) const;
  /// nullopt if zero or not homogeneous.
  std::optional<int> degree(const Chain& z) const;

  /// Chain-level D; nullopt if some product leaves the representable range.
  std::optional<Chain> try_differential(const Chain& z) const;
  Chain differential(const Chain& z) const;  // throws TruncationExceeded

  Chain cell(std::size_t word, std::size_t generator, const Integer& c = 1) const;
  /// Module element a placed on generator x.
  Chain tensor(const ModuleElement& a, std::size_t x) const;
  /// The part of z on generator x, as a module element.
  ModuleElement component(const Chain& z, std::size_t x) const;

  /// Sum of terms "c*a|x" with a a module expression.
  Chain parse_chain(std::string_view text) const;
  std::string format(const Chain& z) const;
  std::string cell_name(const Cell& c) const;

  /// Same module, generators restricted to those selected (in order), with
  /// the cocycle restricted accordingly.
  TwistedComplex restrict_to(const std::vector<std::size_t>& kept) const;
  /// Same generators and cocycle over the module twisted by l.
  TwistedComplex twisted(const Rank1LocalSystem& l) const;

 private:
  ModulePtr module_;
  std::vector<Generator> generators_;
  std::map<std::string, std::size_t, std::less<>> index_;
  CocycleEntries cocycle_;
  std::vector<std::vector<std::size_t>> targets_;  // y with m(x, y) != 0
};

/// Degree constraint |m(x,y)| = |x| - |y| - 1 (no entry when negative), class
/// labels, and the Maurer–Cartan equation
///   dm(x,y) = sum_z (-1)^{|x|-|z|} m(x,z) m(z,y)
/// on every pair. Residuals are reported as dm - sum.
ValidationReport validate_cocycle(const TwistedComplex& x);

/// Residual of the Maurer–Cartan equation at (x, y); nullopt when a product
/// leaves the truncation range.
std::optional<AlgebraElement> maurer_cartan_residual(const TwistedComplex& c,
                                                     std::size_t x,
                                                     std::size_t y);

/// Ordered cells spanning one total degree of an assembled window.
struct ChainBasis {
  std::vector<Cell> cells;
  std::map<Cell, std::size_t> index;
  /// Every cell of this degree made it in (none dropped by the range limits).
  bool complete = true;
};

/// Selects cells by generator index.
using GeneratorFilter = std::function<bool(std::size_t generator)>;

/// Matrices of D on a window of total degrees. Bases are available on
/// [lo - 1, hi] and differentials D_k : C_k -> C_{k-1} for k in [lo, hi].
///
/// Cells are kept by the largest-subcomplex rule: a cell enters degree k when
/// its differential is representable and lands on cells kept in degree k - 1.
/// Results are exact for the kept cells; the window is certified when no
/// cell of degrees [lo - 1, hi] was dropped.
///
/// Over a box module the kept cells near the box edge miss the boundaries of
/// their dropped neighbours, so boundaries are taken from a second window over
/// a box twice as wide and intersected with the span of the inner cells.
class AssembledComplex {
 public:
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const ChainBasis& basis(int k) const;
  const IntMatrix& differential(int k) const;

  /// Coefficient vector of a chain of degree k; throws TruncationExceeded if
  /// it involves a dropped cell.
  IntVector to_vector(const Chain& z, int k) const;
  Chain to_chain(const IntVector& v, int k) const;

  /// Spanning set, over the degree-k basis, of {D c : c of degree k + 1 on
  /// generators passing `source`, D c on kept cells of generators passing
  /// `target`}. k in [lo - 1, hi - 1]; empty filters accept everything.
  IntMatrix boundaries(int k, const GeneratorFilter& source = {},
                       const GeneratorFilter& target = {}) const;

 private:
  friend AssembledComplex assemble(const TwistedComplex&, int, int,
                                   bool require_complete);
  static AssembledComplex assemble_cells(const TwistedComplex& x, int lo,
                                         int hi, bool require_complete);
  int lo_ = 0;
  int hi_ = -1;
  std::map<int, ChainBasis> bases_;
  std::map<int, IntMatrix> differentials_;
  std::shared_ptr<const AssembledComplex> outer_;
  /// Per degree, the outer index of each inner cell.
  std::map<int, std::vector<std::size_t>> outer_index_;
};

/// Builds the window. With `require_complete`, throws TruncationExceeded when
/// the window reaches beyond what the module's truncation certifies.
AssembledComplex assemble(const TwistedComplex& x, int lo, int hi,
                          bool require_complete = true);

/// D_k for k in [lo, hi].
std::vector<IntMatrix> assemble_differential(const TwistedComplex& x, int lo,
                                             int hi);

/// Largest degree k whose homology is certified by the module's truncation,
/// nullopt when unbounded.
std::optional<int> certified_max_degree(const TwistedComplex& x);

/// H_k for k in [lo, hi]. Checks D^2 = 0 on the window first.
std::vector<HomologyGroup> homology(const TwistedComplex& x, int lo, int hi);

/// Presentation of H_k over the basis of degree k in `window`: cycles modulo
/// window.boundaries(k).
Subquotient homology_presentation(const AssembledComplex& window, int k);

/// Throws DifferentialNotSquareZero naming a cell when D_{k-1} D_k != 0 for
/// some k in the window.
void check_square_zero(const TwistedComplex& x, const AssembledComplex& w);

/// Throws ActionsMissing or NotActionMonotone (with the offending pair).
void require_action_monotone(const TwistedComplex& x);

/// FC^{<b}: generators with action < b.
TwistedComplex filtered_subcomplex(const TwistedComplex& x,
                                   const ExtendedRational& b);

enum class GroundRing { integers, rationals };

/// The least level at which the class of z (a cycle of FC^{<b0}) dies:
/// b0 if z already bounds there, else the first generator action a >= b0
/// with z a boundary in FC^{<=a}, else +inf.
ExtendedRational spectral_number(const TwistedComplex& x, const Chain& z,
                                 const Rational& b0,
                                 GroundRing ring = GroundRing::integers);

}  // namespace dgc
