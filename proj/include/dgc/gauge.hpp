#pragma once

// Random certified instances: twisted complexes obtained by conjugating a
// known Maurer–Cartan cocycle with a unipotent, action-decreasing gauge
// matrix, together with the gauge as a continuation cocycle, random homotopy
// partners, and single-sign fault injection.

#include <cstdint>
#include <optional>
#include <random>

#include "dgc/chain_maps.hpp"

namespace dgc {

enum class GaugeAlgebra {
  /// Z<x>, |x| = 1, zero differential.
  polynomial,
  /// T(x, y), |x| = 1, |y| = 3, dy = x^2.
  free_with_differential,
  /// Z[t^±1].
  laurent,
};

struct GaugeOptions {
  GaugeAlgebra algebra = GaugeAlgebra::free_with_differential;
  int truncation = 10;
  std::size_t max_generators = 6;
  int max_generator_degree = 4;
  int coefficient_bound = 2;
  std::size_t max_terms = 2;
};

/// The starting complex, its conjugate and the gauge g : base -> conjugate
/// with its inverse.
struct GaugeInstance {
  ComplexPtr base;
  ComplexPtr conjugate;
  ContinuationCocycle gauge;
  ContinuationCocycle inverse;
};

class GaugeGenerator {
 public:
  explicit GaugeGenerator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  /// A fresh algebra and module of the requested kind.
  ModulePtr module(const GaugeOptions& options);

  /// Random generators (distinct actions) and a block cocycle of disjoint
  /// pairs that satisfies Maurer–Cartan on its own. Over the Laurent ring every
  /// generator is paired.
  ComplexPtr base_complex(const ModulePtr& f, const GaugeOptions& options);

  /// Conjugates `base` by a random unipotent gauge that only lowers action.
  GaugeInstance conjugate(const ComplexPtr& base, const GaugeOptions& options);

  /// base_complex + conjugate in one step.
  GaugeInstance instance(const GaugeOptions& options);

  /// A random homotopy h out of nu0 and the continuation cocycle nu1 it
  /// connects nu0 to.
  HomotopyCocycle homotopy(const ContinuationCocycle& nu0,
                           const GaugeOptions& options);

  /// Same generators and cocycle with new actions: each generator's action
  /// moves by a random multiple of 1/2 in [-2, 2].
  ComplexPtr shift_actions(const ComplexPtr& x);

  /// Random homogeneous element of the given degree (possibly zero).
  AlgebraElement random_element(const Dga& a, int degree,
                                const GaugeOptions& options);

 private:
  std::mt19937_64 rng_;
};

/// The complex with the sign of m(x, z) flipped, and the pair (x, y) whose
/// Maurer–Cartan residual must become 2 (-1)^{|x|-|z|} m(x, z) m(z, y).
struct SignFault {
  ComplexPtr complex;
  std::size_t x = 0;
  std::size_t z = 0;
  std::size_t y = 0;
  AlgebraElement expected_residual;
};

/// nullopt when no entry m(x, z) has a nonzero product m(x, z) m(z, y).
std::optional<SignFault> inject_sign_fault(const TwistedComplex& c,
                                           std::mt19937_64& rng);

}  // namespace dgc
