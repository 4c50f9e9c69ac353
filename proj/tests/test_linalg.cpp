#include <random>

#include "doctest.h"
#include "dgc/errors.hpp"
#include "dgc/linalg.hpp"
#include "oracles.hpp"

using namespace dgc;

namespace {

Rational det_of(const IntMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
  return oracle::determinant(a);
}

void check_smith(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  CHECK(s.u * m * s.v == s.d);
  CHECK(abs(det_of(s.u)) == 1);
  CHECK(abs(det_of(s.v)) == 1);
  CHECK(s.u * s.u_inverse == IntMatrix::identity(m.rows()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c) CHECK(s.d(r, c) == 0);
  const std::size_t k = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(s.d(i, i) >= 0);
    if (i + 1 < k && s.d(i, i) != 0)
      CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
  }
  auto factors = oracle::invariant_factors(m);
  REQUIRE(s.rank == factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i)
    CHECK(s.d(i, i) == abs(factors[i]));
}

}  // namespace

TEST_CASE("smith normal form examples") {
  SmithForm z = smith_normal_form(IntMatrix{{0}});
  CHECK(z.d == IntMatrix{{0}});
  CHECK(z.u == IntMatrix{{1}});
  CHECK(z.v == IntMatrix{{1}});

  SmithForm s = smith_normal_form(IntMatrix{{2, 4}, {6, 8}});
  CHECK(s.d == IntMatrix{{2, 0}, {0, 4}});
  check_smith(IntMatrix{{2, 4}, {6, 8}});

  for (std::size_t n : {1u, 3u, 5u}) {
    SmithForm id = smith_normal_form(IntMatrix::identity(n));
    CHECK(id.d == IntMatrix::identity(n));
  }
}

TEST_CASE("smith normal form on random matrices agrees with determinantal divisors") {
  std::mt19937_64 rng(20240517);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    IntMatrix m = trial % 2 ? oracle::random_matrix(rng, r, c, -9, 9)
                            : oracle::random_structured(rng, r, c, 9);
    if (r * c > 36) {
      SmithForm s = smith_normal_form(m);
      CHECK(s.u * m * s.v == s.d);
      CHECK(abs(det_of(s.u)) == 1);
      CHECK(abs(det_of(s.v)) == 1);
      CHECK(s.rank == oracle::rank(m));
    } else {
      check_smith(m);
    }
  }
}

TEST_CASE("empty matrices") {
  SmithForm s = smith_normal_form(IntMatrix(0, 3));
  CHECK(s.rank == 0);
  CHECK(s.v == IntMatrix::identity(3));
  CHECK(kernel_lattice(IntMatrix(0, 3)).cols() == 3);
  CHECK(homology_at(IntMatrix(2, 0), IntMatrix(0, 2)) == HomologyGroup::free(2));
}

TEST_CASE("homology_at examples") {
  CHECK(homology_at(IntMatrix(3, 2), IntMatrix(4, 3)) == HomologyGroup::free(3));
  HomologyGroup two = homology_at(IntMatrix{{2}}, IntMatrix(0, 1));
  CHECK(two.free_rank == 0);
  REQUIRE(two.torsion.size() == 1);
  CHECK(two.torsion[0] == 2);
  CHECK(two.to_string() == "Z/2");
  CHECK(homology_at(IntMatrix{{1}}, IntMatrix(0, 1)).is_trivial());
  CHECK(homology_at(IntMatrix{{1}}, IntMatrix(0, 1)).to_string() == "0");
}

TEST_CASE("homology_at rejects non-complexes with a witness") {
  try {
    homology_at(IntMatrix{{1}}, IntMatrix{{1}});
    FAIL("expected CompositionNonzero");
  } catch (const CompositionNonzero& e) {
    CHECK(std::string(e.what()).find("(0, 0)") != std::string::npos);
  }
}

TEST_CASE("homology_at matches the rational-rank and minors oracle") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> dim(0, 6);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t a = dim(rng), n = dim(rng) + 1, b = dim(rng);
    // d_out * d_in = 0 by building d_in from a kernel basis of d_out.
    IntMatrix d_out = oracle::random_structured(rng, b, n, 4);
    IntMatrix k = kernel_lattice(d_out);
    IntMatrix d_in = k * oracle::random_matrix(rng, k.cols(), a, -3, 3);
    if (k.cols() == 0) d_in = IntMatrix(n, a);
    REQUIRE((d_out * d_in).is_zero());
    CHECK(homology_at(d_in, d_out) == oracle::homology(d_in, d_out));
    CHECK(homology_at(d_in, d_out).free_rank ==
          n - rank_q(d_out) - rank_q(d_in));
  }
}

TEST_CASE("kernel_lattice examples") {
  IntMatrix k = kernel_lattice(IntMatrix{{1, 1}});
  REQUIRE(k.cols() == 1);
  CHECK(abs(k(0, 0)) == 1);
  CHECK(k(1, 0) == -k(0, 0));
  CHECK(kernel_lattice(IntMatrix::identity(3)).cols() == 0);
  CHECK(kernel_lattice(IntMatrix(1, 2)).cols() == 2);
}

TEST_CASE("kernel_lattice spans the full integer kernel") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix m = oracle::random_structured(rng, dim(rng), dim(rng), 6);
    IntMatrix k = kernel_lattice(m);
    CHECK((m * k).is_zero());
    CHECK(k.cols() == m.cols() - oracle::rank(m));
    // Saturated: the lattice has index 1 in its rational span.
    if (k.cols() > 0)
      CHECK(abs(oracle::determinantal_divisor(k, k.cols())) == 1);
  }
}

TEST_CASE("lattice_contained examples") {
  CHECK(lattice_contained(IntMatrix{{2}, {0}}, IntMatrix{{1}, {0}}));
  CHECK_FALSE(lattice_contained(IntMatrix{{1}, {0}}, IntMatrix{{2}, {0}}));
  CHECK(lattice_contained(IntMatrix(2, 0), IntMatrix{{2}, {0}}));
  CHECK_THROWS_AS(lattice_contained(IntMatrix(2, 1), IntMatrix(3, 1)),
                  DimensionMismatch);
}

TEST_CASE("lattice_contained properties") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = dim(rng);
    IntMatrix a = oracle::random_matrix(rng, n, dim(rng), -4, 4);
    IntMatrix b = oracle::random_matrix(rng, n, dim(rng), -4, 4);
    CHECK(lattice_contained(a, a));
    CHECK(lattice_contained(a, b) == oracle::lattice_contained(a, b));
    bool columns_inside = true;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      std::vector<Integer> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
      columns_inside = columns_inside && oracle::in_integer_span(b, col);
    }
    CHECK(columns_inside == oracle::lattice_contained(a, b));
    // Transitivity on nested triples built from a.
    IntMatrix sub = a * oracle::random_matrix(rng, a.cols(), 2, -2, 2);
    IntMatrix sup = a.hconcat(b);
    CHECK(lattice_contained(sub, a));
    CHECK(lattice_contained(a, sup));
    CHECK(lattice_contained(sub, sup));
    IntMatrix c = oracle::random_matrix(rng, n, dim(rng), -4, 4);
    if (lattice_contained(a, b) && lattice_contained(b, c))
      CHECK(lattice_contained(a, c));
  }
}

TEST_CASE("subquotient coordinates") {
  // Z^2 / <(2, 0)>: generators of orders 2 and 0.
  Subquotient q(IntMatrix::identity(2), IntMatrix{{2}, {0}});
  CHECK(q.group().to_string() == "Z + Z/2");
  REQUIRE(q.orders().size() == 2);
  CHECK(q.orders()[0] == 2);
  CHECK(q.orders()[1] == 0);
  CHECK(q.is_zero_class({4, 0}));
  CHECK_FALSE(q.is_zero_class({1, 0}));
  CHECK_FALSE(q.is_zero_class({0, 1}));
  auto c = q.coordinates({3, 5});
  REQUIRE(c);
  // Reconstruct: v - sum c_i g_i must be a relation.
  IntVector v{3, 5};
  for (std::size_t i = 0; i < c->size(); ++i)
    for (std::size_t j = 0; j < 2; ++j) v[j] -= (*c)[i] * q.generators()[i][j];
  CHECK(q.is_zero_class(v));

  Subquotient even(IntMatrix{{2}, {0}}, IntMatrix(2, 0));
  CHECK_FALSE(even.contains({1, 0}));
  CHECK(even.contains({2, 0}));
  CHECK_THROWS_AS(Subquotient(IntMatrix{{2}, {0}}, IntMatrix{{1}, {0}}),
                  CompositionNonzero);
}

TEST_CASE("group homology of presented maps") {
  // Z/4 --(x2)--> Z/4 --(x2)--> Z/4: homology in the middle is 0.
  GroupMap in{{4}, {4}, IntMatrix{{2}}};
  GroupMap out{{4}, {4}, IntMatrix{{2}}};
  CHECK(group_homology(in, out).group().is_trivial());
  // Z --(2)--> Z --> 0 gives Z/2.
  GroupMap a{{0}, {0}, IntMatrix{{2}}};
  GroupMap b{{0}, {}, IntMatrix(0, 1)};
  CHECK(group_homology(a, b).group().to_string() == "Z/2");
  CHECK(is_isomorphism(GroupMap{{3}, {3}, IntMatrix{{2}}}));
  CHECK_FALSE(is_isomorphism(GroupMap{{0}, {0}, IntMatrix{{2}}}));
  CHECK(is_isomorphism(GroupMap{{0}, {0}, IntMatrix{{-1}}}));
}
