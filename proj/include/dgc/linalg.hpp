#pragma once

// Exact integer linear algebra: Smith and Hermite normal forms, kernels,
// lattice containment and homology of small integer chain complexes.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dgc {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(const std::vector<IntVector>& columns,
                                std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  IntVector column(std::size_t c) const;
  IntMatrix transposed() const;
  bool is_zero() const;

  /// [this | other]; row counts must agree.
  IntMatrix hconcat(const IntMatrix& other) const;
  IntVector apply(const IntVector& v) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// A finitely generated abelian group: Z^free_rank plus torsion in
/// invariant-factor form d1 | d2 | ... with every di >= 2.
struct HomologyGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  std::string to_string() const;

  static HomologyGroup free(std::size_t rank) { return {rank, {}}; }
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

std::ostream& operator<<(std::ostream& os, const HomologyGroup& g);

/// U * M * V = D with U, V unimodular and D diagonal in divisibility chain.
struct SmithForm {
  IntMatrix d;
  IntMatrix u;
  IntMatrix v;
  IntMatrix u_inverse;
  std::size_t rank = 0;

  const Integer& diagonal(std::size_t i) const { return d(i, i); }
};

SmithForm smith_normal_form(const IntMatrix& m);

/// Column-style Hermite basis of the lattice spanned by the columns of m.
/// The result has full column rank; pivots are positive and the entries in
/// a pivot row to the left of the pivot column are reduced modulo the pivot.
IntMatrix hermite_normal_form(const IntMatrix& m);

/// Columns form a Z-basis of {v : m v = 0}.
IntMatrix kernel_lattice(const IntMatrix& m);

/// True iff every column of k1 lies in the Z-span of the columns of k2.
bool lattice_contained(const IntMatrix& k1, const IntMatrix& k2);

/// ker(d_out) / im(d_in); d_out * d_in must vanish.
HomologyGroup homology_at(const IntMatrix& d_in, const IntMatrix& d_out);

/// Rank over Q via fraction-free elimination.
std::size_t rank_q(const IntMatrix& m);

/// Smallest lattice containing {v : k v in L} for the lattice L spanned by
/// the columns of `m`: saturation of span(m) inside Z^n.
IntMatrix saturate(const IntMatrix& m);

/// Solves k y = v exactly over Z given a precomputed Smith form of k.
std::optional<IntVector> solve_integer(const SmithForm& smith_of_k,
                                       const IntVector& v);

/// A subquotient Z / N of Z^n, where Z is given by a basis (columns) and N by
/// generators (columns) that must lie in Z.
class Subquotient {
 public:
  Subquotient(IntMatrix basis, const IntMatrix& relations);

  const HomologyGroup& group() const { return group_; }
  std::size_t ambient_dimension() const { return basis_.rows(); }

  /// Orders of the chosen generators: torsion generators first (in the order
  /// of group().torsion), then 0 for each free generator.
  const std::vector<Integer>& orders() const { return orders_; }
  const std::vector<IntVector>& generators() const { return generators_; }

  /// Class coordinates of v in the chosen generators, torsion coordinates
  /// reduced into [0, order). nullopt if v is not in Z.
  std::optional<IntVector> coordinates(const IntVector& v) const;
  bool contains(const IntVector& v) const { return coordinates(v).has_value(); }
  /// v must be in Z; true iff its class is zero.
  bool is_zero_class(const IntVector& v) const;

 private:
  IntMatrix basis_;
  SmithForm basis_smith_;
  SmithForm relation_smith_;
  std::vector<std::size_t> kept_;  // indices into relation SNF diagonal
  std::vector<Integer> orders_;
  std::vector<IntVector> generators_;
  HomologyGroup group_;
};

/// A homomorphism between finitely generated abelian groups presented by
/// generator orders (0 for a free generator). Entries of row i are taken
/// modulo target_orders[i] when it is nonzero.
struct GroupMap {
  std::vector<Integer> source_orders;
  std::vector<Integer> target_orders;
  IntMatrix matrix;

  /// Canonicalises entries modulo target orders.
  void normalize();
  GroupMap compose_after(const GroupMap& first) const;  // this ∘ first
  friend bool operator==(const GroupMap&, const GroupMap&) = default;
};

/// The subquotient ker(out) / (im(in) + relations) for a sequence of group
/// maps in -> B -> out, as an explicit presentation over Z^{|B|}.
Subquotient group_homology(const GroupMap& in, const GroupMap& out);

/// True iff the map is bijective.
bool is_isomorphism(const GroupMap& f);

/// Nonnegative representative of a modulo m (m > 0); a itself when m == 0.
Integer reduce_mod(const Integer& a, const Integer& m);

}  // namespace dgc
