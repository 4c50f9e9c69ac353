#include "dgc/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <ostream>
#include <sstream>

#include "dgc/errors.hpp"

namespace dgc {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    for (long x : r) data_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& columns,
                                  std::size_t rows) {
  IntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows)
      throw DimensionMismatch("column length differs from row count");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Integer& x) { return sgn(x) == 0; });
}

IntMatrix IntMatrix::hconcat(const IntMatrix& other) const {
  if (other.rows_ != rows_) throw DimensionMismatch("hconcat row mismatch");
  IntMatrix m(rows_, cols_ + other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < other.cols_; ++c)
      m(r, cols_ + c) = other(r, c);
  }
  return m;
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("vector length mismatch");
  IntVector out(rows_, Integer(0));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn(v[c]) != 0 && sgn((*this)(r, c)) != 0)
        out[r] += (*this)(r, c) * v[c];
  return out;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c)
    std::swap(data_[a * cols_ + c], data_[b * cols_ + c]);
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r)
    std::swap(data_[r * cols_ + a], data_[r * cols_ + b]);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape");
  IntMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (sgn(b(k, j)) != 0) m(i, j) += x * b(k, j);
    }
  return m;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ",[" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? "," : "") << m(r, c);
    os << ']';
  }
  return os << ']';
}

std::string HomologyGroup::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const HomologyGroup& g) {
  if (g.is_trivial()) return os << '0';
  bool first = true;
  if (g.free_rank > 0) {
    os << 'Z';
    if (g.free_rank > 1) os << '^' << g.free_rank;
    first = false;
  }
  for (const auto& d : g.torsion) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os;
}

Integer reduce_mod(const Integer& a, const Integer& m) {
  if (sgn(m) == 0) return a;
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

namespace {

// Quotient rounded to nearest, so the remainder has |r| <= |b|/2.
Integer nearest_quotient(const Integer& a, const Integer& b) {
  Integer q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Integer twice = 2 * r;
  if (mpz_cmpabs(twice.get_mpz_t(), b.get_mpz_t()) > 0) q += 1;
  return q;
}

class SmithReducer {
 public:
  explicit SmithReducer(const IntMatrix& m)
      : d_(m),
        u_(IntMatrix::identity(m.rows())),
        v_(IntMatrix::identity(m.cols())),
        uinv_(IntMatrix::identity(m.rows())) {}

  SmithForm run() {
    const std::size_t rows = d_.rows();
    const std::size_t cols = d_.cols();
    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
      if (!select_global_pivot(t)) break;
      while (true) {
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
          if (sgn(d_(i, t)) == 0) continue;
          row_submul(i, t, nearest_quotient(d_(i, t), d_(t, t)));
          if (sgn(d_(i, t)) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (sgn(d_(t, j)) == 0) continue;
          col_submul(j, t, nearest_quotient(d_(t, j), d_(t, t)));
          if (sgn(d_(t, j)) != 0) clean = false;
        }
        if (clean) break;
        select_line_pivot(t);
      }
      if (sgn(d_(t, t)) < 0) negate_row(t);
    }
    fix_divisibility(t);
    SmithForm out;
    out.rank = t;
    out.d = std::move(d_);
    out.u = std::move(u_);
    out.v = std::move(v_);
    out.u_inverse = std::move(uinv_);
    return out;
  }

 private:
  // Minimal-absolute-value pivot over the trailing submatrix.
  bool select_global_pivot(std::size_t t) {
    std::size_t br = 0, bc = 0;
    bool found = false;
    for (std::size_t i = t; i < d_.rows(); ++i) {
      for (std::size_t j = t; j < d_.cols(); ++j) {
        const Integer& x = d_(i, j);
        if (sgn(x) == 0) continue;
        if (!found || mpz_cmpabs(x.get_mpz_t(), d_(br, bc).get_mpz_t()) < 0) {
          br = i;
          bc = j;
          found = true;
          if (mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0) goto done;
        }
      }
    }
  done:
    if (!found) return false;
    swap_rows(t, br);
    swap_cols(t, bc);
    return true;
  }

  void select_line_pivot(std::size_t t) {
    std::size_t br = t, bc = t;
    for (std::size_t i = t + 1; i < d_.rows(); ++i)
      if (sgn(d_(i, t)) != 0 &&
          mpz_cmpabs(d_(i, t).get_mpz_t(), d_(br, bc).get_mpz_t()) < 0) {
        br = i;
        bc = t;
      }
    for (std::size_t j = t + 1; j < d_.cols(); ++j)
      if (sgn(d_(t, j)) != 0 &&
          mpz_cmpabs(d_(t, j).get_mpz_t(), d_(br, bc).get_mpz_t()) < 0) {
        br = t;
        bc = j;
      }
    swap_rows(t, br);
    swap_cols(t, bc);
  }

  // Makes the leading diagonal a divisibility chain using 2x2 gcd moves.
  void fix_divisibility(std::size_t rank) {
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = i + 1; j < rank; ++j) {
        if (mpz_divisible_p(d_(j, j).get_mpz_t(), d_(i, i).get_mpz_t()))
          continue;
        gcd_move(i, j);
      }
  }

  void gcd_move(std::size_t i, std::size_t j) {
    Integer a = d_(i, i), b = d_(j, j);
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
    // row_i += row_j
    row_submul(i, j, Integer(-1));
    // columns (i, j) <- (s ci + t cj, -(b/g) ci + (a/g) cj)
    Integer bg = b / g, ag = a / g;
    col_transform(i, j, s, t, -bg, ag);
    // row_j -= (t b / g) row_i
    row_submul(j, i, t * bg);
    if (sgn(d_(i, i)) < 0) negate_row(i);
    if (sgn(d_(j, j)) < 0) negate_row(j);
  }

  // row_target -= q * row_src
  void row_submul(std::size_t target, std::size_t src, const Integer& q) {
    if (sgn(q) == 0) return;
    for (std::size_t c = 0; c < d_.cols(); ++c)
      if (sgn(d_(src, c)) != 0) d_(target, c) -= q * d_(src, c);
    for (std::size_t c = 0; c < u_.cols(); ++c)
      if (sgn(u_(src, c)) != 0) u_(target, c) -= q * u_(src, c);
    for (std::size_t r = 0; r < uinv_.rows(); ++r)
      if (sgn(uinv_(r, target)) != 0) uinv_(r, src) += q * uinv_(r, target);
  }

  // col_target -= q * col_src
  void col_submul(std::size_t target, std::size_t src, const Integer& q) {
    if (sgn(q) == 0) return;
    for (std::size_t r = 0; r < d_.rows(); ++r)
      if (sgn(d_(r, src)) != 0) d_(r, target) -= q * d_(r, src);
    for (std::size_t r = 0; r < v_.rows(); ++r)
      if (sgn(v_(r, src)) != 0) v_(r, target) -= q * v_(r, src);
  }

  void col_transform(std::size_t i, std::size_t j, const Integer& a11,
                     const Integer& a12, const Integer& a21,
                     const Integer& a22) {
    auto apply = [&](IntMatrix& m) {
      for (std::size_t r = 0; r < m.rows(); ++r) {
        Integer ci = m(r, i), cj = m(r, j);
        m(r, i) = a11 * ci + a12 * cj;
        m(r, j) = a21 * ci + a22 * cj;
      }
    };
    apply(d_);
    apply(v_);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    d_.swap_rows(a, b);
    u_.swap_rows(a, b);
    uinv_.swap_cols(a, b);
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    d_.swap_cols(a, b);
    v_.swap_cols(a, b);
  }

  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < d_.cols(); ++c) d_(r, c) = -d_(r, c);
    for (std::size_t c = 0; c < u_.cols(); ++c) u_(r, c) = -u_(r, c);
    for (std::size_t i = 0; i < uinv_.rows(); ++i) uinv_(i, r) = -uinv_(i, r);
  }

  IntMatrix d_, u_, v_, uinv_;
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) { return SmithReducer(m).run(); }

IntMatrix hermite_normal_form(const IntMatrix& m) {
  // Row echelon form of the transpose: each row is a lattice generator.
  IntMatrix a = m.transposed();
  const std::size_t gens = a.rows();
  const std::size_t dim = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < dim && r < gens; ++c) {
    while (true) {
      std::size_t best = gens;
      for (std::size_t i = r; i < gens; ++i)
        if (sgn(a(i, c)) != 0 &&
            (best == gens ||
             mpz_cmpabs(a(i, c).get_mpz_t(), a(best, c).get_mpz_t()) < 0))
          best = i;
      if (best == gens) break;
      a.swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < gens; ++i) {
        if (sgn(a(i, c)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
        for (std::size_t k = c; k < dim; ++k)
          if (sgn(a(r, k)) != 0) a(i, k) -= q * a(r, k);
        if (sgn(a(i, c)) != 0) clean = false;
      }
      if (clean) break;
    }
    if (r >= gens || sgn(a(r, c)) == 0) continue;
    if (sgn(a(r, c)) < 0)
      for (std::size_t k = c; k < dim; ++k) a(r, k) = -a(r, k);
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t k = c; k < dim; ++k)
        if (sgn(a(r, k)) != 0) a(i, k) -= q * a(r, k);
    }
    ++r;
  }
  IntMatrix basis(dim, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < dim; ++k) basis(k, i) = a(i, k);
  return basis;
}

IntMatrix kernel_lattice(const IntMatrix& m) {
  SmithForm s = smith_normal_form(m);
  IntMatrix k(m.cols(), m.cols() - s.rank);
  for (std::size_t j = s.rank; j < m.cols(); ++j)
    for (std::size_t r = 0; r < m.cols(); ++r) k(r, j - s.rank) = s.v(r, j);
  return k;
}

namespace {

bool reduces_to_zero(const IntMatrix& hnf, IntVector v) {
  for (std::size_t i = 0; i < hnf.cols(); ++i) {
    std::size_t pivot = 0;
    while (pivot < hnf.rows() && sgn(hnf(pivot, i)) == 0) ++pivot;
    for (std::size_t k = 0; k < pivot; ++k)
      if (sgn(v[k]) != 0) return false;
    if (sgn(v[pivot]) == 0) continue;
    if (!mpz_divisible_p(v[pivot].get_mpz_t(), hnf(pivot, i).get_mpz_t()))
      return false;
    Integer q = v[pivot] / hnf(pivot, i);
    for (std::size_t k = pivot; k < hnf.rows(); ++k) v[k] -= q * hnf(k, i);
  }
  return std::all_of(v.begin(), v.end(),
                     [](const Integer& x) { return sgn(x) == 0; });
}

}  // namespace

bool lattice_contained(const IntMatrix& k1, const IntMatrix& k2) {
  if (k1.rows() != k2.rows())
    throw DimensionMismatch("lattice_contained: ambient dimensions differ (" +
                            std::to_string(k1.rows()) + " vs " +
                            std::to_string(k2.rows()) + ")");
  IntMatrix hnf = hermite_normal_form(k2);
  for (std::size_t c = 0; c < k1.cols(); ++c)
    if (!reduces_to_zero(hnf, k1.column(c))) return false;
  return true;
}

HomologyGroup homology_at(const IntMatrix& d_in, const IntMatrix& d_out) {
  if (d_in.rows() != d_out.cols())
    throw DimensionMismatch("homology_at: d_in has " +
                            std::to_string(d_in.rows()) +
                            " rows but d_out has " +
                            std::to_string(d_out.cols()) + " columns");
  IntMatrix product = d_out * d_in;
  for (std::size_t i = 0; i < product.rows(); ++i)
    for (std::size_t j = 0; j < product.cols(); ++j)
      if (sgn(product(i, j)) != 0)
        throw CompositionNonzero("d_out * d_in nonzero at (" +
                                 std::to_string(i) + ", " + std::to_string(j) +
                                 ") = " + product(i, j).get_str());
  SmithForm in = smith_normal_form(d_in);
  SmithForm out = smith_normal_form(d_out);
  HomologyGroup g;
  g.free_rank = d_in.rows() - in.rank - out.rank;
  for (std::size_t i = 0; i < in.rank; ++i)
    if (in.diagonal(i) > 1) g.torsion.push_back(in.diagonal(i));
  return g;
}

std::size_t rank_q(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && sgn(a(p, c)) == 0) ++p;
    if (p == rows) continue;
    a.swap_rows(rank, p);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        a(i, k) = a(rank, c) * a(i, k) - a(i, c) * a(rank, k);
        mpz_divexact(a(i, k).get_mpz_t(), a(i, k).get_mpz_t(),
                     prev.get_mpz_t());
      }
      a(i, c) = 0;
    }
    prev = a(rank, c);
    ++rank;
  }
  return rank;
}

IntMatrix saturate(const IntMatrix& m) {
  IntMatrix orth = kernel_lattice(m.transposed());
  return kernel_lattice(orth.transposed().rows() == 0
                            ? IntMatrix(0, m.rows())
                            : orth.transposed());
}

std::optional<IntVector> solve_integer(const SmithForm& s, const IntVector& v) {
  const IntMatrix& u = s.u;
  if (v.size() != u.cols()) throw DimensionMismatch("solve_integer: length");
  IntVector uv = u.apply(v);
  IntVector w(s.v.rows(), Integer(0));
  for (std::size_t i = 0; i < uv.size(); ++i) {
    if (i < s.rank) {
      if (!mpz_divisible_p(uv[i].get_mpz_t(), s.diagonal(i).get_mpz_t()))
        return std::nullopt;
      w[i] = uv[i] / s.diagonal(i);
    } else if (sgn(uv[i]) != 0) {
      return std::nullopt;
    }
  }
  return s.v.apply(w);
}

Subquotient::Subquotient(IntMatrix basis, const IntMatrix& relations)
    : basis_(std::move(basis)) {
  if (relations.rows() != basis_.rows())
    throw DimensionMismatch("Subquotient: relation ambient dimension");
  basis_smith_ = smith_normal_form(basis_);
  if (basis_smith_.rank != basis_.cols())
    throw DimensionMismatch("Subquotient: basis is not linearly independent");
  const std::size_t k = basis_.cols();
  IntMatrix coords(k, relations.cols());
  for (std::size_t c = 0; c < relations.cols(); ++c) {
    auto y = solve_integer(basis_smith_, relations.column(c));
    if (!y)
      throw CompositionNonzero(
          "Subquotient: relation generator outside the cycle lattice");
    for (std::size_t r = 0; r < k; ++r) coords(r, c) = (*y)[r];
  }
  relation_smith_ = smith_normal_form(coords);
  for (std::size_t i = 0; i < k; ++i) {
    if (i < relation_smith_.rank) {
      const Integer& d = relation_smith_.diagonal(i);
      if (d == 1) continue;
      kept_.push_back(i);
      orders_.push_back(d);
      group_.torsion.push_back(d);
    } else {
      kept_.push_back(i);
      orders_.push_back(Integer(0));
      ++group_.free_rank;
    }
  }
  for (std::size_t i : kept_) {
    IntVector y(k);
    for (std::size_t r = 0; r < k; ++r) y[r] = relation_smith_.u_inverse(r, i);
    generators_.push_back(basis_.apply(y));
  }
}

std::optional<IntVector> Subquotient::coordinates(const IntVector& v) const {
  auto y = solve_integer(basis_smith_, v);
  if (!y) return std::nullopt;
  IntVector c = relation_smith_.u.apply(*y);
  IntVector out;
  out.reserve(kept_.size());
  for (std::size_t idx = 0; idx < kept_.size(); ++idx)
    out.push_back(reduce_mod(c[kept_[idx]], orders_[idx]));
  return out;
}

bool Subquotient::is_zero_class(const IntVector& v) const {
  auto c = coordinates(v);
  if (!c) throw NotACycle("vector is not in the subquotient's lattice");
  return std::all_of(c->begin(), c->end(),
                     [](const Integer& x) { return sgn(x) == 0; });
}

void GroupMap::normalize() {
  if (matrix.rows() != target_orders.size() ||
      matrix.cols() != source_orders.size())
    throw DimensionMismatch("GroupMap: matrix shape does not match orders");
  for (std::size_t r = 0; r < matrix.rows(); ++r)
    for (std::size_t c = 0; c < matrix.cols(); ++c)
      matrix(r, c) = reduce_mod(matrix(r, c), target_orders[r]);
}

GroupMap GroupMap::compose_after(const GroupMap& first) const {
  if (first.target_orders != source_orders)
    throw DimensionMismatch("GroupMap composition: presentations differ");
  GroupMap out{first.source_orders, target_orders, matrix * first.matrix};
  out.normalize();
  return out;
}

namespace {

IntMatrix relation_columns(const std::vector<Integer>& orders) {
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (sgn(orders[i]) != 0) {
      IntVector e(orders.size(), Integer(0));
      e[i] = orders[i];
      cols.push_back(std::move(e));
    }
  return IntMatrix::from_columns(cols, orders.size());
}

}  // namespace

Subquotient group_homology(const GroupMap& in, const GroupMap& out) {
  if (in.target_orders != out.source_orders)
    throw DimensionMismatch("group_homology: middle presentations differ");
  const std::size_t n = out.source_orders.size();
  IntMatrix lifted = out.matrix.hconcat(relation_columns(out.target_orders));
  IntMatrix kernel = kernel_lattice(lifted);
  IntMatrix projected(n, kernel.cols());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < kernel.cols(); ++c)
      projected(r, c) = kernel(r, c);
  IntMatrix cycles = hermite_normal_form(projected);
  IntMatrix rels = in.matrix.hconcat(relation_columns(in.target_orders));
  return Subquotient(std::move(cycles), rels);
}

bool is_isomorphism(const GroupMap& f) {
  GroupMap into_source{{}, f.source_orders,
                       IntMatrix(f.source_orders.size(), 0)};
  GroupMap to_zero{f.target_orders, {}, IntMatrix(0, f.target_orders.size())};
  return group_homology(into_source, f).group().is_trivial() &&
         group_homology(f, to_zero).group().is_trivial();
}

}  // namespace dgc
