#include "dgc/spectral_sequence.hpp"

#include <set>

#include "dgc/errors.hpp"

namespace dgc {
namespace {

Integer sign_of(int degree) { return degree % 2 == 0 ? 1 : -1; }

GroupMap zero_map(std::vector<Integer> source, std::vector<Integer> target) {
  GroupMap m;
  m.matrix = IntMatrix(target.size(), source.size());
  m.source_orders = std::move(source);
  m.target_orders = std::move(target);
  return m;
}

bool is_zero_map(GroupMap f) {
  f.normalize();
  return f.matrix.is_zero();
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

std::string at(int p, int k) {
  return "(p=" + std::to_string(p) + ", q=" + std::to_string(k - p) + ")";
}

}  // namespace

HomologyGroup SpectralPage::group(int p, int q) const {
  auto it = groups.find({p, q});
  return it == groups.end() ? HomologyGroup{} : it->second.group();
}

SpectralSequence::SpectralSequence(const TwistedComplex& x, int lo, int hi)
    : x_(&x), lo_(lo), hi_(hi), window_(assemble(x, lo - 1, hi + 2)) {
  if (!x.generators().empty()) {
    p_min_ = x.min_generator_degree();
    p_max_ = x.max_generator_degree();
  }
  check_square_zero(x, window_);
}

IntMatrix SpectralSequence::cycles(int r, int p, int k) const {
  const auto& cells = window_.basis(k).cells;
  const auto& below = window_.basis(k - 1).cells;
  const IntMatrix& d = window_.differential(k);
  auto gdeg = [&](const Cell& c) { return x_->generator(c.generator).degree; };
  std::vector<std::size_t> cols, rows;
  for (std::size_t j = 0; j < cells.size(); ++j)
    if (gdeg(cells[j]) <= p) cols.push_back(j);
  for (std::size_t i = 0; i < below.size(); ++i)
    if (gdeg(below[i]) > p - r) rows.push_back(i);
  IntMatrix kernel = IntMatrix::identity(cols.size());
  if (!rows.empty() && !cols.empty()) {
    IntMatrix a(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) a(i, j) = d(rows[i], cols[j]);
    kernel = kernel_lattice(a);
  }
  IntMatrix out(cells.size(), kernel.cols());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t c = 0; c < kernel.cols(); ++c) out(cols[j], c) = kernel(j, c);
  return out;
}

const Subquotient& SpectralSequence::presentation(int r, int p, int k) const {
  auto key = std::tuple{r, p, k};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  IntMatrix z = cycles(r, p, k);
  IntMatrix lower = cycles(r - 1, p - 1, k);
  auto degree = [this](std::size_t g) { return x_->generator(g).degree; };
  IntMatrix bounds =
      window_.boundaries(k, [&](std::size_t g) { return degree(g) <= p + r - 1; },
                         [&](std::size_t g) { return degree(g) <= p; });
  return cache_.emplace(key, Subquotient(std::move(z), lower.hconcat(bounds)))
      .first->second;
}

GroupMap SpectralSequence::differential(int r, int p, int k) const {
  const Subquotient& source = presentation(r, p, k);
  const int target_p = p - r;
  const bool has_target = target_p >= p_min_ && target_p <= p_max_;
  std::vector<Integer> target_orders;
  if (has_target) target_orders = presentation(r, target_p, k - 1).orders();
  GroupMap f = zero_map(source.orders(), target_orders);
  const IntMatrix& d = window_.differential(k);
  for (std::size_t j = 0; j < source.generators().size(); ++j) {
    IntVector image = d.apply(source.generators()[j]);
    if (!has_target) {
      for (const Integer& v : image)
        if (v != 0)
          throw SpectralSequenceMismatch("d" + std::to_string(r) + " out of " +
                                         at(p, k) + " has no target column");
      continue;
    }
    auto c = presentation(r, target_p, k - 1).coordinates(image);
    if (!c)
      throw SpectralSequenceMismatch("boundary of a generator of E" +
                                     std::to_string(r) + at(p, k) +
                                     " is not in Z" + std::to_string(r) +
                                     at(target_p, k - 1));
    for (std::size_t i = 0; i < c->size(); ++i) f.matrix(i, j) = (*c)[i];
  }
  f.normalize();
  return f;
}

SpectralPage SpectralSequence::page(int r) const {
  SpectralPage out;
  out.r = r;
  for (int k = lo_; k <= hi_; ++k)
    for (int p = p_min_; p <= p_max_; ++p) {
      out.groups.emplace(Bidegree{p, k - p}, presentation(r, p, k));
      out.differentials.emplace(Bidegree{p, k - p}, differential(r, p, k));
    }
  return out;
}

std::vector<SpectralPage> pages(const TwistedComplex& x, int r_max, int lo,
                                int hi) {
  if (r_max < 1) throw InvalidDefinition("page index must be at least 1");
  SpectralSequence ss(x, lo, hi);
  std::vector<SpectralPage> out;
  for (int r = 1; r <= r_max; ++r) {
    out.push_back(ss.page(r));
    for (int k = lo; k <= hi + 1; ++k)
      for (int p = ss.min_column(); p <= ss.max_column(); ++p) {
        if (p - r < ss.min_column() || k - 1 < lo) continue;
        GroupMap dd =
            ss.differential(r, p - r, k - 1).compose_after(ss.differential(r, p, k));
        if (!is_zero_map(dd))
          throw SpectralSequenceMismatch("d" + std::to_string(r) + " d" +
                                         std::to_string(r) + " != 0 out of " +
                                         at(p, k));
      }
    if (r == r_max) break;
    for (int k = lo; k <= hi; ++k)
      for (int p = ss.min_column(); p <= ss.max_column(); ++p) {
        GroupMap out_map = ss.differential(r, p, k);
        GroupMap in_map = p + r <= ss.max_column()
                              ? ss.differential(r, p + r, k + 1)
                              : zero_map({}, out_map.source_orders);
        HomologyGroup iterated = group_homology(in_map, out_map).group();
        HomologyGroup direct = ss.presentation(r + 1, p, k).group();
        if (!(iterated == direct))
          throw SpectralSequenceMismatch(
              "E" + std::to_string(r + 1) + at(p, k) + " is " +
              direct.to_string() + " from the filtration but " +
              iterated.to_string() + " as homology of E" + std::to_string(r));
      }
  }
  return out;
}

GroupMap page_map(const ContinuationCocycle& nu, const SpectralSequence& source,
                  const SpectralSequence& target, int r, int p, int k) {
  const Subquotient& from = source.presentation(r, p, k);
  const Subquotient& to = target.presentation(r, p, k);
  IntMatrix psi = continuation_matrix(nu, source.window(), target.window(), k);
  GroupMap f = zero_map(from.orders(), to.orders());
  for (std::size_t j = 0; j < from.generators().size(); ++j) {
    auto c = to.coordinates(psi.apply(from.generators()[j]));
    if (!c)
      throw ChainMapViolation("continuation map does not preserve Z" +
                              std::to_string(r) + at(p, k));
    for (std::size_t i = 0; i < c->size(); ++i) f.matrix(i, j) = (*c)[i];
  }
  f.normalize();
  return f;
}

// ---------------------------------------------------------------------------
// Local coefficients

HomologyGroup LocalCoefficientComplex::homology(int p) const {
  if (over_box) return dgc::homology(*over_box, p, p).front();
  auto chains = [&](int c) {
    auto it = orders.find(c);
    return it == orders.end() ? std::vector<Integer>{} : it->second;
  };
  auto in_it = differentials.find(p + 1);
  auto out_it = differentials.find(p);
  GroupMap in = in_it != differentials.end() ? in_it->second
                                             : zero_map({}, chains(p));
  GroupMap out = out_it != differentials.end() ? out_it->second
                                               : zero_map(chains(p), {});
  return group_homology(in, out).group();
}

LocalCoefficientComplex local_coefficient_complex(const TwistedComplex& x,
                                                  int q) {
  const DgModule& f = *x.module();
  LocalCoefficientComplex out;
  out.q = q;
  if (x.generators().empty()) return out;
  out.p_min = x.min_generator_degree();
  out.p_max = x.max_generator_degree();

  if (f.box_radius()) {
    // F is free over the group ring and sits in degree 0: H_0(F) = F.
    CocycleEntries adjacent;
    if (q == 0)
      for (const auto& [xy, m] : x.cocycle())
        if (x.generator(xy.first).degree == x.generator(xy.second).degree + 1)
          adjacent.emplace(xy, m);
    std::vector<Generator> gens = x.generators();
    if (q != 0) gens.clear();
    out.over_box = std::make_shared<const TwistedComplex>(x.module(), std::move(gens),
                                                          std::move(adjacent));
    return out;
  }

  if (f.degree_bound() && q + 1 > *f.degree_bound())
    throw TruncationExceeded("H_" + std::to_string(q) +
                             " of the module needs degrees beyond the bound " +
                             std::to_string(*f.degree_bound()));
  const std::vector<std::size_t> words = f.words_of_degree(q);
  std::map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < words.size(); ++i) position.emplace(words[i], i);
  const Subquotient coefficients = module_homology_presentation(f, q);
  const auto& generators = coefficients.generators();

  // Cell (x, j) of L_p is generator j of H_q(F) placed on x.
  std::map<int, std::map<std::pair<std::size_t, std::size_t>, std::size_t>> index;
  for (std::size_t g = 0; g < x.generators().size(); ++g) {
    const int p = x.generator(g).degree;
    auto& here = index[p];
    for (std::size_t j = 0; j < generators.size(); ++j) {
      here.emplace(std::pair{g, j}, out.orders[p].size());
      out.orders[p].push_back(coefficients.orders()[j]);
    }
  }
  const Integer sign = sign_of(q);
  for (int p = out.p_min + 1; p <= out.p_max; ++p) {
    GroupMap d = zero_map(out.orders[p], out.orders[p - 1]);
    for (const auto& [xj, col] : index[p]) {
      const auto [g, j] = xj;
      ModuleElement b = f.zero();
      for (std::size_t i = 0; i < words.size(); ++i)
        if (generators[j][i] != 0) b.add_term(words[i], generators[j][i]);
      for (const auto& [xy, m] : x.cocycle()) {
        if (xy.first != g || x.generator(xy.second).degree != p - 1) continue;
        auto acted = f.try_act(b, m);
        if (!acted)
          throw ActionNotDescending("the action of " + x.algebra()->format(m) +
                                    " on H_" + std::to_string(q) +
                                    " leaves the module range");
        IntVector v(words.size());
        for (const auto& [w, c] : acted->terms()) v[position.at(w)] = c;
        auto c = coefficients.coordinates(v);
        if (!c)
          throw ActionNotDescending("the action of " + x.algebra()->format(m) +
                                    " sends a cycle of degree " +
                                    std::to_string(q) + " to a non-cycle");
        for (std::size_t i = 0; i < c->size(); ++i)
          d.matrix(index[p - 1].at({xy.second, i}), col) += sign * (*c)[i];
      }
    }
    d.normalize();
    out.differentials.emplace(p, std::move(d));
  }
  return out;
}

ComparisonReport e2_matches_local_coefficients(const TwistedComplex& x, int q) {
  LocalCoefficientComplex local = local_coefficient_complex(x, q);
  ComparisonReport report;
  report.q = q;
  if (x.generators().empty()) return report;
  SpectralSequence ss(x, local.p_min + q, local.p_max + q);
  for (int p = local.p_min; p <= local.p_max; ++p) {
    ComparisonReport::Row row{p, local.homology(p),
                              ss.presentation(2, p, p + q).group()};
    if (!(row.local == row.e2)) report.matches = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Top column

bool ModuleClass::is_zero() const {
  for (const Integer& c : coordinates)
    if (c != 0) return false;
  return true;
}

namespace {

int cycle_degree(const TwistedComplex& x, const Chain& z) {
  auto k = x.degree(z);
  if (!k) throw NotACycle("chain is not homogeneous: " + x.format(z));
  Chain d = x.differential(z);
  if (!d.is_zero())
    throw NotACycle("D(" + x.format(z) + ") = " + x.format(d));
  return *k;
}

}  // namespace

ModuleClass shriek_to_point(const TwistedComplex& x, std::size_t top,
                            const Chain& z) {
  const Generator& m = x.generator(top);
  if (m.degree != x.max_generator_degree())
    throw NotTopDegree("generator '" + m.name + "' has degree " +
                       std::to_string(m.degree) + " below the top degree " +
                       std::to_string(x.max_generator_degree()));
  ModuleClass out;
  if (z.is_zero()) return out;
  const int k = cycle_degree(x, z);
  const DgModule& f = *x.module();
  out.degree = k - m.degree;
  if (f.degree_bound() && out.degree + 1 > *f.degree_bound())
    throw TruncationExceeded("H_" + std::to_string(out.degree) +
                             " of the module needs degrees beyond the bound " +
                             std::to_string(*f.degree_bound()));
  Subquotient h = module_homology_presentation(f, out.degree);
  out.group = h.group();
  out.orders = h.orders();
  const std::vector<std::size_t> words = f.words_of_degree(out.degree);
  const ModuleElement beta = x.component(z, top);
  IntVector v(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) v[i] = beta.coefficient(words[i]);
  auto c = h.coordinates(v);
  if (!c)
    throw NotACycle("component of " + x.format(z) + " on '" + m.name +
                    "' is not a cycle");
  out.coordinates = std::move(*c);
  return out;
}

bool lives_over_fundamental(const TwistedComplex& x, const Chain& z) {
  if (z.is_zero()) return false;
  const int k = cycle_degree(x, z);
  SpectralSequence ss(x, k, k);
  const Subquotient& top =
      ss.presentation(ss.limit_page(), ss.max_column(), k);
  return !top.is_zero_class(ss.window().to_vector(z, k));
}

// ---------------------------------------------------------------------------
// Criterion

IntMatrix kernel_lift(const GroupMap& f) {
  const std::size_t n = f.source_orders.size();
  std::vector<std::size_t> torsion_rows;
  for (std::size_t i = 0; i < f.target_orders.size(); ++i)
    if (f.target_orders[i] != 0) torsion_rows.push_back(i);
  IntMatrix a(f.matrix.rows(), n + torsion_rows.size());
  for (std::size_t i = 0; i < f.matrix.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = f.matrix(i, j);
  for (std::size_t t = 0; t < torsion_rows.size(); ++t)
    a(torsion_rows[t], n + t) = f.target_orders[torsion_rows[t]];
  IntMatrix k = kernel_lattice(a);
  std::vector<IntVector> columns;
  for (std::size_t c = 0; c < k.cols(); ++c) {
    IntVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = k(i, c);
    columns.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (f.source_orders[i] != 0) {
      IntVector v(n);
      v[i] = f.source_orders[i];
      columns.push_back(std::move(v));
    }
  return IntMatrix::from_columns(columns, n);
}

bool kernel_criterion(const GroupMap& a, const GroupMap& b, CriterionMode mode) {
  auto check = [](const GroupMap& f, const char* name) {
    if (f.matrix.cols() != f.source_orders.size() ||
        f.matrix.rows() != f.target_orders.size())
      throw DimensionMismatch(std::string("map ") + name + " is " +
                              std::to_string(f.matrix.rows()) + "x" +
                              std::to_string(f.matrix.cols()) +
                              " but its presentation is " +
                              std::to_string(f.target_orders.size()) + "x" +
                              std::to_string(f.source_orders.size()));
  };
  check(a, "A");
  check(b, "B");
  if (a.source_orders != b.source_orders)
    throw DimensionMismatch("A and B do not share a source presentation");

  if (mode == CriterionMode::rational) {
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < a.source_orders.size(); ++j)
      if (a.source_orders[j] == 0) free_cols.push_back(j);
    auto free_part = [&](const GroupMap& f) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < f.target_orders.size(); ++i)
        if (f.target_orders[i] == 0) rows.push_back(i);
      IntMatrix out(rows.size(), free_cols.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < free_cols.size(); ++j)
          out(i, j) = f.matrix(rows[i], free_cols[j]);
      return out;
    };
    IntMatrix fa = free_part(a);
    return rank_q(vstack(fa, free_part(b))) > rank_q(fa);
  }
  IntMatrix ka = kernel_lift(a);
  IntMatrix kb = kernel_lift(b);
  if (mode == CriterionMode::saturated) kb = saturate(kb);
  return !lattice_contained(ka, kb);
}

}  // namespace dgc
