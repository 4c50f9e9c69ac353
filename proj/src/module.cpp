#include "dgc/module.hpp"

#include <atomic>

#include "dgc/errors.hpp"
#include "expression.hpp"

namespace dgc {
namespace {

std::uint64_t next_module_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter++;
}

IntMatrix integer_inverse(const IntMatrix& m, const std::string& what) {
  SmithForm s = smith_normal_form(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (i >= s.rank || s.diagonal(i) != 1)
      throw InvalidDefinition(what + " is not invertible over Z");
  return s.v * s.u;
}

IntVector to_vector(const ModuleElement::Terms& t, std::size_t n) {
  IntVector v(n, Integer(0));
  for (const auto& [w, c] : t) v[w] = c;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModuleElement

ModuleElement::ModuleElement(std::uint64_t module_id, Terms terms)
    : module_id_(module_id) {
  for (auto& [w, c] : terms)
    if (sgn(c) != 0) terms_.emplace(w, std::move(c));
}

Integer ModuleElement::coefficient(std::size_t w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Integer(0) : it->second;
}

void ModuleElement::adopt(std::uint64_t id) {
  if (id == 0 || id == module_id_) return;
  if (module_id_ != 0 && !terms_.empty())
    throw MixedAlgebra("module elements belong to different modules");
  module_id_ = id;
}

void ModuleElement::add_term(std::size_t w, const Integer& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& other) {
  if (!other.terms_.empty()) adopt(other.module_id_);
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& other) {
  if (!other.terms_.empty()) adopt(other.module_id_);
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

ModuleElement& ModuleElement::operator*=(const Integer& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, x] : terms_) x *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// DgModule construction

DgModule::DgModule() : id_(next_module_id()) {}

void DgModule::index_words() {
  word_index_.clear();
  by_degree_.clear();
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!word_index_.emplace(words_[i].name, i).second)
      throw InvalidDefinition("duplicate module word '" + words_[i].name + "'");
    by_degree_[words_[i].degree].push_back(i);
  }
}

ModulePtr DgModule::make_explicit(
    DgaPtr algebra, std::vector<ModuleWord> words,
    const std::vector<ActionEntry>& action,
    const std::map<std::size_t, std::vector<std::pair<std::size_t, Integer>>>&
        differential,
    std::optional<int> degree_bound) {
  std::shared_ptr<DgModule> f(new DgModule());
  f->algebra_ = std::move(algebra);
  f->kind_ = ModuleKind::explicit_table;
  f->words_ = std::move(words);
  f->degree_bound_ = degree_bound;
  f->entries_ = action;
  f->index_words();
  const std::size_t n = f->words_.size();
  if (degree_bound)
    for (const auto& w : f->words_)
      if (w.degree > *degree_bound)
        throw TruncationTooSmall("module word '" + w.name +
                                 "' lies above the degree bound");

  auto to_terms = [&](const std::vector<std::pair<std::size_t, Integer>>& v) {
    ModuleElement::Terms t;
    for (const auto& [w, c] : v) {
      if (w >= n) throw InvalidDefinition("module word index out of range");
      if (sgn(c) == 0) continue;
      t[w] += c;
      if (sgn(t[w]) == 0) t.erase(w);
    }
    return t;
  };

  f->differentials_.assign(n, {});
  for (const auto& [w, v] : differential) {
    if (w >= n) throw InvalidDefinition("module word index out of range");
    f->differentials_[w] = to_terms(v);
  }

  const Dga& a = *f->algebra_;
  if (a.backend() == Backend::laurent) {
    const std::size_t k = a.generators().size();
    f->generator_action_.assign(k, IntMatrix::identity(n));
    std::vector<std::vector<bool>> seen(k, std::vector<bool>(n, false));
    for (const auto& e : action) {
      if (e.module_word >= n)
        throw InvalidDefinition("module word index out of range");
      std::size_t gen = k;
      for (std::size_t i = 0; i < k; ++i) {
        if (e.algebra_word.key.at(i) == 1 && gen == k)
          gen = i;
        else if (e.algebra_word.key.at(i) != 0)
          gen = k + 1;
      }
      if (gen >= k)
        throw InvalidDefinition(
            "Laurent module actions are given on single generators");
      if (seen[gen][e.module_word])
        throw InvalidDefinition("action of '" + a.generators()[gen] +
                                "' on '" + f->words_[e.module_word].name +
                                "' given twice");
      seen[gen][e.module_word] = true;
      IntVector col = to_vector(to_terms(e.value), n);
      for (std::size_t r = 0; r < n; ++r)
        f->generator_action_[gen](r, e.module_word) = col[r];
    }
    for (std::size_t i = 0; i < k; ++i)
      f->generator_action_inverse_.push_back(integer_inverse(
          f->generator_action_[i], "action of '" + a.generators()[i] + "'"));
  } else {
    for (const auto& e : action) {
      if (e.module_word >= n)
        throw InvalidDefinition("module word index out of range");
      if (!f->table_action_.emplace(std::pair{e.module_word, e.algebra_word},
                                    to_terms(e.value))
               .second)
        throw InvalidDefinition("action on '" + f->words_[e.module_word].name +
                                "' by '" + a.word_name(e.algebra_word) +
                                "' given twice");
    }
  }
  return f;
}

ModulePtr DgModule::regular(DgaPtr algebra, int box_radius) {
  std::shared_ptr<DgModule> f(new DgModule());
  f->algebra_ = std::move(algebra);
  f->kind_ = ModuleKind::regular;
  const Dga& a = *f->algebra_;
  if (a.backend() == Backend::table) {
    for (const auto& w : a.words()) f->words_.push_back({w.name, w.degree});
    f->degree_bound_ = a.truncation();
    for (std::size_t i = 0; i < a.words().size(); ++i) {
      ModuleElement::Terms t;
      const AlgebraElement d = a.differential_of_word(Word::index(i));
      for (const auto& [w, c] : d.terms())
        t.emplace(w.as_index(), c);
      f->differentials_.push_back(std::move(t));
    }
  } else {
    if (box_radius < 0) throw InvalidDefinition("negative box radius");
    f->box_radius_ = box_radius;
    const std::size_t k = a.generators().size();
    std::vector<std::int64_t> e(k, -box_radius);
    bool done = false;
    while (!done) {
      f->box_exponents_.push_back(e);
      done = true;
      for (std::size_t i = k; i-- > 0;) {
        if (e[i] < box_radius) {
          ++e[i];
          done = false;
          break;
        }
        e[i] = -box_radius;
      }
    }
    for (const auto& x : f->box_exponents_)
      f->words_.push_back({a.word_name(Word{x}), 0});
    f->differentials_.assign(f->words_.size(), {});
  }
  f->index_words();
  return f;
}

ModulePtr DgModule::twisted(const Rank1LocalSystem& l) const {
  if (l.base() != algebra_)
    throw MixedAlgebra("local system and module have different algebras");
  std::shared_ptr<DgModule> f(new DgModule(*this));
  f->id_ = next_module_id();
  f->twist_ = twist_ ? twist_->tensor(l) : l;
  f->base_ = base_ ? base_ : shared_from_this();
  return f;
}

ModulePtr DgModule::with_box_radius(int radius) const {
  if (!box_radius_) return nullptr;
  ModulePtr f = regular(algebra_, radius);
  return twist_ ? f->twisted(*twist_) : f;
}

ModulePtr twist_by_rank1(const ModulePtr& f, const Rank1LocalSystem& l) {
  return f->twisted(l);
}

// ---------------------------------------------------------------------------
// Queries

std::vector<std::size_t> DgModule::words_of_degree(int degree) const {
  auto it = by_degree_.find(degree);
  return it == by_degree_.end() ? std::vector<std::size_t>{} : it->second;
}

int DgModule::min_degree() const {
  return by_degree_.empty() ? 0 : by_degree_.begin()->first;
}

int DgModule::max_degree() const {
  return by_degree_.empty() ? 0 : by_degree_.rbegin()->first;
}

ModuleElement DgModule::element(std::size_t w, const Integer& c) const {
  if (w >= words_.size()) throw InvalidDefinition("module word out of range");
  ModuleElement::Terms t;
  t.emplace(w, c);
  return ModuleElement(id_, std::move(t));
}

void DgModule::check_member(const ModuleElement& m) const {
  if (!m.is_zero() && m.module_id() != id_)
    throw MixedAlgebra("element does not belong to this module");
}

std::optional<std::size_t> DgModule::box_index(
    const std::vector<std::int64_t>& e) const {
  if (!box_radius_) return std::nullopt;
  const std::int64_t r = *box_radius_;
  std::size_t idx = 0;
  for (std::int64_t x : e) {
    if (x < -r || x > r) return std::nullopt;
    idx = idx * static_cast<std::size_t>(2 * r + 1) +
          static_cast<std::size_t>(x + r);
  }
  return idx;
}

std::optional<ModuleElement> DgModule::act_word_untwisted(std::size_t m,
                                                          const Word& a) const {
  const Dga& alg = *algebra_;
  if (kind_ == ModuleKind::regular) {
    if (alg.backend() == Backend::table) {
      auto p = alg.multiply_words(Word::index(m), a);
      if (!p) return std::nullopt;
      ModuleElement::Terms t;
      for (const auto& [w, c] : p->terms()) t.emplace(w.as_index(), c);
      return ModuleElement(id_, std::move(t));
    }
    std::vector<std::int64_t> e = box_exponents_[m];
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += a.key[i];
    auto idx = box_index(e);
    if (!idx) return std::nullopt;
    return element(*idx);
  }
  if (alg.backend() == Backend::laurent) {
    IntVector v(words_.size(), Integer(0));
    v[m] = 1;
    for (std::size_t i = 0; i < a.key.size(); ++i) {
      const IntMatrix& g =
          a.key[i] >= 0 ? generator_action_[i] : generator_action_inverse_[i];
      for (std::int64_t k = 0; k < std::abs(a.key[i]); ++k) v = g.apply(v);
    }
    ModuleElement::Terms t;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (sgn(v[i]) != 0) t.emplace(i, v[i]);
    return ModuleElement(id_, std::move(t));
  }
  const int result_degree = words_[m].degree + alg.degree(a);
  if (degree_bound_ && result_degree > *degree_bound_) return std::nullopt;
  if (auto it = table_action_.find({m, a}); it != table_action_.end())
    return ModuleElement(id_, it->second);
  if (a == alg.unit_word()) return element(m);
  return zero();
}

std::optional<ModuleElement> DgModule::try_act(const ModuleElement& m,
                                               const AlgebraElement& a) const {
  check_member(m);
  algebra_->check_member(a);
  const AlgebraElement b = twist_ ? phi_twist(*twist_, a) : a;
  ModuleElement out = zero();
  for (const auto& [w, c] : m.terms())
    for (const auto& [aw, ac] : b.terms()) {
      auto r = act_word_untwisted(w, aw);
      if (!r) return std::nullopt;
      out += (c * ac) * std::move(*r);
    }
  return out;
}

ModuleElement DgModule::act(const ModuleElement& m,
                            const AlgebraElement& a) const {
  auto r = try_act(m, a);
  if (!r)
    throw TruncationExceeded("action " + format(m) + " . " +
                             algebra_->format(a) +
                             " leaves the representable range of the module");
  return *r;
}

ModuleElement DgModule::differential_of_word(std::size_t w) const {
  return ModuleElement(id_, differentials_.at(w));
}

ModuleElement DgModule::differential(const ModuleElement& m) const {
  check_member(m);
  ModuleElement out = zero();
  for (const auto& [w, c] : m.terms()) out += c * differential_of_word(w);
  return out;
}

std::optional<std::size_t> DgModule::find_word(std::string_view name) const {
  auto it = word_index_.find(name);
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

std::string DgModule::format(const ModuleElement& m) const {
  if (m.is_zero()) return "0";
  std::string out;
  const bool regular_unit_known = kind_ == ModuleKind::regular;
  std::optional<std::size_t> unit;
  if (regular_unit_known) {
    const Dga& a = *algebra_;
    unit = a.backend() == Backend::table ? a.unit_word().as_index()
                                         : *box_index(a.unit_word().key);
  }
  for (auto it = m.terms().rbegin(); it != m.terms().rend(); ++it) {
    const bool is_unit = unit && it->first == *unit;
    const std::string name = is_unit ? "1" : words_[it->first].name;
    const Integer& c = it->second;
    std::string term;
    if (name == "1")
      term = c.get_str();
    else if (c == 1)
      term = name;
    else if (c == -1)
      term = "-" + name;
    else
      term = c.get_str() + "*" + name;
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out;
}

ModuleElement DgModule::parse(std::string_view text) const {
  ModuleElement out = zero();
  const Dga& a = *algebra_;
  for (const auto& m : detail::parse_monomials(text, false)) {
    std::size_t first_action = 0;
    ModuleElement term;
    if (kind_ == ModuleKind::regular) {
      std::size_t unit = a.backend() == Backend::table
                             ? a.unit_word().as_index()
                             : *box_index(a.unit_word().key);
      term = element(unit, m.coefficient);
    } else {
      if (m.factors.empty())
        throw ExpressionError("module term needs a module word", 0);
      const auto& f = m.factors.front();
      auto w = find_word(f.name);
      if (!w)
        throw ExpressionError("unknown module word '" + f.name + "'",
                              f.position);
      if (f.exponent != 1)
        throw ExpressionError("module words take no exponent", f.position);
      term = element(*w, m.coefficient);
      first_action = 1;
    }
    for (std::size_t i = first_action; i < m.factors.size(); ++i) {
      const auto& f = m.factors[i];
      std::string factor_text = f.name;
      if (f.exponent != 1) factor_text += "^" + std::to_string(f.exponent);
      AlgebraElement x;
      try {
        x = a.parse(factor_text);
      } catch (const ExpressionError& e) {
        throw ExpressionError(e.what(), f.position);
      }
      auto r = try_act(term, x);
      if (!r)
        throw ExpressionError("term leaves the module's representable range",
                              f.position);
      term = std::move(*r);
    }
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation and homology

namespace {

std::vector<std::vector<Word>> algebra_words_by_degree(const Dga& a) {
  if (a.backend() == Backend::laurent) {
    std::vector<Word> ws{a.unit_word()};
    for (std::size_t i = 0; i < a.generators().size(); ++i)
      for (std::int64_t p : {1, -1}) {
        Word w = a.unit_word();
        w.key[i] = p;
        ws.push_back(w);
      }
    return {ws};
  }
  std::vector<std::vector<Word>> out(a.truncation() + 1);
  for (std::size_t i = 0; i < a.words().size(); ++i)
    out[a.words()[i].degree].push_back(Word::index(i));
  return out;
}

}  // namespace

ValidationReport validate_module(const DgModule& f) {
  ValidationReport report;
  const Dga& a = *f.algebra();
  const auto by_degree = algebra_words_by_degree(a);
  const int max_alg = static_cast<int>(by_degree.size()) - 1;
  auto sign = [](int d) { return Integer(d % 2 == 0 ? 1 : -1); };

  for (std::size_t m = 0; m < f.size(); ++m) {
    const ModuleWord& mw = f.word(m);
    ModuleElement em = f.element(m);
    ModuleElement dm = f.differential(em);
    for (const auto& [w, c] : dm.terms())
      if (f.word(w).degree != mw.degree - 1) {
        report.add("differential degree", {mw.name}, f.format(dm));
        break;
      }
    ModuleElement ddm = f.differential(dm);
    if (!ddm.is_zero()) report.add("d^2 = 0", {mw.name}, f.format(ddm));
    if (auto r = f.try_act(em, a.unit()); r && *r != em)
      report.add("unit law", {mw.name}, f.format(*r - em));

    for (int da = 0; da <= max_alg; ++da) {
      if (f.degree_bound() && mw.degree + da > *f.degree_bound()) break;
      for (const Word& wa : by_degree[da]) {
        AlgebraElement ea = a.word(wa);
        auto ma = f.try_act(em, ea);
        if (!ma) continue;
        const int expected = mw.degree + a.degree(wa);
        for (const auto& [w, c] : ma->terms())
          if (f.word(w).degree != expected) {
            report.add("action degree", {mw.name, a.word_name(wa)},
                       f.format(*ma));
            break;
          }
        auto lhs = f.differential(*ma);
        auto t1 = f.try_act(dm, ea);
        auto t2 = f.try_act(em, a.differential(ea));
        if (t1 && t2) {
          ModuleElement rhs = *t1 + sign(mw.degree) * *t2;
          if (lhs != rhs)
            report.add("Leibniz", {mw.name, a.word_name(wa)},
                       f.format(lhs - rhs));
        }
        for (int db = 0; da + db <= max_alg; ++db) {
          if (f.degree_bound() && mw.degree + da + db > *f.degree_bound())
            break;
          for (const Word& wb : by_degree[db]) {
            AlgebraElement eb = a.word(wb);
            auto ab = a.try_multiply(ea, eb);
            if (!ab) continue;
            auto l = f.try_act(*ma, eb);
            auto r = f.try_act(em, *ab);
            if (l && r && *l != *r)
              report.add("associativity",
                         {mw.name, a.word_name(wa), a.word_name(wb)},
                         f.format(*l - *r));
          }
        }
      }
    }
  }
  return report;
}

IntMatrix module_differential_matrix(const DgModule& f, int q) {
  auto cols = f.words_of_degree(q);
  auto rows = f.words_of_degree(q - 1);
  IntMatrix m(rows.size(), cols.size());
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = i;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const ModuleElement d = f.differential_of_word(cols[j]);
    for (const auto& [w, c] : d.terms()) m(row_of.at(w), j) = c;
  }
  return m;
}

Subquotient module_homology_presentation(const DgModule& f, int q) {
  IntMatrix out = module_differential_matrix(f, q);
  IntMatrix in = module_differential_matrix(f, q + 1);
  return Subquotient(kernel_lattice(out), in);
}

std::vector<HomologyGroup> module_homology(const DgModule& f, int lo, int hi) {
  if (f.degree_bound() && hi + 1 > *f.degree_bound())
    throw TruncationExceeded("module homology up to degree " +
                             std::to_string(hi) + " needs words of degree " +
                             std::to_string(hi + 1) + ", beyond the bound " +
                             std::to_string(*f.degree_bound()));
  std::vector<HomologyGroup> out;
  for (int q = lo; q <= hi; ++q)
    out.push_back(homology_at(module_differential_matrix(f, q + 1),
                              module_differential_matrix(f, q)));
  return out;
}

}  // namespace dgc
