#pragma once

// Right DG modules over a coefficient DGA ("DG local systems"), free and
// degree-wise finitely generated over Z.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgc/dga.hpp"
#include "dgc/linalg.hpp"
#include "dgc/report.hpp"

namespace dgc {

struct ModuleWord {
  std::string name;
  int degree = 0;
};

class ModuleElement {
 public:
  using Terms = std::map<std::size_t, Integer>;

  ModuleElement() = default;
  ModuleElement(std::uint64_t module_id, Terms terms);

  std::uint64_t module_id() const { return module_id_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Integer coefficient(std::size_t w) const;

  void add_term(std::size_t w, const Integer& c);
  ModuleElement& operator+=(const ModuleElement& other);
  ModuleElement& operator-=(const ModuleElement& other);
  ModuleElement& operator*=(const Integer& c);

  friend ModuleElement operator+(ModuleElement a, const ModuleElement& b) {
    return a += b;
  }
  friend ModuleElement operator-(ModuleElement a, const ModuleElement& b) {
    return a -= b;
  }
  friend ModuleElement operator*(const Integer& c, ModuleElement a) {
    return a *= c;
  }
  friend bool operator==(const ModuleElement& a, const ModuleElement& b) {
    return a.terms_ == b.terms_ &&
           (a.terms_.empty() || a.module_id_ == b.module_id_);
  }

 private:
  void adopt(std::uint64_t id);

  std::uint64_t module_id_ = 0;
  Terms terms_;
};

enum class ModuleKind {
  /// Finitely many declared words with an explicit action table (table
  /// DGAs) or explicit generator matrices (Laurent group rings).
  explicit_table,
  /// The algebra acting on itself. Table DGAs are cut at their truncation
  /// degree; Laurent group rings at an exponent box of the given radius.
  regular,
};

/// One entry of an explicit action table: module word * algebra word.
struct ActionEntry {
  std::size_t module_word;
  Word algebra_word;
  std::vector<std::pair<std::size_t, Integer>> value;
};

class DgModule;
using ModulePtr = std::shared_ptr<const DgModule>;

class DgModule : public std::enable_shared_from_this<DgModule> {
 public:
  static constexpr int default_box_radius = 4;

  /// For Laurent group rings, `action` entries give the action of the
  /// generators t_i (exponent vectors with a single 1); they must be
  /// invertible over Z. For table DGAs, unlisted products are zero, except
  /// for the unit which acts as the identity. `degree_bound` marks the module
  /// as a truncation of a larger one: words above it are missing.
  static ModulePtr make_explicit(
      DgaPtr algebra, std::vector<ModuleWord> words,
      const std::vector<ActionEntry>& action,
      const std::map<std::size_t, std::vector<std::pair<std::size_t, Integer>>>&
          differential,
      std::optional<int> degree_bound = std::nullopt);

  static ModulePtr regular(DgaPtr algebra,
                           int box_radius = default_box_radius);

  /// Same complex, action m.a replaced by m.phi(a).
  ModulePtr twisted(const Rank1LocalSystem& l) const;

  /// For regular Laurent modules: the same module (with the same twist) over
  /// a box of the given radius. nullptr for every other module.
  ModulePtr with_box_radius(int radius) const;

  const DgaPtr& algebra() const { return algebra_; }
  std::uint64_t id() const { return id_; }
  ModuleKind kind() const { return kind_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<ModuleWord>& words() const { return words_; }
  const ModuleWord& word(std::size_t i) const { return words_.at(i); }
  std::vector<std::size_t> words_of_degree(int degree) const;
  int min_degree() const;
  int max_degree() const;
  std::optional<int> degree_bound() const { return degree_bound_; }
  std::optional<int> box_radius() const { return box_radius_; }
  const std::optional<Rank1LocalSystem>& twist() const { return twist_; }
  /// The untwisted module this one was derived from (itself if untwisted).
  const DgModule& untwisted() const { return base_ ? *base_ : *this; }

  ModuleElement element(std::size_t w, const Integer& c = 1) const;
  ModuleElement zero() const { return ModuleElement(id_, {}); }

  /// nullopt when the result leaves the representable range.
  std::optional<ModuleElement> try_act(const ModuleElement& m,
                                       const AlgebraElement& a) const;
  ModuleElement act(const ModuleElement& m, const AlgebraElement& a) const;
  ModuleElement differential(const ModuleElement& m) const;

  std::string format(const ModuleElement& m) const;
  ModuleElement parse(std::string_view text) const;
  std::optional<std::size_t> find_word(std::string_view name) const;
  void check_member(const ModuleElement& m) const;

  /// Explicit action entries as given (for export).
  const std::vector<ActionEntry>& action_entries() const { return entries_; }
  /// Differential of word w as stored.
  ModuleElement differential_of_word(std::size_t w) const;
  /// Laurent box index of an exponent vector, if inside the box.
  std::optional<std::size_t> box_index(const std::vector<std::int64_t>& e) const;

 private:
  DgModule();
  void index_words();
  std::optional<ModuleElement> act_word_untwisted(std::size_t m,
                                                  const Word& a) const;

  DgaPtr algebra_;
  std::uint64_t id_;
  ModuleKind kind_ = ModuleKind::explicit_table;
  std::vector<ModuleWord> words_;
  std::map<std::string, std::size_t, std::less<>> word_index_;
  std::map<int, std::vector<std::size_t>> by_degree_;
  std::vector<ModuleElement::Terms> differentials_;
  std::optional<int> degree_bound_;
  std::optional<int> box_radius_;
  std::vector<ActionEntry> entries_;
  std::map<std::pair<std::size_t, Word>, ModuleElement::Terms> table_action_;
  std::vector<IntMatrix> generator_action_;          // Laurent explicit
  std::vector<IntMatrix> generator_action_inverse_;  // Laurent explicit
  std::vector<std::vector<std::int64_t>> box_exponents_;
  std::optional<Rank1LocalSystem> twist_;
  std::shared_ptr<const DgModule> base_;
};

ValidationReport validate_module(const DgModule& f);

ModulePtr twist_by_rank1(const ModulePtr& f, const Rank1LocalSystem& l);

/// Matrix of the module differential from degree q to degree q - 1 in the
/// word bases.
IntMatrix module_differential_matrix(const DgModule& f, int q);

/// Presentation of H_q(F) over the word basis of degree q.
Subquotient module_homology_presentation(const DgModule& f, int q);

/// H_q(F) for q in [lo, hi]. Throws TruncationExceeded if the module is a
/// degree truncation that does not reach hi + 1.
std::vector<HomologyGroup> module_homology(const DgModule& f, int lo, int hi);

}  // namespace dgc
