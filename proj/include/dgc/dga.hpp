#pragma once

// Coefficient DGAs: degree-wise finite structure-constant tables (with a
// truncation degree) and Laurent group rings Z[t1^±1, ..., tk^±1].

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dgc/linalg.hpp"
#include "dgc/report.hpp"

namespace dgc {

/// A basis word. For the table backend `key` holds a single word index; for
/// the Laurent backend it is the exponent vector over the generators.
struct Word {
  std::vector<std::int64_t> key;

  static Word index(std::size_t i) {
    return Word{{static_cast<std::int64_t>(i)}};
  }
  std::size_t as_index() const { return static_cast<std::size_t>(key.at(0)); }

  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;
};

/// Finite Z-linear combination of basis words, kept sorted with no zero
/// coefficients. A default-constructed element is the zero of every algebra.
class AlgebraElement {
 public:
  using Terms = std::map<Word, Integer>;

  AlgebraElement() = default;
  AlgebraElement(std::uint64_t algebra_id, Terms terms);

  std::uint64_t algebra_id() const { return algebra_id_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Integer coefficient(const Word& w) const;

  void add_term(const Word& w, const Integer& c);
  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(const Integer& c);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    return a += b;
  }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    return a -= b;
  }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= Integer(-1); }
  friend AlgebraElement operator*(const Integer& c, AlgebraElement a) {
    return a *= c;
  }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.terms_ == b.terms_ &&
           (a.terms_.empty() || a.algebra_id_ == b.algebra_id_);
  }

 private:
  void adopt(std::uint64_t id);

  std::uint64_t algebra_id_ = 0;
  Terms terms_;
};

enum class Backend { table, laurent };

struct TableWord {
  std::string name;
  int degree = 0;
  /// Degree-0 word recording where the chain starts; only its monodromy
  /// matters. Absent means undeclared.
  std::optional<std::size_t> corner;
};

/// Presentation data kept for free (tensor) algebras so they can be exported
/// without listing their structure constants.
struct FreePresentation {
  std::vector<std::pair<std::string, int>> generators;
  /// Differential of each generator as (coefficient, letter sequence) terms.
  std::vector<std::vector<std::pair<Integer, std::vector<std::size_t>>>>
      differentials;
};

using TermList = std::vector<std::pair<std::size_t, Integer>>;

class Dga {
 public:
  static std::shared_ptr<const Dga> laurent(std::vector<std::string> generators);

  Backend backend() const { return backend_; }
  std::uint64_t id() const { return id_; }

  // Table backend data.
  int truncation() const { return truncation_; }
  const std::vector<TableWord>& words() const { return words_; }
  std::vector<Word> basis(int degree) const;
  const std::map<std::pair<std::size_t, std::size_t>, AlgebraElement>&
  explicit_products() const {
    return products_;
  }
  const std::optional<FreePresentation>& free_presentation() const {
    return free_;
  }

  // Laurent backend data.
  const std::vector<std::string>& generators() const { return generators_; }

  Word unit_word() const;
  AlgebraElement unit() const { return word(unit_word()); }
  AlgebraElement word(const Word& w, const Integer& c = 1) const;
  /// Laurent generator t_i raised to `power`.
  AlgebraElement generator_power(std::size_t i, std::int64_t power) const;

  int degree(const Word& w) const;
  /// Degree of a nonzero homogeneous element; nullopt when zero or mixed.
  std::optional<int> degree_of(const AlgebraElement& a) const;
  bool is_homogeneous_of_degree(const AlgebraElement& a, int degree) const;

  /// Corner word of w; degree-0 words are their own corner.
  std::optional<Word> corner(const Word& w) const;

  AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) const;
  /// nullopt when some product leaves the truncation range.
  std::optional<AlgebraElement> try_multiply(const AlgebraElement& a,
                                             const AlgebraElement& b) const;
  std::optional<AlgebraElement> multiply_words(const Word& a,
                                               const Word& b) const;
  AlgebraElement differential(const AlgebraElement& a) const;
  AlgebraElement differential_of_word(const Word& w) const;

  void check_member(const AlgebraElement& a) const;

  std::string word_name(const Word& w) const;
  std::optional<Word> find_word(std::string_view name) const;
  std::string format(const AlgebraElement& a) const;
  AlgebraElement parse(std::string_view text) const;

 private:
  friend class TableDgaBuilder;
  friend std::shared_ptr<const Dga> free_tensor_algebra(
      const std::vector<std::pair<std::string, int>>&, int,
      const std::vector<std::vector<std::pair<Integer, std::vector<std::size_t>>>>&);

  Dga();

  Backend backend_ = Backend::table;
  std::uint64_t id_;
  int truncation_ = 0;
  std::vector<TableWord> words_;
  std::map<std::string, std::size_t, std::less<>> word_index_;
  std::size_t unit_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, AlgebraElement> products_;
  std::vector<AlgebraElement> differentials_;
  std::optional<FreePresentation> free_;
  std::vector<std::string> generators_;
};

using DgaPtr = std::shared_ptr<const Dga>;

/// Assembles a structure-constant table DGA. Products involving the unit
/// default to the unit law; every other unspecified product is zero.
class TableDgaBuilder {
 public:
  explicit TableDgaBuilder(int truncation);

  std::size_t add_word(std::string name, int degree);
  void set_unit(std::size_t w);
  void set_product(std::size_t a, std::size_t b, TermList value);
  void set_differential(std::size_t w, TermList value);
  void set_corner(std::size_t w, std::size_t corner);
  /// Declares the unit as corner of every word that has none.
  void default_corners_to_unit();

  std::optional<std::size_t> find(std::string_view name) const;
  DgaPtr build() const;

 private:
  int truncation_;
  std::vector<TableWord> words_;
  std::optional<std::size_t> unit_;
  std::map<std::pair<std::size_t, std::size_t>, TermList> products_;
  std::map<std::size_t, TermList> differentials_;
};

/// Free associative algebra on positive-degree generators, truncated at
/// `truncation`, with the differential of each generator given as a list of
/// (coefficient, letter sequence) and extended by the Leibniz rule.
DgaPtr free_tensor_algebra(
    const std::vector<std::pair<std::string, int>>& generators, int truncation,
    const std::vector<std::vector<std::pair<Integer, std::vector<std::size_t>>>>&
        generator_differentials = {});

/// Checks unit law, degrees, associativity, Leibniz and d^2 = 0 on all basis
/// words, pairs and triples within truncation.
ValidationReport validate_dga(const Dga& a);

/// Rank-1 local system: a multiplicative sign on degree-0 basis words.
class Rank1LocalSystem {
 public:
  /// Laurent backend: one value per generator.
  static Rank1LocalSystem on_generators(DgaPtr base, std::vector<int> values);
  /// Table backend: values on degree-0 words by index; absent words map to 1.
  static Rank1LocalSystem on_words(DgaPtr base,
                                   std::map<std::size_t, int> values);
  static Rank1LocalSystem trivial(DgaPtr base);

  const DgaPtr& base() const { return base_; }
  const std::vector<int>& values() const { return values_; }

  /// Monodromy of a degree-0 word.
  int rho(const Word& degree_zero_word) const;
  bool is_trivial() const;

  /// Pointwise product, realising the tensor product of rank-1 systems.
  Rank1LocalSystem tensor(const Rank1LocalSystem& other) const;
  friend bool operator==(const Rank1LocalSystem& a, const Rank1LocalSystem& b) {
    return a.base_ == b.base_ && a.values_ == b.values_;
  }

 private:
  Rank1LocalSystem(DgaPtr base, std::vector<int> values)
      : base_(std::move(base)), values_(std::move(values)) {}

  DgaPtr base_;
  std::vector<int> values_;
};

/// Multiplicativity on degree-0 words, plus the DGA-map property of the twist
/// on basis pairs within truncation.
ValidationReport validate_local_system(const Rank1LocalSystem& l);

/// Scales each basis word by the monodromy of its degree-0 corner.
AlgebraElement phi_twist(const Rank1LocalSystem& l, const AlgebraElement& a);

}  // namespace dgc
