#pragma once

// Rationals extended by -inf and +inf, used for filtration levels, spectral
// numbers and filtration shifts.

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "dgc/linalg.hpp"

namespace dgc {

class ExtendedRational {
 public:
  ExtendedRational() = default;
  ExtendedRational(const Rational& v) : kind_(Kind::finite), value_(v) {}
  ExtendedRational(long v) : kind_(Kind::finite), value_(v) {}

  static ExtendedRational infinity() { return ExtendedRational(Kind::pos_inf); }
  static ExtendedRational negative_infinity() {
    return ExtendedRational(Kind::neg_inf);
  }

  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_positive_infinity() const { return kind_ == Kind::pos_inf; }
  bool is_negative_infinity() const { return kind_ == Kind::neg_inf; }
  /// The finite value; only meaningful when is_finite().
  const Rational& value() const { return value_; }

  /// "inf", "-inf", or p/q in lowest terms (q omitted when 1).
  std::string to_string() const;
  /// Accepts the forms produced by to_string(); nullopt otherwise.
  static std::optional<ExtendedRational> parse(std::string_view text);

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ExtendedRational& a,
                                          const ExtendedRational& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (a.kind_ != Kind::finite) return std::strong_ordering::equal;
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
  }

  /// Sum with the convention that +inf absorbs -inf.
  friend ExtendedRational operator+(const ExtendedRational& a,
                                    const ExtendedRational& b);

 private:
  enum class Kind { neg_inf = 0, finite = 1, pos_inf = 2 };
  explicit ExtendedRational(Kind k) : kind_(k) {}

  Kind kind_ = Kind::finite;
  Rational value_ = 0;
};

/// Parses an exact rational literal "p" or "p/q" (q > 0); nullopt otherwise.
std::optional<Rational> parse_rational(std::string_view text);

/// p or p/q in lowest terms.
std::string rational_to_string(const Rational& r);

}  // namespace dgc
