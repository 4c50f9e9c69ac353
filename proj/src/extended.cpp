#include "dgc/extended.hpp"

#include <cctype>

namespace dgc {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!all_digits(num)) return std::nullopt;
  Rational r{Integer{std::string(num)}};
  if (slash != std::string_view::npos) {
    std::string_view den = text.substr(slash + 1);
    if (!all_digits(den)) return std::nullopt;
    Integer d{std::string(den)};
    if (d == 0) return std::nullopt;
    r = Rational(r.get_num(), d);
    r.canonicalize();
  }
  if (negative) r = -r;
  return r;
}

std::string rational_to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string ExtendedRational::to_string() const {
  switch (kind_) {
    case Kind::pos_inf:
      return "inf";
    case Kind::neg_inf:
      return "-inf";
    case Kind::finite:
      break;
  }
  return rational_to_string(value_);
}

std::optional<ExtendedRational> ExtendedRational::parse(std::string_view text) {
  if (text == "inf" || text == "+inf") return infinity();
  if (text == "-inf") return negative_infinity();
  if (auto r = parse_rational(text)) return ExtendedRational(*r);
  return std::nullopt;
}

ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.is_positive_infinity() || b.is_positive_infinity())
    return ExtendedRational::infinity();
  if (a.is_negative_infinity() || b.is_negative_infinity())
    return ExtendedRational::negative_infinity();
  return ExtendedRational(Rational(a.value() + b.value()));
}

}  // namespace dgc
