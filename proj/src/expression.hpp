#pragma once

// Tokenizer and monomial grammar shared by the algebra, module and chain
// expression parsers:
//   sum      := [+|-] monomial ((+|-) monomial)*
//   monomial := integer ['*' factors] | factors, optionally followed by
//               '|' identifier when a tail is allowed
//   factors  := factor ('*' factor)*
//   factor   := identifier ['^' ['-'] integer]

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgc/linalg.hpp"

namespace dgc::detail {

struct Factor {
  std::string name;
  std::int64_t exponent = 1;
  std::size_t position = 0;
};

struct Monomial {
  Integer coefficient = 1;
  std::vector<Factor> factors;
  std::optional<Factor> tail;
};

std::vector<Monomial> parse_monomials(std::string_view text, bool allow_tail);

bool is_identifier(std::string_view s);

}  // namespace dgc::detail
