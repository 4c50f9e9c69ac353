#include "expression.hpp"

#include <cctype>

#include "dgc/errors.hpp"

namespace dgc::detail {
namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
  }
  bool at_end() {
    skip_space();
    return i_ >= s_.size();
  }
  char peek() {
    skip_space();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  std::size_t pos() {
    skip_space();
    return i_;
  }

  std::optional<Integer> number() {
    skip_space();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
      ++i_;
    if (start == i_) return std::nullopt;
    return Integer(std::string(s_.substr(start, i_ - start)));
  }

  std::optional<std::string> identifier() {
    skip_space();
    if (i_ >= s_.size() || !ident_start(s_[i_])) return std::nullopt;
    std::size_t start = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

Factor parse_factor(Cursor& c) {
  Factor f;
  f.position = c.pos();
  auto name = c.identifier();
  if (!name) throw ExpressionError("expected identifier", f.position);
  f.name = *name;
  if (c.accept('^')) {
    bool negative = c.accept('-');
    std::size_t p = c.pos();
    auto n = c.number();
    if (!n || !n->fits_slong_p()) throw ExpressionError("expected exponent", p);
    f.exponent = n->get_si() * (negative ? -1 : 1);
  }
  return f;
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s[0])) return false;
  for (char ch : s)
    if (!ident_char(ch)) return false;
  return true;
}

std::vector<Monomial> parse_monomials(std::string_view text, bool allow_tail) {
  Cursor c(text);
  std::vector<Monomial> out;
  if (c.at_end()) throw ExpressionError("empty expression", 0);
  bool first = true;
  while (!c.at_end()) {
    int sign = 1;
    if (c.accept('+')) {
    } else if (c.accept('-')) {
      sign = -1;
    } else if (!first) {
      throw ExpressionError("expected '+' or '-'", c.pos());
    }
    first = false;
    Monomial m;
    if (auto n = c.number()) {
      m.coefficient = *n;
      if (c.accept('*')) m.factors.push_back(parse_factor(c));
    } else {
      m.factors.push_back(parse_factor(c));
    }
    while (c.accept('*')) m.factors.push_back(parse_factor(c));
    if (c.peek() == '|') {
      if (!allow_tail) throw ExpressionError("unexpected '|'", c.pos());
      c.accept('|');
      m.tail = parse_factor(c);
      if (m.tail->exponent != 1)
        throw ExpressionError("generator cannot carry an exponent",
                              m.tail->position);
    } else if (allow_tail) {
      throw ExpressionError("expected '|generator'", c.pos());
    }
    m.coefficient *= sign;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace dgc::detail
