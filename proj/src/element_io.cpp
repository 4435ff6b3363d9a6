#include "hvr2/element_io.hpp"

#include <cctype>
#include <optional>
#include <stdexcept>

namespace hvr2 {

namespace {

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  LieElement parse() {
    LieElement out;
    skip_ws();
    if (done()) fail("empty element");
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (first) {
        if (peek() == '+' || peek() == '-') sign = (take() == '-') ? -1 : 1;
      } else {
        if (done()) break;
        const char c = take();
        if (c == '+') sign = 1;
        else if (c == '-') sign = -1;
        else fail("expected '+' or '-' between terms", pos_ - 1);
      }
      skip_ws();
      auto [coeff, sym] = parse_term();
      if (sym) add_term(out, *sym, Rational(sign) * coeff);
      first = false;
      skip_ws();
      if (done()) break;
    }
    return out;
  }

private:
  std::pair<Rational, std::optional<BasisSymbol>> parse_term() {
    Rational coeff(1);
    if (done()) fail("expected a term");
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = parse_rational();
      skip_ws();
      if (done() || peek() != '*') {
        // A bare zero stands for the zero element; any other bare number
        // is not an element of the algebra.
        if (coeff.is_zero() && (done() || peek() == '+' || peek() == '-'))
          return {coeff, std::nullopt};
        fail("expected '*' after the coefficient");
      }
      take();
      skip_ws();
    }
    return {coeff, parse_symbol()};
  }

  Rational parse_rational() {
    const std::size_t start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) take();
    if (pos_ == start) fail("expected a number");
    std::string num = s_.substr(start, pos_ - start);
    if (!done() && peek() == '/') {
      take();
      const std::size_t dstart = pos_;
      while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) take();
      if (pos_ == dstart) fail("expected a denominator after '/'");
      std::string den = s_.substr(dstart, pos_ - dstart);
      if (Rational::from_string(den) == Rational(0)) fail("zero denominator", dstart);
      return Rational::from_string(num + "/" + den);
    }
    return Rational::from_string(num);
  }

  BasisSymbol parse_symbol() {
    if (done()) fail("expected a symbol");
    const std::size_t start = pos_;
    const char c = take();
    switch (c) {
      case 'E': {
        const Vec2 m = parse_degree();
        if (m.is_zero()) fail("degree [0,0] does not name a basis symbol", start);
        return BasisSymbol::mkE(m);
      }
      case 't': {
        const Vec2 m = parse_degree();
        if (m.is_zero()) fail("degree [0,0] does not name a basis symbol", start);
        return BasisSymbol::mkT(m);
      }
      case 'K': {
        const int i = parse_index();
        if (i < 1 || i > 4) fail("K index must be 1..4", start);
        return BasisSymbol::mkK(i);
      }
      case 'd': {
        const int i = parse_index();
        if (i < 1 || i > 2) fail("d index must be 1 or 2", start);
        return BasisSymbol::mkD(i);
      }
      default: fail("expected one of E, t, K1..K4, d1, d2", start);
    }
    return BasisSymbol::mkK(1);  // unreachable
  }

  Vec2 parse_degree() {
    if (done() || peek() != '[') fail("expected '[' after the symbol name");
    take();
    const long a = parse_long();
    skip_ws();
    if (done() || take() != ',') fail("expected ',' in the degree", pos_ - 1);
    skip_ws();
    const long b = parse_long();
    if (done() || take() != ']') fail("expected ']' closing the degree", pos_ - 1);
    return Vec2{a, b};
  }

  long parse_long() {
    const std::size_t start = pos_;
    if (!done() && (peek() == '-' || peek() == '+')) take();
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) take();
    if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(s_[start]))))
      fail("expected an integer", start);
    return std::stol(s_.substr(start, pos_ - start));
  }

  int parse_index() {
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected an index digit");
    return take() - '0';
  }

  [[noreturn]] void fail(const std::string& what) { fail(what, pos_); }
  [[noreturn]] void fail(const std::string& what, std::size_t at) {
    throw std::invalid_argument("parse error at position " + std::to_string(at) + ": " + what);
  }

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char take() { return s_[pos_++]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) take();
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

LieElement parse_element(const std::string& text) { return Parser(text).parse(); }

std::string print_element(const LieElement& x) {
  std::string out;
  for (const auto& [sym, c] : x) {
    if (c == Rational(0)) continue;
    if (out.empty()) {
      out = c.str() + "*" + sym.str();
    } else {
      const bool neg = c < Rational(0);
      out += neg ? " - " : " + ";
      out += (neg ? -c : c).str() + "*" + sym.str();
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace hvr2
