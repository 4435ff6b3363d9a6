#include "hvr2/rational.hpp"

#include <cctype>
#include <ostream>

namespace hvr2 {

Rational Rational::from_string(std::string_view s) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("Rational: cannot parse \"" + std::string(s) + "\"");
  };
  if (s.empty()) fail();
  auto valid_int = [](std::string_view t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  std::string text(s);
  size_t slash = text.find('/');
  if (slash == std::string::npos) {
    if (!valid_int(text)) fail();
    return Rational(mpq_class(mpz_class(text)));
  }
  std::string p = text.substr(0, slash), q = text.substr(slash + 1);
  if (!valid_int(p) || !valid_int(q)) fail();
  mpz_class den(q);
  if (den == 0) throw std::invalid_argument("Rational: zero denominator in \"" + text + "\"");
  mpq_class v(mpz_class(p), den);
  v.canonicalize();
  return Rational(std::move(v));
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::pow(long e) const {
  if (e == 0) return Rational(1);
  if (is_zero()) {
    if (e < 0) throw std::domain_error("Rational: negative power of zero");
    return Rational(0);
  }
  mpq_class base = e < 0 ? mpq_class(1 / v_) : v_;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  mpq_class acc(1);
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return Rational(std::move(acc));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace hvr2
