#include "kmslab/rational.hpp"

#include "kmslab/errors.hpp"

#include <cctype>

namespace kmslab {

Rational parse_rational(const std::string &text) {
  if (text.empty()) throw SchemaError("empty rational literal");
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    // decimal: shift the point away and divide by the matching power of ten
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    for (char ch : digits)
      if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '-' && ch != '+')
        throw SchemaError("bad rational literal '" + text + "'");
    mpz_class num(digits.empty() ? "0" : digits), den(1);
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  try {
    Rational r(text);
    r.canonicalize();
    if (r.get_den() == 0) throw SchemaError("zero denominator in '" + text + "'");
    return r;
  } catch (const std::invalid_argument &) {
    throw SchemaError("bad rational literal '" + text + "'");
  }
}

std::string rational_to_string(const Rational &r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational rational_pow(const Rational &r, std::int64_t e) {
  if (e == 0) return Rational(1);
  if (r == 0 && e < 0) throw Error("zero raised to a negative power");
  Rational base = e > 0 ? r : Rational(r.get_den(), r.get_num());
  std::uint64_t n = e > 0 ? static_cast<std::uint64_t>(e) : static_cast<std::uint64_t>(-e);
  Rational acc(1);
  while (n) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  acc.canonicalize();
  return acc;
}

} // namespace kmslab
