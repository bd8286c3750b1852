#ifndef KMSLAB_RATIONAL_HPP
#define KMSLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace kmslab {

using Rational = mpq_class;

// Parses "p", "p/q" or a decimal like "1.25" into an exact rational.
Rational parse_rational(const std::string &text);

// Canonical "p" or "p/q" form.
std::string rational_to_string(const Rational &r);

// r^e for integer e (e may be negative; r must be nonzero then).
Rational rational_pow(const Rational &r, std::int64_t e);

inline double to_double(const Rational &r) { return r.get_d(); }

inline bool is_integer(const Rational &r) { return r.get_den() == 1; }

} // namespace kmslab

#endif
