#ifndef KMSLAB_CYCLOTOMIC_HPP
#define KMSLAB_CYCLOTOMIC_HPP

#include "kmslab/rational.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace kmslab {

// Exact complex scalar: an element of the cyclotomic field Q(zeta_N),
// stored as a sparse polynomial sum_k a_k zeta_N^k with rational a_k.
// Values are kept canonical: exponents reduced modulo the N-th cyclotomic
// polynomial, zero coefficients dropped, and the order N lowered whenever
// all exponents share a factor with N.  Rationals are the order-1 case and
// Gaussian rationals the order-4 case, so ordinary arithmetic stays cheap.
class Cyclotomic {
public:
  Cyclotomic() : order_(1) {}
  Cyclotomic(int value) { *this = Cyclotomic(Rational(value)); }
  explicit Cyclotomic(const Rational &value);

  // zeta_order^exponent
  static Cyclotomic root_of_unity(long order, long exponent);
  static Cyclotomic from_complex_rational(const Rational &re, const Rational &im);
  static Cyclotomic i();

  Cyclotomic operator+(const Cyclotomic &rhs) const;
  Cyclotomic operator-(const Cyclotomic &rhs) const;
  Cyclotomic operator-() const;
  Cyclotomic operator*(const Cyclotomic &rhs) const;
  Cyclotomic operator/(const Cyclotomic &rhs) const;
  Cyclotomic &operator+=(const Cyclotomic &rhs) { return *this = *this + rhs; }
  Cyclotomic &operator-=(const Cyclotomic &rhs) { return *this = *this - rhs; }
  Cyclotomic &operator*=(const Cyclotomic &rhs) { return *this = *this * rhs; }
  Cyclotomic &operator/=(const Cyclotomic &rhs) { return *this = *this / rhs; }

  Cyclotomic conj() const;
  Cyclotomic real_part() const;
  Cyclotomic imag_part() const; // the real number Im(v), not i*Im(v)

  bool is_zero() const { return terms_.empty(); }
  bool operator==(const Cyclotomic &rhs) const;
  bool operator!=(const Cyclotomic &rhs) const { return !(*this == rhs); }

  bool is_rational() const;
  bool is_gaussian() const; // lies in Q(i)
  bool is_real() const;

  // Valid only when the respective predicate holds.
  Rational rational_value() const;
  Rational gaussian_real() const;
  Rational gaussian_imag() const;

  // Sign of a real value: -1, 0, +1.  Exact; escalates evaluation
  // precision until the sign is certified.
  int sign_real() const;

  std::complex<double> to_complex() const;

  long order() const { return order_; }
  const std::map<long, Rational> &terms() const { return terms_; }

  std::string to_string() const;

private:
  long order_;
  std::map<long, Rational> terms_; // exponent (0 <= e < order_) -> nonzero coefficient

  void canonicalize();
  static Cyclotomic promoted(const Cyclotomic &v, long order);
};

inline Cyclotomic operator*(const Rational &a, const Cyclotomic &b) { return Cyclotomic(a) * b; }

} // namespace kmslab

#endif
