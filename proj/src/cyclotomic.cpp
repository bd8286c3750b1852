#include "kmslab/cyclotomic.hpp"

#include "kmslab/errors.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <vector>

namespace kmslab {

namespace {

constexpr long kMaxOrder = 20000;

// Cyclotomic polynomial Phi_n as a dense integer coefficient vector,
// computed by dividing x^n - 1 by all proper Phi_d (in divisor order).
const std::vector<mpz_class> &cyclotomic_poly(long n) {
  static std::map<long, std::vector<mpz_class>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  for (long m = 1; m <= n; ++m) {
    if (n % m != 0 || cache.count(m)) continue;
    std::vector<mpz_class> num;
    if (m == 1) {
      num = {mpz_class(-1), mpz_class(1)}; // x - 1
    } else {
      num.assign(m + 1, mpz_class(0));
      num[0] = -1;
      num[m] = 1;
      for (long d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        const auto &den = cache.at(d);
        std::vector<mpz_class> quo(num.size() - den.size() + 1, mpz_class(0));
        std::vector<mpz_class> rem = num;
        for (long k = static_cast<long>(quo.size()) - 1; k >= 0; --k) {
          mpz_class coeff = rem[k + den.size() - 1] / den.back();
          quo[k] = coeff;
          if (coeff == 0) continue;
          for (std::size_t j = 0; j < den.size(); ++j) rem[k + j] -= coeff * den[j];
        }
        num = quo;
      }
    }
    cache.emplace(m, std::move(num));
  }
  return cache.at(n);
}

long gcd_long(long a, long b) { return std::gcd(a, b); }

} // namespace

Cyclotomic::Cyclotomic(const Rational &value) : order_(1) {
  if (value != 0) terms_[0] = value;
}

Cyclotomic Cyclotomic::root_of_unity(long order, long exponent) {
  if (order <= 0) throw Error("root of unity needs positive order");
  Cyclotomic v;
  v.order_ = order;
  long e = exponent % order;
  if (e < 0) e += order;
  v.terms_.clear();
  v.terms_[e] = Rational(1);
  v.canonicalize();
  return v;
}

Cyclotomic Cyclotomic::from_complex_rational(const Rational &re, const Rational &im) {
  Cyclotomic v(re);
  if (im != 0) v += Cyclotomic(im) * i();
  return v;
}

Cyclotomic Cyclotomic::i() { return root_of_unity(4, 1); }

Cyclotomic Cyclotomic::promoted(const Cyclotomic &v, long order) {
  if (v.order_ == order) return v;
  long factor = order / v.order_;
  Cyclotomic out;
  out.order_ = order;
  for (const auto &[e, c] : v.terms_) out.terms_[e * factor] = c;
  return out;
}

void Cyclotomic::canonicalize() {
  // exponents mod order
  {
    std::map<long, Rational> folded;
    for (auto &[e, c] : terms_) {
      long k = e % order_;
      if (k < 0) k += order_;
      folded[k] += c;
    }
    terms_ = std::move(folded);
  }
  // reduce modulo Phi_order: dense remainder, degree drops below phi(order)
  const auto &phi = cyclotomic_poly(order_);
  long deg_phi = static_cast<long>(phi.size()) - 1;
  std::vector<Rational> dense(order_, Rational(0));
  for (const auto &[e, c] : terms_) dense[e] = c;
  for (long k = order_ - 1; k >= deg_phi; --k) {
    if (dense[k] == 0) continue;
    Rational coeff = dense[k]; // phi is monic
    for (long j = 0; j <= deg_phi; ++j) dense[k - deg_phi + j] -= coeff * phi[j];
  }
  terms_.clear();
  for (long k = 0; k < deg_phi && k < order_; ++k) {
    if (dense[k] != 0) terms_[k] = dense[k];
  }
  // lower the order when every exponent shares a factor with it
  while (order_ > 1) {
    long g = order_;
    for (const auto &[e, c] : terms_) g = gcd_long(g, e);
    if (g <= 1) break;
    long next = order_ / g;
    std::map<long, Rational> lowered;
    for (auto &[e, c] : terms_) lowered[e / g] = std::move(c);
    order_ = next;
    terms_ = std::move(lowered);
    // re-reduce in the smaller field, then try again
    const auto &phi2 = cyclotomic_poly(order_);
    long d2 = static_cast<long>(phi2.size()) - 1;
    bool needs = false;
    for (const auto &[e, c] : terms_)
      if (e >= d2) needs = true;
    if (needs) {
      std::vector<Rational> dn(order_, Rational(0));
      for (const auto &[e, c] : terms_) dn[e] = c;
      for (long k = order_ - 1; k >= d2; --k) {
        if (dn[k] == 0) continue;
        Rational coeff = dn[k];
        for (long j = 0; j <= d2; ++j) dn[k - d2 + j] -= coeff * phi2[j];
      }
      terms_.clear();
      for (long k = 0; k < d2 && k < order_; ++k)
        if (dn[k] != 0) terms_[k] = dn[k];
    }
  }
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic &rhs) const {
  long l = std::lcm(order_, rhs.order_);
  if (l > kMaxOrder) throw Error("cyclotomic order overflow");
  Cyclotomic a = promoted(*this, l), b = promoted(rhs, l);
  for (const auto &[e, c] : b.terms_) a.terms_[e] += c;
  a.canonicalize();
  return a;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic &rhs) const { return *this + (-rhs); }

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic v = *this;
  for (auto &[e, c] : v.terms_) c = -c;
  return v;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic &rhs) const {
  long l = std::lcm(order_, rhs.order_);
  if (l > kMaxOrder) throw Error("cyclotomic order overflow");
  Cyclotomic a = promoted(*this, l), b = promoted(rhs, l);
  Cyclotomic out;
  out.order_ = l;
  for (const auto &[ea, ca] : a.terms_)
    for (const auto &[eb, cb] : b.terms_) out.terms_[(ea + eb) % l] += ca * cb;
  out.canonicalize();
  return out;
}

Cyclotomic Cyclotomic::operator/(const Cyclotomic &rhs) const {
  if (rhs.is_zero()) throw Error("division by zero scalar");
  if (rhs.is_rational()) {
    Cyclotomic out = *this;
    Rational r = rhs.rational_value();
    for (auto &[e, c] : out.terms_) c /= r;
    return out;
  }
  // invert via extended Euclid against Phi_N in Q[x]
  long n = rhs.order_;
  const auto &phi_z = cyclotomic_poly(n);
  std::vector<Rational> phi(phi_z.size());
  for (std::size_t k = 0; k < phi_z.size(); ++k) phi[k] = Rational(phi_z[k]);
  std::vector<Rational> b(phi.size() - 1, Rational(0));
  for (const auto &[e, c] : rhs.terms_) b[e] = c;

  auto deg = [](const std::vector<Rational> &p) {
    long d = static_cast<long>(p.size()) - 1;
    while (d >= 0 && p[d] == 0) --d;
    return d;
  };
  // extended gcd: maintain r0 = phi*s + b*t with only t tracked
  std::vector<Rational> r0 = phi, r1 = b;
  std::vector<Rational> t0 = {Rational(0)}, t1 = {Rational(1)};
  while (deg(r1) > 0) {
    long d0 = deg(r0), d1 = deg(r1);
    std::vector<Rational> q(std::max<long>(d0 - d1 + 1, 1), Rational(0));
    std::vector<Rational> rem = r0;
    for (long k = d0 - d1; k >= 0; --k) {
      Rational coeff = rem[k + d1] / r1[d1];
      q[k] = coeff;
      if (coeff == 0) continue;
      for (long j = 0; j <= d1; ++j) rem[k + j] -= coeff * r1[j];
    }
    // t_next = t0 - q*t1
    std::vector<Rational> tn(std::max(t0.size(), q.size() + t1.size()), Rational(0));
    for (std::size_t k = 0; k < t0.size(); ++k) tn[k] = t0[k];
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (q[k] == 0) continue;
      for (std::size_t j = 0; j < t1.size(); ++j) tn[k + j] -= q[k] * t1[j];
    }
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(tn);
  }
  long d1 = deg(r1);
  if (d1 < 0) throw Error("non-invertible cyclotomic (unexpected)");
  Rational lead = r1[d1]; // constant gcd
  Cyclotomic inv;
  inv.order_ = n;
  for (std::size_t k = 0; k < t1.size(); ++k) {
    if (t1[k] == 0) continue;
    inv.terms_[static_cast<long>(k) % n] += t1[k] / lead;
  }
  inv.canonicalize();
  return *this * inv;
}

Cyclotomic Cyclotomic::conj() const {
  Cyclotomic v;
  v.order_ = order_;
  for (const auto &[e, c] : terms_) v.terms_[e == 0 ? 0 : order_ - e] += c;
  v.canonicalize();
  return v;
}

Cyclotomic Cyclotomic::real_part() const {
  Cyclotomic v = (*this + conj());
  for (auto &[e, c] : v.terms_) c /= 2;
  return v;
}

Cyclotomic Cyclotomic::imag_part() const {
  Cyclotomic v = (*this - conj()) / (Cyclotomic(2) * i());
  return v;
}

bool Cyclotomic::operator==(const Cyclotomic &rhs) const { return (*this - rhs).is_zero(); }

bool Cyclotomic::is_rational() const {
  return terms_.empty() || (order_ == 1);
}

bool Cyclotomic::is_gaussian() const {
  return is_rational() || order_ == 4;
}

bool Cyclotomic::is_real() const { return *this == conj(); }

Rational Cyclotomic::rational_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_rational()) throw Error("scalar is not rational: " + to_string());
  return terms_.begin()->second;
}

Rational Cyclotomic::gaussian_real() const {
  if (!is_gaussian()) throw Error("scalar is not Gaussian rational: " + to_string());
  auto it = terms_.find(0);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Cyclotomic::gaussian_imag() const {
  if (!is_gaussian()) throw Error("scalar is not Gaussian rational: " + to_string());
  auto it = terms_.find(1);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::complex<double> Cyclotomic::to_complex() const {
  std::complex<double> acc(0.0, 0.0);
  const double tau = 6.283185307179586476925286766559;
  for (const auto &[e, c] : terms_) {
    double angle = tau * static_cast<double>(e) / static_cast<double>(order_);
    acc += to_double(c) * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc;
}

int Cyclotomic::sign_real() const {
  if (is_zero()) return 0;
  if (is_rational()) return sgn(rational_value());
  if (!is_real()) throw Error("sign of a non-real scalar: " + to_string());

  // fast path: double evaluation with a conservative error budget
  double coeff_mass = 0.0;
  for (const auto &[e, c] : terms_) coeff_mass += std::abs(to_double(c));
  double v = to_complex().real();
  double err = 1e-12 * (coeff_mass + 1.0);
  if (std::abs(v) > err) return v > 0 ? 1 : -1;

  // escalate with mpfr until the magnitude clears the rounding budget;
  // the value is exactly nonzero, so this terminates
  for (mpfr_prec_t prec = 256; prec <= 1 << 16; prec *= 4) {
    mpfr_t acc, term, angle, pi, tmp;
    mpfr_inits2(prec, acc, term, angle, pi, tmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(acc, 1);
    mpfr_const_pi(pi, MPFR_RNDN);
    for (const auto &[e, c] : terms_) {
      mpfr_mul_si(angle, pi, 2 * e, MPFR_RNDN);
      mpfr_div_si(angle, angle, order_, MPFR_RNDN);
      mpfr_cos(term, angle, MPFR_RNDN);
      mpfr_set_q(tmp, c.get_mpq_t(), MPFR_RNDN);
      mpfr_mul(term, term, tmp, MPFR_RNDN);
      mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    double mag = std::abs(mpfr_get_d(acc, MPFR_RNDN));
    int s = mpfr_sgn(acc);
    mpfr_clears(acc, term, angle, pi, tmp, static_cast<mpfr_ptr>(nullptr));
    double budget = (static_cast<double>(terms_.size()) + 4.0) * (coeff_mass + 1.0) *
                    std::ldexp(1.0, -static_cast<int>(prec) + 4);
    if (mag > budget) return s;
  }
  throw VerificationFailed("could not certify sign of " + to_string());
}

std::string Cyclotomic::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto &[e, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += rational_to_string(c);
    if (e != 0) out += "*z" + std::to_string(order_) + "^" + std::to_string(e);
  }
  return out;
}

} // namespace kmslab
