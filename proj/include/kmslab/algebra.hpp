#ifndef KMSLAB_ALGEBRA_HPP
#define KMSLAB_ALGEBRA_HPP

#include "kmslab/cyclotomic.hpp"
#include "kmslab/errors.hpp"
#include "kmslab/groupoid.hpp"
#include "kmslab/linalg.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace kmslab {

using CF64 = std::complex<double>;

// q = e^{-beta}; q < 1 is beta > 0, q = 1 is beta = 0.
struct TemperatureParameter {
  Rational q;
  explicit TemperatureParameter(Rational value) : q(std::move(value)) {
    if (q <= 0) throw Error("temperature parameter q must be positive");
  }
};

inline Cyclotomic scalar_conj(const Cyclotomic &v) { return v.conj(); }
inline CF64 scalar_conj(const CF64 &v) { return std::conj(v); }
inline bool scalar_is_zero(const Cyclotomic &v) { return v.is_zero(); }
inline bool scalar_is_zero(const CF64 &v) { return v == CF64(0.0, 0.0); }

// Finitely supported function on arrows; an element of the convolution
// *-algebra of the groupoid.  S is Cyclotomic (exact) or CF64 (float).
template <typename S>
struct Element {
  const FiniteGroupoid *groupoid = nullptr;
  std::map<int, S> coeffs; // arrow index -> nonzero coefficient

  static Element delta(const FiniteGroupoid &g, int arrow, S value = S(1)) {
    Element f;
    f.groupoid = &g;
    if (!scalar_is_zero(value)) f.coeffs[arrow] = value;
    return f;
  }

  S at(int arrow) const {
    auto it = coeffs.find(arrow);
    return it == coeffs.end() ? S(0) : it->second;
  }

  Element &operator+=(const Element &rhs) {
    require_same(rhs);
    for (const auto &[a, c] : rhs.coeffs) {
      coeffs[a] += c;
      if (scalar_is_zero(coeffs[a])) coeffs.erase(a);
    }
    return *this;
  }
  Element operator+(const Element &rhs) const {
    Element out = *this;
    out += rhs;
    return out;
  }
  Element operator*(const S &scale) const {
    Element out;
    out.groupoid = groupoid;
    if (scalar_is_zero(scale)) return out;
    for (const auto &[a, c] : coeffs) out.coeffs[a] = c * scale;
    return out;
  }
  Element operator-(const Element &rhs) const { return *this + rhs * S(-1); }

  bool operator==(const Element &rhs) const {
    if (groupoid != rhs.groupoid) return false;
    if (coeffs.size() != rhs.coeffs.size()) return false;
    for (const auto &[a, c] : coeffs) {
      auto it = rhs.coeffs.find(a);
      if (it == rhs.coeffs.end() || !scalar_is_zero(c - it->second)) return false;
    }
    return true;
  }

  void require_same(const Element &rhs) const {
    if (groupoid != rhs.groupoid && !(groupoid && rhs.groupoid && groupoid->same_instance(*rhs.groupoid)))
      throw GroupoidMismatch("elements live on different groupoids");
  }
};

// (f1 * f2)(g) = sum over h into r(g) of f1(h) f2(h^{-1} g)
template <typename S>
Element<S> convolve(const Element<S> &f1, const Element<S> &f2) {
  f1.require_same(f2);
  Element<S> out;
  out.groupoid = f1.groupoid;
  const FiniteGroupoid &g = *f1.groupoid;
  for (const auto &[a, ca] : f1.coeffs)
    for (const auto &[b, cb] : f2.coeffs) {
      if (!g.composable(a, b)) continue;
      int ab = g.compose(a, b);
      out.coeffs[ab] += ca * cb;
      if (scalar_is_zero(out.coeffs[ab])) out.coeffs.erase(ab);
    }
  return out;
}

// f*(g) = conj(f(g^{-1}))
template <typename S>
Element<S> star(const Element<S> &f) {
  Element<S> out;
  out.groupoid = f.groupoid;
  const FiniteGroupoid &g = *f.groupoid;
  for (const auto &[a, c] : f.coeffs) out.coeffs[g.inv[a]] = scalar_conj(c);
  return out;
}

// sigma at the analytic point t = i*beta: multiply by q^{c(g)}
Element<Cyclotomic> gibbs_twist(const Element<Cyclotomic> &f, const Cocycle &c,
                                const TemperatureParameter &q);
Element<CF64> gibbs_twist(const Element<CF64> &f, const Cocycle &c, const TemperatureParameter &q);

// sigma_t: multiply by e^{i t c(g)}; float mode only
Element<CF64> time_action(const Element<CF64> &f, const Cocycle &c, double t);

// restriction to unit arrows
template <typename S>
Element<S> conditional_expectation(const Element<S> &f) {
  Element<S> out;
  out.groupoid = f.groupoid;
  for (const auto &[a, c] : f.coeffs)
    if (f.groupoid->is_unit_arrow(a)) out.coeffs[a] = c;
  return out;
}

// Linear functional via w(g) = phi(delta_g); pairing phi(f) = sum f(g) w(g).
template <typename S>
struct Functional {
  const FiniteGroupoid *groupoid = nullptr;
  std::vector<S> weights; // dense, aligned with arrows

  static Functional zero(const FiniteGroupoid &g) {
    Functional w;
    w.groupoid = &g;
    w.weights.assign(g.arrow_count(), S(0));
    return w;
  }

  S operator()(const Element<S> &f) const {
    if (f.groupoid != groupoid && !(f.groupoid && f.groupoid->same_instance(*groupoid)))
      throw GroupoidMismatch("functional applied to a foreign element");
    S acc(0);
    for (const auto &[a, c] : f.coeffs) acc += c * weights[a];
    return acc;
  }

  bool is_hermitian() const {
    const FiniteGroupoid &g = *groupoid;
    for (int a = 0; a < g.arrow_count(); ++a)
      if (!scalar_is_zero(weights[a] - scalar_conj(weights[g.inv[a]]))) return false;
    return true;
  }

  S unit_mass() const {
    S acc(0);
    for (int u = 0; u < groupoid->unit_count(); ++u) acc += weights[groupoid->unit_arrow[u]];
    return acc;
  }

  bool is_normalized() const { return scalar_is_zero(unit_mass() - S(1)); }

  bool operator==(const Functional &rhs) const {
    if (groupoid != rhs.groupoid && !(groupoid && rhs.groupoid && groupoid->same_instance(*rhs.groupoid)))
      return false;
    for (std::size_t a = 0; a < weights.size(); ++a)
      if (!scalar_is_zero(weights[a] - rhs.weights[a])) return false;
    return true;
  }
};

using ExactElement = Element<Cyclotomic>;
using ExactFunctional = Functional<Cyclotomic>;
using FloatElement = Element<CF64>;
using FloatFunctional = Functional<CF64>;

// M[g,h] = w(g^{-1} h) when r(g) = r(h), else 0; hermitian by construction
// when w is hermitian (throws NotHermitian otherwise).
CycMatrix moment_matrix(const ExactFunctional &w);

struct PositivityResult {
  bool positive = false;
  std::string witness;           // set when not positive
  std::vector<PsdResult> blocks; // one certificate per range class (exact mode)
  double min_eigenvalue = 0.0;   // float mode
};

// Exact test: pivoted LDL* on each range-class block of the moment matrix.
PositivityResult is_positive(const ExactFunctional &w);
// Float test: minimum eigenvalue >= -1e-9 across range-class blocks.
PositivityResult is_positive(const FloatFunctional &w);

} // namespace kmslab

#endif
