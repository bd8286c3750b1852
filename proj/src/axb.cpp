#include "kmslab/axb.hpp"

#include "kmslab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace kmslab {

std::vector<long> IdealSemigroupData::class_of(const std::vector<int> &exponents) const {
  std::vector<long> cls(class_moduli.size(), 0);
  for (std::size_t v = 0; v < exponents.size(); ++v) {
    if (exponents[v] == 0) continue;
    for (std::size_t j = 0; j < class_moduli.size(); ++j)
      cls[j] = (cls[j] + exponents[v] * primes[v].cls[j]) % class_moduli[j];
  }
  return cls;
}

bool IdealSemigroupData::class_is_trivial(const std::vector<long> &cls) const {
  for (long c : cls)
    if (c != 0) return false;
  return true;
}

IdealSemigroupData validate_ideal_data(const IdealSemigroupData &raw) {
  for (long d : raw.class_moduli)
    if (d < 1) throw SchemaError("class group moduli must be positive");
  std::set<std::string> labels;
  for (const auto &p : raw.primes) {
    if (p.norm < 2) throw SchemaError("prime norm must be at least 2 ('" + p.label + "')");
    if (!labels.insert(p.label).second) throw SchemaError("duplicate prime label '" + p.label + "'");
    if (p.cls.size() != raw.class_moduli.size())
      throw SchemaError("class tuple of '" + p.label + "' has wrong length");
    for (std::size_t j = 0; j < p.cls.size(); ++j)
      if (p.cls[j] < 0 || p.cls[j] >= raw.class_moduli[j])
        throw SchemaError("class tuple of '" + p.label + "' out of range");
  }
  return raw;
}

IdealSemigroupData rational_field_data(long bound) {
  IdealSemigroupData data;
  std::vector<bool> sieve(std::max<long>(bound + 1, 2), true);
  for (long p = 2; p <= bound; ++p) {
    if (!sieve[p]) continue;
    for (long q = 2 * p; q <= bound; q += p) sieve[q] = false;
    data.primes.push_back({"p" + std::to_string(p), p, {}});
  }
  return data;
}

long long ideal_norm(const IdealSemigroupData &data, const Ideal &ideal) {
  long long n = 1;
  for (std::size_t v = 0; v < ideal.exponents.size(); ++v)
    for (int e = 0; e < ideal.exponents[v]; ++e) n *= data.primes[v].norm;
  return n;
}

std::string Truncation::describe() const {
  std::ostringstream os;
  if (has_norm_bound()) os << "norm<=" << norm_bound;
  if (has_caps()) {
    if (has_norm_bound()) os << ",";
    os << "caps=[";
    for (std::size_t i = 0; i < caps.size(); ++i) os << (i ? "," : "") << caps[i];
    os << "]";
  }
  return os.str();
}

namespace {

void enumerate_rec(const IdealSemigroupData &data, const Truncation &trunc, std::size_t v,
                   long long norm, std::vector<int> &exp, std::vector<Ideal> &out) {
  if (v == data.primes.size()) {
    out.push_back(Ideal{exp});
    return;
  }
  int cap = trunc.has_caps() ? trunc.caps[v] : std::numeric_limits<int>::max();
  long long cur = norm;
  for (int e = 0;; ++e) {
    if (e > cap) break;
    if (trunc.has_norm_bound() && cur > trunc.norm_bound) break;
    exp[v] = e;
    enumerate_rec(data, trunc, v + 1, cur, exp, out);
    if (trunc.has_norm_bound()) {
      if (cur > trunc.norm_bound / data.primes[v].norm) break; // next power overflows the bound
      cur *= data.primes[v].norm;
    } else {
      cur *= data.primes[v].norm;
    }
  }
  exp[v] = 0;
}

} // namespace

std::vector<Ideal> enumerate_ideals(const IdealSemigroupData &data, const Truncation &trunc) {
  if (!trunc.has_norm_bound() && !trunc.has_caps())
    throw Error("truncation needs a norm bound or exponent caps");
  if (trunc.has_caps() && trunc.caps.size() != data.primes.size())
    throw Error("exponent caps must match the prime list");
  std::vector<Ideal> out;
  std::vector<int> exp(data.primes.size(), 0);
  enumerate_rec(data, trunc, 0, 1, exp, out);
  std::sort(out.begin(), out.end(), [&](const Ideal &a, const Ideal &b) {
    long long na = ideal_norm(data, a), nb = ideal_norm(data, b);
    if (na != nb) return na < nb;
    return a.exponents < b.exponents;
  });
  return out;
}

std::vector<Ideal> enumerate_ideals(const IdealSemigroupData &data, long norm_bound) {
  if (norm_bound < 1) throw Error("norm bound must be at least 1");
  Truncation trunc;
  trunc.norm_bound = norm_bound;
  return enumerate_ideals(data, trunc);
}

RealValue RealValue::from_rational(Rational r) {
  RealValue v;
  v.exact = true;
  v.approx = to_double(r);
  v.rat = std::move(r);
  return v;
}

RealValue RealValue::from_double(double d) {
  RealValue v;
  v.exact = false;
  v.approx = d;
  return v;
}

namespace {

// N^{-s}: exact rational when s is a (positive or negative) integer
RealValue norm_power(long long norm, const Rational &minus_exponent) {
  if (is_integer(minus_exponent)) {
    long e = static_cast<long>(minus_exponent.get_num().get_si());
    return RealValue::from_rational(rational_pow(Rational(static_cast<long>(norm)), -e));
  }
  return RealValue::from_double(std::pow(static_cast<double>(norm), -to_double(minus_exponent)));
}

} // namespace

RealValue partial_zeta(const IdealSemigroupData &data, const Rational &s,
                       const std::vector<long> &cls, const Truncation &trunc) {
  bool exact = is_integer(s);
  Rational acc_r(0);
  double acc_d = 0.0;
  for (const Ideal &ideal : enumerate_ideals(data, trunc)) {
    if (data.class_of(ideal.exponents) != cls) continue;
    RealValue term = norm_power(ideal_norm(data, ideal), s);
    if (exact)
      acc_r += term.rat;
    else
      acc_d += term.approx;
  }
  return exact ? RealValue::from_rational(acc_r) : RealValue::from_double(acc_d);
}

RealValue partial_zeta(const IdealSemigroupData &data, const Rational &s,
                       const std::vector<long> &cls, long norm_bound) {
  Truncation trunc;
  trunc.norm_bound = norm_bound;
  return partial_zeta(data, s, cls, trunc);
}

long TruncatedIdealMeasure::find(const Ideal &ideal) const {
  for (std::size_t i = 0; i < support.size(); ++i)
    if (support[i] == ideal) return static_cast<long>(i);
  return -1;
}

TruncatedIdealMeasure nu_class_beta(const IdealSemigroupData &data, const std::vector<long> &cls,
                                    const Rational &beta, const Truncation &trunc) {
  Rational s = beta - 1;
  TruncatedIdealMeasure m;
  m.data = &data;
  m.exact = is_integer(s);
  m.truncation = trunc.describe();
  m.divergent_normalizer_warning = beta <= 2;

  for (const Ideal &ideal : enumerate_ideals(data, trunc))
    if (data.class_of(ideal.exponents) == cls) m.support.push_back(ideal);
  if (m.support.empty())
    throw EmptyClassInTruncation("no ideals of the requested class inside " + m.truncation);

  if (m.exact) {
    Rational zeta(0);
    for (const Ideal &ideal : m.support) {
      Rational term = norm_power(ideal_norm(data, ideal), s).rat;
      m.weights_exact.push_back(term);
      zeta += term;
    }
    for (auto &w : m.weights_exact) {
      w /= zeta;
      m.weights_float.push_back(to_double(w));
    }
  } else {
    double zeta = 0.0;
    for (const Ideal &ideal : m.support) {
      double term = norm_power(ideal_norm(data, ideal), s).approx;
      m.weights_float.push_back(term);
      zeta += term;
    }
    for (auto &w : m.weights_float) w /= zeta;
  }
  m.missing_mass = RealValue::from_rational(Rational(0)); // probability on the truncation
  return m;
}

TruncatedIdealMeasure nu_beta_product(const IdealSemigroupData &data, const std::vector<int> &caps,
                                      const Rational &beta) {
  if (beta <= 1) throw Error("nu_beta needs beta > 1");
  Rational s = beta - 1;
  TruncatedIdealMeasure m;
  m.data = &data;
  m.exact = is_integer(s);
  Truncation trunc;
  trunc.caps = caps;
  m.truncation = trunc.describe();
  m.support = enumerate_ideals(data, trunc);

  if (m.exact) {
    // per-prime factor (1 - N^{-s}) N^{-s e}
    std::vector<Rational> head(data.primes.size());
    std::vector<Rational> ratio(data.primes.size());
    for (std::size_t v = 0; v < data.primes.size(); ++v) {
      ratio[v] = norm_power(data.primes[v].norm, s).rat;
      head[v] = Rational(1) - ratio[v];
    }
    for (const Ideal &ideal : m.support) {
      Rational w(1);
      for (std::size_t v = 0; v < data.primes.size(); ++v)
        w *= head[v] * rational_pow(ratio[v], ideal.exponents[v]);
      m.weights_exact.push_back(w);
      m.weights_float.push_back(to_double(w));
    }
    // truncated mass = prod_v (1 - N^{-s (cap+1)})
    Rational mass(1);
    for (std::size_t v = 0; v < data.primes.size(); ++v)
      mass *= Rational(1) - rational_pow(ratio[v], caps[v] + 1);
    m.missing_mass = RealValue::from_rational(Rational(1) - mass);
  } else {
    std::vector<double> head(data.primes.size());
    std::vector<double> ratio(data.primes.size());
    for (std::size_t v = 0; v < data.primes.size(); ++v) {
      ratio[v] = norm_power(data.primes[v].norm, s).approx;
      head[v] = 1.0 - ratio[v];
    }
    for (const Ideal &ideal : m.support) {
      double w = 1.0;
      for (std::size_t v = 0; v < data.primes.size(); ++v)
        w *= head[v] * std::pow(ratio[v], ideal.exponents[v]);
      m.weights_float.push_back(w);
    }
    double mass = 1.0;
    for (std::size_t v = 0; v < data.primes.size(); ++v)
      mass *= 1.0 - std::pow(ratio[v], caps[v] + 1);
    m.missing_mass = RealValue::from_double(1.0 - mass);
  }
  return m;
}

ScalingCheck check_scaling(const TruncatedIdealMeasure &m, const Ideal &k, const Rational &beta) {
  const IdealSemigroupData &data = *m.data;
  Rational s = beta - 1;
  RealValue factor = norm_power(ideal_norm(data, k), s);

  std::map<Ideal, long> index;
  for (std::size_t i = 0; i < m.support.size(); ++i) index[m.support[i]] = static_cast<long>(i);

  for (std::size_t i = 0; i < m.support.size(); ++i) {
    Ideal shifted = m.support[i];
    for (std::size_t v = 0; v < shifted.exponents.size(); ++v)
      shifted.exponents[v] += k.exponents[v];
    auto it = index.find(shifted);
    if (it == index.end()) continue; // k*b leaves the truncation
    if (m.exact) {
      if (m.weights_exact[it->second] != factor.rat * m.weights_exact[i])
        return {false, m.support[i], shifted};
    } else {
      double lhs = m.weights_float[it->second];
      double rhs = factor.approx * m.weights_float[i];
      if (std::abs(lhs - rhs) > 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0))
        return {false, m.support[i], shifted};
    }
  }
  return {true, {}, {}};
}

RealValue LiftedMeasure::total_mass() const {
  if (base->exact) {
    Rational acc(0);
    for (std::size_t i = 0; i < per_residue_exact.size(); ++i)
      acc += per_residue_exact[i] * Rational(static_cast<long>(residue_counts[i]));
    return RealValue::from_rational(acc);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < per_residue_float.size(); ++i)
    acc += per_residue_float[i] * static_cast<double>(residue_counts[i]);
  return RealValue::from_double(acc);
}

LiftedMeasure lift_mu_weights(const TruncatedIdealMeasure &m) {
  LiftedMeasure lift;
  lift.base = &m;
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    long long n = ideal_norm(*m.data, m.support[i]);
    lift.residue_counts.push_back(n);
    if (m.exact)
      lift.per_residue_exact.push_back(m.weights_exact[i] / Rational(static_cast<long>(n)));
    lift.per_residue_float.push_back(m.weights_float[i] / static_cast<double>(n));
  }
  return lift;
}

std::vector<RealValue> product_mass_decay(const IdealSemigroupData &data, const Rational &beta,
                                          const std::vector<int> &prefix_sizes) {
  if (beta <= 1) throw Error("product mass decay needs beta > 1");
  Rational s = beta - 1;
  std::vector<RealValue> out;
  if (is_integer(s)) {
    Rational acc(1);
    std::size_t done = 0;
    for (int p : prefix_sizes) {
      std::size_t upto = std::min<std::size_t>(p, data.primes.size());
      for (; done < upto; ++done) acc *= Rational(1) - norm_power(data.primes[done].norm, s).rat;
      out.push_back(RealValue::from_rational(acc));
    }
  } else {
    double acc = 1.0;
    std::size_t done = 0;
    for (int p : prefix_sizes) {
      std::size_t upto = std::min<std::size_t>(p, data.primes.size());
      for (; done < upto; ++done) acc *= 1.0 - norm_power(data.primes[done].norm, s).approx;
      out.push_back(RealValue::from_double(acc));
    }
  }
  return out;
}

} // namespace kmslab
