#ifndef KMSLAB_AXB_HPP
#define KMSLAB_AXB_HPP

#include "kmslab/rational.hpp"

#include <string>
#include <vector>

namespace kmslab {

// Abstract ideal-semigroup data: a finite abelian class group given by its
// invariant factors and a finite list of primes with norms and classes.
// Norms and classes are user-supplied; no field arithmetic happens here.
struct IdealSemigroupData {
  struct Prime {
    std::string label;
    long norm = 0;            // >= 2
    std::vector<long> cls;    // class tuple modulo class_moduli
  };
  std::vector<long> class_moduli; // invariant factors; empty = trivial class group
  std::vector<Prime> primes;

  std::vector<long> class_of(const std::vector<int> &exponents) const;
  bool class_is_trivial(const std::vector<long> &cls) const;
};

IdealSemigroupData validate_ideal_data(const IdealSemigroupData &raw);

// K = Q: rational primes up to `bound`, trivial class group.
IdealSemigroupData rational_field_data(long bound);

// Integral ideal as an exponent vector over the prime list.
struct Ideal {
  std::vector<int> exponents;

  bool operator==(const Ideal &rhs) const { return exponents == rhs.exponents; }
  bool operator<(const Ideal &rhs) const { return exponents < rhs.exponents; }
};

long long ideal_norm(const IdealSemigroupData &data, const Ideal &ideal);

// Truncation descriptor: a norm bound, per-prime exponent caps, or both.
struct Truncation {
  long norm_bound = -1;
  std::vector<int> caps;

  bool has_norm_bound() const { return norm_bound >= 1; }
  bool has_caps() const { return !caps.empty(); }
  std::string describe() const;
};

// All exponent vectors inside the truncation, sorted by (norm, lex).
std::vector<Ideal> enumerate_ideals(const IdealSemigroupData &data, const Truncation &trunc);
std::vector<Ideal> enumerate_ideals(const IdealSemigroupData &data, long norm_bound);

// Real scalar that is exact precisely when the exponent is integral.
struct RealValue {
  bool exact = false;
  Rational rat;       // meaningful when exact
  double approx = 0.0;

  static RealValue from_rational(Rational r);
  static RealValue from_double(double d);
};

// zeta(s, [a]) truncated: sum of N^{-s} over ideals of class `cls`.
RealValue partial_zeta(const IdealSemigroupData &data, const Rational &s,
                       const std::vector<long> &cls, long norm_bound);
RealValue partial_zeta(const IdealSemigroupData &data, const Rational &s,
                       const std::vector<long> &cls, const Truncation &trunc);

struct TruncatedIdealMeasure {
  const IdealSemigroupData *data = nullptr;
  bool exact = true;
  std::vector<Ideal> support;          // sorted (norm, lex)
  std::vector<Rational> weights_exact; // aligned with support (exact mode)
  std::vector<double> weights_float;   // always aligned
  std::string truncation;
  // mass of the full product measure lost to the truncation (product form only)
  RealValue missing_mass;
  bool divergent_normalizer_warning = false; // beta <= 2 for the class form

  double weight_at(std::size_t i) const { return weights_float[i]; }
  long find(const Ideal &ideal) const; // index in support, -1 if absent
};

// nu_{a,beta}: weights proportional to N^{-(beta-1)} on the ideals of one
// class inside the truncation, normalized to a probability measure there.
TruncatedIdealMeasure nu_class_beta(const IdealSemigroupData &data, const std::vector<long> &cls,
                                    const Rational &beta, const Truncation &trunc);

// nu_beta = product over primes of (1 - N^{-(beta-1)}) sum N^{-(beta-1)n},
// truncated at per-prime exponent caps; reported with the missing mass.
TruncatedIdealMeasure nu_beta_product(const IdealSemigroupData &data, const std::vector<int> &caps,
                                      const Rational &beta);

struct ScalingCheck {
  bool ok = false;
  Ideal witness_b, witness_kb; // violating pair when !ok
};

// Ratio form of nu(kY) = N(k)^{-(beta-1)} nu(Y): exact in exact mode,
// relative 1e-12 tolerance in float mode.
ScalingCheck check_scaling(const TruncatedIdealMeasure &m, const Ideal &k, const Rational &beta);

// Haar lift: the mass of each ideal splits uniformly over N(b) residues.
// Entries stay per-ideal (the split is uniform); the pair view is
// (r, support[i]) -> per_residue[i] for r in [0, N(support[i])).
struct LiftedMeasure {
  const TruncatedIdealMeasure *base = nullptr;
  std::vector<long long> residue_counts;  // N(b) per support ideal
  std::vector<Rational> per_residue_exact;
  std::vector<double> per_residue_float;

  RealValue total_mass() const;
};

LiftedMeasure lift_mu_weights(const TruncatedIdealMeasure &m);

// Partial products prod_{v <= P} (1 - N_v^{-(beta-1)}) for each prefix size;
// the decay to zero is the uniqueness evidence for 1 < beta <= 2.
std::vector<RealValue> product_mass_decay(const IdealSemigroupData &data, const Rational &beta,
                                          const std::vector<int> &prefix_sizes);

} // namespace kmslab

#endif
