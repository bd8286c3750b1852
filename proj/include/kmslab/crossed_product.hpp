#ifndef KMSLAB_CROSSED_PRODUCT_HPP
#define KMSLAB_CROSSED_PRODUCT_HPP

#include "kmslab/algebra.hpp"
#include "kmslab/group_traces.hpp"
#include "kmslab/groupoid.hpp"

#include <string>
#include <vector>

namespace kmslab {

// Finite dynamical system (X, T) with T a permutation: the Z-crossed product
// C(X) x Z handled at a Laurent truncation of degree M.
struct FiniteZSystem {
  std::vector<std::string> points;
  std::vector<int> shift; // T as a permutation of point indices
};

FiniteZSystem validate_z_system(const std::vector<std::string> &points,
                                const std::vector<int> &shift);

struct PeriodicOrbit {
  std::vector<int> cycle; // in traversal order from the least point
  long period = 0;
};

// cycle decomposition, ordered by least point
std::vector<PeriodicOrbit> periodic_orbits(const FiniteZSystem &sys);

// Fourier data of an n-rotation invariant probability measure on the circle,
// truncated at |m| <= M: c(0) = 1, c(-m) = conj c(m), support in nZ, and the
// order-M Toeplitz matrix [c(j-k)] PSD.  The truncation certifies order-M
// positivity only; by the trigonometric moment theorem that is exactly
// extendability of the truncated data.
struct MomentSequence {
  long period = 1;
  long cutoff = 0;
  std::vector<Cyclotomic> moments; // index m + cutoff, m in [-cutoff, cutoff]

  const Cyclotomic &at(long m) const;
  // throws NotATrace naming the violated invariant
  void validate() const;
};

// Periodic part of a trace on C(X) x Z: weighted rotation-invariant circle
// measures over charged orbits.  On finite X there is no aperiodic part; the
// Haar entry plays that role.
struct TraceData {
  const FiniteZSystem *system = nullptr;
  struct Entry {
    int orbit_index = -1;
    Rational weight;
    MomentSequence lambda;
  };
  std::vector<Entry> entries;
};

// E_x(f u^m) = (1/n) sum_k f(T^k x); the u^m marker is the caller's
Cyclotomic expectation_Ex(const std::vector<Cyclotomic> &f, long m, const PeriodicOrbit &orbit);

// tau(f u^m) = sum over entries of weight * c(m) * E_x(f)
Cyclotomic trace_from_data(const TraceData &data, const std::vector<Cyclotomic> &f, long m);

// Inverse of trace_from_data on indicator values: values[orbit][m + M] =
// tau(1_O u^m).  Validates the moment-sequence invariants and weight
// normalization; throws NotATrace with a witness.
TraceData decompose_trace(const FiniteZSystem &sys,
                          const std::vector<std::vector<Cyclotomic>> &values, long cutoff);

// Probability measure on X x dual(Gamma) driving a trace on C(X) x Gamma for
// finite abelian Gamma.  Characters are indexed per abelian_characters order.
struct AbelianTraceMeasure {
  std::vector<std::vector<Rational>> weights; // point -> (character -> mass)
};

// Validates Gamma-invariance in x and Gamma_x-perp invariance of the fibers,
// then assembles the trace functional on the transformation groupoid:
// w(g, x) = sum_chi chi(g) nu(x, chi) on isotropy, zero off isotropy (the
// off-isotropy Fourier sums must vanish and are asserted to).
ExactFunctional abelian_trace_measure(const FiniteGroup &gamma,
                                      const std::vector<std::string> &space,
                                      const std::vector<int> &action,
                                      const AbelianTraceMeasure &nu, const FiniteGroupoid &tg);

struct ExtremalTraceTriple {
  int orbit_index = -1;
  std::vector<int> orbit;      // point indices
  std::vector<int> stabilizer; // element indices of H inside gamma
  int character_index = -1;    // per abelian_characters order on H
  ExactFunctional trace;       // on the transformation groupoid
};

// One extreme trace per (orbit, character of the orbit stabilizer): the
// ergodic invariant measures on a finite space are the uniform orbit
// measures.  Gamma must be abelian.
std::vector<ExtremalTraceTriple> extremal_traces_enumerate(const FiniteGroup &gamma,
                                                           const std::vector<std::string> &space,
                                                           const std::vector<int> &action,
                                                           const FiniteGroupoid &tg);

} // namespace kmslab

#endif
