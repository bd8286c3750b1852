#ifndef KMSLAB_KMS_HPP
#define KMSLAB_KMS_HPP

#include "kmslab/algebra.hpp"
#include "kmslab/group_traces.hpp"
#include "kmslab/groupoid.hpp"
#include "kmslab/measures.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kmslab {

// A tracial state on the isotropy group of one orbit representative,
// propagated along the orbit: phi_y(u_g) = phi_x(u_{h^{-1} g h}) for any
// arrow h: x -> y.  Well-defined because the trace is a class function;
// propagation verifies independence of the connecting arrow.
struct FieldOfTraces {
  const FiniteGroupoid *groupoid = nullptr;

  struct OrbitEntry {
    std::vector<int> orbit;         // unit indices
    int representative = -1;        // unit index
    FiniteGroup isotropy;           // at the representative
    std::vector<int> isotropy_arrows; // group element -> groupoid arrow
    ClassFunction tau;              // tracial state on `isotropy`
    // per unit of the orbit: local isotropy arrow -> propagated value
    std::map<int, std::map<int, Cyclotomic>> propagated;
  };
  std::vector<OrbitEntry> entries;

  const OrbitEntry *entry_for_unit(int unit) const;
};

// reps: (representative unit, tracial state on its isotropy group)
FieldOfTraces propagate_traces(const FiniteGroupoid &g, const Cocycle &c,
                               const std::vector<std::pair<int, ClassFunction>> &reps);

// w(unit x) = mu(x); w(g) = mu(x) phi_x(u_g) on isotropy; 0 elsewhere.
ExactFunctional construct_kms_state(const UnitMeasure &mu, const FieldOfTraces &field);

// Exact verdict per KMS condition, with witnesses.
struct KmsDiagnostic {
  bool linear = false;        // (L) [s(a)=r(b)] w(ab) = q^{c(a)} [s(b)=r(a)] w(ba)
  bool normalized = false;    // (N) unit weights sum to 1
  bool hermitian = false;     // (H) w(g^-1) = conj w(g)
  bool positive = false;      // (P) moment matrix PSD
  bool isotropy_zero = false; // (I) w = 0 on isotropy outside c^{-1}(0); vacuous here
  std::string witness_linear, witness_positive;

  bool all() const { return linear && normalized && hermitian && positive && isotropy_zero; }
};

KmsDiagnostic check_kms(const ExactFunctional &w, const Cocycle &c, const TemperatureParameter &q);

// One extreme KMS state with its provenance triple.
struct ExtremeState {
  ExactFunctional state;
  int orbit_index = -1;
  int vertex_index = -1;    // measure vertex (one per orbit)
  int character_index = -1; // -1: trivial isotropy, state is mu o E
};

struct KMSClassification {
  TemperatureParameter q;
  MeasurePolytope polytope;

  struct OrbitData {
    int representative = -1;
    bool trivial_isotropy = true;
    FiniteGroup isotropy;
    std::vector<int> isotropy_arrows;
    std::optional<CharacterTable> table;
    std::vector<TracialState> trace_extremes;
  };
  std::vector<OrbitData> orbit_data;
  std::vector<ExtremeState> extremes;
};

// Extreme KMS_beta states per the measure-vertex x extreme-trace recipe;
// every returned state is re-checked against check_kms.
KMSClassification classify(const FiniteGroupoid &g, const Cocycle &c, const TemperatureParameter &q,
                           std::uint64_t seed = 1);

// Affine space of hermitian normalized functionals satisfying the linear
// KMS constraints, solved independently of the classification theorems by
// propagating the two-term constraints through a union-find with rational
// multipliers.
struct OracleSolution {
  const FiniteGroupoid *groupoid = nullptr;
  TemperatureParameter q;
  ExactFunctional particular;              // normalized solution
  std::vector<ExactFunctional> directions; // hermitian, unit-mass-zero basis

  long dimension() const { return static_cast<long>(directions.size()); }
};

OracleSolution oracle_solution_space(const FiniteGroupoid &g, const Cocycle &c,
                                     const TemperatureParameter &q);

struct OracleComparison {
  bool forward_inclusion = false; // (a) every classified extreme lies in the oracle space
  std::string witness_inclusion;
  long classified_dim = -1; // affine dimension of the classified extreme set
  long oracle_dim = -1;
  bool dims_equal = false;
  bool positivity_cuts = false;   // PSD infeasible along some oracle direction (reported)
  std::string positivity_note;
  bool affinely_independent = false; // (c)

  // (b) passes when dimensions agree, or when the discrepancy is explained
  // by positivity cutting the oracle space (reported, not silently passed)
  bool dimension_check() const { return dims_equal || positivity_cuts; }
  bool all() const { return forward_inclusion && dimension_check() && affinely_independent; }
};

OracleComparison compare_with_oracle(const KMSClassification &cls, const OracleSolution &oracle,
                                     const FiniteGroupoid &g, const Cocycle &c);

} // namespace kmslab

#endif
