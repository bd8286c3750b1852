#ifndef KMSLAB_GROUP_TRACES_HPP
#define KMSLAB_GROUP_TRACES_HPP

#include "kmslab/algebra.hpp"
#include "kmslab/groupoid.hpp"
#include "kmslab/linalg.hpp"

#include <cstdint>
#include <vector>

namespace kmslab {

struct ConjugacyClasses {
  std::vector<std::vector<int>> classes; // partition of element indices, ordered by least member
  std::vector<int> class_of;             // element -> class index
  int identity_class = -1;
};

ConjugacyClasses conjugacy_classes(const FiniteGroup &g);

// Function constant on conjugacy classes, stored per class (exact lane).
struct ClassFunction {
  std::vector<Cyclotomic> values;

  Cyclotomic at_class(int cls) const { return values[cls]; }
};

// Invariant factor decomposition of a finite abelian group, obtained from
// the Smith normal form of an incremental relation matrix.
struct AbelianDecomposition {
  std::vector<long> factors;              // d_1 | d_2 | ... , each > 1 (empty for the trivial group)
  std::vector<int> generators;            // element index per factor
  std::vector<std::vector<long>> coords;  // element -> exponent tuple (mod factors)
};

AbelianDecomposition abelian_decomposition(const FiniteGroup &g); // throws NonAbelian

// All characters of a finite abelian group as per-element value rows,
// ordered lexicographically by dual exponent tuple.  Exact.
std::vector<std::vector<Cyclotomic>> abelian_characters(const FiniteGroup &g);

struct CharacterTable {
  ConjugacyClasses classes;
  std::vector<long> dimensions;                  // chi_i(e)
  bool exact = false;                            // exact rows verified
  std::vector<std::vector<Cyclotomic>> rows;     // per irreducible, per class; empty when !exact
  std::vector<std::vector<CF64>> float_rows;     // always populated
  double residual = 0.0;                         // float orthogonality defect
};

// Abelian groups get an exact table from the invariant-factor dual; other
// groups run the Burnside class-sum method in float, snapping to Gaussian
// integers when within 1e-6 and re-verifying exactly.  A float table whose
// orthogonality residual exceeds 1e-9 raises VerificationFailed.
CharacterTable character_table(const FiniteGroup &g, std::uint64_t seed = 1);

struct TracialState {
  ClassFunction phi;
  std::vector<PsdResult> certificate; // per-block LDL certificates of [phi(g^{-1}h)]
};

struct TracialCheck {
  bool tracial = false;
  std::string witness;
  PsdResult certificate;
};

// phi(e) = 1 and [phi(g^{-1} h)]_{g,h} hermitian PSD, checked by exact LDL.
TracialCheck is_tracial_state(const FiniteGroup &g, const ClassFunction &phi);

// Normalized irreducible characters chi_i / chi_i(e): the extreme points of
// the tracial simplex.  Requires an exact table.
std::vector<TracialState> tracial_extreme_points(const FiniteGroup &g, const CharacterTable &table);

// Coordinates of a tracial state in the extreme-point basis:
// lambda_i = d_i <phi, chi_i>.  Exact; sums to 1 for tracial states.
std::vector<Cyclotomic> trace_barycentric(const FiniteGroup &g, const CharacterTable &table,
                                          const ClassFunction &phi);

// Subgroup generated by the given elements (sorted element indices).
std::vector<int> subgroup_closure(const FiniteGroup &g, const std::vector<int> &generators);

// The subgroup as an abstract group plus the embedding back into g.
struct Subgroup {
  FiniteGroup group;
  std::vector<int> embedding; // subgroup element -> parent element index
};

Subgroup subgroup_of(const FiniteGroup &g, const std::vector<int> &members);

} // namespace kmslab

#endif
