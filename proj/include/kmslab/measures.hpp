#ifndef KMSLAB_MEASURES_HPP
#define KMSLAB_MEASURES_HPP

#include "kmslab/algebra.hpp"
#include "kmslab/groupoid.hpp"
#include "kmslab/rational.hpp"

#include <vector>

namespace kmslab {

struct UnitMeasure {
  const FiniteGroupoid *groupoid = nullptr;
  std::vector<Rational> weights; // per unit, nonnegative

  Rational total() const;
  bool is_probability() const { return total() == 1; }
};

// Solution set of the quasi-invariance constraints mu(r(g)) = q^{c(g)} mu(s(g)):
// one Gibbs vertex per orbit; the full set is the simplex they span.
struct MeasurePolytope {
  std::vector<std::vector<int>> orbit_blocks; // unit partition, least-unit order
  std::vector<UnitMeasure> vertices;          // aligned with orbit_blocks
};

MeasurePolytope quasi_invariant_polytope(const FiniteGroupoid &g, const Cocycle &c,
                                         const TemperatureParameter &q);

struct RadonNikodymCheck {
  bool ok = false;
  int witness_arrow = -1; // violating arrow when !ok
};

// Exact pointwise check of mu(r(g)) = q^{c(g)} mu(s(g)) over all arrows.
RadonNikodymCheck check_radon_nikodym(const UnitMeasure &mu, const Cocycle &c,
                                      const TemperatureParameter &q);

} // namespace kmslab

#endif
