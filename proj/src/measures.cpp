#include "kmslab/measures.hpp"

#include "kmslab/errors.hpp"

namespace kmslab {

Rational UnitMeasure::total() const {
  Rational acc(0);
  for (const auto &w : weights) acc += w;
  return acc;
}

MeasurePolytope quasi_invariant_polytope(const FiniteGroupoid &g, const Cocycle &c,
                                         const TemperatureParameter &q) {
  MeasurePolytope out;
  out.orbit_blocks = orbits(g);
  std::vector<std::int64_t> p = cocycle_potential(g, c);

  // defense-in-depth: parallel arrows must agree on q^c, which the potential
  // traversal already certifies; re-check the ratio arrow-wise
  for (int a = 0; a < g.arrow_count(); ++a)
    if (p[g.tgt[a]] - p[g.src[a]] != c(a))
      throw NotACocycle("potential mismatch on arrow '" + g.arrows[a] + "'");

  for (const auto &block : out.orbit_blocks) {
    UnitMeasure mu;
    mu.groupoid = &g;
    mu.weights.assign(g.unit_count(), Rational(0));
    Rational mass(0);
    for (int u : block) {
      Rational w = rational_pow(q.q, p[u]);
      mu.weights[u] = w;
      mass += w;
    }
    for (int u : block) mu.weights[u] /= mass;
    out.vertices.push_back(std::move(mu));
  }
  return out;
}

RadonNikodymCheck check_radon_nikodym(const UnitMeasure &mu, const Cocycle &c,
                                      const TemperatureParameter &q) {
  const FiniteGroupoid &g = *mu.groupoid;
  for (int a = 0; a < g.arrow_count(); ++a) {
    if (mu.weights[g.tgt[a]] != rational_pow(q.q, c(a)) * mu.weights[g.src[a]])
      return {false, a};
  }
  return {true, -1};
}

} // namespace kmslab
