#ifndef KMSLAB_GROUPOID_HPP
#define KMSLAB_GROUPOID_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kmslab {

// Finite group given by its full multiplication table.  Element ids are
// opaque strings; indices refer to the stored (lexicographically sorted) order.
struct FiniteGroup {
  std::vector<std::string> elements;
  std::vector<int> mul; // mul[i * n + j] = index of elements[i] * elements[j]
  std::vector<int> inverse;
  int identity = -1;

  int order() const { return static_cast<int>(elements.size()); }
  int op(int i, int j) const { return mul[i * order() + j]; }
  int element_index(const std::string &id) const;
  bool is_abelian() const;
};

// Verifies the group axioms on the full table; throws MalformedGroupoid.
FiniteGroup validate_group(const std::vector<std::string> &elements,
                           const std::vector<std::vector<std::string>> &table);

// Finite etale groupoid: units embedded as unit arrows, total composition
// on composable pairs, involutive inverse.
struct FiniteGroupoid {
  std::vector<std::string> units;
  std::vector<std::string> arrows;
  std::vector<int> src, tgt;    // arrow -> unit index
  std::vector<int> inv;         // arrow -> arrow index
  std::vector<int> unit_arrow;  // unit index -> arrow index
  std::vector<int> arrow_unit;  // arrow -> unit index when a unit arrow, else -1
  std::vector<int> comp;        // comp[a * A + b] = ab, or -1 when s(a) != r(b)

  int arrow_count() const { return static_cast<int>(arrows.size()); }
  int unit_count() const { return static_cast<int>(units.size()); }
  bool composable(int a, int b) const { return src[a] == tgt[b]; }
  int compose(int a, int b) const { return comp[a * arrow_count() + b]; }
  bool is_unit_arrow(int a) const { return arrow_unit[a] >= 0; }
  bool is_isotropy(int a) const { return src[a] == tgt[a]; }
  int arrow_index(const std::string &id) const;
  int unit_index(const std::string &id) const;

  // structural fingerprint used to detect cross-instance mixups
  bool same_instance(const FiniteGroupoid &other) const;
};

// Unvalidated groupoid description (parsed input or programmatic builder).
// Missing pieces implied by the axioms (unit arrows named after their unit,
// inverse of a unit, unit/inverse composites) are filled in by validation.
struct RawGroupoid {
  struct Arrow {
    std::string id, src, tgt, inv;
  };
  std::vector<std::string> units;
  std::vector<Arrow> arrows;
  std::vector<std::array<std::string, 3>> compose; // [a, b, ab]
};

FiniteGroupoid validate_groupoid(const RawGroupoid &raw);

// Transformation groupoid of a left action: arrows (g, x): x -> g.x with
// composition (g', g.x)(g, x) = (g'g, x).  Arrow ids are "(g,x)".
// `action[g * |X| + x]` is the index of g.x; throws NotAnAction.
FiniteGroupoid transformation_groupoid(const std::vector<std::string> &space,
                                       const FiniteGroup &group, const std::vector<int> &action);

FiniteGroup isotropy_group(const FiniteGroupoid &g, int unit);

// Partition of units by reachability through arrows; blocks are sorted and
// ordered by their least unit.
std::vector<std::vector<int>> orbits(const FiniteGroupoid &g);

// Integer 1-cocycle on arrows: c(ab) = c(a) + c(b) on composable pairs.
struct Cocycle {
  std::vector<std::int64_t> values; // aligned with groupoid arrows

  std::int64_t operator()(int arrow) const { return values[arrow]; }
};

Cocycle validate_cocycle(const FiniteGroupoid &g, const std::map<std::string, std::int64_t> &values);
Cocycle validate_cocycle(const FiniteGroupoid &g, const std::vector<std::int64_t> &values);

// Unit potential of a cocycle: p with c(g) = p(r(g)) - p(s(g)), zero at the
// least unit of each orbit.  Exists for every valid cocycle on a finite
// groupoid; the traversal asserts consistency rather than assuming it.
std::vector<std::int64_t> cocycle_potential(const FiniteGroupoid &g, const Cocycle &c);

} // namespace kmslab

#endif
