#include "kmslab/groupoid.hpp"

#include "kmslab/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace kmslab {

int FiniteGroup::element_index(const std::string &id) const {
  auto it = std::find(elements.begin(), elements.end(), id);
  if (it == elements.end()) throw Error("unknown group element '" + id + "'");
  return static_cast<int>(it - elements.begin());
}

bool FiniteGroup::is_abelian() const {
  int n = order();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (op(i, j) != op(j, i)) return false;
  return true;
}

FiniteGroup validate_group(const std::vector<std::string> &elements,
                           const std::vector<std::vector<std::string>> &table) {
  int n = static_cast<int>(elements.size());
  if (n == 0) throw MalformedGroupoid("group has no elements");
  {
    std::set<std::string> seen(elements.begin(), elements.end());
    if (static_cast<int>(seen.size()) != n) throw MalformedGroupoid("duplicate group element ids");
  }
  if (static_cast<int>(table.size()) != n) throw MalformedGroupoid("multiplication table has wrong row count");

  FiniteGroup g;
  g.elements = elements;
  g.mul.assign(n * n, -1);
  auto index = [&](const std::string &id) {
    auto it = std::find(elements.begin(), elements.end(), id);
    if (it == elements.end()) throw MalformedGroupoid("table references unknown element '" + id + "'");
    return static_cast<int>(it - elements.begin());
  };
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n)
      throw MalformedGroupoid("multiplication table row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < n; ++j) g.mul[i * n + j] = index(table[i][j]);
  }

  // identity
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = g.op(e, i) == i && g.op(i, e) == i;
    if (ok) {
      g.identity = e;
      break;
    }
  }
  if (g.identity < 0) throw MalformedGroupoid("group has no identity element");

  // inverses
  g.inverse.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (g.op(i, j) == g.identity && g.op(j, i) == g.identity) {
        g.inverse[i] = j;
        break;
      }
    if (g.inverse[i] < 0)
      throw MalformedGroupoid("element '" + elements[i] + "' has no inverse");
  }

  // associativity on the full table
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c)))
          throw MalformedGroupoid("associativity fails at (" + elements[a] + "," + elements[b] +
                                  "," + elements[c] + ")");
  return g;
}

int FiniteGroupoid::arrow_index(const std::string &id) const {
  auto it = std::lower_bound(arrows.begin(), arrows.end(), id);
  if (it == arrows.end() || *it != id) throw Error("unknown arrow '" + id + "'");
  return static_cast<int>(it - arrows.begin());
}

int FiniteGroupoid::unit_index(const std::string &id) const {
  auto it = std::lower_bound(units.begin(), units.end(), id);
  if (it == units.end() || *it != id) throw UnknownUnit("'" + id + "'");
  return static_cast<int>(it - units.begin());
}

bool FiniteGroupoid::same_instance(const FiniteGroupoid &other) const {
  return units == other.units && arrows == other.arrows && src == other.src &&
         tgt == other.tgt && comp == other.comp;
}

namespace {

// Shared finishing pass: given sorted ids and raw structure, wire indices,
// complete implied composites, and check every groupoid axiom.
FiniteGroupoid finish_groupoid(std::vector<std::string> units, std::vector<std::string> arrow_ids,
                               std::map<std::string, RawGroupoid::Arrow> arrow_info,
                               const std::vector<std::array<std::string, 3>> &compose_entries) {
  FiniteGroupoid g;
  std::sort(units.begin(), units.end());
  std::sort(arrow_ids.begin(), arrow_ids.end());
  g.units = std::move(units);
  g.arrows = std::move(arrow_ids);
  int a_count = g.arrow_count();

  auto unit_idx = [&](const std::string &id) {
    auto it = std::lower_bound(g.units.begin(), g.units.end(), id);
    if (it == g.units.end() || *it != id)
      throw MalformedGroupoid("arrow references unknown unit '" + id + "'");
    return static_cast<int>(it - g.units.begin());
  };
  auto arrow_idx = [&](const std::string &id) {
    auto it = std::lower_bound(g.arrows.begin(), g.arrows.end(), id);
    if (it == g.arrows.end() || *it != id)
      throw MalformedGroupoid("reference to unknown arrow '" + id + "'");
    return static_cast<int>(it - g.arrows.begin());
  };

  g.src.assign(a_count, -1);
  g.tgt.assign(a_count, -1);
  g.inv.assign(a_count, -1);
  for (int a = 0; a < a_count; ++a) {
    const auto &info = arrow_info.at(g.arrows[a]);
    g.src[a] = unit_idx(info.src);
    g.tgt[a] = unit_idx(info.tgt);
  }
  for (int a = 0; a < a_count; ++a) {
    const auto &info = arrow_info.at(g.arrows[a]);
    if (info.inv.empty())
      throw MalformedGroupoid("arrow '" + g.arrows[a] + "' lacks an inverse");
    g.inv[a] = arrow_idx(info.inv);
  }

  // inverse is an involution exchanging source and range
  for (int a = 0; a < a_count; ++a) {
    if (g.inv[g.inv[a]] != a)
      throw MalformedGroupoid("inverse is not involutive at '" + g.arrows[a] + "'");
    if (g.src[g.inv[a]] != g.tgt[a] || g.tgt[g.inv[a]] != g.src[a])
      throw MalformedGroupoid("inverse of '" + g.arrows[a] + "' does not swap source and range");
  }

  // unit arrows: identified by id == unit id
  g.unit_arrow.assign(g.unit_count(), -1);
  g.arrow_unit.assign(a_count, -1);
  for (int u = 0; u < g.unit_count(); ++u) {
    auto it = std::lower_bound(g.arrows.begin(), g.arrows.end(), g.units[u]);
    if (it == g.arrows.end() || *it != g.units[u])
      throw MalformedGroupoid("no unit arrow for unit '" + g.units[u] + "'");
    int a = static_cast<int>(it - g.arrows.begin());
    if (g.src[a] != u || g.tgt[a] != u)
      throw MalformedGroupoid("unit arrow '" + g.units[u] + "' must have source = range = its unit");
    g.unit_arrow[u] = a;
    g.arrow_unit[a] = u;
  }

  g.comp.assign(static_cast<std::size_t>(a_count) * a_count, -1);
  auto set_comp = [&](int a, int b, int ab, const std::string &why) {
    if (g.src[a] != g.tgt[b])
      throw MalformedGroupoid("composite (" + g.arrows[a] + "," + g.arrows[b] +
                              ") declared on a non-composable pair");
    int &slot = g.comp[a * a_count + b];
    if (slot >= 0 && slot != ab)
      throw MalformedGroupoid("conflicting composites for (" + g.arrows[a] + "," + g.arrows[b] +
                              "): '" + g.arrows[slot] + "' vs '" + g.arrows[ab] + "' (" + why + ")");
    if (g.src[ab] != g.src[b] || g.tgt[ab] != g.tgt[a])
      throw MalformedGroupoid("composite '" + g.arrows[ab] + "' of (" + g.arrows[a] + "," +
                              g.arrows[b] + ") has wrong source or range");
    slot = ab;
  };

  for (const auto &entry : compose_entries)
    set_comp(arrow_idx(entry[0]), arrow_idx(entry[1]), arrow_idx(entry[2]), "given");
  // implied: unit laws and inverse laws
  for (int a = 0; a < a_count; ++a) {
    set_comp(a, g.unit_arrow[g.src[a]], a, "unit law");
    set_comp(g.unit_arrow[g.tgt[a]], a, a, "unit law");
    set_comp(a, g.inv[a], g.unit_arrow[g.tgt[a]], "inverse law");
    set_comp(g.inv[a], a, g.unit_arrow[g.src[a]], "inverse law");
  }

  // totality on composable pairs
  for (int a = 0; a < a_count; ++a)
    for (int b = 0; b < a_count; ++b)
      if (g.composable(a, b) && g.compose(a, b) < 0)
        throw MissingComposite("(" + g.arrows[a] + "," + g.arrows[b] + ")");

  // associativity wherever both groupings are defined
  for (int a = 0; a < a_count; ++a)
    for (int b = 0; b < a_count; ++b) {
      if (!g.composable(a, b)) continue;
      int ab = g.compose(a, b);
      for (int c = 0; c < a_count; ++c) {
        if (!g.composable(b, c)) continue;
        if (g.compose(ab, c) != g.compose(a, g.compose(b, c)))
          throw MalformedGroupoid("associativity fails at (" + g.arrows[a] + "," + g.arrows[b] +
                                  "," + g.arrows[c] + ")");
      }
    }
  return g;
}

} // namespace

FiniteGroupoid validate_groupoid(const RawGroupoid &raw) {
  std::vector<std::string> units = raw.units;
  if (units.empty()) throw MalformedGroupoid("no units");
  {
    std::set<std::string> seen(units.begin(), units.end());
    if (seen.size() != units.size()) throw MalformedGroupoid("duplicate unit ids");
  }

  std::map<std::string, RawGroupoid::Arrow> info;
  std::vector<std::string> ids;
  for (const auto &arrow : raw.arrows) {
    if (info.count(arrow.id)) throw MalformedGroupoid("duplicate arrow id '" + arrow.id + "'");
    info[arrow.id] = arrow;
    ids.push_back(arrow.id);
  }
  // imply missing unit arrows (id = unit id) and unit self-inverses
  for (const auto &u : units) {
    auto it = info.find(u);
    if (it == info.end()) {
      RawGroupoid::Arrow unit_arrow{u, u, u, u};
      info[u] = unit_arrow;
      ids.push_back(u);
    } else if (it->second.inv.empty()) {
      it->second.inv = u;
    }
  }
  return finish_groupoid(units, ids, std::move(info), raw.compose);
}

FiniteGroupoid transformation_groupoid(const std::vector<std::string> &space,
                                       const FiniteGroup &group, const std::vector<int> &action) {
  int n = group.order();
  int m = static_cast<int>(space.size());
  if (m == 0) throw NotAnAction("empty space");
  if (static_cast<int>(action.size()) != n * m) throw NotAnAction("action table has wrong size");
  auto act = [&](int gi, int x) { return action[gi * m + x]; };
  for (int gi = 0; gi < n; ++gi)
    for (int x = 0; x < m; ++x)
      if (act(gi, x) < 0 || act(gi, x) >= m) throw NotAnAction("action maps outside the space");
  for (int x = 0; x < m; ++x)
    if (act(group.identity, x) != x) throw NotAnAction("identity does not act trivially");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int x = 0; x < m; ++x)
        if (act(a, act(b, x)) != act(group.op(a, b), x))
          throw NotAnAction("compatibility fails at (" + group.elements[a] + "," +
                            group.elements[b] + "," + space[x] + ")");

  auto arrow_id = [&](int gi, int x) { return "(" + group.elements[gi] + "," + space[x] + ")"; };

  std::map<std::string, RawGroupoid::Arrow> info;
  std::vector<std::string> ids;
  for (int gi = 0; gi < n; ++gi)
    for (int x = 0; x < m; ++x) {
      RawGroupoid::Arrow a;
      a.id = arrow_id(gi, x);
      a.src = space[x];
      a.tgt = space[act(gi, x)];
      a.inv = arrow_id(group.inverse[gi], act(gi, x));
      info[a.id] = a;
      ids.push_back(a.id);
    }
  // unit arrows must carry the unit's own id
  for (int x = 0; x < m; ++x) {
    std::string old_id = arrow_id(group.identity, x);
    RawGroupoid::Arrow a = info.at(old_id);
    info.erase(old_id);
    a.id = space[x];
    a.inv = space[x];
    info[a.id] = a;
    std::replace(ids.begin(), ids.end(), old_id, a.id);
    for (auto &[id, arr] : info)
      if (arr.inv == old_id) arr.inv = a.id;
  }

  std::vector<std::array<std::string, 3>> compose;
  for (int g2 = 0; g2 < n; ++g2)
    for (int g1 = 0; g1 < n; ++g1)
      for (int x = 0; x < m; ++x) {
        // (g2, g1.x) after (g1, x)
        auto left = info.count(arrow_id(g2, act(g1, x))) ? arrow_id(g2, act(g1, x))
                                                         : space[act(g1, x)];
        auto right = info.count(arrow_id(g1, x)) ? arrow_id(g1, x) : space[x];
        int prod = group.op(g2, g1);
        auto result = info.count(arrow_id(prod, x)) ? arrow_id(prod, x) : space[x];
        compose.push_back({left, right, result});
      }
  return finish_groupoid(space, ids, std::move(info), compose);
}

FiniteGroup isotropy_group(const FiniteGroupoid &g, int unit) {
  if (unit < 0 || unit >= g.unit_count()) throw UnknownUnit(std::to_string(unit));
  std::vector<int> members;
  for (int a = 0; a < g.arrow_count(); ++a)
    if (g.src[a] == unit && g.tgt[a] == unit) members.push_back(a);

  std::vector<std::string> elements;
  for (int a : members) elements.push_back(g.arrows[a]);
  std::vector<std::vector<std::string>> table(members.size(),
                                              std::vector<std::string>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = 0; j < members.size(); ++j) {
      int prod = g.compose(members[i], members[j]);
      table[i][j] = g.arrows[prod];
    }
  return validate_group(elements, table);
}

std::vector<std::vector<int>> orbits(const FiniteGroupoid &g) {
  int n = g.unit_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < g.arrow_count(); ++a) {
    int ra = find(g.src[a]), rb = find(g.tgt[a]);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<int, std::vector<int>> blocks;
  for (int u = 0; u < n; ++u) blocks[find(u)].push_back(u);
  std::vector<std::vector<int>> out;
  for (auto &[root, block] : blocks) {
    std::sort(block.begin(), block.end());
    out.push_back(block);
  }
  return out;
}

namespace {

Cocycle check_cocycle_values(const FiniteGroupoid &g, std::vector<std::int64_t> values) {
  for (int a = 0; a < g.arrow_count(); ++a)
    for (int b = 0; b < g.arrow_count(); ++b) {
      if (!g.composable(a, b)) continue;
      int ab = g.compose(a, b);
      if (values[ab] != values[a] + values[b])
        throw NotACocycle("additivity fails on (" + g.arrows[a] + "," + g.arrows[b] + "): c(" +
                          g.arrows[ab] + ") = " + std::to_string(values[ab]) + " but c(a)+c(b) = " +
                          std::to_string(values[a] + values[b]));
    }
  // torsion forces the cocycle to vanish on isotropy; additivity already
  // implies it, so a failure here is an internal error
  for (int a = 0; a < g.arrow_count(); ++a)
    if (g.is_isotropy(a) && values[a] != 0)
      throw NotACocycle("nonzero value on isotropy arrow '" + g.arrows[a] + "'");
  return Cocycle{std::move(values)};
}

} // namespace

Cocycle validate_cocycle(const FiniteGroupoid &g, const std::map<std::string, std::int64_t> &values) {
  std::vector<std::int64_t> v(g.arrow_count(), 0);
  std::vector<bool> seen(g.arrow_count(), false);
  for (const auto &[id, value] : values) {
    int a = g.arrow_index(id);
    v[a] = value;
    seen[a] = true;
  }
  for (int a = 0; a < g.arrow_count(); ++a)
    if (!seen[a]) throw NotACocycle("no value for arrow '" + g.arrows[a] + "'");
  return check_cocycle_values(g, std::move(v));
}

Cocycle validate_cocycle(const FiniteGroupoid &g, const std::vector<std::int64_t> &values) {
  if (static_cast<int>(values.size()) != g.arrow_count())
    throw NotACocycle("value list has wrong length");
  return check_cocycle_values(g, values);
}

std::vector<std::int64_t> cocycle_potential(const FiniteGroupoid &g, const Cocycle &c) {
  std::vector<std::int64_t> p(g.unit_count(), 0);
  std::vector<bool> visited(g.unit_count(), false);
  for (const auto &orbit : orbits(g)) {
    int root = orbit.front(); // least unit of the orbit
    p[root] = 0;
    visited[root] = true;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int a = 0; a < g.arrow_count(); ++a) {
        int from = -1, to = -1;
        if (g.src[a] == u) {
          from = u;
          to = g.tgt[a];
        } else if (g.tgt[a] == u) {
          from = g.src[a];
          to = u;
        } else {
          continue;
        }
        std::int64_t diff = c(a); // c(a) = p(tgt) - p(src)
        if (!visited[to] && from == u) {
          p[to] = p[u] + diff;
          visited[to] = true;
          queue.push_back(to);
        } else if (!visited[from] && to == u) {
          p[from] = p[u] - diff;
          visited[from] = true;
          queue.push_back(from);
        } else if (visited[from] && visited[to] && p[to] - p[from] != diff) {
          throw NotACocycle("potential inconsistency at arrow '" + g.arrows[a] + "'");
        }
      }
    }
  }
  return p;
}

} // namespace kmslab
