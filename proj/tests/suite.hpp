#ifndef KMSLAB_TESTS_SUITE_HPP
#define KMSLAB_TESTS_SUITE_HPP

// Shared instance generators: small groups, actions on up to five points,
// potential cocycles with values in [-2, 2], and the q grid.

#include "kmslab/groupoid.hpp"
#include "kmslab/rational.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace kmslab::testsuite {

inline FiniteGroup cyclic_group(int n, const std::string &prefix = "g") {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  std::vector<std::vector<std::string>> table(n, std::vector<std::string>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = ids[(i + j) % n];
  return validate_group(ids, table);
}

inline FiniteGroup trivial_group() { return cyclic_group(1); }

inline FiniteGroup klein_group() {
  std::vector<std::string> ids = {"e", "a", "b", "c"};
  std::vector<std::vector<std::string>> table(4, std::vector<std::string>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) table[i][j] = ids[i ^ j];
  return validate_group(ids, table);
}

inline FiniteGroup symmetric3() {
  std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::string> ids;
  for (const auto &p : perms)
    ids.push_back("s" + std::to_string(p[0]) + std::to_string(p[1]) + std::to_string(p[2]));
  auto compose = [&](int i, int j) {
    std::vector<int> r(3);
    for (int k = 0; k < 3; ++k) r[k] = perms[i][perms[j][k]];
    for (std::size_t t = 0; t < perms.size(); ++t)
      if (perms[t] == r) return static_cast<int>(t);
    return -1;
  };
  std::vector<std::vector<std::string>> table(6, std::vector<std::string>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) table[i][j] = ids[compose(i, j)];
  return validate_group(ids, table);
}

// dihedral group of order 8: r^4 = s^2 = e, s r s = r^-1
inline FiniteGroup dihedral4() {
  std::vector<std::string> ids;
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r < 4; ++r) ids.push_back((s ? "sr" : "r") + std::to_string(r));
  auto idx = [](int s, int r) { return s * 4 + ((r % 4) + 4) % 4; };
  std::vector<std::vector<std::string>> table(8, std::vector<std::string>(8));
  for (int s1 = 0; s1 < 2; ++s1)
    for (int r1 = 0; r1 < 4; ++r1)
      for (int s2 = 0; s2 < 2; ++s2)
        for (int r2 = 0; r2 < 4; ++r2) {
          // (s1, r1) * (s2, r2) = (s1 + s2, r2 + (-1)^{s2} r1)
          int s = (s1 + s2) % 2;
          int r = r2 + (s2 ? -r1 : r1);
          table[idx(s1, r1)][idx(s2, r2)] = ids[idx(s, r)];
        }
  return validate_group(ids, table);
}

// quaternion group {±1, ±i, ±j, ±k}
inline FiniteGroup quaternion8() {
  // encode q = (sign, axis): axis 0 = 1, 1 = i, 2 = j, 3 = k
  std::vector<std::string> ids = {"1", "i", "j", "k", "-1", "-i", "-j", "-k"};
  auto mul = [](int a, int b) {
    int sa = a / 4, xa = a % 4, sb = b / 4, xb = b % 4;
    static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{+1, +1, +1, +1},
                                   {+1, -1, +1, -1},
                                   {+1, -1, -1, +1},
                                   {+1, +1, -1, -1}};
    int x = axis[xa][xb];
    int s = sign[xa][xb] * (sa ? -1 : 1) * (sb ? -1 : 1);
    return (s < 0 ? 4 : 0) + x;
  };
  std::vector<std::vector<std::string>> table(8, std::vector<std::string>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) table[a][b] = ids[mul(a, b)];
  return validate_group(ids, table);
}

inline std::vector<std::string> points(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

// action table from a per-generator description: action[g][x]
inline std::vector<int> action_table(const FiniteGroup &g, int n_points,
                                     const std::vector<std::vector<int>> &rows) {
  std::vector<int> flat(g.order() * n_points);
  for (int gi = 0; gi < g.order(); ++gi)
    for (int x = 0; x < n_points; ++x) flat[gi * n_points + x] = rows[gi][x];
  return flat;
}

struct SuiteInstance {
  std::string name;
  FiniteGroup group;
  std::vector<std::string> space;
  std::vector<int> action;
  FiniteGroupoid groupoid;
  std::vector<Cocycle> cocycles; // potential cocycles, values in [-2, 2]
  bool principal = false;
};

inline Cocycle potential_cocycle(const FiniteGroupoid &g, const std::vector<std::int64_t> &p) {
  std::vector<std::int64_t> values(g.arrow_count());
  for (int a = 0; a < g.arrow_count(); ++a) values[a] = p[g.tgt[a]] - p[g.src[a]];
  return validate_cocycle(g, values);
}

// All transformation-groupoid instances of the generator suite: groups of
// order <= 6 acting on <= 5 points, with a zero cocycle plus seeded random
// unit potentials in {-1, 0, 1} (so cocycle values stay within [-2, 2]).
inline std::vector<SuiteInstance> make_suite(std::uint64_t seed) {
  std::vector<SuiteInstance> out;

  auto add = [&](const std::string &name, const FiniteGroup &g, int n_points,
                 const std::vector<int> &flat_action) {
    SuiteInstance inst;
    inst.name = name;
    inst.group = g;
    inst.space = points(n_points);
    inst.action = flat_action;
    inst.groupoid = transformation_groupoid(inst.space, inst.group, inst.action);
    out.push_back(std::move(inst));
  };

  auto trivial_action = [&](const FiniteGroup &g, int n_points) {
    std::vector<int> flat(g.order() * n_points);
    for (int gi = 0; gi < g.order(); ++gi)
      for (int x = 0; x < n_points; ++x) flat[gi * n_points + x] = x;
    return flat;
  };
  auto cyclic_rotation = [&](int n, int n_points, int fixed_tail) {
    // Z/n rotating the first n points, fixing the rest
    FiniteGroup g = cyclic_group(n);
    std::vector<int> flat(g.order() * n_points);
    for (int gi = 0; gi < n; ++gi)
      for (int x = 0; x < n_points; ++x)
        flat[gi * n_points + x] = x < n ? (x + gi) % n : x;
    (void)fixed_tail;
    return flat;
  };

  const FiniteGroup z1 = trivial_group();
  const FiniteGroup z2 = cyclic_group(2);
  const FiniteGroup z3 = cyclic_group(3);
  const FiniteGroup z4 = cyclic_group(4);
  const FiniteGroup v4 = klein_group();
  const FiniteGroup z5 = cyclic_group(5);
  const FiniteGroup z6 = cyclic_group(6);
  const FiniteGroup s3 = symmetric3();

  add("trivial-on-3", z1, 3, trivial_action(z1, 3));
  add("z2-trivial-pt", z2, 1, trivial_action(z2, 1));
  add("z2-swap", z2, 2, action_table(z2, 2, {{0, 1}, {1, 0}}));
  add("z2-swap-fix", z2, 3, action_table(z2, 3, {{0, 1, 2}, {1, 0, 2}}));
  add("z3-rotate", z3, 3, cyclic_rotation(3, 3, 0));
  add("z3-trivial-pt", z3, 1, trivial_action(z3, 1));
  add("z3-rotate-fix", z3, 4, cyclic_rotation(3, 4, 1));
  add("z4-rotate", z4, 4, cyclic_rotation(4, 4, 0));
  add("z4-through-z2-swap", z4, 2,
      action_table(z4, 2, {{0, 1}, {1, 0}, {0, 1}, {1, 0}}));
  add("v4-regular", v4, 4,
      action_table(v4, 4, {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}));
  add("v4-projection-swap", v4, 2, action_table(v4, 2, {{0, 1}, {1, 0}, {0, 1}, {1, 0}}));
  add("z5-rotate", z5, 5, cyclic_rotation(5, 5, 0));
  add("z5-trivial-pt", z5, 1, trivial_action(z5, 1));
  {
    // Z/6 acting on 3+2 points through its Z/3 and Z/2 quotients; the
    // stabilizers are Z/2 on the triangle and Z/3 on the edge
    std::vector<std::vector<int>> rows;
    for (int gi = 0; gi < 6; ++gi) {
      std::vector<int> row(5);
      for (int x = 0; x < 3; ++x) row[x] = (x + gi) % 3;
      for (int x = 0; x < 2; ++x) row[3 + x] = 3 + (x + gi) % 2;
      rows.push_back(row);
    }
    add("z6-mixed-3-2", z6, 5, action_table(z6, 5, rows));
  }
  add("z6-trivial-pt", z6, 1, trivial_action(z6, 1));
  {
    // natural S3 action: element index -> permutation of {0,1,2}
    std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<std::vector<int>> rows;
    for (const auto &p : perms) rows.push_back(p);
    add("s3-natural", s3, 3, action_table(s3, 3, rows));
  }
  {
    // S3 through the sign character on two points
    std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto parity = [&](const std::vector<int> &p) {
      int inv = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (p[i] > p[j]) ++inv;
      return inv % 2;
    };
    std::vector<std::vector<int>> rows;
    for (const auto &p : perms)
      rows.push_back(parity(p) ? std::vector<int>{1, 0} : std::vector<int>{0, 1});
    add("s3-sign-swap", s3, 2, action_table(s3, 2, rows));
  }
  add("s3-trivial-pt", s3, 1, trivial_action(s3, 1));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pot(-1, 1);
  for (auto &inst : out) {
    std::vector<std::int64_t> zero(inst.groupoid.unit_count(), 0);
    inst.cocycles.push_back(potential_cocycle(inst.groupoid, zero));
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<std::int64_t> p(inst.groupoid.unit_count());
      for (auto &v : p) v = pot(rng);
      inst.cocycles.push_back(potential_cocycle(inst.groupoid, p));
    }
    inst.principal = true;
    for (int u = 0; u < inst.groupoid.unit_count(); ++u)
      if (isotropy_group(inst.groupoid, u).order() > 1) inst.principal = false;
  }
  return out;
}

inline std::vector<Rational> suite_q_values() {
  return {Rational(1, 3), Rational(1, 2), Rational(1), Rational(2)};
}

} // namespace kmslab::testsuite

#endif
