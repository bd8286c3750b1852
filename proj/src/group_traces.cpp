#include "kmslab/group_traces.hpp"

#include "kmslab/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace kmslab {

ConjugacyClasses conjugacy_classes(const FiniteGroup &g) {
  int n = g.order();
  ConjugacyClasses out;
  out.class_of.assign(n, -1);
  std::vector<bool> seen(n, false);
  for (int x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::vector<int> cls;
    for (int h = 0; h < n; ++h) {
      int y = g.op(g.op(h, x), g.inverse[h]);
      if (!seen[y]) {
        seen[y] = true;
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    int idx = static_cast<int>(out.classes.size());
    for (int y : cls) out.class_of[y] = idx;
    out.classes.push_back(std::move(cls));
  }
  out.identity_class = out.class_of[g.identity];
  return out;
}

std::vector<int> subgroup_closure(const FiniteGroup &g, const std::vector<int> &generators) {
  std::set<int> members{g.identity};
  std::vector<int> frontier{g.identity};
  for (int gen : generators)
    if (members.insert(gen).second) frontier.push_back(gen);
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int a : frontier)
      for (int b : std::vector<int>(members.begin(), members.end())) {
        for (int prod : {g.op(a, b), g.op(b, a)})
          if (members.insert(prod).second) next.push_back(prod);
      }
    frontier = std::move(next);
  }
  return std::vector<int>(members.begin(), members.end());
}

Subgroup subgroup_of(const FiniteGroup &g, const std::vector<int> &members) {
  std::vector<int> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> ids;
  for (int m : sorted) ids.push_back(g.elements[m]);
  std::vector<std::vector<std::string>> table(sorted.size(),
                                              std::vector<std::string>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      int prod = g.op(sorted[i], sorted[j]);
      if (!std::binary_search(sorted.begin(), sorted.end(), prod))
        throw Error("member set is not closed under multiplication");
      table[i][j] = g.elements[prod];
    }
  return Subgroup{validate_group(ids, table), sorted};
}

namespace {

int element_order(const FiniteGroup &g, int x) {
  int ord = 1, cur = x;
  while (cur != g.identity) {
    cur = g.op(cur, x);
    ++ord;
  }
  return ord;
}

// Smith normal form of a square integer matrix; only the column transform V
// and its inverse are tracked (row operations do not affect the quotient
// coordinates we need).
struct SmithForm {
  std::vector<long> diag;
  std::vector<std::vector<long>> v, v_inv; // a = u * s * ... with columns mixed by v
};

SmithForm smith_normal_form(std::vector<std::vector<long>> a) {
  int m = static_cast<int>(a.size());
  SmithForm out;
  out.v.assign(m, std::vector<long>(m, 0));
  out.v_inv.assign(m, std::vector<long>(m, 0));
  for (int i = 0; i < m; ++i) out.v[i][i] = out.v_inv[i][i] = 1;

  auto col_add = [&](int dst, int src, long k) {
    // C_dst += k * C_src;  V tracks the same op, Vinv the inverse op on rows
    for (int i = 0; i < m; ++i) a[i][dst] += k * a[i][src];
    for (int i = 0; i < m; ++i) out.v[i][dst] += k * out.v[i][src];
    for (int j = 0; j < m; ++j) out.v_inv[src][j] -= k * out.v_inv[dst][j];
  };
  auto col_swap = [&](int x, int y) {
    for (int i = 0; i < m; ++i) std::swap(a[i][x], a[i][y]);
    for (int i = 0; i < m; ++i) std::swap(out.v[i][x], out.v[i][y]);
    out.v_inv[x].swap(out.v_inv[y]);
  };
  auto col_negate = [&](int x) {
    for (int i = 0; i < m; ++i) a[i][x] = -a[i][x];
    for (int i = 0; i < m; ++i) out.v[i][x] = -out.v[i][x];
    for (int j = 0; j < m; ++j) out.v_inv[x][j] = -out.v_inv[x][j];
  };
  auto row_add = [&](int dst, int src, long k) {
    for (int j = 0; j < m; ++j) a[dst][j] += k * a[src][j];
  };
  auto row_swap = [&](int x, int y) { a[x].swap(a[y]); };

  for (int t = 0; t < m; ++t) {
    // move a minimal nonzero entry of the trailing block to (t, t)
    while (true) {
      int pi = -1, pj = -1;
      long best = 0;
      for (int i = t; i < m; ++i)
        for (int j = t; j < m; ++j)
          if (a[i][j] != 0 && (pi < 0 || std::abs(a[i][j]) < best)) {
            best = std::abs(a[i][j]);
            pi = i;
            pj = j;
          }
      if (pi < 0) break; // trailing block is zero
      if (pi != t) row_swap(pi, t);
      if (pj != t) col_swap(pj, t);
      if (a[t][t] < 0) col_negate(t);

      bool dirty = false;
      for (int i = t + 1; i < m; ++i)
        if (a[i][t] != 0) {
          long q = a[i][t] / a[t][t];
          row_add(i, t, -q);
          if (a[i][t] != 0) dirty = true;
        }
      for (int j = t + 1; j < m; ++j)
        if (a[t][j] != 0) {
          long q = a[t][j] / a[t][t];
          col_add(j, t, -q);
          if (a[t][j] != 0) dirty = true;
        }
      if (dirty) continue;

      // divisibility fix-up: fold a non-multiple into column t and retry
      bool fixed = true;
      for (int i = t + 1; i < m && fixed; ++i)
        for (int j = t + 1; j < m && fixed; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_add(t, i, 1);
            fixed = false;
          }
      if (fixed) break;
    }
  }
  out.diag.resize(m);
  for (int i = 0; i < m; ++i) out.diag[i] = a[i][i];
  return out;
}

long mod_positive(long value, long modulus) {
  long r = value % modulus;
  return r < 0 ? r + modulus : r;
}

} // namespace

AbelianDecomposition abelian_decomposition(const FiniteGroup &g) {
  if (!g.is_abelian()) throw NonAbelian("invariant factors need an abelian group");
  AbelianDecomposition out;
  int n = g.order();
  if (n == 1) return out;

  // greedy generating set with per-element factorizations over it
  std::vector<int> gens;
  std::vector<std::vector<long>> fact(n); // element -> exponents over gens
  std::vector<bool> known(n, false);
  std::vector<int> known_list{g.identity};
  known[g.identity] = true;
  std::vector<std::vector<long>> relations; // rows of the relation matrix

  while (static_cast<int>(known_list.size()) < n) {
    int best = -1, best_ord = 0;
    for (int x = 0; x < n; ++x) {
      if (known[x]) continue;
      int ord = element_order(g, x);
      if (ord > best_ord) {
        best_ord = ord;
        best = x;
      }
    }
    int k = static_cast<int>(gens.size());
    gens.push_back(best);
    for (auto &row : relations) row.push_back(0);
    for (int x : known_list) fact[x].push_back(0);

    // minimal t >= 1 with best^t in the old subgroup gives the relation row
    int cur = best;
    long t = 1;
    while (!known[cur]) {
      cur = g.op(cur, best);
      ++t;
    }
    std::vector<long> rel(k + 1, 0);
    for (int i = 0; i < k; ++i) rel[i] = -fact[cur][i];
    rel[k] = t;
    relations.push_back(rel);

    // the new subgroup is the union of cosets old * best^j, 0 <= j < t
    std::vector<int> old_known = known_list;
    for (int x : old_known) {
      int y = x;
      for (long j = 1; j < t; ++j) {
        y = g.op(y, best);
        if (known[y]) throw VerificationFailed("coset collision in abelian closure");
        fact[y] = fact[x];
        fact[y][k] = j;
        known[y] = true;
        known_list.push_back(y);
      }
    }
  }

  int m = static_cast<int>(gens.size());
  for (auto &row : relations) row.resize(m, 0);
  SmithForm snf = smith_normal_form(relations);

  // new generators: g_hat_j = prod_i gens[i] ^ (Vinv row j)
  std::vector<long> diag = snf.diag;
  std::vector<int> new_gens(m, g.identity);
  for (int j = 0; j < m; ++j) {
    int acc = g.identity;
    for (int i = 0; i < m; ++i) {
      long e = snf.v_inv[j][i];
      long steps = mod_positive(e, element_order(g, gens[i]));
      for (long s = 0; s < steps; ++s) acc = g.op(acc, gens[i]);
    }
    new_gens[j] = acc;
  }

  // keep nontrivial factors only, in ascending order (s_1 | s_2 | ...)
  std::vector<int> keep;
  for (int j = 0; j < m; ++j)
    if (diag[j] > 1) keep.push_back(j);

  out.factors.clear();
  out.generators.clear();
  for (int j : keep) {
    out.factors.push_back(diag[j]);
    out.generators.push_back(new_gens[j]);
  }

  // coordinates: f = e * V mod s, with e a stored factorization
  out.coords.assign(n, std::vector<long>(keep.size(), 0));
  for (int x = 0; x < n; ++x) {
    std::vector<long> e(m, 0);
    for (int i = 0; i < static_cast<int>(fact[x].size()); ++i) e[i] = fact[x][i];
    for (std::size_t jj = 0; jj < keep.size(); ++jj) {
      int j = keep[jj];
      long f = 0;
      for (int i = 0; i < m; ++i) f += e[i] * snf.v[i][j];
      out.coords[x][jj] = mod_positive(f, diag[j]);
    }
  }

  // sanity: the coordinates must be a bijection onto the factor box
  {
    std::set<std::vector<long>> distinct(out.coords.begin(), out.coords.end());
    long box = 1;
    for (long d : out.factors) box *= d;
    if (static_cast<long>(distinct.size()) != n || box != n)
      throw VerificationFailed("invariant factor decomposition is not a bijection");
  }
  // sanity: coordinates are a homomorphism
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int xy = g.op(x, y);
      for (std::size_t j = 0; j < out.factors.size(); ++j)
        if (mod_positive(out.coords[x][j] + out.coords[y][j], out.factors[j]) != out.coords[xy][j])
          throw VerificationFailed("invariant factor coordinates are not additive");
    }
  return out;
}

std::vector<std::vector<Cyclotomic>> abelian_characters(const FiniteGroup &g) {
  AbelianDecomposition dec = abelian_decomposition(g);
  int n = g.order();
  int k = static_cast<int>(dec.factors.size());
  std::vector<std::vector<long>> duals; // dual exponent tuples in lex order
  std::vector<long> tuple(k, 0);
  while (true) {
    duals.push_back(tuple);
    int pos = k - 1;
    while (pos >= 0) {
      if (++tuple[pos] < dec.factors[pos]) break;
      tuple[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    if (k == 0) break;
  }
  if (k == 0) duals.assign(1, {});

  std::vector<std::vector<Cyclotomic>> rows;
  for (const auto &dual : duals) {
    std::vector<Cyclotomic> row(n);
    for (int x = 0; x < n; ++x) {
      Cyclotomic v(1);
      for (int j = 0; j < k; ++j) {
        long e = mod_positive(dual[j] * dec.coords[x][j], dec.factors[j]);
        v *= Cyclotomic::root_of_unity(dec.factors[j], e);
      }
      row[x] = v;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

CharacterTable abelian_character_table(const FiniteGroup &g) {
  CharacterTable table;
  table.classes = conjugacy_classes(g); // singletons
  auto rows = abelian_characters(g);
  int k = static_cast<int>(table.classes.classes.size());
  for (const auto &row : rows) {
    std::vector<Cyclotomic> per_class(k);
    for (int c = 0; c < k; ++c) per_class[c] = row[table.classes.classes[c][0]];
    table.rows.push_back(per_class);
    table.dimensions.push_back(1);
  }
  table.exact = true;
  return table;
}

// exact orthogonality check: rows <chi_i, chi_j> = delta_ij under the
// class-weighted inner product, columns weighted by centralizer orders,
// and sum d_i^2 = |G|
void verify_exact_table(const FiniteGroup &g, CharacterTable &table) {
  int k = static_cast<int>(table.rows.size());
  int n = g.order();
  if (k != static_cast<int>(table.classes.classes.size()))
    throw VerificationFailed("character count differs from class count");
  long dim_sum = 0;
  for (long d : table.dimensions) dim_sum += d * d;
  if (dim_sum != n) throw VerificationFailed("sum of squared dimensions misses the group order");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Cyclotomic acc(0);
      for (int c = 0; c < k; ++c) {
        Cyclotomic term = table.rows[i][c] * table.rows[j][c].conj();
        acc += Cyclotomic(Rational(static_cast<long>(table.classes.classes[c].size()))) * term;
      }
      Cyclotomic expect(i == j ? Rational(n) : Rational(0));
      if (acc != expect) throw VerificationFailed("row orthogonality fails");
    }
  for (int c1 = 0; c1 < k; ++c1)
    for (int c2 = 0; c2 < k; ++c2) {
      Cyclotomic acc(0);
      for (int i = 0; i < k; ++i) acc += table.rows[i][c1] * table.rows[i][c2].conj();
      Cyclotomic expect(c1 == c2
                            ? Rational(n) / Rational(static_cast<long>(table.classes.classes[c1].size()))
                            : Rational(0));
      if (acc != expect) throw VerificationFailed("column orthogonality fails");
    }
}

double float_residual(const FiniteGroup &g, const CharacterTable &table) {
  int k = static_cast<int>(table.float_rows.size());
  int n = g.order();
  double res = 0.0;
  double dim_sum = 0.0;
  for (int i = 0; i < k; ++i) dim_sum += table.float_rows[i][table.classes.identity_class].real() *
                                         table.float_rows[i][table.classes.identity_class].real();
  res = std::abs(dim_sum - n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      CF64 acc(0.0);
      for (int c = 0; c < k; ++c)
        acc += static_cast<double>(table.classes.classes[c].size()) * table.float_rows[i][c] *
               std::conj(table.float_rows[j][c]);
      acc /= static_cast<double>(n);
      res = std::max(res, std::abs(acc - (i == j ? CF64(1.0) : CF64(0.0))));
    }
  return res;
}

CharacterTable burnside_table(const FiniteGroup &g, std::uint64_t seed) {
  CharacterTable table;
  table.classes = conjugacy_classes(g);
  int k = static_cast<int>(table.classes.classes.size());
  int n = g.order();

  // structure constants: K_i K_j = sum_l a[i][j][l] K_l, via counting pairs
  // whose product is a fixed representative of class l
  std::vector<std::vector<std::vector<long>>> a(
      k, std::vector<std::vector<long>>(k, std::vector<long>(k, 0)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int x : table.classes.classes[i])
        for (int y : table.classes.classes[j]) {
          int l = table.classes.class_of[g.op(x, y)];
          a[i][j][l] += 1;
        }
  // only products landing on the representative count; rescale
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        if (a[i][j][l] % table.classes.classes[l].size() != 0)
          throw VerificationFailed("class algebra structure constants are fractional");
        a[i][j][l] /= static_cast<long>(table.classes.classes[l].size());
      }

  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  Eigen::MatrixXcd vectors;
  for (int attempt = 0; attempt < 32; ++attempt) {
    Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(k, k);
    std::uniform_int_distribution<int> pick(-9, 9);
    for (int i = 0; i < k; ++i) {
      double r = pick(rng);
      for (int row = 0; row < k; ++row)
        for (int col = 0; col < k; ++col) combo(row, col) += r * static_cast<double>(a[i][row][col]);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(combo);
    if (solver.info() != Eigen::Success) continue;
    // distinct eigenvalues <=> the common eigenbasis is isolated
    bool distinct = true;
    for (int i = 0; i < k && distinct; ++i)
      for (int j = i + 1; j < k && distinct; ++j)
        if (std::abs(solver.eigenvalues()(i) - solver.eigenvalues()(j)) < 1e-8) distinct = false;
    if (!distinct) continue;
    vectors = solver.eigenvectors();
    break;
  }
  if (vectors.size() == 0) throw VerificationFailed("class-sum eigenvalue splitting failed");

  int e_cls = table.classes.identity_class;
  std::vector<std::vector<CF64>> rows;
  std::vector<long> dims;
  for (int v = 0; v < k; ++v) {
    Eigen::VectorXcd u = vectors.col(v);
    if (std::abs(u(e_cls)) < 1e-12) throw VerificationFailed("degenerate central character");
    u /= u(e_cls); // omega_l = |C_l| chi(g_l) / d, omega_e = 1
    double inv_d2 = 0.0;
    for (int l = 0; l < k; ++l)
      inv_d2 += std::norm(u(l)) / static_cast<double>(table.classes.classes[l].size());
    double d = std::sqrt(static_cast<double>(n) / inv_d2);
    std::vector<CF64> chi(k);
    for (int l = 0; l < k; ++l)
      chi[l] = u(l) * d / static_cast<double>(table.classes.classes[l].size());
    rows.push_back(std::move(chi));
    dims.push_back(std::lround(d));
  }

  // deterministic row order: by dimension, then value grid
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto grid = [](const CF64 &z) {
    return std::make_pair(std::llround(z.real() * 1048576.0), std::llround(z.imag() * 1048576.0));
  };
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (dims[x] != dims[y]) return dims[x] < dims[y];
    for (int c = 0; c < k; ++c) {
      auto gx = grid(rows[x][c]), gy = grid(rows[y][c]);
      if (gx != gy) return gx < gy;
    }
    return false;
  });
  for (int idx : order) {
    table.float_rows.push_back(rows[idx]);
    table.dimensions.push_back(dims[idx]);
  }

  // snap to Gaussian integers and verify exactly
  bool snappable = true;
  std::vector<std::vector<Cyclotomic>> exact_rows;
  for (const auto &row : table.float_rows) {
    std::vector<Cyclotomic> exact_row;
    for (const CF64 &z : row) {
      double re = std::round(z.real()), im = std::round(z.imag());
      if (std::abs(z.real() - re) > 1e-6 || std::abs(z.imag() - im) > 1e-6) {
        snappable = false;
        break;
      }
      exact_row.push_back(Cyclotomic::from_complex_rational(Rational(static_cast<long>(re)),
                                                            Rational(static_cast<long>(im))));
    }
    if (!snappable) break;
    exact_rows.push_back(std::move(exact_row));
  }
  if (snappable) {
    table.rows = std::move(exact_rows);
    verify_exact_table(g, table);
    table.exact = true;
    table.residual = 0.0;
  } else {
    table.exact = false;
    table.residual = float_residual(g, table);
    if (table.residual > 1e-9)
      throw VerificationFailed("character table residual " + std::to_string(table.residual));
  }
  return table;
}

} // namespace

CharacterTable character_table(const FiniteGroup &g, std::uint64_t seed) {
  CharacterTable table = g.is_abelian() ? abelian_character_table(g) : burnside_table(g, seed);
  if (table.exact) {
    verify_exact_table(g, table);
    table.float_rows.clear();
    for (const auto &row : table.rows) {
      std::vector<CF64> fr;
      for (const auto &v : row) fr.push_back(v.to_complex());
      table.float_rows.push_back(std::move(fr));
    }
  }
  return table;
}

TracialCheck is_tracial_state(const FiniteGroup &g, const ClassFunction &phi) {
  ConjugacyClasses classes = conjugacy_classes(g);
  TracialCheck out;
  if (static_cast<int>(phi.values.size()) != static_cast<int>(classes.classes.size()))
    throw Error("class function has wrong length");
  if (phi.values[classes.identity_class] != Cyclotomic(1)) {
    out.tracial = false;
    out.witness = "phi(e) != 1";
    return out;
  }
  int n = g.order();
  CycMatrix m(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      m.at(x, y) = phi.values[classes.class_of[g.op(g.inverse[x], y)]];
  if (!is_hermitian(m)) {
    out.tracial = false;
    out.witness = "Gram matrix is not hermitian";
    return out;
  }
  PsdResult r = psd_check(m);
  out.tracial = r.psd;
  out.witness = r.witness;
  out.certificate = std::move(r);
  return out;
}

std::vector<TracialState> tracial_extreme_points(const FiniteGroup &g, const CharacterTable &table) {
  if (!table.exact)
    throw VerificationFailed("extreme tracial states need an exact character table");
  std::vector<TracialState> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ClassFunction phi;
    Cyclotomic d(Rational(table.dimensions[i]));
    for (const auto &v : table.rows[i]) phi.values.push_back(v / d);
    TracialCheck check = is_tracial_state(g, phi);
    if (!check.tracial)
      throw VerificationFailed("normalized character is not tracial: " + check.witness);
    out.push_back(TracialState{std::move(phi), {std::move(check.certificate)}});
  }
  return out;
}

std::vector<Cyclotomic> trace_barycentric(const FiniteGroup &g, const CharacterTable &table,
                                          const ClassFunction &phi) {
  if (!table.exact) throw VerificationFailed("barycentric coordinates need an exact table");
  int k = static_cast<int>(table.rows.size());
  int n = g.order();
  std::vector<Cyclotomic> lambda(k);
  for (int i = 0; i < k; ++i) {
    Cyclotomic acc(0);
    for (int c = 0; c < k; ++c) {
      Rational weight(static_cast<long>(table.classes.classes[c].size()), n);
      acc += Cyclotomic(weight) * phi.values[c] * table.rows[i][c].conj();
    }
    lambda[i] = Cyclotomic(Rational(table.dimensions[i])) * acc;
  }
  return lambda;
}

} // namespace kmslab
