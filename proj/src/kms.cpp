#include "kmslab/kms.hpp"

#include "kmslab/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace kmslab {

const FieldOfTraces::OrbitEntry *FieldOfTraces::entry_for_unit(int unit) const {
  for (const auto &entry : entries)
    if (std::binary_search(entry.orbit.begin(), entry.orbit.end(), unit)) return &entry;
  return nullptr;
}

namespace {

std::vector<int> isotropy_arrows_at(const FiniteGroupoid &g, int unit) {
  std::vector<int> arrows;
  for (int a = 0; a < g.arrow_count(); ++a)
    if (g.src[a] == unit && g.tgt[a] == unit) arrows.push_back(a);
  return arrows;
}

// element index of `arrow` inside the isotropy FiniteGroup built at a unit
int group_index_of_arrow(const FiniteGroupoid &g, const FiniteGroup &iso,
                         const std::vector<int> &iso_arrows, int arrow) {
  auto it = std::lower_bound(iso_arrows.begin(), iso_arrows.end(), arrow);
  if (it == iso_arrows.end() || *it != arrow) throw Error("arrow is not in the isotropy group");
  (void)iso;
  return static_cast<int>(it - iso_arrows.begin());
}

} // namespace

FieldOfTraces propagate_traces(const FiniteGroupoid &g, const Cocycle &c,
                               const std::vector<std::pair<int, ClassFunction>> &reps) {
  FieldOfTraces field;
  field.groupoid = &g;
  auto blocks = orbits(g);
  std::vector<bool> orbit_used(blocks.size(), false);

  for (const auto &[rep, tau] : reps) {
    if (rep < 0 || rep >= g.unit_count()) throw UnknownUnit(std::to_string(rep));
    FieldOfTraces::OrbitEntry entry;
    entry.representative = rep;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (std::binary_search(blocks[i].begin(), blocks[i].end(), rep)) {
        if (orbit_used[i]) throw Error("two representatives in one orbit");
        orbit_used[i] = true;
        entry.orbit = blocks[i];
      }

    entry.isotropy_arrows = isotropy_arrows_at(g, rep);
    entry.isotropy = isotropy_group(g, rep);
    ConjugacyClasses classes = conjugacy_classes(entry.isotropy);
    if (tau.values.size() != classes.classes.size())
      throw TraceOnWrongGroup("class function has " + std::to_string(tau.values.size()) +
                              " values but the isotropy group at unit '" + g.units[rep] + "' has " +
                              std::to_string(classes.classes.size()) + " classes");
    TracialCheck check = is_tracial_state(entry.isotropy, tau);
    if (!check.tracial) throw TraceOnWrongGroup("not a tracial state: " + check.witness);
    // condition (iii): tau(u_g) = 0 off c^{-1}(0); cocycles vanish on
    // isotropy of a finite groupoid, so this never fires
    for (int a : entry.isotropy_arrows)
      if (c(a) != 0) throw VerificationFailed("cocycle nonzero on isotropy");
    entry.tau = tau;

    auto tau_at_arrow = [&](int arrow) {
      int e = group_index_of_arrow(g, entry.isotropy, entry.isotropy_arrows, arrow);
      return tau.values[classes.class_of[e]];
    };

    for (int y : entry.orbit) {
      // connecting arrows h: rep -> y
      std::vector<int> connectors;
      for (int a = 0; a < g.arrow_count(); ++a)
        if (g.src[a] == rep && g.tgt[a] == y) connectors.push_back(a);
      if (connectors.empty()) throw VerificationFailed("orbit unit without connecting arrow");
      std::map<int, Cyclotomic> local;
      bool first = true;
      for (int h : connectors) {
        std::map<int, Cyclotomic> via_h;
        for (int a : isotropy_arrows_at(g, y)) {
          int pulled = g.compose(g.compose(g.inv[h], a), h); // h^{-1} a h at rep
          via_h[a] = tau_at_arrow(pulled);
        }
        if (first) {
          local = std::move(via_h);
          first = false;
        } else if (via_h != local) {
          throw VerificationFailed("propagation depends on the connecting arrow");
        }
      }
      entry.propagated[y] = std::move(local);
    }
    field.entries.push_back(std::move(entry));
  }
  return field;
}

ExactFunctional construct_kms_state(const UnitMeasure &mu, const FieldOfTraces &field) {
  const FiniteGroupoid &g = *mu.groupoid;
  if (field.groupoid != &g && !(field.groupoid && field.groupoid->same_instance(g)))
    throw GroupoidMismatch("field of traces on a different groupoid");
  if (!mu.is_probability()) throw Error("measure is not a probability measure");

  ExactFunctional w = ExactFunctional::zero(g);
  for (int u = 0; u < g.unit_count(); ++u) w.weights[g.unit_arrow[u]] = Cyclotomic(mu.weights[u]);

  for (int u = 0; u < g.unit_count(); ++u) {
    if (mu.weights[u] == 0) continue;
    std::vector<int> iso = isotropy_arrows_at(g, u);
    if (iso.size() <= 1) continue; // trivial isotropy: only the unit arrow
    const auto *entry = field.entry_for_unit(u);
    if (entry == nullptr)
      throw MissingTrace("measure charges unit '" + g.units[u] +
                         "' with nontrivial isotropy but no trace was provided");
    const auto &local = entry->propagated.at(u);
    for (int a : iso)
      if (!g.is_unit_arrow(a)) w.weights[a] = Cyclotomic(mu.weights[u]) * local.at(a);
  }
  return w;
}

KmsDiagnostic check_kms(const ExactFunctional &w, const Cocycle &c, const TemperatureParameter &q) {
  const FiniteGroupoid &g = *w.groupoid;
  KmsDiagnostic diag;

  diag.linear = true;
  for (int a = 0; a < g.arrow_count() && diag.linear; ++a) {
    Cyclotomic factor(rational_pow(q.q, c(a)));
    for (int b = 0; b < g.arrow_count(); ++b) {
      Cyclotomic lhs = g.composable(a, b) ? w.weights[g.compose(a, b)] : Cyclotomic(0);
      Cyclotomic rhs = g.composable(b, a) ? factor * w.weights[g.compose(b, a)] : Cyclotomic(0);
      if (lhs != rhs) {
        diag.linear = false;
        std::ostringstream os;
        os << "(L) fails at pair (" << g.arrows[a] << "," << g.arrows[b] << ")";
        diag.witness_linear = os.str();
        break;
      }
    }
  }

  diag.normalized = w.is_normalized();
  diag.hermitian = w.is_hermitian();

  if (diag.hermitian) {
    PositivityResult pos = is_positive(w);
    diag.positive = pos.positive;
    diag.witness_positive = pos.witness;
  } else {
    diag.positive = false;
    diag.witness_positive = "not hermitian";
  }

  diag.isotropy_zero = true;
  for (int a = 0; a < g.arrow_count(); ++a)
    if (g.is_isotropy(a) && c(a) != 0 && !w.weights[a].is_zero()) diag.isotropy_zero = false;

  return diag;
}

KMSClassification classify(const FiniteGroupoid &g, const Cocycle &c, const TemperatureParameter &q,
                           std::uint64_t seed) {
  KMSClassification out{q, quasi_invariant_polytope(g, c, q), {}, {}};

  for (std::size_t i = 0; i < out.polytope.orbit_blocks.size(); ++i) {
    const auto &block = out.polytope.orbit_blocks[i];
    KMSClassification::OrbitData data;
    data.representative = block.front();
    data.isotropy_arrows = isotropy_arrows_at(g, data.representative);
    data.isotropy = isotropy_group(g, data.representative);
    data.trivial_isotropy = data.isotropy.order() == 1;

    const UnitMeasure &mu = out.polytope.vertices[i];
    if (data.trivial_isotropy) {
      // Corollary of unique extension: the only state over this vertex is mu o E
      ExactFunctional w = ExactFunctional::zero(g);
      for (int u = 0; u < g.unit_count(); ++u)
        w.weights[g.unit_arrow[u]] = Cyclotomic(mu.weights[u]);
      KmsDiagnostic diag = check_kms(w, c, q);
      if (!diag.all()) throw VerificationFailed("classified state fails the KMS check");
      out.extremes.push_back(
          ExtremeState{std::move(w), static_cast<int>(i), static_cast<int>(i), -1});
    } else {
      data.table = character_table(data.isotropy, seed);
      data.trace_extremes = tracial_extreme_points(data.isotropy, *data.table);
      for (std::size_t t = 0; t < data.trace_extremes.size(); ++t) {
        FieldOfTraces field =
            propagate_traces(g, c, {{data.representative, data.trace_extremes[t].phi}});
        ExactFunctional w = construct_kms_state(mu, field);
        KmsDiagnostic diag = check_kms(w, c, q);
        if (!diag.all()) throw VerificationFailed("classified state fails the KMS check");
        out.extremes.push_back(ExtremeState{std::move(w), static_cast<int>(i),
                                            static_cast<int>(i), static_cast<int>(t)});
      }
    }
    out.orbit_data.push_back(std::move(data));
  }

  // exact dedup (distinct provenance can in principle repeat a functional)
  for (std::size_t a = 0; a < out.extremes.size(); ++a)
    for (std::size_t b = a + 1; b < out.extremes.size(); ++b)
      if (out.extremes[a].state == out.extremes[b].state)
        throw VerificationFailed("duplicate extreme state emitted");
  return out;
}

OracleSolution oracle_solution_space(const FiniteGroupoid &g, const Cocycle &c,
                                     const TemperatureParameter &q) {
  int arrows = g.arrow_count();
  int n_vars = 2 * arrows; // re, im per arrow
  std::vector<int> parent(n_vars);
  std::vector<Rational> mult(n_vars, Rational(1)); // value(v) = mult[v] * value(parent[v])
  std::vector<bool> zero(n_vars, false);           // on roots
  std::iota(parent.begin(), parent.end(), 0);

  // find with full path compression
  std::function<std::pair<int, Rational>(int)> find = [&](int v) -> std::pair<int, Rational> {
    if (parent[v] == v) return {v, Rational(1)};
    auto [root, m] = find(parent[v]);
    parent[v] = root;
    mult[v] = mult[v] * m;
    return {root, mult[v]};
  };
  auto unite = [&](int va, int vb, const Rational &ratio) {
    // value(va) = ratio * value(vb)
    auto [ra, ma] = find(va);
    auto [rb, mb] = find(vb);
    if (ra != rb) {
      // value(ra) = (ratio * mb / ma) * value(rb)
      parent[ra] = rb;
      mult[ra] = ratio * mb / ma;
      if (zero[ra]) zero[rb] = true;
    } else if (ma != ratio * mb) {
      zero[ra] = true;
    }
  };
  auto set_zero = [&](int v) { zero[find(v).first] = true; };

  auto re = [](int arrow) { return 2 * arrow; };
  auto im = [](int arrow) { return 2 * arrow + 1; };

  // (L): [s(a)=r(b)] w(ab) = q^{c(a)} [s(b)=r(a)] w(ba)
  for (int a = 0; a < arrows; ++a) {
    Rational factor = rational_pow(q.q, c(a));
    for (int b = 0; b < arrows; ++b) {
      bool ab_def = g.composable(a, b), ba_def = g.composable(b, a);
      if (ab_def && ba_def) {
        int ab = g.compose(a, b), ba = g.compose(b, a);
        unite(re(ab), re(ba), factor);
        unite(im(ab), im(ba), factor);
      } else if (ab_def) {
        int ab = g.compose(a, b);
        set_zero(re(ab));
        set_zero(im(ab));
      } else if (ba_def) {
        int ba = g.compose(b, a);
        set_zero(re(ba));
        set_zero(im(ba));
      }
    }
  }
  // (H): w(g^{-1}) = conj w(g)
  for (int a = 0; a < arrows; ++a) {
    unite(re(g.inv[a]), re(a), Rational(1));
    unite(im(g.inv[a]), im(a), Rational(-1));
  }

  // collect free roots and the normalization equation over them
  std::map<int, Rational> norm_coeff; // root -> coefficient in (N)
  for (int u = 0; u < g.unit_count(); ++u) {
    int v = re(g.unit_arrow[u]);
    auto [root, m] = find(v);
    if (!zero[root]) norm_coeff[root] += m;
    // note: imaginary parts of unit weights are forced to zero by (H)
  }
  for (auto it = norm_coeff.begin(); it != norm_coeff.end();) {
    if (it->second == 0) {
      // the orbit mass cancels identically; treat as absent from (N)
      it = norm_coeff.erase(it);
    } else {
      ++it;
    }
  }
  if (norm_coeff.empty())
    throw VerificationFailed("normalization is infeasible (unexpected for a valid cocycle)");

  std::vector<int> free_roots;
  for (int v = 0; v < n_vars; ++v) {
    auto [root, m] = find(v);
    (void)m;
    if (root == v && !zero[v]) free_roots.push_back(v);
  }

  int pivot_root = norm_coeff.begin()->first;
  Rational pivot_coeff = norm_coeff.begin()->second;

  auto materialize = [&](const std::map<int, Rational> &root_values) {
    ExactFunctional w = ExactFunctional::zero(g);
    for (int a = 0; a < arrows; ++a) {
      auto [r_root, r_mult] = find(re(a));
      auto [i_root, i_mult] = find(im(a));
      Rational re_val(0), im_val(0);
      if (!zero[r_root]) {
        auto it = root_values.find(r_root);
        if (it != root_values.end()) re_val = r_mult * it->second;
      }
      if (!zero[i_root]) {
        auto it = root_values.find(i_root);
        if (it != root_values.end()) im_val = i_mult * it->second;
      }
      w.weights[a] = Cyclotomic::from_complex_rational(re_val, im_val);
    }
    return w;
  };

  OracleSolution solution{&g, q, ExactFunctional::zero(g), {}};
  {
    std::map<int, Rational> values{{pivot_root, Rational(1) / pivot_coeff}};
    solution.particular = materialize(values);
  }
  for (int root : free_roots) {
    if (root == pivot_root) continue;
    std::map<int, Rational> values{{root, Rational(1)}};
    auto it = norm_coeff.find(root);
    if (it != norm_coeff.end()) values[pivot_root] = -it->second / pivot_coeff;
    solution.directions.push_back(materialize(values));
  }

  // invariant: the affine basis satisfies the linear constraints exactly
  KmsDiagnostic diag = check_kms(solution.particular, c, q);
  if (!diag.linear || !diag.normalized || !diag.hermitian)
    throw VerificationFailed("oracle particular solution violates the linear constraints");
  for (const auto &dir : solution.directions) {
    if (!dir.is_hermitian() || !scalar_is_zero(dir.unit_mass()))
      throw VerificationFailed("oracle direction violates hermitian normalization");
    for (int a = 0; a < arrows; ++a) {
      Cyclotomic factor(rational_pow(q.q, c(a)));
      for (int b = 0; b < arrows; ++b) {
        Cyclotomic lhs = g.composable(a, b) ? dir.weights[g.compose(a, b)] : Cyclotomic(0);
        Cyclotomic rhs = g.composable(b, a) ? factor * dir.weights[g.compose(b, a)] : Cyclotomic(0);
        if (lhs != rhs) throw VerificationFailed("oracle direction violates (L)");
      }
    }
  }
  return solution;
}

namespace {

// real coordinates (Re, Im per arrow) of a functional, as real cyclotomics
std::vector<Cyclotomic> real_coords(const ExactFunctional &w) {
  std::vector<Cyclotomic> out;
  out.reserve(2 * w.weights.size());
  for (const auto &v : w.weights) {
    out.push_back(v.real_part());
    out.push_back(v.imag_part());
  }
  return out;
}

ExactFunctional combine(const ExactFunctional &base, const ExactFunctional &dir,
                        const Rational &t) {
  ExactFunctional out = base;
  for (std::size_t a = 0; a < out.weights.size(); ++a)
    out.weights[a] += Cyclotomic(t) * dir.weights[a];
  return out;
}

} // namespace

OracleComparison compare_with_oracle(const KMSClassification &cls, const OracleSolution &oracle,
                                     const FiniteGroupoid &g, const Cocycle &c) {
  if (oracle.groupoid != &g && !(oracle.groupoid && oracle.groupoid->same_instance(g)))
    throw InstanceMismatch("oracle computed on a different groupoid");
  if (cls.q.q != oracle.q.q) throw InstanceMismatch("classification and oracle disagree on q");
  if (cls.extremes.empty()) throw InstanceMismatch("classification has no extreme states");
  {
    const FiniteGroupoid *cg = cls.extremes[0].state.groupoid;
    if (cg != &g && !(cg && cg->same_instance(g)))
      throw InstanceMismatch("classification computed on a different groupoid");
  }

  OracleComparison cmp;
  cmp.oracle_dim = oracle.dimension();
  long coords = 2 * g.arrow_count();

  // (a) membership: w - particular must lie in the span of the directions
  {
    long k = oracle.dimension();
    cmp.forward_inclusion = true;
    for (const auto &extreme : cls.extremes) {
      CycMatrix with(k + 1, coords), without(std::max<long>(k, 1), coords);
      std::vector<Cyclotomic> diff = real_coords(extreme.state);
      std::vector<Cyclotomic> part = real_coords(oracle.particular);
      for (long j = 0; j < coords; ++j) with.at(k, j) = diff[j] - part[j];
      for (long i = 0; i < k; ++i) {
        std::vector<Cyclotomic> row = real_coords(oracle.directions[i]);
        for (long j = 0; j < coords; ++j) {
          with.at(i, j) = row[j];
          without.at(i, j) = row[j];
        }
      }
      long rank_with = matrix_rank(with);
      long rank_without = k == 0 ? 0 : matrix_rank(without);
      if (rank_with != rank_without) {
        cmp.forward_inclusion = false;
        std::ostringstream os;
        os << "state (orbit " << extreme.orbit_index << ", character " << extreme.character_index
           << ") lies outside the oracle affine space";
        cmp.witness_inclusion = os.str();
        break;
      }
    }
  }

  // (c) affine independence of the classified extremes
  {
    long m = static_cast<long>(cls.extremes.size());
    if (m == 1) {
      cmp.classified_dim = 0;
      cmp.affinely_independent = true;
    } else {
      CycMatrix diffs(m - 1, coords);
      std::vector<Cyclotomic> base = real_coords(cls.extremes[0].state);
      for (long i = 1; i < m; ++i) {
        std::vector<Cyclotomic> row = real_coords(cls.extremes[i].state);
        for (long j = 0; j < coords; ++j) diffs.at(i - 1, j) = row[j] - base[j];
      }
      cmp.classified_dim = matrix_rank(diffs);
      cmp.affinely_independent = cmp.classified_dim == m - 1;
    }
  }

  cmp.dims_equal = cmp.classified_dim == cmp.oracle_dim;

  // (b) when dimensions disagree, test whether positivity cuts the oracle
  // space: walk from the centroid of the classified simplex along each
  // direction with shrinking exact steps
  if (!cmp.dims_equal) {
    ExactFunctional centroid = ExactFunctional::zero(g);
    Rational inv(1, static_cast<long>(cls.extremes.size()));
    for (const auto &extreme : cls.extremes)
      for (std::size_t a = 0; a < centroid.weights.size(); ++a)
        centroid.weights[a] += Cyclotomic(inv) * extreme.state.weights[a];

    bool some_direction_blocked = false;
    std::ostringstream note;
    for (std::size_t i = 0; i < oracle.directions.size(); ++i) {
      bool feasible = false;
      Rational t(1, 2);
      for (int step = 0; step < 16 && !feasible; ++step, t /= 2) {
        for (int s : {+1, -1}) {
          ExactFunctional probe = combine(centroid, oracle.directions[i], s > 0 ? t : -t);
          if (is_positive(probe).positive) {
            feasible = true;
            break;
          }
        }
      }
      if (!feasible) {
        some_direction_blocked = true;
        note << "direction " << i << " leaves the PSD cone at every probed step; ";
      }
    }
    cmp.positivity_cuts = some_direction_blocked;
    cmp.positivity_note = note.str();
  }

  (void)c;
  return cmp;
}

} // namespace kmslab
