#include "kmslab/crossed_product.hpp"

#include "kmslab/errors.hpp"
#include "kmslab/linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace kmslab {

FiniteZSystem validate_z_system(const std::vector<std::string> &points,
                                const std::vector<int> &shift) {
  if (points.empty()) throw Error("empty point set");
  if (shift.size() != points.size()) throw Error("shift table has wrong size");
  std::vector<bool> hit(points.size(), false);
  for (int y : shift) {
    if (y < 0 || y >= static_cast<int>(points.size()) || hit[y])
      throw Error("shift is not a permutation");
    hit[y] = true;
  }
  return FiniteZSystem{points, shift};
}

std::vector<PeriodicOrbit> periodic_orbits(const FiniteZSystem &sys) {
  std::vector<PeriodicOrbit> out;
  std::vector<bool> seen(sys.points.size(), false);
  for (int x = 0; x < static_cast<int>(sys.points.size()); ++x) {
    if (seen[x]) continue;
    PeriodicOrbit orbit;
    int cur = x;
    do {
      seen[cur] = true;
      orbit.cycle.push_back(cur);
      cur = sys.shift[cur];
    } while (cur != x);
    orbit.period = static_cast<long>(orbit.cycle.size());
    out.push_back(std::move(orbit));
  }
  return out;
}

const Cyclotomic &MomentSequence::at(long m) const {
  if (m < -cutoff || m > cutoff) throw CutoffExceeded("moment index " + std::to_string(m));
  return moments[m + cutoff];
}

void MomentSequence::validate() const {
  if (period < 1) throw NotATrace("period must be positive");
  if (static_cast<long>(moments.size()) != 2 * cutoff + 1)
    throw NotATrace("moment array has wrong length");
  if (at(0) != Cyclotomic(1)) throw NotATrace("c(0) != 1");
  for (long m = 1; m <= cutoff; ++m)
    if (at(-m) != at(m).conj())
      throw NotATrace("conjugate symmetry fails at m = " + std::to_string(m));
  for (long m = -cutoff; m <= cutoff; ++m)
    if (m % period != 0 && !at(m).is_zero())
      throw NotATrace("support violation: c(" + std::to_string(m) +
                      ") != 0 is incompatible with " + std::to_string(period) +
                      "-rotation invariance");
  CycMatrix toeplitz(cutoff + 1, cutoff + 1);
  for (long j = 0; j <= cutoff; ++j)
    for (long k = 0; k <= cutoff; ++k) toeplitz.at(j, k) = at(j - k);
  PsdResult psd = psd_check(toeplitz);
  if (!psd.psd) throw NotATrace("Toeplitz minor not PSD: " + psd.witness);
}

Cyclotomic expectation_Ex(const std::vector<Cyclotomic> &f, long m, const PeriodicOrbit &orbit) {
  (void)m;
  Cyclotomic acc(0);
  for (int x : orbit.cycle) acc += f[x];
  return acc / Cyclotomic(Rational(orbit.period));
}

Cyclotomic trace_from_data(const TraceData &data, const std::vector<Cyclotomic> &f, long m) {
  std::vector<PeriodicOrbit> orbits = periodic_orbits(*data.system);
  Cyclotomic acc(0);
  for (const auto &entry : data.entries) {
    if (m < -entry.lambda.cutoff || m > entry.lambda.cutoff)
      throw CutoffExceeded("m = " + std::to_string(m) + " exceeds cutoff " +
                           std::to_string(entry.lambda.cutoff));
    acc += Cyclotomic(entry.weight) * entry.lambda.at(m) *
           expectation_Ex(f, m, orbits[entry.orbit_index]);
  }
  return acc;
}

TraceData decompose_trace(const FiniteZSystem &sys,
                          const std::vector<std::vector<Cyclotomic>> &values, long cutoff) {
  std::vector<PeriodicOrbit> orbits = periodic_orbits(sys);
  if (values.size() != orbits.size()) throw NotATrace("one value row per orbit required");
  for (const auto &row : values)
    if (static_cast<long>(row.size()) != 2 * cutoff + 1)
      throw NotATrace("value rows must cover m in [-M, M]");

  TraceData data;
  data.system = &sys;
  Rational total(0);
  for (std::size_t n = 0; n < orbits.size(); ++n) {
    const Cyclotomic &w = values[n][cutoff]; // m = 0
    if (!w.is_rational())
      throw NotATrace("orbit weight at m = 0 must be a nonnegative rational");
    Rational weight = w.rational_value();
    if (weight < 0) throw NotATrace("negative orbit weight");
    total += weight;
    if (weight == 0) {
      for (long m = -cutoff; m <= cutoff; ++m)
        if (!values[n][m + cutoff].is_zero())
          throw NotATrace("uncharged orbit " + std::to_string(n) + " carries a nonzero value");
      continue;
    }
    MomentSequence lambda;
    lambda.period = orbits[n].period;
    lambda.cutoff = cutoff;
    lambda.moments.resize(2 * cutoff + 1);
    Cyclotomic inv_w(Rational(1) / weight);
    for (long m = -cutoff; m <= cutoff; ++m)
      lambda.moments[m + cutoff] = values[n][m + cutoff] * inv_w;
    lambda.validate();
    data.entries.push_back(TraceData::Entry{static_cast<int>(n), weight, std::move(lambda)});
  }
  if (total != 1) throw NotATrace("orbit weights sum to " + rational_to_string(total));
  return data;
}

namespace {

// dual tuple arithmetic for the characters of an abelian group, in the
// abelian_characters (lexicographic) order
struct DualIndex {
  std::vector<long> factors;

  long count() const {
    long n = 1;
    for (long d : factors) n *= d;
    return n;
  }
  std::vector<long> tuple(long index) const {
    std::vector<long> t(factors.size(), 0);
    for (int j = static_cast<int>(factors.size()) - 1; j >= 0; --j) {
      t[j] = index % factors[j];
      index /= factors[j];
    }
    return t;
  }
  long index(const std::vector<long> &t) const {
    long idx = 0;
    for (std::size_t j = 0; j < factors.size(); ++j) idx = idx * factors[j] + t[j];
    return idx;
  }
  long add(long a, long b) const {
    auto ta = tuple(a), tb = tuple(b);
    for (std::size_t j = 0; j < factors.size(); ++j) ta[j] = (ta[j] + tb[j]) % factors[j];
    return index(ta);
  }
};

std::vector<std::vector<int>> action_orbits(int points, const FiniteGroup &gamma,
                                            const std::vector<int> &action) {
  std::vector<std::vector<int>> blocks;
  std::vector<bool> seen(points, false);
  for (int x = 0; x < points; ++x) {
    if (seen[x]) continue;
    std::set<int> orbit;
    std::vector<int> frontier{x};
    while (!frontier.empty()) {
      int y = frontier.back();
      frontier.pop_back();
      if (!orbit.insert(y).second) continue;
      for (int gi = 0; gi < gamma.order(); ++gi) frontier.push_back(action[gi * points + y]);
    }
    std::vector<int> block(orbit.begin(), orbit.end());
    for (int y : block) seen[y] = true;
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<int> stabilizer_of(int x, int points, const FiniteGroup &gamma,
                               const std::vector<int> &action) {
  std::vector<int> stab;
  for (int gi = 0; gi < gamma.order(); ++gi)
    if (action[gi * points + x] == x) stab.push_back(gi);
  return stab;
}

int groupoid_arrow(const FiniteGroupoid &tg, const FiniteGroup &gamma,
                   const std::vector<std::string> &space, int gi, int x) {
  if (gi == gamma.identity) return tg.arrow_index(space[x]);
  return tg.arrow_index("(" + gamma.elements[gi] + "," + space[x] + ")");
}

} // namespace

ExactFunctional abelian_trace_measure(const FiniteGroup &gamma,
                                      const std::vector<std::string> &space,
                                      const std::vector<int> &action,
                                      const AbelianTraceMeasure &nu, const FiniteGroupoid &tg) {
  if (!gamma.is_abelian()) throw NonAbelian("abelian_trace_measure");
  int points = static_cast<int>(space.size());
  AbelianDecomposition dec = abelian_decomposition(gamma);
  DualIndex dual{dec.factors};
  long chars = dual.count();
  auto char_rows = abelian_characters(gamma);

  if (static_cast<int>(nu.weights.size()) != points)
    throw InvariantViolated("measure needs one fiber per point");
  Rational total(0);
  for (const auto &fiber : nu.weights) {
    if (static_cast<long>(fiber.size()) != chars) throw InvariantViolated("fiber has wrong character count");
    for (const auto &w : fiber) {
      if (w < 0) throw InvariantViolated("measure weights must be nonnegative");
      total += w;
    }
  }
  if (total != 1) throw InvariantViolated("measure mass is " + rational_to_string(total) + ", not 1");

  // (i) invariance under the action on the X coordinate
  for (int gi = 0; gi < gamma.order(); ++gi)
    for (int x = 0; x < points; ++x)
      for (long ch = 0; ch < chars; ++ch)
        if (nu.weights[x][ch] != nu.weights[action[gi * points + x]][ch])
          throw InvariantViolated("measure is not invariant on the space coordinate");

  // (ii) fiber invariance under translation by the stabilizer annihilator
  for (int x = 0; x < points; ++x) {
    std::vector<int> stab = stabilizer_of(x, points, gamma, action);
    for (long psi = 0; psi < chars; ++psi) {
      bool in_perp = true;
      for (int h : stab)
        if (char_rows[psi][h] != Cyclotomic(1)) {
          in_perp = false;
          break;
        }
      if (!in_perp) continue;
      for (long ch = 0; ch < chars; ++ch)
        if (nu.weights[x][ch] != nu.weights[x][dual.add(ch, psi)])
          throw InvariantViolated("fiber at '" + space[x] + "' is not stabilizer-annihilator invariant");
    }
  }

  ExactFunctional w = ExactFunctional::zero(tg);
  for (int gi = 0; gi < gamma.order(); ++gi)
    for (int x = 0; x < points; ++x) {
      Cyclotomic fourier(0);
      for (long ch = 0; ch < chars; ++ch)
        fourier += char_rows[ch][gi] * Cyclotomic(nu.weights[x][ch]);
      if (action[gi * points + x] == x) {
        w.weights[groupoid_arrow(tg, gamma, space, gi, x)] = fourier;
      } else if (!fourier.is_zero()) {
        throw InvariantViolated("off-isotropy Fourier sum does not vanish at (" + gamma.elements[gi] +
                               "," + space[x] + ")");
      }
    }
  return w;
}

std::vector<ExtremalTraceTriple> extremal_traces_enumerate(const FiniteGroup &gamma,
                                                           const std::vector<std::string> &space,
                                                           const std::vector<int> &action,
                                                           const FiniteGroupoid &tg) {
  if (!gamma.is_abelian()) throw NonAbelian("extremal trace enumeration");
  int points = static_cast<int>(space.size());

  std::vector<ExtremalTraceTriple> out;
  auto blocks = action_orbits(points, gamma, action);
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    const auto &orbit = blocks[n];
    std::vector<int> stab = stabilizer_of(orbit.front(), points, gamma, action);
    // abelian stabilizers are constant along the orbit
    for (int y : orbit)
      if (stabilizer_of(y, points, gamma, action) != stab)
        throw VerificationFailed("stabilizer varies along an orbit of an abelian action");

    Subgroup h = subgroup_of(gamma, stab);
    auto h_chars = abelian_characters(h.group);
    for (std::size_t ci = 0; ci < h_chars.size(); ++ci) {
      ExtremalTraceTriple triple;
      triple.orbit_index = static_cast<int>(n);
      triple.orbit = orbit;
      triple.stabilizer = stab;
      triple.character_index = static_cast<int>(ci);
      triple.trace = ExactFunctional::zero(tg);
      Cyclotomic mass(Rational(1, static_cast<long>(orbit.size())));
      for (std::size_t hi = 0; hi < h.embedding.size(); ++hi)
        for (int y : orbit) {
          int arrow = groupoid_arrow(tg, gamma, space, h.embedding[hi], y);
          triple.trace.weights[arrow] = mass * h_chars[ci][hi];
        }
      out.push_back(std::move(triple));
    }
  }
  return out;
}

} // namespace kmslab
