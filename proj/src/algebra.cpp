#include "kmslab/algebra.hpp"

#include <cmath>
#include <sstream>

namespace kmslab {

Element<Cyclotomic> gibbs_twist(const Element<Cyclotomic> &f, const Cocycle &c,
                                const TemperatureParameter &q) {
  Element<Cyclotomic> out;
  out.groupoid = f.groupoid;
  for (const auto &[a, coeff] : f.coeffs) {
    Cyclotomic factor(rational_pow(q.q, c(a)));
    Cyclotomic v = factor * coeff;
    if (!v.is_zero()) out.coeffs[a] = v;
  }
  return out;
}

Element<CF64> gibbs_twist(const Element<CF64> &f, const Cocycle &c, const TemperatureParameter &q) {
  Element<CF64> out;
  out.groupoid = f.groupoid;
  double qd = to_double(q.q);
  for (const auto &[a, coeff] : f.coeffs) {
    CF64 v = std::pow(qd, static_cast<double>(c(a))) * coeff;
    if (!scalar_is_zero(v)) out.coeffs[a] = v;
  }
  return out;
}

Element<CF64> time_action(const Element<CF64> &f, const Cocycle &c, double t) {
  Element<CF64> out;
  out.groupoid = f.groupoid;
  for (const auto &[a, coeff] : f.coeffs) {
    double angle = t * static_cast<double>(c(a));
    CF64 v = CF64(std::cos(angle), std::sin(angle)) * coeff;
    if (!scalar_is_zero(v)) out.coeffs[a] = v;
  }
  return out;
}

CycMatrix moment_matrix(const ExactFunctional &w) {
  if (!w.is_hermitian()) throw NotHermitian("moment matrix needs hermitian weights");
  const FiniteGroupoid &g = *w.groupoid;
  int n = g.arrow_count();
  CycMatrix m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (g.tgt[a] != g.tgt[b]) continue;
      // g^{-1} h is composable exactly when r(g) = r(h)
      m.at(a, b) = w.weights[g.compose(g.inv[a], b)];
    }
  return m;
}

namespace {

// arrows grouped by range unit; the moment matrix is block diagonal over these
std::vector<std::vector<int>> range_classes(const FiniteGroupoid &g) {
  std::vector<std::vector<int>> classes(g.unit_count());
  for (int a = 0; a < g.arrow_count(); ++a) classes[g.tgt[a]].push_back(a);
  return classes;
}

} // namespace

PositivityResult is_positive(const ExactFunctional &w) {
  if (!w.is_hermitian()) throw NotHermitian("positivity test needs hermitian weights");
  const FiniteGroupoid &g = *w.groupoid;
  PositivityResult result;
  for (const auto &cls : range_classes(g)) {
    long n = static_cast<long>(cls.size());
    CycMatrix block(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        block.at(i, j) = w.weights[g.compose(g.inv[cls[i]], cls[j])];
    PsdResult r = psd_check(block);
    if (!r.psd) {
      std::ostringstream os;
      os << "moment block at unit '" << g.units[g.tgt[cls[0]]] << "': " << r.witness;
      result.positive = false;
      result.witness = os.str();
      return result;
    }
    result.blocks.push_back(std::move(r));
  }
  result.positive = true;
  return result;
}

PositivityResult is_positive(const FloatFunctional &w) {
  if (!w.is_hermitian()) throw NotHermitian("positivity test needs hermitian weights");
  const FiniteGroupoid &g = *w.groupoid;
  PositivityResult result;
  double min_eig = 0.0;
  for (const auto &cls : range_classes(g)) {
    long n = static_cast<long>(cls.size());
    std::vector<CF64> block(n * n, CF64(0.0));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        block[i * n + j] = w.weights[g.compose(g.inv[cls[i]], cls[j])];
    double eig = min_eigenvalue_hermitian(block, n);
    min_eig = std::min(min_eig, eig);
  }
  result.min_eigenvalue = min_eig;
  result.positive = min_eig >= -1e-9;
  if (!result.positive) {
    std::ostringstream os;
    os << "minimum eigenvalue " << min_eig << " below -1e-9";
    result.witness = os.str();
  }
  return result;
}

} // namespace kmslab
