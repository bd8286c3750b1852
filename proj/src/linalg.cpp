#include "kmslab/linalg.hpp"

#include "kmslab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kmslab {

bool is_hermitian(const CycMatrix &m) {
  if (m.rows() != m.cols()) return false;
  for (long i = 0; i < m.rows(); ++i)
    for (long j = i; j < m.cols(); ++j)
      if (m.at(i, j) != m.at(j, i).conj()) return false;
  return true;
}

PsdResult psd_check(const CycMatrix &m) {
  if (!is_hermitian(m)) throw NotHermitian("psd_check requires a hermitian matrix");
  long n = m.rows();
  CycMatrix a = m;
  std::vector<long> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);

  PsdResult result;
  while (!remaining.empty()) {
    // diagonal entries are real; a negative one kills positivity outright
    long pivot_pos = -1;
    for (std::size_t t = 0; t < remaining.size(); ++t) {
      long i = remaining[t];
      int s = a.at(i, i).sign_real();
      if (s < 0) {
        std::ostringstream os;
        os << "negative pivot at index " << i << " after eliminating {";
        for (std::size_t k = 0; k < result.perm.size(); ++k)
          os << (k ? "," : "") << result.perm[k];
        os << "}";
        result.psd = false;
        result.witness = os.str();
        return result;
      }
      if (s > 0 && pivot_pos < 0) pivot_pos = static_cast<long>(t);
    }
    if (pivot_pos < 0) {
      // all remaining diagonal entries vanish: PSD forces the rest to vanish too
      for (long i : remaining)
        for (long j : remaining)
          if (!a.at(i, j).is_zero()) {
            std::ostringstream os;
            os << "zero diagonal at index " << i << " with nonzero entry at (" << i << "," << j
               << ")";
            result.psd = false;
            result.witness = os.str();
            return result;
          }
      break;
    }
    long p = remaining[pivot_pos];
    Cyclotomic d = a.at(p, p);
    result.perm.push_back(p);
    result.pivots.push_back(d);
    remaining.erase(remaining.begin() + pivot_pos);
    for (long i : remaining)
      for (long j : remaining) a.at(i, j) -= a.at(i, p) * a.at(p, j) / d;
  }
  result.psd = true;
  return result;
}

long matrix_rank(CycMatrix m) {
  long rank = 0;
  long row = 0;
  for (long col = 0; col < m.cols() && row < m.rows(); ++col) {
    long pivot = -1;
    for (long i = row; i < m.rows(); ++i)
      if (!m.at(i, col).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row)
      for (long j = 0; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(row, j));
    Cyclotomic lead = m.at(row, col);
    for (long i = row + 1; i < m.rows(); ++i) {
      if (m.at(i, col).is_zero()) continue;
      Cyclotomic factor = m.at(i, col) / lead;
      for (long j = col; j < m.cols(); ++j) m.at(i, j) -= factor * m.at(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

double min_eigenvalue_hermitian(const std::vector<std::complex<double>> &flat, long n) {
  Eigen::MatrixXcd m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = flat[i * n + j];
  if (n == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw VerificationFailed("eigenvalue solver failed");
  return solver.eigenvalues().minCoeff();
}

} // namespace kmslab
