#ifndef KMSLAB_LINALG_HPP
#define KMSLAB_LINALG_HPP

#include "kmslab/cyclotomic.hpp"

#include <complex>
#include <string>
#include <vector>

namespace kmslab {

// Dense matrix over the exact complex scalar.
class CycMatrix {
public:
  CycMatrix() : rows_(0), cols_(0) {}
  CycMatrix(long rows, long cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  Cyclotomic &at(long i, long j) { return data_[i * cols_ + j]; }
  const Cyclotomic &at(long i, long j) const { return data_[i * cols_ + j]; }
  long rows() const { return rows_; }
  long cols() const { return cols_; }

private:
  long rows_, cols_;
  std::vector<Cyclotomic> data_;
};

bool is_hermitian(const CycMatrix &m);

// Outcome of the pivoted exact LDL* positive-semidefiniteness test.
// On success the permutation and pivots reconstruct M = P L D L* P^T with
// all pivots > 0 (zero rows eliminated implicitly).  On failure `witness`
// names the offending principal submatrix.
struct PsdResult {
  bool psd = false;
  std::vector<long> perm;
  std::vector<Cyclotomic> pivots;
  std::string witness;
};

// Exact PSD test; throws NotHermitian when the matrix is not hermitian.
PsdResult psd_check(const CycMatrix &m);

// Rank over the cyclotomic field (destructive Gaussian elimination on a copy).
long matrix_rank(CycMatrix m);

// Minimum eigenvalue of a hermitian matrix given in row-major complex doubles.
double min_eigenvalue_hermitian(const std::vector<std::complex<double>> &flat, long n);

} // namespace kmslab

#endif
