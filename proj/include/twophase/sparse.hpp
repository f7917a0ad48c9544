#pragma once

#include <span>
#include <vector>

namespace twophase {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Square matrix in compressed sparse row form. Column indices are sorted
/// within each row and duplicates are summed on construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int dimension, std::vector<Triplet> entries);

  int dimension() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_index() const { return col_; }
  std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero when not stored. O(log row length).
  double at(int i, int j) const;
  std::vector<double> diagonal() const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  /// Principal submatrix on the given (sorted) index set.
  SparseMatrix restrict_to(std::span<const int> keep) const;

  /// Largest |A_ij - A_ji| over stored entries.
  double asymmetry() const;

 private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for SPD A. x holds the initial
/// guess on entry and the solution on exit. Iterates until
/// ||b - Ax|| <= rel_tol ||b||; throws SolverError after max_iter steps.
CgResult solve_pcg(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                   double rel_tol, int max_iter);

}  // namespace twophase
