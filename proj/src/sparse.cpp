#include "twophase/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twophase/errors.hpp"

namespace twophase {

SparseMatrix::SparseMatrix(int dimension, std::vector<Triplet> entries) : n_(dimension) {
  if (dimension < 0) throw InvalidArgument("negative matrix dimension");
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= n_ || e.col < 0 || e.col >= n_) {
      throw InvalidArgument("triplet index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  row_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
  col_.reserve(entries.size());
  values_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const int r = entries[k].row, c = entries[k].col;
    double sum = 0.0;
    for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k) {
      sum += entries[k].value;
    }
    col_.push_back(c);
    values_.push_back(sum);
    ++row_ptr_[r + 1];
  }
  for (int i = 0; i < n_; ++i) row_ptr_[i + 1] += row_ptr_[i];
}

double SparseMatrix::at(int i, int j) const {
  const auto first = col_.begin() + row_ptr_[i];
  const auto last = col_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[it - col_.begin()] : 0.0;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_);
  for (int i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) sum += values_[k] * x[col_[k]];
    y[i] = sum;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::restrict_to(std::span<const int> keep) const {
  std::vector<int> new_index(n_, -1);
  for (std::size_t k = 0; k < keep.size(); ++k) new_index[keep[k]] = static_cast<int>(k);
  std::vector<Triplet> entries;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const int i = keep[k];
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const int j = new_index[col_[p]];
      if (j >= 0) entries.push_back({static_cast<int>(k), j, values_[p]});
    }
  }
  return SparseMatrix(static_cast<int>(keep.size()), std::move(entries));
}

double SparseMatrix::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(col_[k], i)));
    }
  }
  return worst;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CgResult solve_pcg(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                   double rel_tol, int max_iter) {
  const int n = a.dimension();
  if (static_cast<int>(b.size()) != n || static_cast<int>(x.size()) != n) {
    throw InvalidArgument("solve_pcg: vector length does not match matrix dimension");
  }
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }

  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) throw SolverError("solve_pcg: nonpositive diagonal entry");
    d = 1.0 / d;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  a.multiply(x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = norm2(r);
  const double target = rel_tol * bnorm;
  if (rnorm <= target) return {0, rnorm / bnorm};

  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= max_iter; ++it) {
    a.multiply(p, q);
    const double alpha = rz / dot(p, q);
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = norm2(r);
    if (rnorm <= target) return {it, rnorm / bnorm};
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream msg;
  msg << "conjugate gradients did not converge in " << max_iter
      << " iterations (relative residual " << rnorm / bnorm << ")";
  throw SolverError(msg.str());
}

}  // namespace twophase
