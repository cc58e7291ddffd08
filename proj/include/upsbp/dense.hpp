#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "upsbp/common.hpp"

namespace upsbp {

/// Minimal row-major dense matrix used for operator verification and small
/// eigenproblems. Not meant for large n; the solver kernels never touch it.
struct DenseMatrix {
  int n = 0;
  std::vector<double> a;  // row-major n*n

  DenseMatrix() = default;
  explicit DenseMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
  DenseMatrix(int size, std::vector<double> data) : n(size), a(std::move(data)) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  DenseMatrix transposed() const {
    DenseMatrix t(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// max_i sum_j |a_ij|
  double inf_norm() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += std::abs((*this)(i, j));
      if (s > m) m = s;
    }
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
};

inline DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int k = 0; k < A.n; ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < A.n; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

inline DenseMatrix operator+(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}

inline DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
  return C;
}

inline DenseMatrix scale_rows(const std::vector<double>& d, const DenseMatrix& A) {
  DenseMatrix C = A;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) C(i, j) *= d[i];
  return C;
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method. The input
/// is symmetrized as (A + A^T)/2 first. Robust and dependency-free; adequate
/// for the operator sizes the verification suite handles.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& A);

}  // namespace upsbp
