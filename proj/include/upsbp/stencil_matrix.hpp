#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "upsbp/common.hpp"

namespace upsbp {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Square sparse matrix in compressed-row form. Derivative operators have a
/// handful of entries per row, so matrix-vector products run in
/// O(bandwidth * n) regardless of n. Supports strided input/output so the
/// same operator can sweep the lines of a tensor-product field.
class StencilMatrix {
 public:
  StencilMatrix() = default;

  static StencilMatrix from_triplets(int n, std::vector<Triplet> entries) {
    if (n < 0) throw InvalidArgument("StencilMatrix: negative size");
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    StencilMatrix m;
    m.n_ = n;
    m.rowptr_.assign(n + 1, 0);
    for (const auto& t : entries) {
      if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
        throw InvalidArgument("StencilMatrix: entry out of range");
    }
    m.cols_.reserve(entries.size());
    m.vals_.reserve(entries.size());
    std::size_t i = 0;
    for (int r = 0; r < n; ++r) {
      m.rowptr_[r] = static_cast<int>(m.cols_.size());
      while (i < entries.size() && entries[i].row == r) {
        // merge duplicates
        if (!m.cols_.empty() && m.rowptr_[r] < static_cast<int>(m.cols_.size()) &&
            m.cols_.back() == entries[i].col) {
          m.vals_.back() += entries[i].value;
        } else {
          m.cols_.push_back(entries[i].col);
          m.vals_.push_back(entries[i].value);
        }
        ++i;
      }
    }
    m.rowptr_[n] = static_cast<int>(m.cols_.size());
    return m;
  }

  int size() const { return n_; }
  std::size_t nonzeros() const { return vals_.size(); }

  /// y[i*ystride] (+)= alpha * sum_j A(i,j) x[j*xstride]
  template <class Real>
  void apply(const Real* x, std::ptrdiff_t xstride, Real* y, std::ptrdiff_t ystride,
             double alpha, bool accumulate) const {
    for (int r = 0; r < n_; ++r) {
      Real acc{};
      for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) {
        acc += vals_[k] * x[cols_[k] * xstride];
      }
      if (accumulate)
        y[r * ystride] += alpha * acc;
      else
        y[r * ystride] = alpha * acc;
    }
  }

  template <class Real>
  std::vector<Real> operator*(const std::vector<Real>& x) const {
    if (static_cast<int>(x.size()) != n_) throw InvalidArgument("StencilMatrix: size mismatch");
    std::vector<Real> y(n_);
    apply(x.data(), 1, y.data(), 1, 1.0, false);
    return y;
  }

  double coeff(int i, int j) const {
    for (int k = rowptr_[i]; k < rowptr_[i + 1]; ++k)
      if (cols_[k] == j) return vals_[k];
    return 0.0;
  }

  /// Row-major dense copy, for verification and small eigenproblems.
  std::vector<double> dense() const {
    std::vector<double> a(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int r = 0; r < n_; ++r)
      for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k)
        a[static_cast<std::size_t>(r) * n_ + cols_[k]] = vals_[k];
    return a;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (int r = 0; r < n_; ++r)
      for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) fn(r, cols_[k], vals_[k]);
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> t;
    t.reserve(vals_.size());
    for_each([&](int r, int c, double v) { t.push_back({r, c, v}); });
    return t;
  }

  /// Columns touched by row r, as [lo, hi] extremes.
  std::pair<int, int> row_extent(int r) const {
    int lo = n_, hi = -1;
    for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) {
      lo = std::min(lo, cols_[k]);
      hi = std::max(hi, cols_[k]);
    }
    return {lo, hi};
  }

  bool operator==(const StencilMatrix& o) const {
    return n_ == o.n_ && rowptr_ == o.rowptr_ && cols_ == o.cols_ && vals_ == o.vals_;
  }

 private:
  int n_ = 0;
  std::vector<int> rowptr_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

}  // namespace upsbp
