// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace relrec {

// Dense row-major matrix of doubles. Dimensions are fixed at construction;
// resize() reallocates and zero-fills.
struct Mat {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(size_t r, size_t c) { return a[r * cols + c]; }
  double at(size_t r, size_t c) const { return a[r * cols + c]; }
  double* row(size_t r) { return a.data() + r * cols; }
  const double* row(size_t r) const { return a.data() + r * cols; }
  size_t size() const { return a.size(); }

  void resize(size_t r, size_t c) {
    rows = r;
    cols = c;
    a.assign(r * c, 0.0);
  }
  void fill(double v) { a.assign(a.size(), v); }
};

// out = A * B^T where A is m x d and B is n x d.
inline void matmul_nt(const Mat& A, const Mat& B, Mat& out) {
  if (A.cols != B.cols) throw std::invalid_argument("matmul_nt: inner dims");
  out.resize(A.rows, B.rows);
  for (size_t i = 0; i < A.rows; ++i) {
    const double* ai = A.row(i);
    for (size_t j = 0; j < B.rows; ++j) {
      const double* bj = B.row(j);
      double s = 0.0;
      for (size_t k = 0; k < A.cols; ++k) s += ai[k] * bj[k];
      out.at(i, j) = s;
    }
  }
}

// out = A * B where A is m x d and B is d x n.
inline void matmul_nn(const Mat& A, const Mat& B, Mat& out) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul_nn: inner dims");
  out.resize(A.rows, B.cols);
  for (size_t i = 0; i < A.rows; ++i) {
    const double* ai = A.row(i);
    double* oi = out.row(i);
    for (size_t k = 0; k < A.cols; ++k) {
      const double v = ai[k];
      if (v == 0.0) continue;
      const double* bk = B.row(k);
      for (size_t j = 0; j < B.cols; ++j) oi[j] += v * bk[j];
    }
  }
}

// out = A^T * B where A is d x m and B is d x n.
inline void matmul_tn(const Mat& A, const Mat& B, Mat& out) {
  if (A.rows != B.rows) throw std::invalid_argument("matmul_tn: inner dims");
  out.resize(A.cols, B.cols);
  for (size_t k = 0; k < A.rows; ++k) {
    const double* ak = A.row(k);
    const double* bk = B.row(k);
    for (size_t i = 0; i < A.cols; ++i) {
      const double v = ak[i];
      if (v == 0.0) continue;
      double* oi = out.row(i);
      for (size_t j = 0; j < B.cols; ++j) oi[j] += v * bk[j];
    }
  }
}

}  // namespace relrec
