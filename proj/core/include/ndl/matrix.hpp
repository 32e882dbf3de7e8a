#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ndl/errors.hpp"

namespace ndl {

/// Minimal dense column-major matrix of doubles.
///
/// Sized for this library's workloads (patches k x k with k <= ~30,
/// dictionaries k^2 x r with r <= ~100); plain loops, no BLAS.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // column-major, size rows*cols

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw parameter_error("Mat dimensions must be nonnegative");
  }

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(j) * rows + i]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(j) * rows + i]; }

  double* col(int j) { return a.data() + static_cast<std::size_t>(j) * rows; }
  const double* col(int j) const { return a.data() + static_cast<std::size_t>(j) * rows; }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

/// C = A * B.
inline Mat matmul(const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw parameter_error("matmul: inner dimensions differ");
  Mat C(A.rows, B.cols);
  for (int j = 0; j < B.cols; ++j) {
    const double* bj = B.col(j);
    double* cj = C.col(j);
    for (int l = 0; l < A.cols; ++l) {
      double b = bj[l];
      if (b == 0.0) continue;
      const double* al = A.col(l);
      for (int i = 0; i < A.rows; ++i) cj[i] += al[i] * b;
    }
  }
  return C;
}

/// C = A^T * B.
inline Mat matmul_ta(const Mat& A, const Mat& B) {
  if (A.rows != B.rows) throw parameter_error("matmul_ta: row counts differ");
  Mat C(A.cols, B.cols);
  for (int j = 0; j < B.cols; ++j) {
    const double* bj = B.col(j);
    for (int i = 0; i < A.cols; ++i) {
      const double* ai = A.col(i);
      double s = 0.0;
      for (int l = 0; l < A.rows; ++l) s += ai[l] * bj[l];
      C(i, j) = s;
    }
  }
  return C;
}

/// C = A * B^T.
inline Mat matmul_tb(const Mat& A, const Mat& B) {
  if (A.cols != B.cols) throw parameter_error("matmul_tb: column counts differ");
  Mat C(A.rows, B.rows);
  for (int l = 0; l < A.cols; ++l) {
    const double* al = A.col(l);
    const double* bl = B.col(l);
    for (int j = 0; j < B.rows; ++j) {
      double b = bl[j];
      if (b == 0.0) continue;
      double* cj = C.col(j);
      for (int i = 0; i < A.rows; ++i) cj[i] += al[i] * b;
    }
  }
  return C;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int j = 0; j < A.cols; ++j)
    for (int i = 0; i < A.rows; ++i) T(j, i) = A(i, j);
  return T;
}

inline double frob_norm(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s += v * v;
  return std::sqrt(s);
}

/// Entrywise L1 norm.
inline double l1_norm(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s += std::abs(v);
  return s;
}

/// Largest absolute entry.
inline double max_abs(const Mat& A) {
  double m = 0.0;
  for (double v : A.a) m = std::max(m, std::abs(v));
  return m;
}

inline double trace(const Mat& A) {
  double s = 0.0;
  int d = std::min(A.rows, A.cols);
  for (int i = 0; i < d; ++i) s += A(i, i);
  return s;
}

inline double col_norm(const Mat& A, int j) {
  const double* c = A.col(j);
  double s = 0.0;
  for (int i = 0; i < A.rows; ++i) s += c[i] * c[i];
  return std::sqrt(s);
}

}  // namespace ndl
