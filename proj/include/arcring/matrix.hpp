#pragma once

// Dense row-major matrices over an exact scalar type.  Small sizes only;
// everything here is O(n^3) with no blocking.

#include <stdexcept>
#include <vector>

namespace arcring {

template <typename T>
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;  // row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, T(0)) {
    if (r < 0 || c < 0) throw std::invalid_argument("negative matrix dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
    return m;
  }

  T& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  const T& at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  bool is_zero() const {
    for (const T& v : data)
      if (v != T(0)) return false;
    return true;
  }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }
};

template <typename T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
  Matrix<T> out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const T& v = a.at(i, k);
      if (v == T(0)) continue;
      for (int j = 0; j < b.cols; ++j) out.at(i, j) += v * b.at(k, j);
    }
  return out;
}

template <typename T>
Matrix<T> mat_add(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("matrix sum shape mismatch");
  Matrix<T> out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

template <typename T>
Matrix<T> mat_sub(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("matrix diff shape mismatch");
  Matrix<T> out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
  return out;
}

template <typename T>
Matrix<T> mat_neg(const Matrix<T>& a) {
  Matrix<T> out = a;
  for (T& v : out.data) v = -v;
  return out;
}

template <typename U, typename T>
Matrix<U> mat_cast(const Matrix<T>& a) {
  Matrix<U> out(a.rows, a.cols);
  for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = static_cast<U>(a.data[i]);
  return out;
}

}  // namespace arcring
