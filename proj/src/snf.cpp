#include "arcring/snf.hpp"

#include <algorithm>
#include <utility>

namespace arcring {

namespace {

BigInt big_abs(const BigInt& v) { return v < 0 ? -v : v; }

BigInt big_gcd(BigInt a, BigInt b) {
  a = big_abs(a);
  b = big_abs(b);
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void swap_rows(Matrix<BigInt>& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols; ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(Matrix<BigInt>& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, a), m.at(i, b));
}

// row[a] -= q * row[b], columns from `from`
void row_axpy(Matrix<BigInt>& m, int a, int b, const BigInt& q, int from) {
  if (q == 0) return;
  for (int j = from; j < m.cols; ++j) m.at(a, j) -= q * m.at(b, j);
}

void col_axpy(Matrix<BigInt>& m, int a, int b, const BigInt& q, int from) {
  if (q == 0) return;
  for (int i = from; i < m.rows; ++i) m.at(i, a) -= q * m.at(i, b);
}

}  // namespace

SmithResult smith_normal_form(Matrix<BigInt> m) {
  SmithResult out;
  int t = 0;
  const int bound = std::min(m.rows, m.cols);
  std::vector<BigInt> diag;
  while (t < bound) {
    // smallest nonzero magnitude in the trailing submatrix
    int pi = -1, pj = -1;
    BigInt best = 0;
    for (int i = t; i < m.rows; ++i)
      for (int j = t; j < m.cols; ++j) {
        const BigInt& v = m.at(i, j);
        if (v == 0) continue;
        BigInt a = big_abs(v);
        if (pi < 0 || a < best) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // trailing block is zero
    swap_rows(m, t, pi);
    swap_cols(m, t, pj);

    bool settled = false;
    while (!settled) {
      settled = true;
      // clear column t; imperfect divisions shrink the pivot and restart
      for (int i = t + 1; i < m.rows; ++i) {
        if (m.at(i, t) == 0) continue;
        BigInt q = m.at(i, t) / m.at(t, t);
        row_axpy(m, i, t, q, t);
        if (m.at(i, t) != 0) {
          swap_rows(m, t, i);
          settled = false;
        }
      }
      if (!settled) continue;
      for (int j = t + 1; j < m.cols; ++j) {
        if (m.at(t, j) == 0) continue;
        BigInt q = m.at(t, j) / m.at(t, t);
        col_axpy(m, j, t, q, t);
        if (m.at(t, j) != 0) {
          swap_cols(m, t, j);
          settled = false;
        }
      }
      if (!settled) continue;
      // pivot must divide the rest of the block; fold a bad row in and redo
      for (int i = t + 1; i < m.rows && settled; ++i)
        for (int j = t + 1; j < m.cols; ++j)
          if (m.at(i, j) % m.at(t, t) != 0) {
            row_axpy(m, t, i, BigInt(-1), t);
            settled = false;
            break;
          }
    }
    if (m.at(t, t) < 0) m.at(t, t) = -m.at(t, t);
    diag.push_back(m.at(t, t));
    ++t;
  }
  // enforce the divisibility chain (the fold-in above usually settles it)
  for (size_t i = 0; i + 1 < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j)
      if (diag[j] % diag[i] != 0) {
        BigInt g = big_gcd(diag[i], diag[j]);
        BigInt l = diag[i] / g * diag[j];
        diag[i] = g;
        diag[j] = l;
      }
  out.rank = static_cast<int>(diag.size());
  out.invariant_factors = std::move(diag);
  return out;
}

BigInt det_bareiss(Matrix<BigInt> m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant of a non-square matrix");
  const int n = m.rows;
  if (n == 0) return 1;
  BigInt denom = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      swap_rows(m, k, swap);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        BigInt v = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = v / denom;  // exact by Sylvester's identity
      }
    denom = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

SmithTransforms smith_with_transforms(const Matrix<BigInt>& a) {
  Matrix<BigInt> m = a;
  SmithTransforms out{Matrix<BigInt>::identity(m.rows), Matrix<BigInt>::identity(m.cols), {}, 0};
  auto srow = [&](int i, int j) {
    swap_rows(m, i, j);
    swap_rows(out.u, i, j);
  };
  auto scol = [&](int i, int j) {
    swap_cols(m, i, j);
    swap_cols(out.v, i, j);
  };
  auto raxpy = [&](int i, int j, const BigInt& q) {
    row_axpy(m, i, j, q, 0);
    row_axpy(out.u, i, j, q, 0);
  };
  auto caxpy = [&](int i, int j, const BigInt& q) {
    col_axpy(m, i, j, q, 0);
    col_axpy(out.v, i, j, q, 0);
  };
  int t = 0;
  const int bound = std::min(m.rows, m.cols);
  while (t < bound) {
    int pi = -1, pj = -1;
    BigInt best = 0;
    for (int i = t; i < m.rows; ++i)
      for (int j = t; j < m.cols; ++j) {
        if (m.at(i, j) == 0) continue;
        BigInt v = big_abs(m.at(i, j));
        if (pi < 0 || v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    srow(t, pi);
    scol(t, pj);
    bool settled = false;
    while (!settled) {
      settled = true;
      for (int i = t + 1; i < m.rows; ++i) {
        if (m.at(i, t) == 0) continue;
        raxpy(i, t, m.at(i, t) / m.at(t, t));
        if (m.at(i, t) != 0) {
          srow(t, i);
          settled = false;
        }
      }
      if (!settled) continue;
      for (int j = t + 1; j < m.cols; ++j) {
        if (m.at(t, j) == 0) continue;
        caxpy(j, t, m.at(t, j) / m.at(t, t));
        if (m.at(t, j) != 0) {
          scol(t, j);
          settled = false;
        }
      }
      if (!settled) continue;
      for (int i = t + 1; i < m.rows && settled; ++i)
        for (int j = t + 1; j < m.cols; ++j)
          if (m.at(i, j) % m.at(t, t) != 0) {
            raxpy(t, i, BigInt(-1));
            settled = false;
            break;
          }
    }
    if (m.at(t, t) < 0) {
      for (int j = 0; j < m.cols; ++j) m.at(t, j) = -m.at(t, j);
      for (int j = 0; j < out.u.cols; ++j) out.u.at(t, j) = -out.u.at(t, j);
    }
    out.diagonal.push_back(m.at(t, t));
    ++t;
  }
  out.rank = static_cast<int>(out.diagonal.size());
  return out;
}

Matrix<BigInt> integral_right_inverse(const Matrix<BigInt>& a) {
  auto s = smith_with_transforms(a);
  if (s.rank < a.rows)
    throw std::invalid_argument("integral_right_inverse: rows are dependent");
  for (auto& d : s.diagonal)
    if (d != 1) throw std::invalid_argument("integral_right_inverse: lattice is not full");
  // a = u^{-1} diag(1..1) v^{-1}, so v restricted to the first `rows` columns
  // times u undoes a from the right
  Matrix<BigInt> vr(a.cols, a.rows);
  for (int i = 0; i < a.cols; ++i)
    for (int j = 0; j < a.rows; ++j) vr.at(i, j) = s.v.at(i, j);
  return mat_mul(vr, s.u);
}

int rank_of(const Matrix<BigInt>& m) {
  // only the rank is needed, so SNF's reduction does fine
  return smith_normal_form(m).rank;
}

int rank_of(const Matrix<long long>& m) { return rank_of(mat_cast<BigInt>(m)); }

int rank_mod_p(const Matrix<long long>& m, long long p) {
  if (p < 2) throw std::invalid_argument("rank_mod_p: need a prime modulus");
  std::vector<std::vector<long long>> rows(static_cast<size_t>(m.rows));
  for (int i = 0; i < m.rows; ++i) {
    rows[static_cast<size_t>(i)].resize(static_cast<size_t>(m.cols));
    for (int j = 0; j < m.cols; ++j)
      rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = ((m.at(i, j) % p) + p) % p;
  }
  auto inv = [&](long long v) {
    long long r = 1, b = v % p, e = p - 2;  // Fermat
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  for (int j = 0; j < m.cols && rank < m.rows; ++j) {
    int pivot = -1;
    for (int i = rank; i < m.rows; ++i)
      if (rows[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(pivot)]);
    long long pi = inv(rows[static_cast<size_t>(rank)][static_cast<size_t>(j)]);
    for (int i = rank + 1; i < m.rows; ++i) {
      long long f = rows[static_cast<size_t>(i)][static_cast<size_t>(j)] * pi % p;
      if (f == 0) continue;
      for (int k = j; k < m.cols; ++k)
        rows[static_cast<size_t>(i)][static_cast<size_t>(k)] =
            ((rows[static_cast<size_t>(i)][static_cast<size_t>(k)] -
              f * rows[static_cast<size_t>(rank)][static_cast<size_t>(k)]) %
                 p +
             p) %
            p;
    }
    ++rank;
  }
  return rank;
}

}  // namespace arcring
