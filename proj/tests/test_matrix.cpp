#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "arcring/matrix.hpp"
#include "arcring/snf.hpp"

using namespace arcring;

namespace {

Matrix<BigInt> make(int r, int c, std::vector<long long> vals) {
  Matrix<BigInt> m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = vals[static_cast<size_t>(i) * c + j];
  return m;
}

Matrix<long long> make_ll(int r, int c, std::vector<long long> vals) {
  Matrix<long long> m(r, c);
  m.data = std::move(vals);
  return m;
}

BigInt big_abs_det(const Matrix<BigInt>& m) {
  BigInt d = det_bareiss(m);
  return d < 0 ? -d : d;
}

// deterministic small PRNG so failures reproduce
struct Lcg {
  uint64_t s;
  explicit Lcg(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return s >> 33;
  }
  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
};

BigInt minor_gcd(const Matrix<BigInt>& m, int k) {
  // gcd over all k x k minors, brute force
  BigInt g = 0;
  std::vector<std::vector<int>> rsets, csets;
  auto gen = [&](int n, std::vector<std::vector<int>>& out) {
    out.clear();
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
      }
      for (int i = start; i < n; ++i) {
        cur.push_back(i);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  };
  gen(m.rows, rsets);
  gen(m.cols, csets);
  for (auto& rs : rsets)
    for (auto& cs : csets) {
      Matrix<BigInt> sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub.at(i, j) = m.at(rs[i], cs[j]);
      BigInt d = det_bareiss(sub);
      if (d < 0) d = -d;
      g = boost::multiprecision::gcd(g, d);
    }
  return g;
}

BigInt det_cofactor(const Matrix<BigInt>& m) {
  int n = m.rows;
  if (n == 0) return 1;
  if (n == 1) return m.at(0, 0);
  BigInt acc = 0;
  for (int j = 0; j < n; ++j) {
    if (m.at(0, j) == 0) continue;
    Matrix<BigInt> sub(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        sub.at(i - 1, cc++) = m.at(i, c);
      }
    }
    BigInt term = m.at(0, j) * det_cofactor(sub);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

}  // namespace

TEST_CASE("matrix arithmetic basics") {
  auto a = make(2, 2, {1, 2, 3, 4});
  auto b = make(2, 2, {0, 1, 1, 0});
  CHECK(mat_mul(a, b) == make(2, 2, {2, 1, 4, 3}));
  CHECK(mat_mul(b, a) == make(2, 2, {3, 4, 1, 2}));
  CHECK(mat_add(a, mat_neg(a)).is_zero());
  CHECK(mat_sub(a, a).is_zero());
  CHECK(mat_mul(Matrix<BigInt>::identity(2), a) == a);
  CHECK_THROWS(mat_mul(a, make(3, 1, {1, 2, 3})));
}

TEST_CASE("smith normal form of pinned matrices") {
  auto s1 = smith_normal_form(make(3, 3, {2, 4, 4, -6, 6, 12, 10, 4, 16}));
  CHECK(s1.rank == 3);
  CHECK(s1.invariant_factors == std::vector<BigInt>{2, 2, 156});

  auto s2 = smith_normal_form(make(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9}));
  CHECK(s2.rank == 2);
  CHECK(s2.invariant_factors == std::vector<BigInt>{1, 3});

  auto s3 = smith_normal_form(make(2, 2, {6, 0, 0, 10}));
  CHECK(s3.invariant_factors == std::vector<BigInt>{2, 30});

  auto s4 = smith_normal_form(make(3, 4, {2, 1, 0, 0, 0, 2, 1, 0, 0, 0, 2, 1}));
  CHECK(s4.rank == 3);
  CHECK(s4.invariant_factors == std::vector<BigInt>{1, 1, 1});

  auto s5 = smith_normal_form(make(2, 2, {4, 6, 6, 9}));
  CHECK(s5.rank == 1);
  CHECK(s5.invariant_factors == std::vector<BigInt>{1});

  auto s6 = smith_normal_form(Matrix<BigInt>(0, 5));
  CHECK(s6.rank == 0);
  CHECK(s6.invariant_factors.empty());
}

TEST_CASE("invariant factor products match minor gcds on random matrices") {
  Lcg rng(20240816);
  for (int trial = 0; trial < 40; ++trial) {
    int r = static_cast<int>(rng.range(1, 4));
    int c = static_cast<int>(rng.range(1, 4));
    Matrix<BigInt> m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = rng.range(-9, 9);
    auto s = smith_normal_form(m);
    for (size_t i = 0; i + 1 < s.invariant_factors.size(); ++i)
      CHECK(s.invariant_factors[i + 1] % s.invariant_factors[i] == 0);
    BigInt prod = 1;
    for (int k = 1; k <= s.rank; ++k) {
      prod *= s.invariant_factors[k - 1];
      CHECK(prod == minor_gcd(m, k));
    }
    if (s.rank < std::min(r, c)) CHECK(minor_gcd(m, s.rank + 1) == 0);
  }
}

TEST_CASE("bareiss determinant agrees with cofactor expansion") {
  Lcg rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int n = static_cast<int>(rng.range(1, 5));
    Matrix<BigInt> m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = rng.range(-6, 6);
    CHECK(det_bareiss(m) == det_cofactor(m));
  }
  CHECK(det_bareiss(make(3, 3, {2, 4, 4, -6, 6, 12, 10, 4, 16})) == 624);
  CHECK(det_bareiss(Matrix<BigInt>(0, 0)) == 1);
  CHECK_THROWS(det_bareiss(Matrix<BigInt>(2, 3)));
}

TEST_CASE("rank of planted-rank products") {
  Lcg rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    int n = static_cast<int>(rng.range(2, 5));
    int r = static_cast<int>(rng.range(0, n));
    // n x r times r x n has rank at most r
    Matrix<BigInt> a(n, r), b(r, n);
    for (auto& v : a.data) v = rng.range(-5, 5);
    for (auto& v : b.data) v = rng.range(-5, 5);
    auto p = mat_mul(a, b);
    CHECK(rank_of(p) <= r);
  }
  // exact rank: unimodular row mix of a rank-2 seed
  auto seed = make(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 0});
  auto u = make(3, 3, {1, 2, 0, 0, 1, 3, 1, 1, 1});  // det 1 + 6 - ... nonzero
  REQUIRE(det_bareiss(u) != 0);
  CHECK(rank_of(mat_mul(u, seed)) == 2);
}

TEST_CASE("smith transforms reproduce the diagonal") {
  Lcg rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    int r = static_cast<int>(rng.range(0, 5));
    int c = static_cast<int>(rng.range(0, 5));
    Matrix<BigInt> m(r, c);
    for (auto& v : m.data) v = rng.range(-9, 9);
    auto t = smith_with_transforms(m);
    auto plain = smith_normal_form(m);
    CHECK(t.rank == plain.rank);
    CHECK(t.diagonal == plain.invariant_factors);
    auto d = mat_mul(mat_mul(t.u, m), t.v);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        CHECK(d.at(i, j) == (i == j && i < t.rank ? t.diagonal[static_cast<size_t>(i)] : 0));
    // the transforms are unimodular
    CHECK(big_abs_det(t.u) == 1);
    CHECK(big_abs_det(t.v) == 1);
  }
}

TEST_CASE("integral right inverses undo surjections") {
  auto check_rinv = [](const Matrix<BigInt>& a) {
    auto x = integral_right_inverse(a);
    CHECK(mat_mul(a, x) == Matrix<BigInt>::identity(a.rows));
  };
  check_rinv(Matrix<BigInt>::identity(3));
  check_rinv(make(1, 2, {2, 3}));
  check_rinv(make(2, 3, {1, 0, 4, 0, 1, 7}));
  check_rinv(Matrix<BigInt>(0, 4));
  CHECK_THROWS(integral_right_inverse(make(1, 1, {2})));
  CHECK_THROWS(integral_right_inverse(make(2, 1, {1, 0})));
  // random full-lattice maps: u * projection, u unimodular
  Lcg rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    int r = static_cast<int>(rng.range(1, 4));
    int c = r + static_cast<int>(rng.range(0, 3));
    Matrix<BigInt> u(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) u.at(i, j) = i == j ? 1 : (j > i ? rng.range(-3, 3) : 0);
    Matrix<BigInt> proj(r, c);
    for (int i = 0; i < r; ++i) proj.at(i, i) = 1;
    for (int i = 0; i < r; ++i)
      for (int j = r; j < c; ++j) proj.at(i, j) = rng.range(-4, 4);
    check_rinv(mat_mul(u, proj));
  }
}

TEST_CASE("rank mod p counts factors coprime to p") {
  CHECK(rank_mod_p(make_ll(1, 1, {2}), 2) == 0);
  CHECK(rank_mod_p(make_ll(1, 1, {2}), 3) == 1);
  CHECK(rank_mod_p(make_ll(2, 2, {2, 1, 0, 2}), 2) == 1);
  CHECK(rank_mod_p(make_ll(2, 2, {1, 1, 1, 1}), 5) == 1);
  Lcg rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    int r = static_cast<int>(rng.range(1, 5));
    int c = static_cast<int>(rng.range(1, 5));
    Matrix<long long> m(r, c);
    for (auto& v : m.data) v = rng.range(-9, 9);
    auto s = smith_normal_form(mat_cast<BigInt>(m));
    for (long long p : {2, 3, 5}) {
      int expect = 0;
      for (auto& f : s.invariant_factors)
        if (f % p != 0) ++expect;
      CHECK(rank_mod_p(m, p) == expect);
    }
  }
}
