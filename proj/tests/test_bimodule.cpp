#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <vector>

#include "arcring/arc_ring.hpp"
#include "arcring/bimodule.hpp"
#include "arcring/planar.hpp"
#include "arcring/word.hpp"

using namespace arcring;

namespace {

long long catalan(int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

// graded ranks of one ring block (b,a), for cross-checks against components
std::map<int, int> block_ranks(const ArcRing& R, int b, int a) {
  std::map<int, int> out;
  int k = R.circle_count(b, a);
  for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask)
    ++out[labeling_degree(k, mask, R.n)];
  return out;
}

std::map<int, int> shifted(const std::map<int, int>& ranks, int j) {
  std::map<int, int> out;
  for (auto& [d, r] : ranks) out[d + j] = r;
  return out;
}

// the (c,b) index of a bimodule basis vector of the vertical tangle, which
// has a single summand, so indices are plain masks
BimoduleElement vert_elem(const GeometricBimodule& M, int c, int b, uint64_t mask) {
  return bim_basis_element(M, c, b, static_cast<int>(mask));
}

// translate a ring element supported on one block into the matching
// component of the vertical bimodule; circle ids of block (b,a) and of the
// vertical component (b,a) come from the same closure word
BimoduleElement to_vert(const GeometricBimodule& M, const RingElement& h) {
  BimoduleElement out;
  for (auto& [key, v] : h.comps) {
    auto [b, a] = key;
    std::vector<long long> coords(static_cast<size_t>(M.comp_dim(b, a)), 0);
    bool any = false;
    for (auto& [mask, coeff] : v.terms) {
      coords[mask] += coeff;
      if (coeff != 0) any = true;
    }
    if (any) out.comps[{b, a}] = coords;
  }
  return out;
}

}  // namespace

TEST_CASE("flat tangle enumeration is the Catalan family") {
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n) {
      auto all = enumerate_flat_tangles(m, n);
      CHECK(static_cast<long long>(all.size()) == catalan(m + n));
      std::set<FlatTangle> seen(all.begin(), all.end());
      CHECK(seen.size() == all.size());
      for (auto& t : all) {
        CHECK(t.bottom == 2 * n);
        CHECK(t.top == 2 * m);
        CHECK(t.circles == 0);
        CHECK(is_noncrossing(t.bottom, t.top, t.pair_));
      }
    }
  CHECK(static_cast<long long>(enumerate_flat_tangles(3, 2).size()) == catalan(5));
}

TEST_CASE("vertical bimodule components are the ring blocks") {
  for (int n = 1; n <= 2; ++n) {
    auto R = build_ring(n);
    auto M = build_bimodule(vertical_tangle(2 * n));
    REQUIRE(M.summands.size() == 1);
    CHECK(M.summands[0].shift == 0);
    CHECK(M.m == n);
    CHECK(M.n == n);
    for (int c = 0; c < M.tops(); ++c)
      for (int b = 0; b < M.bottoms(); ++b) {
        CHECK(M.circle_count(0, c, b) == R.circle_count(c, b));
        CHECK(M.component_ranks(c, b) == block_ranks(R, c, b));
      }
  }
}

TEST_CASE("matching bimodules are projective columns shifted down") {
  for (int m = 1; m <= 2; ++m) {
    auto R = build_ring(m);
    for (int a = 0; a < R.components(); ++a) {
      auto M = build_bimodule(matching_tangle(R.matchings[a]));
      REQUIRE(M.bottoms() == 1);
      std::map<int, int> total;
      for (int c = 0; c < M.tops(); ++c) {
        CHECK(M.component_ranks(c, 0) == shifted(block_ranks(R, c, a), -m));
        for (auto& [d, r] : M.component_ranks(c, 0)) total[d] += r;
      }
      CHECK(shifted(total, m) == projective_column(R, a));
    }
  }
}

TEST_CASE("free circles turn into shift pairs of summands") {
  auto bare = vertical_tangle(2);
  auto one = make_flat_tangle(2, 2, bare.pair_, 1);
  auto M1 = build_bimodule(one);
  REQUIRE(M1.summands.size() == 2);
  CHECK(M1.summand_data() ==
        std::vector<std::pair<FlatTangle, int>>{{bare, -1}, {bare, 1}});
  auto M0 = build_bimodule(bare);
  auto want = shifted(M0.component_ranks(0, 0), -1);
  for (auto& [d, r] : shifted(M0.component_ranks(0, 0), 1)) want[d] += r;
  CHECK(M1.component_ranks(0, 0) == want);

  auto M2 = build_bimodule(make_flat_tangle(2, 2, bare.pair_, 2));
  REQUIRE(M2.summands.size() == 4);
  CHECK(M2.summand_data() ==
        std::vector<std::pair<FlatTangle, int>>{{bare, -2}, {bare, 0}, {bare, 0}, {bare, 2}});
}

TEST_CASE("boundary actions on the vertical bimodule reproduce ring products") {
  for (int n = 1; n <= 2; ++n) {
    auto R = build_ring(n);
    auto M = build_bimodule(vertical_tangle(2 * n));
    auto basis = ring_basis(R);
    for (auto& hi : basis.items)
      for (auto& xi : basis.items) {
        RingElement h = ring_basis_element(R, hi.b, hi.a, hi.mask);
        RingElement x = ring_basis_element(R, xi.b, xi.a, xi.mask);
        BimoduleElement xv = vert_elem(M, xi.b, xi.a, xi.mask);
        CHECK(act_left(R, h, M, xv) == to_vert(M, ring_multiply(R, h, x)));
        CHECK(act_right(M, xv, R, h) == to_vert(M, ring_multiply(R, x, h)));
      }
  }
}

TEST_CASE("the unit acts as the identity and idempotents project components") {
  std::vector<FlatTangle> shapes;
  for (auto& t : enumerate_flat_tangles(1, 1)) shapes.push_back(t);
  for (auto& t : enumerate_flat_tangles(2, 1)) shapes.push_back(t);
  for (auto& t : enumerate_flat_tangles(1, 2)) shapes.push_back(t);
  shapes.push_back(make_flat_tangle(2, 2, vertical_tangle(2).pair_, 1));
  for (auto& t : shapes) {
    auto M = build_bimodule(t);
    auto Rt = build_ring(M.m);
    auto Rb = build_ring(M.n);
    for (int c = 0; c < M.tops(); ++c)
      for (int b = 0; b < M.bottoms(); ++b)
        for (int i = 0; i < M.comp_dim(c, b); ++i) {
          auto x = bim_basis_element(M, c, b, i);
          CHECK(act_left(Rt, ring_unit(Rt), M, x) == x);
          CHECK(act_right(M, x, Rb, ring_unit(Rb)) == x);
          for (int d = 0; d < Rt.components(); ++d) {
            auto y = act_left(Rt, ring_idempotent(Rt, d), M, x);
            if (d == c)
              CHECK(y == x);
            else
              CHECK(y.is_zero());
          }
          for (int e = 0; e < Rb.components(); ++e) {
            auto y = act_right(M, x, Rb, ring_idempotent(Rb, e));
            if (e == b)
              CHECK(y == x);
            else
              CHECK(y.is_zero());
          }
        }
  }
}

TEST_CASE("left and right actions associate and commute") {
  for (auto& t : enumerate_flat_tangles(1, 1)) {
    auto M = build_bimodule(t);
    auto R = build_ring(1);
    auto basis = ring_basis(R);
    for (auto& hi : basis.items)
      for (auto& ki : basis.items) {
        RingElement h = ring_basis_element(R, hi.b, hi.a, hi.mask);
        RingElement k = ring_basis_element(R, ki.b, ki.a, ki.mask);
        for (int c = 0; c < M.tops(); ++c)
          for (int b = 0; b < M.bottoms(); ++b)
            for (int i = 0; i < M.comp_dim(c, b); ++i) {
              auto x = bim_basis_element(M, c, b, i);
              CHECK(act_left(R, ring_multiply(R, h, k), M, x) ==
                    act_left(R, h, M, act_left(R, k, M, x)));
              CHECK(act_right(M, act_right(M, x, R, h), R, k) ==
                    act_right(M, x, R, ring_multiply(R, h, k)));
              CHECK(act_right(M, act_left(R, h, M, x), R, k) ==
                    act_left(R, h, M, act_right(M, x, R, k)));
            }
      }
  }
}

TEST_CASE("composing with a matching splits into shifted projectives") {
  std::vector<std::pair<int, int>> sizes = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  for (auto [m, n] : sizes) {
    auto bottoms = enumerate_matchings(n);
    for (auto& t : enumerate_flat_tangles(m, n)) {
      auto M = build_bimodule(t);
      for (int b = 0; b < static_cast<int>(bottoms.size()); ++b) {
        auto N = build_bimodule(compose(t, matching_tangle(bottoms[b])));
        for (int c = 0; c < M.tops(); ++c)
          CHECK(M.component_ranks(c, b) == shifted(N.component_ranks(c, 0), n));
      }
    }
  }
}

TEST_CASE("identity cobordisms induce identity maps") {
  for (auto& t : {vertical_tangle(2), enumerate_flat_tangles(1, 1)[1]}) {
    auto cm = cobordism_map(cob_identity(t));
    CHECK(cm.map.degree == 0);
    CHECK(cm.map == identity_morphism(cm.source));
  }
}

TEST_CASE("birth, death, merge and split obey the unit and counit laws") {
  auto a = vertical_tangle(2);
  auto birth = cobordism_map(cob_birth(a));
  auto merge = cobordism_map(cob_merge_circle(a, 0));
  auto split = cobordism_map(cob_split_off_circle(a, 0));
  auto death = cobordism_map(cob_death(a));
  CHECK(birth.map.degree == -1);
  CHECK(death.map.degree == -1);
  CHECK(merge.map.degree == 1);
  CHECK(split.map.degree == 1);
  CHECK(morphism_homogeneous(birth.source, birth.target, birth.map));
  CHECK(morphism_homogeneous(death.source, death.target, death.map));
  CHECK(morphism_homogeneous(merge.source, merge.target, merge.map));
  CHECK(morphism_homogeneous(split.source, split.target, split.map));
  // cap off or merge away a born circle; split one off and cap it
  CHECK(compose_morphisms(merge.map, birth.map) == identity_morphism(birth.source));
  CHECK(compose_morphisms(death.map, birth.map) == zero_morphism(birth.source, birth.source, -2));
  CHECK(compose_morphisms(death.map, split.map) == identity_morphism(split.source));

  // against the algebra, with the closure circle as the module factor
  auto& mm = merge.map.blocks[0][0];
  REQUIRE(mm.rows == 2);
  REQUIRE(mm.cols == 4);
  CHECK(mm.data == std::vector<long long>{1, 0, 0, 0, 0, 1, 1, 0});
  auto& sm = split.map.blocks[0][0];
  REQUIRE(sm.rows == 4);
  REQUIRE(sm.cols == 2);
  CHECK(sm.data == std::vector<long long>{0, 0, 1, 0, 1, 0, 0, 1});
}

TEST_CASE("a saddle between the two strands comultiplies the closure circle") {
  auto S = cob_saddle(vertical_tangle(2), 0, 1);
  CHECK(S.target.pair_ == std::vector<int>{1, 0, 3, 2});
  auto cm = cobordism_map(S);
  CHECK(cm.map.degree == 1);
  CHECK(morphism_homogeneous(cm.source, cm.target, cm.map));
  auto& d = cm.map.blocks[0][0];
  REQUIRE(d.rows == 4);
  REQUIRE(d.cols == 2);
  CHECK(d.data == std::vector<long long>{0, 0, 1, 0, 1, 0, 0, 1});

  // the saddle joining the two arcs along the side multiplies them back,
  // and the composite is the double-point map x -> 2X x
  auto back = cobordism_map(cob_saddle(S.target, 0, 2));
  CHECK(back.target.summand_data() == cm.source.summand_data());
  auto& mu = back.map.blocks[0][0];
  CHECK(mu.data == std::vector<long long>{1, 0, 0, 0, 0, 1, 1, 0});
  auto torus = compose_morphisms(back.map, cm.map);
  CHECK(torus.blocks[0][0].data == std::vector<long long>{0, 0, 2, 0});

  // a saddle with both feet on one arc pinches off a free circle instead
  auto pinch = cob_saddle(S.target, 0, 1);
  CHECK(pinch.target == make_flat_tangle(2, 2, S.target.pair_, 1));
  auto pm = cobordism_map(pinch);
  CHECK(pm.map.degree == 1);
  CHECK(morphism_homogeneous(pm.source, pm.target, pm.map));
}

TEST_CASE("move sequences compose like their maps") {
  auto a = vertical_tangle(2);
  auto two_circles = make_flat_tangle(2, 2, a.pair_, 2);
  auto one_circle = make_flat_tangle(2, 2, a.pair_, 1);

  Cobordism both_merges{two_circles, a,
                        {{NamedMove::MergeCircle, 0, -1}, {NamedMove::MergeCircle, 1, -1}}};
  auto direct = cobordism_map(both_merges);
  auto first = cobordism_map(cob_merge_circle(one_circle, 0));
  auto second = cobordism_map(cob_merge_circle(a, 1));
  CHECK(direct.map == compose_morphisms(second.map, first.map));

  Cobordism both_births{a, two_circles, {{NamedMove::Birth, -1, -1}, {NamedMove::Birth, -1, -1}}};
  auto direct2 = cobordism_map(both_births);
  auto b1 = cobordism_map(cob_birth(a));
  auto b2 = cobordism_map(cob_birth(one_circle));
  CHECK(direct2.map == compose_morphisms(b2.map, b1.map));
}

TEST_CASE("tensoring with the vertical bimodule changes nothing") {
  for (auto& t : enumerate_flat_tangles(1, 1)) {
    auto X = build_bimodule(t);
    auto V = build_bimodule(vertical_tangle(2));
    auto Y = tensor_over(V, X);
    CHECK(Y.result.summand_data() == X.summand_data());
    for (int c = 0; c < X.tops(); ++c)
      for (int b = 0; b < X.bottoms(); ++b) {
        CHECK(Y.result.component_ranks(c, b) == X.component_ranks(c, b));
        CHECK(rank_of(Y.witness[c][b]) == Y.result.comp_dim(c, b));
      }
  }
}

TEST_CASE("a reflected matching against a matching recovers a ring block") {
  for (int n = 1; n <= 2; ++n) {
    auto R = build_ring(n);
    for (int y = 0; y < R.components(); ++y)
      for (int x = 0; x < R.components(); ++x) {
        auto Y = build_bimodule(matching_reflected(R.matchings[y]));
        auto X = build_bimodule(matching_tangle(R.matchings[x]));
        auto T = tensor_over(Y, X);
        CHECK(T.result.m == 0);
        CHECK(T.result.n == 0);
        CHECK(shifted(T.result.component_ranks(0, 0), n) == block_ranks(R, y, x));
      }
  }
}

TEST_CASE("tensor components match the composed diagram") {
  std::vector<std::tuple<int, int, int>> arities = {
      {1, 1, 1}, {0, 1, 1}, {1, 1, 0}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {0, 2, 2}, {2, 2, 0}};
  for (auto [k, mid, n] : arities)
    for (auto& up : enumerate_flat_tangles(k, mid))
      for (auto& lo : enumerate_flat_tangles(mid, n)) {
        auto Y = build_bimodule(up);
        auto X = build_bimodule(lo);
        auto T = tensor_over(Y, X);
        auto direct = build_bimodule(compose(up, lo));
        CHECK(T.result.summand_data() == direct.summand_data());
        for (int c = 0; c < direct.tops(); ++c)
          for (int b = 0; b < direct.bottoms(); ++b) {
            CHECK(T.result.component_ranks(c, b) == direct.component_ranks(c, b));
            CHECK(rank_of(T.witness[c][b]) == T.result.comp_dim(c, b));
          }
      }
}

TEST_CASE("the tensor witness does not depend on the saddle order") {
  auto Y = build_bimodule(enumerate_flat_tangles(2, 2)[3]);
  auto X = build_bimodule(enumerate_flat_tangles(2, 2)[4]);
  auto plain = tensor_over(Y, X);
  auto swapped = tensor_over(Y, X, {1, 0});
  CHECK(plain.result.summand_data() == swapped.result.summand_data());
  for (int c = 0; c < plain.result.tops(); ++c)
    for (int b = 0; b < plain.result.bottoms(); ++b)
      CHECK(plain.witness[c][b] == swapped.witness[c][b]);
}

namespace {

// circles of the closed diagram glueing a to the reflection of t along both
// boundaries; 2^count is the rank of the corresponding pairing space
int pairing_circles(const FlatTangle& a, const FlatTangle& t) {
  int pts = a.points();
  std::vector<bool> seen(static_cast<size_t>(pts), false);
  int cycles = 0;
  for (int start = 0; start < pts; ++start) {
    if (seen[start]) continue;
    ++cycles;
    int p = start;
    do {
      seen[p] = true;
      seen[a.pair_[p]] = true;
      p = t.pair_[a.pair_[p]];
    } while (p != start);
  }
  return cycles + a.circles + t.circles;
}

}  // namespace

TEST_CASE("pairing rank profiles separate small flat tangles") {
  std::vector<std::pair<int, int>> sizes = {{1, 1}, {2, 1}, {2, 2}, {0, 2}, {3, 1}};
  for (auto [m, n] : sizes) {
    auto all = enumerate_flat_tangles(m, n);
    std::set<std::vector<int>> profiles;
    for (auto& a : all) {
      std::vector<int> prof;
      for (auto& t : all) prof.push_back(pairing_circles(a, t));
      // the self-pairing closes every strand into its own circle and is the
      // strict maximum of the row
      CHECK(pairing_circles(a, a) == m + n);
      for (auto& t : all)
        if (!(t == a)) CHECK(pairing_circles(a, t) < m + n);
      profiles.insert(prof);
    }
    CHECK(profiles.size() == all.size());
  }

  // closure circle counts alone do not separate: two of the five tangles
  // with two bottom and four top points share their whole table
  auto all = enumerate_flat_tangles(2, 1);
  std::set<std::vector<int>> tables;
  for (auto& t : all) {
    auto M = build_bimodule(t);
    std::vector<int> key;
    for (int c = 0; c < M.tops(); ++c)
      for (int b = 0; b < M.bottoms(); ++b) key.push_back(M.circle_count(0, c, b));
    tables.insert(key);
  }
  CHECK(tables.size() == 4);
}
