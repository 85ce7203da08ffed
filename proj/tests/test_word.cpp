#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "arcring/planar.hpp"
#include "arcring/word.hpp"

using namespace arcring;

TEST_CASE("strand levels and arity tracking") {
  TangleWord w;
  w.bottom = 2;
  w.slices = {{SliceKind::Cup, 3}, {SliceKind::X, 2}, {SliceKind::Cap, 1}};
  auto lv = strand_levels(w);
  CHECK(lv == std::vector<int>{2, 4, 4, 2});
  CHECK(top_count(w) == 2);
  w.slices.push_back({SliceKind::Cap, 9});
  CHECK_THROWS(strand_levels(w));
}

TEST_CASE("crossing-free words give flat tangles") {
  TangleWord w;
  w.bottom = 0;
  w.slices = {{SliceKind::Cup, 1}, {SliceKind::Cup, 2}, {SliceKind::Cap, 2}, {SliceKind::Cap, 1}};
  auto t = word_tangle_flat(w);
  CHECK(t.points() == 0);
  CHECK(t.circles == 2);

  // cup then cap at the same position traces a single circle
  TangleWord u;
  u.bottom = 0;
  u.slices = {{SliceKind::Cup, 1}, {SliceKind::Cup, 1}, {SliceKind::Cap, 2}, {SliceKind::Cap, 1}};
  auto s = word_tangle_flat(u);
  CHECK(s.circles == 1);
}

TEST_CASE("cap word of a flat tangle") {
  TangleWord w;
  w.bottom = 2;
  w.slices = {{SliceKind::Cap, 1}};
  auto t = word_tangle_flat(w);
  CHECK(t.bottom == 2);
  CHECK(t.top == 0);
  CHECK(t.pair_ == std::vector<int>{1, 0});
}

TEST_CASE("matching words rebuild their matchings") {
  for (int n = 0; n <= 4; ++n) {
    for (auto& m : enumerate_matchings(n)) {
      TangleWord w;
      w.bottom = 0;
      w.slices = matching_word(m);
      auto t = word_tangle_flat(w);
      CHECK(t == matching_tangle(m));

      TangleWord r;
      r.bottom = 2 * n;
      r.slices = matching_reflected_word(m);
      auto rt = word_tangle_flat(r);
      CHECK(rt == matching_reflected(m));
    }
  }
}

TEST_CASE("canonical word of the nested 2-matching") {
  Matching m = make_matching(2, {3, 2, 1, 0});
  auto sl = matching_word(m);
  REQUIRE(sl.size() == 2);
  CHECK(sl[0].pos == 1);
  CHECK(sl[1].pos == 2);
}

TEST_CASE("flat tangle words roundtrip") {
  // every composite W(b)a with its circles stripped, plus cap/cup mixtures
  for (int n = 1; n <= 3; ++n) {
    for (auto& a : enumerate_matchings(n)) {
      for (auto& b : enumerate_matchings(n)) {
        auto t = compose(matching_reflected(b), matching_tangle(a));
        auto [bare, k] = remove_circles(t);
        (void)k;
        if (bare.points() == 0) continue;
        TangleWord w;
        w.bottom = bare.bottom;
        w.slices = flat_tangle_word(bare);
        CHECK(word_tangle_flat(w) == bare);
      }
    }
  }
  // random crossing-free words with mixed arities
  uint64_t state = 12345;
  auto rnd = [&state](int mod) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<int>((state >> 33) % mod);
  };
  for (int trial = 0; trial < 200; ++trial) {
    TangleWord w;
    w.bottom = 2 * rnd(4);
    int cur = w.bottom;
    for (int s = 0; s < 6; ++s) {
      if (cur >= 2 && rnd(2) == 0) {
        w.slices.push_back({SliceKind::Cap, 1 + rnd(cur - 1)});
        cur -= 2;
      } else {
        w.slices.push_back({SliceKind::Cup, 1 + rnd(cur + 1)});
        cur += 2;
      }
    }
    auto [bare, k] = remove_circles(word_tangle_flat(w));
    (void)k;
    TangleWord v;
    v.bottom = bare.bottom;
    v.slices = flat_tangle_word(bare);
    CHECK(word_tangle_flat(v) == bare);
  }
}

TEST_CASE("component count and closure flags") {
  auto w = identity_word(4);
  auto c = word_components(w);
  CHECK(c.count == 4);
  for (bool cl : c.is_closed) CHECK(!cl);
  CHECK(c.boundary_component == std::vector<int>{0, 1, 2, 3, 0, 1, 2, 3});

  TangleWord circ;
  circ.bottom = 0;
  circ.slices = {{SliceKind::Cup, 1}, {SliceKind::Cap, 1}};
  auto cc = word_components(circ);
  CHECK(cc.count == 1);
  CHECK(cc.is_closed == std::vector<bool>{true});

  // crossings connect through
  auto x = tangency_word(2, 1);
  auto cx = word_components(x);
  CHECK(cx.count == 2);
  CHECK(cx.boundary_component == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("default orientations run upward on identity strands") {
  auto w = identity_word(3);
  auto o = orient_word(w);
  CHECK(o.direction == std::vector<int>{1, 1, 1});
  CHECK(o.marks == std::vector<int>{1, 1, 1, 1, 1, 1});
  CHECK(o.x == 0);
  CHECK(o.y == 0);
}

TEST_CASE("explicit marks select and validate orientations") {
  auto w = identity_word(2);
  w.marks = {-1, 1, -1, 1};
  auto o = orient_word(w);
  CHECK(o.direction == std::vector<int>{-1, 1});
  w.marks = {1, 1, -1, 1};  // strand 1 cannot start at both ends
  CHECK_THROWS(orient_word(w));
}

TEST_CASE("curl crossing counts for every strand orientation") {
  for (bool left : {true, false}) {
    for (int strands : {1, 2, 4}) {
      auto w = curl_word(strands, 1, left);
      auto comps = word_components(w);
      for (uint64_t rev = 0; rev < (uint64_t{1} << comps.count); ++rev) {
        std::vector<bool> flips(comps.count);
        for (int k = 0; k < comps.count; ++k) flips[k] = (rev >> k) & 1;
        auto o = orient_word(w, flips);
        if (left) {
          CHECK(o.x == 0);
          CHECK(o.y == 1);
        } else {
          CHECK(o.x == 1);
          CHECK(o.y == 0);
        }
      }
    }
  }
}

TEST_CASE("tangency counts one crossing of each kind") {
  auto w = tangency_word(2, 1);
  auto comps = word_components(w);
  for (uint64_t rev = 0; rev < (uint64_t{1} << comps.count); ++rev) {
    std::vector<bool> flips(comps.count);
    for (int k = 0; k < comps.count; ++k) flips[k] = (rev >> k) & 1;
    auto o = orient_word(w, flips);
    CHECK(o.x == 1);
    CHECK(o.y == 1);
  }
}

TEST_CASE("triple words have consistent totals") {
  for (bool second : {false, true}) {
    auto w = triple_word(4, 1, second);
    CHECK(w.crossings() == 3);
    auto o = orient_word(w);
    CHECK(o.x + o.y == 3);
  }
  auto w1 = triple_word(4, 1, false);
  auto w2 = triple_word(4, 1, true);
  auto o1 = orient_word(w1);
  auto o2 = orient_word(w2);
  CHECK(o1.x == o2.x);
  CHECK(o1.y == o2.y);
}

TEST_CASE("concat stacks words") {
  auto w = concat(curl_word(2, 1, true), tangency_word(2, 1));
  CHECK(w.crossings() == 3);
  CHECK(top_count(w) == 2);
  CHECK_THROWS(concat(identity_word(2), identity_word(4)));
}

TEST_CASE("trace closure of a braid-like word stays connected correctly") {
  // cup 1, cup 2, three crossings on strands 3,4, cap 2, cap 1: a trefoil shape
  TangleWord w;
  w.bottom = 0;
  w.slices = {{SliceKind::Cup, 1}, {SliceKind::Cup, 2}, {SliceKind::X, 3},
              {SliceKind::X, 3},   {SliceKind::X, 3},   {SliceKind::Cap, 2},
              {SliceKind::Cap, 1}};
  auto c = word_components(w);
  CHECK(c.count == 1);
  CHECK(c.is_closed == std::vector<bool>{true});
}

TEST_CASE("arc tags name each cup and cap by its smaller endpoint") {
  for (int n = 1; n <= 4; ++n) {
    for (auto& m : enumerate_matchings(n)) {
      auto cups = matching_word_arcs(m);
      auto caps = matching_reflected_word_arcs(m);
      REQUIRE(cups.size() == static_cast<size_t>(n));
      REQUIRE(caps.size() == static_cast<size_t>(n));
      std::set<int> seen_cups, seen_caps, expect;
      for (int i = 0; i < 2 * n; ++i)
        if (m.pair_[i] > i) expect.insert(i);
      for (auto& [s, arc] : cups) {
        CHECK(s.kind == SliceKind::Cup);
        seen_cups.insert(arc);
      }
      for (auto& [s, arc] : caps) {
        CHECK(s.kind == SliceKind::Cap);
        seen_caps.insert(arc);
      }
      CHECK(seen_cups == expect);
      CHECK(seen_caps == expect);
      // tagged words agree with the untagged builders
      auto plain = matching_word(m);
      for (size_t i = 0; i < plain.size(); ++i) {
        CHECK(plain[i].kind == cups[i].first.kind);
        CHECK(plain[i].pos == cups[i].first.pos);
      }
    }
  }
}
