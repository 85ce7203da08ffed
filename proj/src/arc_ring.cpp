#include "arcring/arc_ring.hpp"

#include <algorithm>
#include <stdexcept>

#include "arcring/arrangement.hpp"
#include "arcring/word.hpp"

namespace arcring {

namespace {

// closure word of a under the reflection of b, marked at the gluing level
TangleWord closure_word(const Matching& b, const Matching& a) {
  TangleWord w;
  w.bottom = 0;
  for (auto& s : matching_word(a)) w.slices.push_back(s);
  for (auto& s : matching_reflected_word(b)) w.slices.push_back(s);
  return w;
}

}  // namespace

bool RingElement::is_zero() const {
  for (auto& [k, v] : comps)
    if (!v.is_zero()) return false;
  return true;
}

ArcRing build_ring(int n, int table_limit) {
  if (n < 0) throw std::invalid_argument("build_ring: negative n");
  ArcRing R;
  R.n = n;
  R.matchings = enumerate_matchings(n);
  const int k = R.components();
  R.blocks.assign(k, std::vector<ArcRing::Block>(k));
  for (int b = 0; b < k; ++b)
    for (int a = 0; a < k; ++a) {
      auto arr = build_arrangement(closure_word(R.matchings[b], R.matchings[a]));
      arr.marked_levels = {{n, 0}};
      auto s = snapshot(arr);
      ArcRing::Block& blk = R.blocks[b][a];
      blk.circles = s.circle_ids;
      blk.edge_count = static_cast<int>(arr.edges.size());
      for (auto& [id, fp] : fingerprints(arr, s)) blk.fp_to_circle[fp] = id;
    }
  if (n <= table_limit) {
    for (int c = 0; c < k; ++c)
      for (int b = 0; b < k; ++b)
        for (int a = 0; a < k; ++a) {
          uint64_t xn = uint64_t{1} << R.circle_count(c, b);
          uint64_t yn = uint64_t{1} << R.circle_count(b, a);
          for (uint64_t xm = 0; xm < xn; ++xm)
            for (uint64_t ym = 0; ym < yn; ++ym) {
              auto vx = make_basis_state(R.blocks[c][b].circles, xm, n);
              auto vy = make_basis_state(R.blocks[b][a].circles, ym, n);
              R.product_table[{c, b, a, xm, ym}] = component_product(R, c, b, a, vx, vy);
            }
        }
  }
  return R;
}

TensorVector component_product(const ArcRing& R, int c, int b, int a,
                               const TensorVector& vx, const TensorVector& vy,
                               const std::vector<int>& saddle_order) {
  const int n = R.n;
  const Matching& mb = R.matchings[b];
  // stacked closed picture: closure of (b,a) below, closure of (c,b) above
  TangleWord w;
  w.bottom = 0;
  auto append = [&w](const std::vector<Slice>& part) {
    for (auto& s : part) w.slices.push_back(s);
  };
  append(matching_word(R.matchings[a]));
  auto caps_b = matching_reflected_word_arcs(mb);
  for (auto& [s, arc] : caps_b) w.slices.push_back(s);
  auto cups_b = matching_word_arcs(mb);
  for (auto& [s, arc] : cups_b) w.slices.push_back(s);
  append(matching_reflected_word(R.matchings[c]));

  auto arr = build_arrangement(w);
  arr.marked_levels = {{n, 0}};

  // lower block reuses canonical ids; upper block ids shift uniformly
  const int off = R.blocks[b][a].edge_count;
  std::map<int, int> lift;
  for (int id : R.blocks[c][b].circles) lift[id] = id + off;
  TensorVector combined = tensor_product(vy, relabel(vx, lift));

  SurgeryState st(std::move(arr), std::move(combined));

  // contraction saddles, one per arc of the middle matching
  std::vector<int> arcs;
  for (auto& [s, arc] : cups_b) arcs.push_back(arc);
  std::sort(arcs.begin(), arcs.end());
  if (!saddle_order.empty()) {
    std::vector<int> perm;
    for (int i : saddle_order) perm.push_back(arcs[i]);
    arcs = perm;
  }
  for (int arc : arcs) {
    int cap_slice = -1, cup_slice = -1;
    for (size_t i = 0; i < caps_b.size(); ++i)
      if (caps_b[i].second == arc) cap_slice = n + static_cast<int>(i);
    for (size_t i = 0; i < cups_b.size(); ++i)
      if (cups_b[i].second == arc) cup_slice = 2 * n + static_cast<int>(i);
    int e_cap = st.arrangement().slice_main_edge[cap_slice];
    int e_cup = st.arrangement().slice_main_edge[cup_slice];
    st.contract(e_cap, e_cup);
  }

  // identify the surgered circles with the canonical (c,a) closure
  const ArcRing::Block& target = R.blocks[c][a];
  std::map<int, int> down;
  for (auto& [id, fp] : fingerprints(st.arrangement(), st.snap())) {
    auto it = target.fp_to_circle.find(fp);
    if (it == target.fp_to_circle.end())
      throw std::logic_error("component_product: unmatched output circle");
    down[id] = it->second;
  }
  TensorVector out = relabel(st.vector(), down);
  out.shift = R.n;
  return out;
}

RingElement ring_zero(const ArcRing& R) {
  RingElement x;
  x.n = R.n;
  return x;
}

RingElement ring_basis_element(const ArcRing& R, int b, int a, uint64_t mask) {
  RingElement x;
  x.n = R.n;
  x.comps[{b, a}] = make_basis_state(R.blocks[b][a].circles, mask, R.n);
  return x;
}

RingElement ring_idempotent(const ArcRing& R, int a) {
  return ring_basis_element(R, a, a, 0);  // every circle labeled 1
}

RingElement ring_unit(const ArcRing& R) {
  RingElement x = ring_zero(R);
  for (int a = 0; a < R.components(); ++a) x = ring_add(x, ring_idempotent(R, a));
  return x;
}

RingElement ring_add(const RingElement& x, const RingElement& y) {
  RingElement out = x;
  for (auto& [k, v] : y.comps) {
    auto it = out.comps.find(k);
    if (it == out.comps.end())
      out.comps[k] = v;
    else
      it->second = add(it->second, v);
  }
  for (auto it = out.comps.begin(); it != out.comps.end();)
    it = it->second.is_zero() ? out.comps.erase(it) : std::next(it);
  return out;
}

RingElement ring_scale(const RingElement& x, long long c) {
  RingElement out;
  out.n = x.n;
  if (c == 0) return out;
  for (auto& [k, v] : x.comps) out.comps[k] = scale(v, c);
  return out;
}

RingElement ring_multiply(const ArcRing& R, const RingElement& x, const RingElement& y) {
  if (x.n != R.n || y.n != R.n) throw std::invalid_argument("ring_multiply: ring mismatch");
  RingElement out = ring_zero(R);
  for (auto& [kx, vx] : x.comps)
    for (auto& [ky, vy] : y.comps) {
      if (kx.second != ky.first) continue;  // orthogonal idempotent pairs
      int c = kx.first, b = kx.second, a = ky.second;
      TensorVector prod;
      if (!R.product_table.empty()) {
        prod = make_basis_state(R.blocks[c][a].circles, 0, R.n);
        prod.terms.clear();
        for (auto& [mx, cx] : vx.terms)
          for (auto& [my, cy] : vy.terms) {
            auto it = R.product_table.find({c, b, a, mx, my});
            if (it == R.product_table.end())
              throw std::logic_error("ring_multiply: missing table entry");
            prod = add(prod, scale(it->second, cx * cy));
          }
      } else {
        prod = component_product(R, c, b, a, vx, vy);
      }
      if (prod.is_zero()) continue;
      RingElement term;
      term.n = R.n;
      term.comps[{c, a}] = prod;
      out = ring_add(out, term);
    }
  return out;
}

long long trace(const ArcRing& R, const RingElement& x) {
  long long acc = 0;
  for (auto& [k, v] : x.comps) {
    if (k.first != k.second) continue;
    uint64_t full = (uint64_t{1} << v.arity()) - 1;
    auto it = v.terms.find(full);
    if (it != v.terms.end()) acc += it->second;
  }
  return acc;
}

RingBasis ring_basis(const ArcRing& R) {
  RingBasis out;
  for (int b = 0; b < R.components(); ++b)
    for (int a = 0; a < R.components(); ++a) {
      int k = R.circle_count(b, a);
      for (uint64_t m = 0; m < (uint64_t{1} << k); ++m)
        out.items.push_back({b, a, m, labeling_degree(k, m, R.n)});
    }
  return out;
}

std::map<int, int> graded_ranks(const ArcRing& R) {
  std::map<int, int> out;
  for (auto& it : ring_basis(R).items) ++out[it.degree];
  return out;
}

std::map<int, int> projective_column(const ArcRing& R, int a) {
  std::map<int, int> out;
  for (auto& it : ring_basis(R).items)
    if (it.a == a) ++out[it.degree];
  return out;
}

CartanData cartan_matrix(int n) {
  if (n < 1) throw std::invalid_argument("cartan_matrix: n must be positive");
  auto ms = enumerate_matchings(n);
  const int k = static_cast<int>(ms.size());
  CartanData out;
  out.matrix = Matrix<BigInt>(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      int circles = compose(matching_reflected(ms[a]), matching_tangle(ms[b])).circles;
      BigInt e = 1;
      e <<= circles;
      out.matrix.at(a, b) = e;
    }
  out.det = det_bareiss(out.matrix);

  auto binom = [](int nn, int kk) -> BigInt {
    if (kk < 0 || kk > nn) return 0;
    BigInt r = 1;
    for (int i = 0; i < kk; ++i) {
      r *= nn - i;
      r /= i + 1;
    }
    return r;
  };
  out.meander = 1;
  for (int i = 1; i <= n; ++i) {
    BigInt c = binom(2 * n, n - i) - 2 * binom(2 * n, n - i - 1) + binom(2 * n, n - i - 2);
    BigInt base = i + 1;
    for (BigInt e = 0; e < c; ++e) out.meander *= base;
  }
  return out;
}

GramReport verify_symmetric(const ArcRing& R) {
  auto basis = ring_basis(R);
  const int sz = static_cast<int>(basis.items.size());
  GramReport rep;
  rep.size = sz;
  rep.gram = Matrix<long long>(sz, sz);
  for (int i = 0; i < sz; ++i) {
    auto& bi = basis.items[i];
    auto x = ring_basis_element(R, bi.b, bi.a, bi.mask);
    for (int j = 0; j < sz; ++j) {
      auto& bj = basis.items[j];
      if (bi.a != bj.b || bi.b != bj.a) continue;  // trace needs a round trip
      auto y = ring_basis_element(R, bj.b, bj.a, bj.mask);
      rep.gram.at(i, j) = trace(R, ring_multiply(R, x, y));
    }
  }
  rep.is_permutation = true;
  for (int i = 0; i < sz && rep.is_permutation; ++i) {
    int row_ones = 0, col_ones = 0;
    for (int j = 0; j < sz; ++j) {
      long long rv = rep.gram.at(i, j), cv = rep.gram.at(j, i);
      if (rv == 1) ++row_ones;
      else if (rv != 0) rep.is_permutation = false;
      if (cv == 1) ++col_ones;
      else if (cv != 0) rep.is_permutation = false;
    }
    if (row_ones != 1 || col_ones != 1) rep.is_permutation = false;
  }

  // the dual of (b,a,mask): transpose the pair, complement matching circles
  rep.involution_pairs_to_one = true;
  for (auto& it : basis.items) {
    const auto& blk = R.blocks[it.b][it.a];
    const auto& dual_blk = R.blocks[it.a][it.b];
    uint64_t dual_mask = 0;
    for (size_t p = 0; p < blk.circles.size(); ++p) {
      // partner circle shares the gluing-level fingerprint
      std::set<std::pair<int, int>> fp;
      for (auto& [f, id] : blk.fp_to_circle)
        if (id == blk.circles[p]) fp = f;
      auto partner = dual_blk.fp_to_circle.find(fp);
      if (partner == dual_blk.fp_to_circle.end())
        throw std::logic_error("verify_symmetric: reflection lost a circle");
      size_t pp = std::lower_bound(dual_blk.circles.begin(), dual_blk.circles.end(),
                                   partner->second) -
                  dual_blk.circles.begin();
      if (!((it.mask >> p) & 1)) dual_mask |= uint64_t{1} << pp;
    }
    auto x = ring_basis_element(R, it.b, it.a, it.mask);
    auto xs = ring_basis_element(R, it.a, it.b, dual_mask);
    if (trace(R, ring_multiply(R, x, xs)) != 1) rep.involution_pairs_to_one = false;
  }
  return rep;
}

}  // namespace arcring
