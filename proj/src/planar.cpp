#include "arcring/planar.hpp"

#include <algorithm>
#include <stdexcept>

namespace arcring {

namespace {

void check_involution(const std::vector<int>& pair) {
  const int n = static_cast<int>(pair.size());
  for (int i = 0; i < n; ++i) {
    if (pair[i] < 0 || pair[i] >= n || pair[i] == i)
      throw std::invalid_argument("pairing is not fixed-point-free on the point set");
    if (pair[pair[i]] != i) throw std::invalid_argument("pairing is not an involution");
  }
}

}  // namespace

bool Matching::operator<(const Matching& o) const {
  if (n != o.n) return n < o.n;
  return pair_ < o.pair_;
}

std::vector<std::pair<int, int>> Matching::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < 2 * n; ++i)
    if (pair_[i] > i) out.emplace_back(i, pair_[i]);
  return out;
}

Matching make_matching(int n, const std::vector<int>& pair) {
  if (n < 0 || static_cast<int>(pair.size()) != 2 * n)
    throw std::invalid_argument("matching arity mismatch");
  check_involution(pair);
  if (!is_noncrossing(0, 2 * n, pair)) throw std::invalid_argument("matching has crossing arcs");
  return Matching{n, pair};
}

std::vector<Matching> enumerate_matchings(int n) {
  if (n < 0) throw std::invalid_argument("enumerate_matchings: n < 0");
  std::vector<Matching> out;
  std::vector<int> pair(2 * n, -1);
  // Planarity confines each arc to one contiguous region, so recurse over a
  // worklist of intervals: the leftmost point of an interval pairs at an odd
  // offset inside it, splitting it in two.
  std::vector<std::pair<int, int>> todo;  // half-open intervals
  auto rec = [&](auto&& self) -> void {
    if (todo.empty()) {
      out.push_back(Matching{n, pair});
      return;
    }
    auto [lo, hi] = todo.back();
    todo.pop_back();
    if (lo == hi) {
      self(self);
      todo.emplace_back(lo, hi);
      return;
    }
    for (int j = lo + 1; j < hi; j += 2) {
      pair[lo] = j;
      pair[j] = lo;
      todo.emplace_back(lo + 1, j);
      todo.emplace_back(j + 1, hi);
      self(self);
      todo.pop_back();
      todo.pop_back();
      pair[lo] = -1;
      pair[j] = -1;
    }
    todo.emplace_back(lo, hi);
  };
  todo.emplace_back(0, 2 * n);
  rec(rec);
  std::sort(out.begin(), out.end());
  return out;
}

bool FlatTangle::operator<(const FlatTangle& o) const {
  if (bottom != o.bottom) return bottom < o.bottom;
  if (top != o.top) return top < o.top;
  if (pair_ != o.pair_) return pair_ < o.pair_;
  return circles < o.circles;
}

bool is_noncrossing(int bottom, int top, const std::vector<int>& pair) {
  const int n = bottom + top;
  // cyclic position: bottom left-to-right, then top right-to-left
  std::vector<int> cyc(n), inv(n);
  for (int p = 0; p < n; ++p) {
    cyc[p] = p < bottom ? p : bottom + (top - 1 - (p - bottom));
    inv[cyc[p]] = p;
  }
  std::vector<int> stack;
  for (int pos = 0; pos < n; ++pos) {
    int partner_pos = cyc[pair[inv[pos]]];
    if (partner_pos > pos) {
      stack.push_back(pos);
    } else {
      if (stack.empty() || stack.back() != partner_pos) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

FlatTangle make_flat_tangle(int bottom, int top, const std::vector<int>& pair, int circles) {
  if (bottom < 0 || top < 0 || bottom % 2 || top % 2)
    throw std::invalid_argument("flat tangle boundaries must be even and nonnegative");
  if (circles < 0) throw std::invalid_argument("negative circle count");
  if (static_cast<int>(pair.size()) != bottom + top)
    throw std::invalid_argument("flat tangle pairing size mismatch");
  check_involution(pair);
  if (!is_noncrossing(bottom, top, pair))
    throw std::invalid_argument("flat tangle pairing is not planar");
  return FlatTangle{bottom, top, pair, circles};
}

FlatTangle matching_tangle(const Matching& m) {
  return FlatTangle{0, 2 * m.n, m.pair_, 0};
}

FlatTangle matching_reflected(const Matching& m) { return reflect(matching_tangle(m)); }

FlatTangle vertical_tangle(int w) {
  if (w < 0 || w % 2) throw std::invalid_argument("vertical_tangle: arity must be even");
  std::vector<int> pair(2 * w);
  for (int i = 0; i < w; ++i) {
    pair[i] = w + i;
    pair[w + i] = i;
  }
  return FlatTangle{w, w, pair, 0};
}

FlatTangle compose(const FlatTangle& upper, const FlatTangle& lower) {
  if (lower.top != upper.bottom)
    throw std::invalid_argument("compose: interface arities differ");
  const int g = lower.top;  // glued points
  const int nb = lower.bottom, nt = upper.top;
  // point spaces: result points: bottom 0..nb-1, top nb..nb+nt-1
  // lower points: bottom p -> p, top j -> interface j
  // upper points: bottom j -> interface j, top t -> result nb + t
  // Walk paths across the interface.
  std::vector<int> pair(nb + nt, -1);
  std::vector<bool> if_seen(g, false);

  // Step from an external result point through the glued diagram.
  auto trace = [&](int start) -> int {
    // start is a result point; returns its partner as result point.
    bool in_lower = start < nb;
    int p = in_lower ? lower.pair_[start] : upper.pair_[g + (start - nb)];
    while (true) {
      if (in_lower) {
        if (p < lower.bottom) return p;      // bottom external
        int j = p - lower.bottom;            // interface strand
        if_seen[j] = true;
        in_lower = false;
        p = upper.pair_[j];
      } else {
        if (p >= g) return nb + (p - g);     // top external
        int j = p;
        if_seen[j] = true;
        in_lower = true;
        p = lower.pair_[lower.bottom + j];
      }
    }
  };

  for (int s = 0; s < nb + nt; ++s) {
    if (pair[s] >= 0) continue;
    int t = trace(s);
    pair[s] = t;
    pair[t] = s;
  }

  // Interface strands not reached from the boundary close up into circles.
  int new_circles = 0;
  for (int j = 0; j < g; ++j) {
    if (if_seen[j]) continue;
    // walk the cycle through j
    int cur = j;
    while (!if_seen[cur]) {
      if_seen[cur] = true;
      int up = upper.pair_[cur];
      if (up >= g) throw std::logic_error("compose: inconsistent interface walk");
      if_seen[up] = true;
      int down = lower.pair_[lower.bottom + up];
      if (down < lower.bottom) throw std::logic_error("compose: inconsistent interface walk");
      cur = down - lower.bottom;
    }
    ++new_circles;
  }

  FlatTangle out{nb, nt, pair, lower.circles + upper.circles + new_circles};
  if (!is_noncrossing(nb, nt, pair)) throw std::logic_error("compose: produced crossing pairing");
  return out;
}

FlatTangle reflect(const FlatTangle& t) {
  const int nb = t.top, nt = t.bottom;
  auto remap = [&](int p) { return p < t.bottom ? nb + p : p - t.bottom; };
  std::vector<int> pair(nb + nt);
  for (int p = 0; p < t.points(); ++p) pair[remap(p)] = remap(t.pair_[p]);
  return FlatTangle{nb, nt, pair, t.circles};
}

std::pair<FlatTangle, int> remove_circles(const FlatTangle& t) {
  FlatTangle out = t;
  int k = out.circles;
  out.circles = 0;
  return {out, k};
}

void TLMorphism::add(const FlatTangle& t, const LaurentPoly& c) {
  if (t.circles != 0) throw std::invalid_argument("TLMorphism keys must be circle-free");
  if (t.bottom != bottom || t.top != top)
    throw std::invalid_argument("TLMorphism term arity mismatch");
  auto it = terms.find(t);
  if (it == terms.end()) {
    if (!c.is_zero()) terms.emplace(t, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

std::vector<FlatTangle> enumerate_flat_tangles(int m, int n) {
  // bend the bottom boundary up: matchings of 2(n+m) line points, with the
  // top half read right to left to honor the strip's cyclic boundary order
  std::vector<FlatTangle> out;
  for (auto& mm : enumerate_matchings(n + m)) {
    auto line_to_tangle = [&](int i) {
      return i < 2 * n ? i : 2 * n + (2 * m - 1 - (i - 2 * n));
    };
    std::vector<int> pair(2 * (n + m));
    for (int i = 0; i < 2 * (n + m); ++i)
      pair[line_to_tangle(i)] = line_to_tangle(mm.pair_[i]);
    out.push_back(make_flat_tangle(2 * n, 2 * m, pair));
  }
  return out;
}

TLMorphism linearize(const FlatTangle& t) {
  auto [bare, k] = remove_circles(t);
  TLMorphism m{t.bottom, t.top, {}};
  m.add(bare, LaurentPoly::circle_weight(k));
  return m;
}

TLMorphism tl_compose(const TLMorphism& upper, const TLMorphism& lower) {
  if (lower.top != upper.bottom)
    throw std::invalid_argument("tl_compose: interface arities differ");
  TLMorphism out{lower.bottom, upper.top, {}};
  for (auto& [tu, cu] : upper.terms)
    for (auto& [tl, cl] : lower.terms) {
      FlatTangle prod = compose(tu, tl);
      auto [bare, k] = remove_circles(prod);
      out.add(bare, (cu * cl) * LaurentPoly::circle_weight(k));
    }
  return out;
}

}  // namespace arcring
