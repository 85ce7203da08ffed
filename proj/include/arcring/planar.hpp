#pragma once

// Crossingless matchings and flat (crossingless) tangles in a horizontal
// strip, plus the free Z[q,q^-1]-linearization of flat tangles.
//
// Boundary convention: a flat tangle with 2n bottom and 2m top endpoints
// numbers the bottom points 0..2n-1 left to right and the top points
// 2n..2n+2m-1 left to right.  Planarity is checked against the induced
// cyclic order around the strip boundary (bottom left to right, then top
// right to left).

#include <utility>
#include <vector>

#include "arcring/laurent.hpp"
#include <map>

namespace arcring {

// A crossingless matching of 2n points on a line.  pair_[i] is the partner
// of point i (0-based).
struct Matching {
  int n = 0;
  std::vector<int> pair_;

  bool operator==(const Matching& o) const { return n == o.n && pair_ == o.pair_; }
  bool operator<(const Matching& o) const;
  // pairs as a list {(p,q), p<q} in increasing p order
  std::vector<std::pair<int, int>> arcs() const;
};

Matching make_matching(int n, const std::vector<int>& pair);

// All matchings of 2n points, ordered lexicographically by partner array.
std::vector<Matching> enumerate_matchings(int n);

// A flat tangle: planar boundary pairing plus a count of free circles.
struct FlatTangle {
  int bottom = 0;           // number of bottom endpoints (even)
  int top = 0;              // number of top endpoints (even)
  std::vector<int> pair_;   // involution on bottom+top points
  int circles = 0;

  int points() const { return bottom + top; }
  bool is_closed() const { return points() == 0; }
  bool operator==(const FlatTangle& o) const {
    return bottom == o.bottom && top == o.top && pair_ == o.pair_ && circles == o.circles;
  }
  bool operator<(const FlatTangle& o) const;
};

FlatTangle make_flat_tangle(int bottom, int top, const std::vector<int>& pair, int circles = 0);

// Matchings viewed as flat tangles with empty bottom boundary.
FlatTangle matching_tangle(const Matching& m);
// The reflection W(m) with empty top boundary (all caps).
FlatTangle matching_reflected(const Matching& m);
// Identity tangle on w strands.
FlatTangle vertical_tangle(int w);

bool is_noncrossing(int bottom, int top, const std::vector<int>& pair);

// All circle-free flat tangles with 2n bottom and 2m top endpoints.
std::vector<FlatTangle> enumerate_flat_tangles(int m, int n);

// Composition: glue the top boundary of `lower` to the bottom boundary of
// `upper`.  Closed loops created at the interface are added to the circle
// count.
FlatTangle compose(const FlatTangle& upper, const FlatTangle& lower);

// Reflection about a horizontal axis; swaps the two boundaries.
FlatTangle reflect(const FlatTangle& t);

// Strip the free circles; returns the circle-free tangle and the count.
std::pair<FlatTangle, int> remove_circles(const FlatTangle& t);

// An element of the linear strip category: a Z[q,q^-1]-combination of
// circle-free flat tangles with fixed boundary arities.
struct TLMorphism {
  int bottom = 0;
  int top = 0;
  std::map<FlatTangle, LaurentPoly> terms;  // keys circle-free

  void add(const FlatTangle& t, const LaurentPoly& c);
  bool operator==(const TLMorphism& o) const {
    return bottom == o.bottom && top == o.top && terms == o.terms;
  }
};

// lin(t) = (q+q^{-1})^{circles} * [t with circles removed]
TLMorphism linearize(const FlatTangle& t);

TLMorphism tl_compose(const TLMorphism& upper, const TLMorphism& lower);

}  // namespace arcring
