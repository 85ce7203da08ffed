#pragma once

// Tangle diagrams as words of elementary slices read bottom to top.
//
// A slice acts on w strands at 1-based positions:
//   x i     crossing at (i, i+1); strand from bottom-left to top-right on top
//   xbar i  crossing at (i, i+1); the other strand on top
//   cap i   join strands (i, i+1) in a maximum
//   cup i   insert two new strands at positions (i, i+1), joined in a minimum
//   vert    no-op padding slice
//
// Crossing smoothings: 0-smoothing of x (1-smoothing of xbar) keeps the two
// strands parallel; the other smoothing turns them back with a cap under a
// cup.  Signs: orienting both strands through a crossing, the crossing is
// counted in y when (over, under) directions form a positively oriented
// frame, in x otherwise.  A kink closable to the plain strand by its
// 0-smoothing is an x crossing for every strand orientation; by its
// 1-smoothing, a y crossing.

#include <optional>
#include <vector>

#include "arcring/planar.hpp"

namespace arcring {

enum class SliceKind { X, XBar, Cap, Cup, Vert };

struct Slice {
  SliceKind kind;
  int pos = 1;  // 1-based
};

struct TangleWord {
  int bottom = 0;  // strand count at the bottom boundary
  std::vector<Slice> slices;
  // Orientation marks, one per boundary point: +1 if the strand points
  // upward near the boundary point, -1 if downward.  Bottom points first
  // (left to right), then top points.  Empty = use defaults.
  std::vector<int> marks;

  int crossings() const;
};

// strand counts at every level; validates positions.  levels[0] = bottom.
std::vector<int> strand_levels(const TangleWord& w);
int top_count(const TangleWord& w);

// Underlying flat tangle of a word with no crossings.
FlatTangle word_tangle_flat(const TangleWord& w);

// Tangle components (strands through crossings).  Arcs are listed first,
// ordered by their smallest boundary point; closed components follow in a
// deterministic order.
struct WordComponents {
  int count = 0;
  std::vector<int> boundary_component;  // per boundary point (bottom then top)
  std::vector<bool> is_closed;          // per component
};
WordComponents word_components(const TangleWord& w);

// Resolve orientations: per component, a direction; derived from marks if
// present, else defaults (lowest segment of each component traversed from
// its construction-order tail to head; for plain strands this means upward,
// for cups left to right).  reversed[k] flips component k.
struct Orientation {
  std::vector<int> direction;    // per component: +1 default, -1 reversed
  std::vector<int> marks;        // resulting marks per boundary point
  int x = 0;                     // crossing sign counts
  int y = 0;
};
Orientation orient_word(const TangleWord& w, const std::vector<bool>& reversed = {});

// Canonical slice words for planar data (no crossings).
std::vector<Slice> matching_word(const Matching& m);            // all cups, 0 -> 2n
std::vector<Slice> matching_reflected_word(const Matching& m);  // all caps, 2n -> 0
std::vector<Slice> flat_tangle_word(const FlatTangle& t);       // t circle-free

// Arc-tagged variants: each slice is paired with the smaller endpoint of the
// arc of m it creates (cup) or closes off (cap).
std::vector<std::pair<Slice, int>> matching_word_arcs(const Matching& m);
std::vector<std::pair<Slice, int>> matching_reflected_word_arcs(const Matching& m);

// Move-pattern helpers used by the invariance suites: words on `strands`
// strands that are identities outside the pattern.
TangleWord curl_word(int strands, int strand, bool left_twisted);   // kink on one strand
TangleWord tangency_word(int strands, int pos);                     // x pos, xbar pos
TangleWord triple_word(int strands, int pos, bool second_form);     // x p x p+1 x p / swapped
TangleWord identity_word(int strands);

// Concatenation: lower then upper; arities must match.
TangleWord concat(const TangleWord& lower, const TangleWord& upper);

}  // namespace arcring
