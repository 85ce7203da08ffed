#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "arcring/planar.hpp"
#include "arcring/tensor.hpp"
#include "arcring/word.hpp"

namespace arcring {

// A concrete strand arrangement built from a tangle word: grid points at every
// slice level, strand segments as edges with stable construction-order
// indices, and an active flag so smoothings and surgeries can toggle segments
// without renumbering anything. Crossing slices pre-allocate both smoothings
// (vertical pair first, then cap and cup) at adjacent indices.
//
// Component identity is the minimal active edge index, so circle names are
// reproducible across runs and stable under surgeries that do not touch the
// component.
struct Arrangement {
  struct Edge {
    int a = -1, b = -1;
    bool active = false;
  };
  struct Site {
    int slice = -1;
    int pos = 0;
    SliceKind kind = SliceKind::X;
    int first_edge = -1;  // vertical-left, vertical-right, cap, cup
  };
  struct Delta {
    std::vector<int> deactivated, activated;
  };

  std::vector<int> widths, level_base;
  int n_points = 0;
  std::vector<Edge> edges;
  std::vector<Site> sites;
  std::vector<int> site_choice;
  std::vector<int> slice_main_edge;  // cap/cup edge of the slice, -1 otherwise
  std::vector<int> slice_site;       // site index for crossing slices, -1 otherwise
  std::vector<int> slice_first_edge;
  std::vector<std::pair<int, int>> marked_levels;  // (level, tag)

  int levels() const { return static_cast<int>(widths.size()); }
  int point(int level, int pos1) const { return level_base[level] + pos1 - 1; }

  int add_point();
  int add_edge(int a, int b, bool active = true);

  // mutations; all report which edges changed activation
  Delta toggle_site(int site);
  Delta contract(int e1, int e2);  // endpoint-aligned saddle between two segments
  Delta split(int e);              // pinch one segment, detaching a circle
  Delta birth();
  Delta kill(const std::vector<int>& component_edges);

  static bool vertical_first(SliceKind kind);  // smoothing 0 of this crossing kind?
};

Arrangement build_arrangement(const TangleWord& w, const std::vector<int>& choice = {});

struct ArrSnapshot {
  std::vector<int> comp_of_edge;   // component id per edge, -1 when inactive
  std::vector<int> comp_of_point;  // -1 when no active edge meets the point
  std::vector<int> circle_ids;     // sorted ids of closed components
  std::vector<int> arc_ids;        // sorted ids of open components
  bool is_circle(int comp) const;
};

ArrSnapshot snapshot(const Arrangement& a);

// boundary pairing + circle count of the current active picture
FlatTangle arrangement_flat(const Arrangement& a, const ArrSnapshot& s);

// per component, the set of (tag, 0-based position) marked points it meets
std::map<int, std::set<std::pair<int, int>>> fingerprints(const Arrangement& a,
                                                          const ArrSnapshot& s);

// Couples an arrangement to a tensor element over its circles and keeps the
// two in sync through surgeries: a merge multiplies, a split comultiplies,
// birth and death apply the unit and counit, and arc-only saddles are the
// identity. A saddle that trades an arc against a circle has no tensor-level
// meaning for an open diagram and is rejected.
class SurgeryState {
 public:
  SurgeryState(Arrangement arr, TensorVector v);

  const Arrangement& arrangement() const { return arr_; }
  const ArrSnapshot& snap() const { return snap_; }
  const TensorVector& vector() const { return v_; }

  void toggle_site(int site);
  void contract(int e1, int e2);
  void split(int e);
  void birth();
  void death(int circle_id);

 private:
  void surgery(const Arrangement::Delta& d);
  void resync();

  Arrangement arr_;
  ArrSnapshot snap_;
  TensorVector v_;
};

}  // namespace arcring
