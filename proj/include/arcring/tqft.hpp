#pragma once

#include <map>
#include <vector>

#include "arcring/arrangement.hpp"
#include "arcring/planar.hpp"
#include "arcring/tensor.hpp"
#include "arcring/word.hpp"

namespace arcring {

// A tangle word with every crossing smoothed one way or the other, realized
// as a live arrangement so saddles can keep toggling smoothings.
struct ResolvedDiagram {
  TangleWord word;
  std::vector<int> choice;
  Arrangement arr;
  ArrSnapshot snap;

  FlatTangle flat() const { return arrangement_flat(arr, snap); }
  const std::vector<int>& circles() const { return snap.circle_ids; }
};

ResolvedDiagram resolve(const TangleWord& w, const std::vector<int>& choice);

// Toggle the smoothing at one crossing and push the element through the
// induced elementary cobordism.
std::pair<ResolvedDiagram, TensorVector> apply_saddle(const ResolvedDiagram& d,
                                                      const TensorVector& v, int site);

// graded ranks of the group attached to a closed diagram: degree -> rank
std::map<int, long long> evaluate_closed(const ResolvedDiagram& d);

}  // namespace arcring
