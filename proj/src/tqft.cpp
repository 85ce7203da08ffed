#include "arcring/tqft.hpp"

#include <stdexcept>

namespace arcring {

ResolvedDiagram resolve(const TangleWord& w, const std::vector<int>& choice) {
  ResolvedDiagram d;
  d.word = w;
  d.choice = choice;
  d.arr = build_arrangement(w, choice);
  d.snap = snapshot(d.arr);
  return d;
}

std::pair<ResolvedDiagram, TensorVector> apply_saddle(const ResolvedDiagram& d,
                                                      const TensorVector& v, int site) {
  if (site < 0 || site >= static_cast<int>(d.arr.sites.size()))
    throw std::invalid_argument("apply_saddle: site out of range");
  SurgeryState st(d.arr, v);
  st.toggle_site(site);
  ResolvedDiagram out;
  out.word = d.word;
  out.choice = d.choice;
  out.choice[site] ^= 1;
  out.arr = st.arrangement();
  out.snap = st.snap();
  return {out, st.vector()};
}

std::map<int, long long> evaluate_closed(const ResolvedDiagram& d) {
  if (!d.snap.arc_ids.empty())
    throw std::invalid_argument("evaluate_closed: diagram has boundary arcs");
  int k = static_cast<int>(d.snap.circle_ids.size());
  std::map<int, long long> table;
  for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask)
    ++table[labeling_degree(k, mask, 0)];
  return table;
}

}  // namespace arcring
