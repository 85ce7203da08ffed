#pragma once

// Bimodules attached to flat tangles with 2n bottom and 2m top endpoints.
// A bimodule is a direct sum of shifted summands, one per circle-free
// diagram; free circles of the input are split off into +1/-1 shift pairs
// at construction.  The component over a pair of boundary matchings (c,b)
// is the labeled-circle module of the closure of the summand under b below
// and the reflection of c above, graded with an upward shift by n plus the
// summand shift.
//
// Ring actions contract a matching against its reflection by surgery, the
// same mechanism as ring multiplication.  Maps induced by elementary
// cobordism moves (birth, death, merge, split, saddle) are assembled into
// block matrices per component.

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "arcring/arc_ring.hpp"
#include "arcring/arrangement.hpp"
#include "arcring/matrix.hpp"
#include "arcring/planar.hpp"
#include "arcring/tensor.hpp"

namespace arcring {

struct GeometricBimodule {
  int m = 0, n = 0;  // 2m top, 2n bottom endpoints
  struct Summand {
    FlatTangle tangle;  // circle-free
    int shift = 0;
    bool operator==(const Summand& o) const = default;
  };
  std::vector<Summand> summands;
  std::vector<Matching> top_basis, bottom_basis;  // B^m, B^n

  struct CompCache {
    std::vector<int> circles;  // canonical closure circle ids, sorted
    int edge_count = 0;
    std::map<std::set<std::pair<int, int>>, int> fp_to_circle;
  };
  std::vector<std::vector<std::vector<CompCache>>> cache;  // [s][c][b]

  int tops() const { return static_cast<int>(top_basis.size()); }
  int bottoms() const { return static_cast<int>(bottom_basis.size()); }
  int circle_count(int s, int c, int b) const {
    return static_cast<int>(cache[s][c][b].circles.size());
  }
  // basis: summands in order, masks ascending within a summand
  int comp_dim(int c, int b) const;
  int summand_offset(int s, int c, int b) const;
  int basis_degree(int s, int c, int b, uint64_t mask) const;
  std::map<int, int> component_ranks(int c, int b) const;  // degree -> rank

  // multiset of (tangle, shift): the isomorphism-class bookkeeping data
  std::vector<std::pair<FlatTangle, int>> summand_data() const;
};

// Strips free circles into +1/-1 summand pairs; bit p of the summand index
// is the label of the p-th circle, X giving the +1 shift.
GeometricBimodule build_bimodule(const FlatTangle& a);
// Direct sum with an extra overall shift on the second part.
GeometricBimodule direct_sum(const GeometricBimodule& x, const GeometricBimodule& y);
GeometricBimodule shift_bimodule(const GeometricBimodule& x, int j);
GeometricBimodule zero_bimodule(int m, int n);

// Circle identification of a closure arrangement against a cached component:
// circles with boundary fingerprints map to canonical ids; the rest are
// internal, sorted by id.  Shared by every surgery that lands in a bimodule.
struct CircleMatch {
  std::map<int, int> boundary_to_canonical;
  std::vector<int> internal_ids;
};
CircleMatch match_circles(const Arrangement& arr, const ArrSnapshot& snap,
                          const GeometricBimodule::CompCache& target);
// write a surgered state into component coordinates of a bimodule whose
// summand block at summand_base refines the internal circles of the state
void accumulate_output(const GeometricBimodule& tgt, int c, int b, const TensorVector& v,
                       const CircleMatch& match, int summand_base, long long scale_by,
                       std::vector<long long>& out);

struct BimoduleElement {
  // (c,b) -> coordinates in the component basis
  std::map<std::pair<int, int>, std::vector<long long>> comps;
  bool is_zero() const;
  bool operator==(const BimoduleElement& o) const = default;
};

BimoduleElement bim_basis_element(const GeometricBimodule& M, int c, int b, int index);

// h acts through the ring on the top boundary; x through the bottom one.
BimoduleElement act_left(const ArcRing& R, const RingElement& h,
                         const GeometricBimodule& M, const BimoduleElement& x);
BimoduleElement act_right(const GeometricBimodule& M, const BimoduleElement& x,
                          const ArcRing& R, const RingElement& h);

struct BimoduleMorphism {
  int degree = 0;
  std::vector<std::vector<Matrix<long long>>> blocks;  // [c][b], target x source

  bool operator==(const BimoduleMorphism& o) const = default;
};

BimoduleMorphism zero_morphism(const GeometricBimodule& src, const GeometricBimodule& tgt,
                               int degree);
BimoduleMorphism identity_morphism(const GeometricBimodule& M);
BimoduleMorphism compose_morphisms(const BimoduleMorphism& g, const BimoduleMorphism& f);
BimoduleMorphism add_morphisms(const BimoduleMorphism& f, const BimoduleMorphism& g);
BimoduleMorphism scale_morphism(const BimoduleMorphism& f, long long c);
BimoduleElement apply_morphism(const GeometricBimodule& src, const GeometricBimodule& tgt,
                               const BimoduleMorphism& f, const BimoduleElement& x);
// checks every entry connects degrees differing by f.degree
bool morphism_homogeneous(const GeometricBimodule& src, const GeometricBimodule& tgt,
                          const BimoduleMorphism& f);

// An elementary-move description of a cobordism between flat tangles.
// Boundary points name the strand a move touches; the free circles of the
// source are consumed in order by Death and MergeCircle moves.
struct NamedMove {
  enum Kind { Birth, Death, MergeCircle, SplitOffCircle, Saddle } kind = Birth;
  int p = -1, q = -1;  // boundary points: MergeCircle/SplitOffCircle use p, Saddle p and q
};
struct Cobordism {
  FlatTangle source, target;
  std::vector<NamedMove> moves;
};

Cobordism cob_identity(const FlatTangle& a);
Cobordism cob_birth(const FlatTangle& a);                     // a -> a + circle
Cobordism cob_death(const FlatTangle& a);                     // a + circle -> a
Cobordism cob_merge_circle(const FlatTangle& a, int p);       // a + circle -> a
Cobordism cob_split_off_circle(const FlatTangle& a, int p);   // a -> a + circle
Cobordism cob_saddle(const FlatTangle& a, int p, int q);

struct CobordismMap {
  GeometricBimodule source, target;
  BimoduleMorphism map;
};
CobordismMap cobordism_map(const Cobordism& S);

// Tensor product over the middle ring, with the basis surjection that
// witnesses the identification with the composed diagram's bimodule.
struct TensorResult {
  GeometricBimodule result;  // over (k,n)
  // witness[c][b]: result component x stacked pair basis; pair columns are
  // ordered by middle matching d, then Y index, then X index
  std::vector<std::vector<Matrix<long long>>> witness;
  std::vector<int> middle_offsets(const GeometricBimodule& Y, const GeometricBimodule& X,
                                  int c, int b) const;
};
TensorResult tensor_over(const GeometricBimodule& Y, const GeometricBimodule& X,
                         const std::vector<int>& saddle_order = {});

}  // namespace arcring
