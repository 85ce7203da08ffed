#pragma once

// Bounded complexes of geometric bimodules.  A tangle word with k crossings
// spans a k-dimensional cube of smoothings; vertices carry the bimodules of
// the resolved diagrams with a downward internal shift by the resolution
// weight, edges carry saddle maps with the usual alternating signs, and the
// collated total complex is normalized by the crossing counts of the two
// oriented chiralities.  On top of that: shifts, cones, tensor products over
// the middle boundary, summand cancellation over Z, Q, or F_p, and integral
// homology of closed complexes through Smith reduction.

#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "arcring/bimodule.hpp"
#include "arcring/word.hpp"

namespace arcring {

struct BoundedComplex {
  int m = 0, n = 0;  // boundary arities of every object
  int lo = 0;        // homological degree of objects.front()
  std::vector<GeometricBimodule> objects;
  std::vector<BimoduleMorphism> diffs;  // diffs[i]: objects[i] -> objects[i+1]

  int hi() const { return lo + static_cast<int>(objects.size()) - 1; }
  bool empty() const { return objects.empty(); }
};

// single bimodule concentrated in homological degree zero
BoundedComplex complex_of(const GeometricBimodule& M);

// shapes line up, differentials are degree 0 and homogeneous, and d*d = 0
bool is_complex(const BoundedComplex& C);
// no summands anywhere
bool is_zero_complex(const BoundedComplex& C);

// multiset of (homological degree, tangle, shift) over all objects
std::vector<std::tuple<int, FlatTangle, int>> complex_fingerprint(const BoundedComplex& C);

// The cube of smoothings before collation: vertex masks index smoothing
// choices bit-per-crossing in slice order, edge maps are the unsigned saddle
// maps between adjacent vertices.  Vertices already carry the {-|mask|}
// shift, so every edge map is homogeneous of degree 0.
struct ResolutionCube {
  int k = 0;       // crossings
  int x = 0, y = 0;  // oriented chirality counts
  std::vector<FlatTangle> resolution;     // [mask]
  std::vector<GeometricBimodule> vertex;  // [mask]
  std::map<std::pair<uint64_t, int>, BimoduleMorphism> edge;  // (mask, site)
};
ResolutionCube build_resolution_cube(const TangleWord& D,
                                     const std::vector<bool>& reversed = {});
int edge_sign(uint64_t mask, int site);

// signed collation of the cube, then the [x]{2x-y} normalization
BoundedComplex build_cube(const TangleWord& D, const std::vector<bool>& reversed = {});

// C[k]{j}: the object at degree i+k moves to degree i, odd k flips every
// differential, j is added to all internal shifts
BoundedComplex shift_complex(const BoundedComplex& C, int k, int j);

// degree -> morphism C^deg -> D^deg; missing degrees are zero
struct ChainMap {
  std::map<int, BimoduleMorphism> parts;
};
ChainMap identity_chain_map(const BoundedComplex& C);
bool is_chain_map(const BoundedComplex& C, const BoundedComplex& D, const ChainMap& f);

// cone^i = C^{i+1} + D^i with d(c, e) = (-dc, f c + de)
BoundedComplex cone(const BoundedComplex& C, const BoundedComplex& D, const ChainMap& f);

// total complex of the double complex Y^p tensor X^q, second differential
// carrying the sign (-1)^p; objects are tensor_over results and the
// differentials are transported through the integral witness surjections
BoundedComplex tensor_complexes(const BoundedComplex& Y, const BoundedComplex& X);

enum class CoeffDomain { Z, Q, Fp };

// Cancels components between summands of equal (tangle, shift) whose blocks
// are invertible over the domain, in order of increasing homological degree,
// then internal shift, preferring plain +-identity components.  Over Z only
// unimodular components cancel; over a field the result has no invertible
// component left.  Entries of a Q-simplified complex are rescaled per degree
// to stay integral; entries of an F_p result are canonical representatives.
BoundedComplex simplify(const BoundedComplex& C, CoeffDomain dom = CoeffDomain::Z,
                        long long p = 2);

struct HomologyTable {
  struct Group {
    int rank = 0;
    std::vector<long long> torsion;  // invariant factors > 1, each dividing the next
    bool operator==(const Group& o) const = default;
  };
  std::map<std::pair<int, int>, Group> groups;  // (homological, internal) -> group
  bool operator==(const HomologyTable& o) const = default;
};

// homology of the free abelian closure component (c, b)
HomologyTable closure_homology(const BoundedComplex& C, int c, int b);
// every closure pair of a tangle complex
std::map<std::pair<int, int>, HomologyTable> closures(const BoundedComplex& C);
// the (0,0) case: the complex itself is one of graded abelian groups
HomologyTable homology_Z(const BoundedComplex& C);
// dimensions of homology with field coefficients, Q when p = 0
std::map<std::pair<int, int>, int> homology_field(const BoundedComplex& C, int c, int b,
                                                  long long p = 0);

}  // namespace arcring
