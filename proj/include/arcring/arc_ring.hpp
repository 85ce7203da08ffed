#pragma once

// The graded ring attached to 2n boundary points.  One block per ordered
// pair (b,a) of crossingless matchings, realized as labeled-circle states of
// the closure of a by the reflection of b, with the grading shifted up by n.
// Multiplication contracts the middle matching pair by surgery saddles; for
// small n a precomputed product table caches the surgery results.

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "arcring/matrix.hpp"
#include "arcring/planar.hpp"
#include "arcring/snf.hpp"
#include "arcring/tensor.hpp"

namespace arcring {

struct ArcRing {
  int n = 0;
  std::vector<Matching> matchings;

  // per (b,a), data of the closure of a under the reflection of b
  struct Block {
    std::vector<int> circles;  // sorted canonical circle ids
    int edge_count = 0;        // arrangement edges, used as a relabel offset
    std::map<std::set<std::pair<int, int>>, int> fp_to_circle;
  };
  std::vector<std::vector<Block>> blocks;  // [b][a]

  // precomputed products for small n: (c,b,a,xmask,ymask) -> state in (c,a)
  std::map<std::tuple<int, int, int, uint64_t, uint64_t>, TensorVector> product_table;

  int components() const { return static_cast<int>(matchings.size()); }
  int circle_count(int b, int a) const {
    return static_cast<int>(blocks[b][a].circles.size());
  }
};

// Builds all blocks; products are precomputed when n <= table_limit.
ArcRing build_ring(int n, int table_limit = 3);

// Sparse element: (b,a) -> state over the block's circles, shift n.
struct RingElement {
  int n = 0;
  std::map<std::pair<int, int>, TensorVector> comps;

  bool operator==(const RingElement& o) const = default;
  bool is_zero() const;
};

RingElement ring_zero(const ArcRing& R);
RingElement ring_idempotent(const ArcRing& R, int a);
RingElement ring_unit(const ArcRing& R);
RingElement ring_basis_element(const ArcRing& R, int b, int a, uint64_t mask);
RingElement ring_add(const RingElement& x, const RingElement& y);
RingElement ring_scale(const RingElement& x, long long c);
RingElement ring_multiply(const ArcRing& R, const RingElement& x, const RingElement& y);

// One block product by explicit surgery: x in (c,b), y in (b,a).
// saddle_order permutes the contraction saddles; default is by arc index.
TensorVector component_product(const ArcRing& R, int c, int b, int a,
                               const TensorVector& vx, const TensorVector& vy,
                               const std::vector<int>& saddle_order = {});

long long trace(const ArcRing& R, const RingElement& x);

// Standard basis in block order (b, then a, then mask ascending).
struct RingBasis {
  struct Item {
    int b = 0, a = 0;
    uint64_t mask = 0;
    int degree = 0;
  };
  std::vector<Item> items;
};
RingBasis ring_basis(const ArcRing& R);

std::map<int, int> graded_ranks(const ArcRing& R);
// Graded ranks of the column of blocks over a fixed lower matching.
std::map<int, int> projective_column(const ArcRing& R, int a);

struct CartanData {
  Matrix<BigInt> matrix;
  BigInt det = 0;
  BigInt meander = 0;  // closed-form prediction for the determinant
};
CartanData cartan_matrix(int n);

struct GramReport {
  int size = 0;
  bool is_permutation = false;
  bool involution_pairs_to_one = false;  // every Tr(x x*) = 1
  Matrix<long long> gram;
};
GramReport verify_symmetric(const ArcRing& R);

}  // namespace arcring
