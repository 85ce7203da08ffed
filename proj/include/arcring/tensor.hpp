#pragma once

// States of the rank-two Frobenius algebra A = Z<1,X> attached to circle
// collections, with deg 1 = -1 and deg X = +1.  A labeling of k circles is a
// bitmask (bit set = X) and a state is an integer combination of labelings.
//
//   multiplication  m: 1*1=1, 1*X=X*1=X, X*X=0          (degree +1)
//   comultiplication d: 1 -> 1@X + X@1, X -> X@X        (degree +1)
//   unit   i: () -> 1                                    (degree -1)
//   counit e: 1 -> 0, X -> 1                             (degree -1)

#include <cstdint>
#include <map>
#include <vector>

namespace arcring {

struct TensorVector {
  std::vector<int> circle_ids;            // strictly increasing
  std::map<uint64_t, long long> terms;    // labeling mask -> coefficient
  int shift = 0;                          // added to every labeling degree

  int arity() const { return static_cast<int>(circle_ids.size()); }
  int index_of(int circle_id) const;      // position in circle_ids, throws if absent
  bool is_zero() const { return terms.empty(); }
  void add_term(uint64_t mask, long long c);

  bool operator==(const TensorVector& o) const {
    return circle_ids == o.circle_ids && terms == o.terms && shift == o.shift;
  }
};

TensorVector make_basis_state(const std::vector<int>& circle_ids, uint64_t mask, int shift = 0);

// Degree of one labeling: (#X - #1) + shift.
int labeling_degree(int arity, uint64_t mask, int shift);
// Degree if all terms are homogeneous; throws otherwise.
int state_degree(const TensorVector& v);

TensorVector add(const TensorVector& a, const TensorVector& b);
TensorVector scale(const TensorVector& a, long long c);

// Merge the factors of circles `id_a`, `id_b` into a factor for `id_out`.
TensorVector alg_multiply(const TensorVector& v, int id_a, int id_b, int id_out);
// Split the factor of `id_in` into factors for `id_out1`, `id_out2`.
TensorVector alg_comultiply(const TensorVector& v, int id_in, int id_out1, int id_out2);
// Insert a new circle labeled 1.
TensorVector alg_birth(const TensorVector& v, int id_new);
// Remove a circle, evaluating its label by the counit.
TensorVector alg_death(const TensorVector& v, int id_gone);
// Relabel circles (order may change); mapping old id -> new id, injective.
TensorVector relabel(const TensorVector& v, const std::map<int, int>& id_map);
// Disjoint union of circle sets; coefficients multiply, shifts add.
TensorVector tensor_product(const TensorVector& a, const TensorVector& b);

}  // namespace arcring
