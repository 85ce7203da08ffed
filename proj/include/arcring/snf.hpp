#pragma once

// Exact integer linear algebra: Smith normal form, Bareiss determinant,
// rational rank.  Entries use arbitrary precision to keep intermediate
// growth harmless.

#include <boost/multiprecision/cpp_int.hpp>

#include "arcring/matrix.hpp"

namespace arcring {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct SmithResult {
  int rank = 0;
  // nonzero diagonal entries, positive, each dividing the next
  std::vector<BigInt> invariant_factors;
};

// Row/column reduction with smallest-magnitude pivoting.
SmithResult smith_normal_form(Matrix<BigInt> m);

// Same reduction, tracking the unimodular transforms: u * a * v = diag.
struct SmithTransforms {
  Matrix<BigInt> u, v;
  std::vector<BigInt> diagonal;  // nonnegative, each dividing the next
  int rank = 0;
};
SmithTransforms smith_with_transforms(const Matrix<BigInt>& a);

// x with a * x = identity; throws when the rows of a do not span the full
// integer lattice (rank < rows or an invariant factor exceeds 1)
Matrix<BigInt> integral_right_inverse(const Matrix<BigInt>& a);

// Fraction-free determinant; m must be square.
BigInt det_bareiss(Matrix<BigInt> m);

int rank_of(const Matrix<BigInt>& m);
int rank_of(const Matrix<long long>& m);

// rank over the prime field F_p
int rank_mod_p(const Matrix<long long>& m, long long p);

}  // namespace arcring
