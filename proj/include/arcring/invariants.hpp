#pragma once

// Decategorified invariants of tangle words and equivalence evidence for
// their complexes.  The bracket lives in the linear strip category; the
// class of a complex in the split Grothendieck group lands in the same
// place, and the two agree for collated cubes.

#include <string>
#include <vector>

#include "arcring/complex.hpp"
#include "arcring/laurent.hpp"
#include "arcring/planar.hpp"
#include "arcring/word.hpp"

namespace arcring {

// state sum over smoothings, each weighted (-q^{-1})^{weight}, circles
// absorbed as q + q^{-1} factors
TLMorphism bracket(const TangleWord& D);

// (-1)^x q^{2x-y} times the bracket, x and y the oriented chirality counts
TLMorphism kauffman(const TangleWord& D, const std::vector<bool>& reversed = {});

// alternating sum of the summands of a complex, q-weighted by their shifts;
// equals kauffman(D) for build_cube(D), changes sign under [1], picks up
// q^j under {j}, and is blind to simplification
TLMorphism euler_class(const BoundedComplex& C);

// graded Euler characteristic of a closed complex, read two ways
LaurentPoly jones_via_classes(const BoundedComplex& C);   // empty-tangle coefficient
LaurentPoly jones_via_homology(const BoundedComplex& C);  // alternating homology ranks

// Equivalence evidence: rational cores and every integral closure table.
// Agreement is evidence of homotopy equivalence, not a proof; disagreement
// on any probe is a proof of inequivalence.
struct EquivalenceReport {
  bool equivalent_evidence = false;
  std::string detail;  // first failing probe, empty when all agree

  std::string verdict() const { return equivalent_evidence ? "equivalent-evidence" : "distinct"; }
};
EquivalenceReport equivalent(const BoundedComplex& a, const BoundedComplex& b);

}  // namespace arcring
