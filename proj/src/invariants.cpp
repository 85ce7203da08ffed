#include "arcring/invariants.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "arcring/arrangement.hpp"

namespace arcring {

namespace {

TLMorphism scale_terms(const TLMorphism& f, const LaurentPoly& s) {
  TLMorphism out;
  out.bottom = f.bottom;
  out.top = f.top;
  for (const auto& [t, c] : f.terms) out.add(t, c * s);
  return out;
}

}  // namespace

TLMorphism bracket(const TangleWord& D_in) {
  TangleWord D = D_in;
  if (D.slices.empty() && D.bottom > 0) D.slices.push_back({SliceKind::Vert, 1});
  const int top = top_count(D);
  if (D.bottom % 2 != 0 || top % 2 != 0)
    throw std::invalid_argument("bracket: odd boundary arity");
  const int k = D.crossings();
  if (k > 62) throw std::invalid_argument("bracket: too many crossings");

  TLMorphism out;
  out.bottom = D.bottom;
  out.top = top;
  for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
    std::vector<int> choice(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) choice[static_cast<size_t>(j)] = (mask >> j) & 1;
    auto arr = build_arrangement(D, choice);
    auto lin = linearize(arrangement_flat(arr, snapshot(arr)));
    const int w = std::popcount(mask);
    const auto weight = LaurentPoly::mono(-w, (w % 2 != 0) ? -1 : 1);
    for (const auto& [t, c] : lin.terms) out.add(t, c * weight);
  }
  return out;
}

TLMorphism kauffman(const TangleWord& D, const std::vector<bool>& reversed) {
  const Orientation o = orient_word(D, reversed);
  return scale_terms(bracket(D),
                     LaurentPoly::mono(2 * o.x - o.y, (o.x % 2 != 0) ? -1 : 1));
}

TLMorphism euler_class(const BoundedComplex& C) {
  TLMorphism out;
  out.bottom = 2 * C.n;
  out.top = 2 * C.m;
  for (size_t i = 0; i < C.objects.size(); ++i) {
    const bool odd = (C.lo + static_cast<int>(i)) % 2 != 0;
    for (const auto& s : C.objects[i].summands)
      out.add(s.tangle, LaurentPoly::mono(s.shift, odd ? -1 : 1));
  }
  return out;
}

LaurentPoly jones_via_classes(const BoundedComplex& C) {
  if (C.m != 0 || C.n != 0)
    throw std::invalid_argument("jones_via_classes: complex is not closed");
  const auto e = euler_class(C);
  const auto it = e.terms.find(make_flat_tangle(0, 0, {}));
  return it == e.terms.end() ? LaurentPoly::zero() : it->second;
}

LaurentPoly jones_via_homology(const BoundedComplex& C) {
  LaurentPoly acc;
  for (const auto& [ij, g] : homology_Z(C).groups) {
    if (g.rank == 0) continue;
    acc += LaurentPoly::mono(ij.second, (ij.first % 2 != 0) ? -g.rank : g.rank);
  }
  return acc;
}

EquivalenceReport equivalent(const BoundedComplex& a, const BoundedComplex& b) {
  EquivalenceReport r;
  if (a.m != b.m || a.n != b.n) {
    r.detail = "boundary arities differ";
    return r;
  }
  if (complex_fingerprint(simplify(a, CoeffDomain::Q)) !=
      complex_fingerprint(simplify(b, CoeffDomain::Q))) {
    r.detail = "rational cores differ";
    return r;
  }
  if (closures(a) != closures(b)) {
    r.detail = "integral closure homology differs";
    return r;
  }
  r.equivalent_evidence = true;
  return r;
}

}  // namespace arcring
