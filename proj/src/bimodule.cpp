#include "arcring/bimodule.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "arcring/arrangement.hpp"
#include "arcring/word.hpp"

namespace arcring {

namespace {

int popcount(uint64_t v) { return std::popcount(v); }

// closure word of a circle-free (m,n)-tangle under b below and the
// reflection of c above, with `prepends` synthetic circles at the bottom of
// the tangle block.  Marked levels: tag 0 at the bottom interface, tag 1 at
// the top one.  Fingerprints record (tag, position) pairs, so padded and
// unpadded closures of the same picture match.  When padded, a plain slice
// is inserted on each side of the tangle block so that every boundary point
// owns a private vertical segment for point-addressed surgery moves.
struct ClosureWord {
  TangleWord word;
  int n_slices_b = 0;      // b block [0, n)
  int tangle_base = 0;     // after prepends and any padding
  int tangle_top = 0;      // level of the top interface
  std::vector<int> prepend_slices;
  int bottom_pad = -1, top_pad = -1;  // padding slice indices, -1 if absent
};

ClosureWord closure_word(const FlatTangle& tangle, const Matching& b, const Matching& c,
                         int prepends = 0, bool padded = false) {
  ClosureWord out;
  out.word.bottom = 0;
  for (auto& s : matching_word(b)) out.word.slices.push_back(s);
  out.n_slices_b = b.n;
  for (int j = 0; j < prepends; ++j) {
    out.prepend_slices.push_back(static_cast<int>(out.word.slices.size()));
    out.word.slices.push_back({SliceKind::Cup, 1});
    out.word.slices.push_back({SliceKind::Cap, 1});
  }
  if (padded) {
    out.bottom_pad = static_cast<int>(out.word.slices.size());
    out.word.slices.push_back({SliceKind::Vert, 1});
  }
  out.tangle_base = static_cast<int>(out.word.slices.size());
  for (auto& s : flat_tangle_word(tangle)) out.word.slices.push_back(s);
  if (padded) {
    out.top_pad = static_cast<int>(out.word.slices.size());
    out.word.slices.push_back({SliceKind::Vert, 1});
  }
  out.tangle_top = static_cast<int>(out.word.slices.size());
  for (auto& s : matching_reflected_word(c)) out.word.slices.push_back(s);
  return out;
}

Arrangement closure_arrangement(const ClosureWord& cw) {
  auto arr = build_arrangement(cw.word);
  arr.marked_levels = {{cw.n_slices_b, 0}, {cw.tangle_top, 1}};
  return arr;
}

// newest active segment at a grid point; after a surgery this is the
// replacement segment, not a stale neighbor from construction time
int edge_at_point(const Arrangement& arr, int point) {
  for (int e = static_cast<int>(arr.edges.size()) - 1; e >= 0; --e)
    if (arr.edges[e].active && (arr.edges[e].a == point || arr.edges[e].b == point)) return e;
  throw std::logic_error("no active edge at boundary point");
}

}  // namespace

CircleMatch match_circles(const Arrangement& arr, const ArrSnapshot& snap,
                          const GeometricBimodule::CompCache& target) {
  CircleMatch out;
  for (auto& [id, fp] : fingerprints(arr, snap)) {
    if (fp.empty()) {
      out.internal_ids.push_back(id);
      continue;
    }
    auto it = target.fp_to_circle.find(fp);
    if (it == target.fp_to_circle.end())
      throw std::logic_error("surgery output circle has no canonical match");
    out.boundary_to_canonical[id] = it->second;
  }
  std::sort(out.internal_ids.begin(), out.internal_ids.end());
  return out;
}

void accumulate_output(const GeometricBimodule& tgt, int c, int b, const TensorVector& v,
                       const CircleMatch& match, int summand_base, long long scale_by,
                       std::vector<long long>& out) {
  const int internal_k = static_cast<int>(match.internal_ids.size());
  std::vector<int> internal_pos(internal_k);
  for (int j = 0; j < internal_k; ++j) internal_pos[j] = v.index_of(match.internal_ids[j]);
  // boundary circle: position in v -> position in the canonical order; the
  // summands of one refinement share their circle data
  const auto& circ = tgt.cache[summand_base][c][b].circles;
  std::vector<std::pair<int, int>> bpos;  // (pos in v, canonical pos)
  for (auto& [wid, cid] : match.boundary_to_canonical) {
    int cp = static_cast<int>(std::lower_bound(circ.begin(), circ.end(), cid) - circ.begin());
    bpos.push_back({v.index_of(wid), cp});
  }
  for (auto& [mask, coeff] : v.terms) {
    uint64_t u = 0;
    for (int j = 0; j < internal_k; ++j)
      if ((mask >> internal_pos[j]) & 1) u |= uint64_t{1} << j;
    uint64_t cmask = 0;
    for (auto& [pv, pc] : bpos)
      if ((mask >> pv) & 1) cmask |= uint64_t{1} << pc;
    int s = summand_base + static_cast<int>(u);
    int index = tgt.summand_offset(s, c, b) + static_cast<int>(cmask);
    out[static_cast<size_t>(index)] += coeff * scale_by;
  }
}

int GeometricBimodule::comp_dim(int c, int b) const {
  int d = 0;
  for (size_t s = 0; s < summands.size(); ++s) d += 1 << cache[s][c][b].circles.size();
  return d;
}

int GeometricBimodule::summand_offset(int s, int c, int b) const {
  int d = 0;
  for (int t = 0; t < s; ++t) d += 1 << cache[t][c][b].circles.size();
  return d;
}

int GeometricBimodule::basis_degree(int s, int c, int b, uint64_t mask) const {
  return labeling_degree(circle_count(s, c, b), mask, n + summands[s].shift);
}

std::map<int, int> GeometricBimodule::component_ranks(int c, int b) const {
  std::map<int, int> out;
  for (size_t s = 0; s < summands.size(); ++s) {
    int k = circle_count(static_cast<int>(s), c, b);
    for (uint64_t mk = 0; mk < (uint64_t{1} << k); ++mk)
      ++out[basis_degree(static_cast<int>(s), c, b, mk)];
  }
  return out;
}

std::vector<std::pair<FlatTangle, int>> GeometricBimodule::summand_data() const {
  std::vector<std::pair<FlatTangle, int>> out;
  for (auto& s : summands) out.push_back({s.tangle, s.shift});
  std::sort(out.begin(), out.end());
  return out;
}

GeometricBimodule build_bimodule(const FlatTangle& a) {
  if (a.bottom % 2 || a.top % 2)
    throw std::invalid_argument("build_bimodule: odd boundary arity");
  auto [bare, k] = remove_circles(a);
  GeometricBimodule M;
  M.m = a.top / 2;
  M.n = a.bottom / 2;
  M.top_basis = enumerate_matchings(M.m);
  M.bottom_basis = enumerate_matchings(M.n);
  for (uint64_t u = 0; u < (uint64_t{1} << k); ++u)
    M.summands.push_back({bare, 2 * popcount(u) - k});
  M.cache.resize(M.summands.size());
  for (size_t s = 0; s < M.summands.size(); ++s) {
    M.cache[s].assign(M.tops(), std::vector<GeometricBimodule::CompCache>(M.bottoms()));
    for (int c = 0; c < M.tops(); ++c)
      for (int b = 0; b < M.bottoms(); ++b) {
        auto cw = closure_word(M.summands[s].tangle, M.bottom_basis[b], M.top_basis[c]);
        auto arr = closure_arrangement(cw);
        auto snap = snapshot(arr);
        auto& cc = M.cache[s][c][b];
        cc.circles = snap.circle_ids;
        cc.edge_count = static_cast<int>(arr.edges.size());
        for (auto& [id, fp] : fingerprints(arr, snap)) cc.fp_to_circle[fp] = id;
      }
  }
  return M;
}

GeometricBimodule direct_sum(const GeometricBimodule& x, const GeometricBimodule& y) {
  if (x.m != y.m || x.n != y.n) throw std::invalid_argument("direct_sum: arity mismatch");
  GeometricBimodule out = x;
  for (size_t s = 0; s < y.summands.size(); ++s) {
    out.summands.push_back(y.summands[s]);
    out.cache.push_back(y.cache[s]);
  }
  return out;
}

GeometricBimodule shift_bimodule(const GeometricBimodule& x, int j) {
  GeometricBimodule out = x;
  for (auto& s : out.summands) s.shift += j;
  return out;
}

GeometricBimodule zero_bimodule(int m, int n) {
  GeometricBimodule M;
  M.m = m;
  M.n = n;
  M.top_basis = enumerate_matchings(m);
  M.bottom_basis = enumerate_matchings(n);
  return M;
}

bool BimoduleElement::is_zero() const {
  for (auto& [k, v] : comps)
    for (long long c : v)
      if (c != 0) return false;
  return true;
}

BimoduleElement bim_basis_element(const GeometricBimodule& M, int c, int b, int index) {
  BimoduleElement x;
  x.comps[{c, b}] = std::vector<long long>(M.comp_dim(c, b), 0);
  x.comps[{c, b}][static_cast<size_t>(index)] = 1;
  return x;
}

namespace {

// shared action engine: contracts a matching corridor between the closure of
// a bimodule component and a ring closure stacked above or below it
BimoduleElement act(const ArcRing& R, const RingElement& h, const GeometricBimodule& M,
                    const BimoduleElement& x, bool left) {
  BimoduleElement out;
  for (auto& [key, coords] : x.comps) {
    auto [c, b] = key;
    for (auto& [hkey, vh] : h.comps) {
      auto [d, e] = hkey;  // h lives in the (d,e) block of its ring
      if (left && e != c) continue;   // left action glues above the top matching
      if (!left && d != b) continue;  // right action glues below the bottom one
      int out_c = left ? d : c;
      int out_b = left ? b : e;
      auto& dst = out.comps
                      .try_emplace({out_c, out_b},
                                   std::vector<long long>(M.comp_dim(out_c, out_b), 0))
                      .first->second;
      for (size_t s = 0; s < M.summands.size(); ++s) {
        // the component slice of this summand as one tensor state
        int k = M.circle_count(static_cast<int>(s), c, b);
        int base = M.summand_offset(static_cast<int>(s), c, b);
        TensorVector vx;
        vx.circle_ids = M.cache[s][c][b].circles;
        for (uint64_t mk = 0; mk < (uint64_t{1} << k); ++mk) {
          long long cf = coords[static_cast<size_t>(base) + mk];
          if (cf != 0) vx.add_term(mk, cf);
        }
        if (vx.is_zero()) continue;

        const Matching& mid = left ? M.top_basis[c] : M.bottom_basis[b];
        const int n_bot = M.n, m_top = M.m;
        TangleWord w;
        w.bottom = 0;
        int corridor_caps_base = 0, corridor_cups_base = 0, tag0_level = 0, tag1_level = 0;
        int lift_offset = 0;
        TensorVector combined;
        auto tangle_word = flat_tangle_word(M.summands[s].tangle);
        const int L = static_cast<int>(tangle_word.size());
        if (left) {
          // [b, tangle, W(c), c, W(d)]
          for (auto& sl : matching_word(M.bottom_basis[b])) w.slices.push_back(sl);
          for (auto& sl : tangle_word) w.slices.push_back(sl);
          for (auto& sl : matching_reflected_word(mid)) w.slices.push_back(sl);
          for (auto& sl : matching_word(mid)) w.slices.push_back(sl);
          for (auto& sl : matching_reflected_word(R.matchings[d])) w.slices.push_back(sl);
          corridor_caps_base = n_bot + L;
          corridor_cups_base = n_bot + L + m_top;
          tag0_level = n_bot;
          tag1_level = n_bot + L;
          lift_offset = M.cache[s][c][b].edge_count;
          std::map<int, int> lift;
          for (int id : R.blocks[d][c].circles) lift[id] = id + lift_offset;
          combined = tensor_product(vx, relabel(vh, lift));
        } else {
          // [e, W(b), b, tangle, W(c)]
          for (auto& sl : matching_word(R.matchings[e])) w.slices.push_back(sl);
          for (auto& sl : matching_reflected_word(mid)) w.slices.push_back(sl);
          for (auto& sl : matching_word(mid)) w.slices.push_back(sl);
          for (auto& sl : tangle_word) w.slices.push_back(sl);
          for (auto& sl : matching_reflected_word(M.top_basis[c])) w.slices.push_back(sl);
          corridor_caps_base = n_bot;
          corridor_cups_base = 2 * n_bot;
          tag0_level = n_bot;
          tag1_level = 3 * n_bot + L;
          lift_offset = R.blocks[b][e].edge_count;
          std::map<int, int> lift;
          for (int id : M.cache[s][c][b].circles) lift[id] = id + lift_offset;
          combined = tensor_product(vh, relabel(vx, lift));
        }
        auto arr = build_arrangement(w);
        arr.marked_levels = {{tag0_level, 0}, {tag1_level, 1}};
        SurgeryState st(std::move(arr), std::move(combined));

        auto caps = matching_reflected_word_arcs(mid);
        auto cups = matching_word_arcs(mid);
        std::vector<int> arcs;
        for (auto& [sl, arc] : cups) arcs.push_back(arc);
        std::sort(arcs.begin(), arcs.end());
        for (int arc : arcs) {
          int cap_slice = -1, cup_slice = -1;
          for (size_t i = 0; i < caps.size(); ++i)
            if (caps[i].second == arc) cap_slice = corridor_caps_base + static_cast<int>(i);
          for (size_t i = 0; i < cups.size(); ++i)
            if (cups[i].second == arc) cup_slice = corridor_cups_base + static_cast<int>(i);
          st.contract(st.arrangement().slice_main_edge[cap_slice],
                      st.arrangement().slice_main_edge[cup_slice]);
        }

        auto match = match_circles(st.arrangement(), st.snap(), M.cache[s][out_c][out_b]);
        if (!match.internal_ids.empty())
          throw std::logic_error("ring action created an internal circle");
        accumulate_output(M, out_c, out_b, st.vector(), match, static_cast<int>(s), 1, dst);
      }
    }
  }
  for (auto it = out.comps.begin(); it != out.comps.end();) {
    bool zero = true;
    for (long long v : it->second)
      if (v != 0) zero = false;
    if (zero)
      it = out.comps.erase(it);
    else
      ++it;
  }
  return out;
}

}  // namespace

BimoduleElement act_left(const ArcRing& R, const RingElement& h, const GeometricBimodule& M,
                         const BimoduleElement& x) {
  if (R.n != M.m) throw std::invalid_argument("act_left: ring size mismatch");
  return act(R, h, M, x, true);
}

BimoduleElement act_right(const GeometricBimodule& M, const BimoduleElement& x,
                          const ArcRing& R, const RingElement& h) {
  if (R.n != M.n) throw std::invalid_argument("act_right: ring size mismatch");
  return act(R, h, M, x, false);
}

BimoduleMorphism zero_morphism(const GeometricBimodule& src, const GeometricBimodule& tgt,
                               int degree) {
  BimoduleMorphism f;
  f.degree = degree;
  f.blocks.assign(src.tops(), {});
  for (int c = 0; c < src.tops(); ++c)
    for (int b = 0; b < src.bottoms(); ++b)
      f.blocks[c].push_back(Matrix<long long>(tgt.comp_dim(c, b), src.comp_dim(c, b)));
  return f;
}

BimoduleMorphism identity_morphism(const GeometricBimodule& M) {
  BimoduleMorphism f = zero_morphism(M, M, 0);
  for (int c = 0; c < M.tops(); ++c)
    for (int b = 0; b < M.bottoms(); ++b)
      f.blocks[c][b] = Matrix<long long>::identity(M.comp_dim(c, b));
  return f;
}

BimoduleMorphism compose_morphisms(const BimoduleMorphism& g, const BimoduleMorphism& f) {
  BimoduleMorphism out;
  out.degree = f.degree + g.degree;
  out.blocks.resize(f.blocks.size());
  for (size_t c = 0; c < f.blocks.size(); ++c)
    for (size_t b = 0; b < f.blocks[c].size(); ++b)
      out.blocks[c].push_back(mat_mul(g.blocks[c][b], f.blocks[c][b]));
  return out;
}

BimoduleMorphism add_morphisms(const BimoduleMorphism& f, const BimoduleMorphism& g) {
  if (f.degree != g.degree) throw std::invalid_argument("adding morphisms of unlike degree");
  BimoduleMorphism out = f;
  for (size_t c = 0; c < f.blocks.size(); ++c)
    for (size_t b = 0; b < f.blocks[c].size(); ++b)
      out.blocks[c][b] = mat_add(f.blocks[c][b], g.blocks[c][b]);
  return out;
}

BimoduleMorphism scale_morphism(const BimoduleMorphism& f, long long c) {
  BimoduleMorphism out = f;
  for (auto& row : out.blocks)
    for (auto& m : row)
      for (auto& v : m.data) v *= c;
  return out;
}

BimoduleElement apply_morphism(const GeometricBimodule& src, const GeometricBimodule& tgt,
                               const BimoduleMorphism& f, const BimoduleElement& x) {
  BimoduleElement out;
  for (auto& [key, coords] : x.comps) {
    auto [c, b] = key;
    const auto& blk = f.blocks[c][b];
    if (blk.cols != src.comp_dim(c, b) || blk.rows != tgt.comp_dim(c, b))
      throw std::invalid_argument("apply_morphism: block shape mismatch");
    std::vector<long long> y(static_cast<size_t>(blk.rows), 0);
    for (int i = 0; i < blk.rows; ++i)
      for (int j = 0; j < blk.cols; ++j) y[i] += blk.at(i, j) * coords[j];
    bool zero = true;
    for (long long v : y)
      if (v != 0) zero = false;
    if (!zero) out.comps[{c, b}] = std::move(y);
  }
  return out;
}

bool morphism_homogeneous(const GeometricBimodule& src, const GeometricBimodule& tgt,
                          const BimoduleMorphism& f) {
  for (int c = 0; c < src.tops(); ++c)
    for (int b = 0; b < src.bottoms(); ++b) {
      const auto& blk = f.blocks[c][b];
      for (int i = 0; i < blk.rows; ++i)
        for (int j = 0; j < blk.cols; ++j) {
          if (blk.at(i, j) == 0) continue;
          // decode degrees from flat indices
          auto decode = [](const GeometricBimodule& M, int cc, int bb, int idx) {
            for (size_t s = 0; s < M.summands.size(); ++s) {
              int k = M.circle_count(static_cast<int>(s), cc, bb);
              if (idx < (1 << k))
                return M.basis_degree(static_cast<int>(s), cc, bb,
                                      static_cast<uint64_t>(idx));
              idx -= 1 << k;
            }
            throw std::logic_error("basis index out of range");
          };
          int ds = decode(src, c, b, j);
          int dt = decode(tgt, c, b, i);
          if (dt != ds + f.degree) return false;
        }
    }
  return true;
}

Cobordism cob_identity(const FlatTangle& a) { return {a, a, {}}; }

Cobordism cob_birth(const FlatTangle& a) {
  FlatTangle t = a;
  t.circles += 1;
  return {a, t, {{NamedMove::Birth, -1, -1}}};
}

Cobordism cob_death(const FlatTangle& a) {
  FlatTangle s = a;
  s.circles += 1;
  return {s, a, {{NamedMove::Death, -1, -1}}};
}

Cobordism cob_merge_circle(const FlatTangle& a, int p) {
  FlatTangle s = a;
  s.circles += 1;
  return {s, a, {{NamedMove::MergeCircle, p, -1}}};
}

Cobordism cob_split_off_circle(const FlatTangle& a, int p) {
  FlatTangle t = a;
  t.circles += 1;
  return {a, t, {{NamedMove::SplitOffCircle, p, -1}}};
}

Cobordism cob_saddle(const FlatTangle& a, int p, int q) {
  if (a.pair_[p] == q) {
    // the band pinches one strand against itself and frees a circle
    FlatTangle t = make_flat_tangle(a.bottom, a.top, a.pair_, a.circles + 1);
    return {a, t, {{NamedMove::Saddle, p, q}}};
  }
  std::vector<int> pr = a.pair_;
  int pp = pr[p], qq = pr[q];
  // reconnect p-q and partner-partner
  pr[p] = q;
  pr[q] = p;
  pr[pp] = qq;
  pr[qq] = pp;
  FlatTangle t = make_flat_tangle(a.bottom, a.top, pr, a.circles);
  return {a, t, {{NamedMove::Saddle, p, q}}};
}

CobordismMap cobordism_map(const Cobordism& S) {
  CobordismMap out;
  out.source = build_bimodule(S.source);
  out.target = build_bimodule(S.target);
  const GeometricBimodule& src = out.source;
  const GeometricBimodule& tgt = out.target;
  if (src.m != tgt.m || src.n != tgt.n)
    throw std::invalid_argument("cobordism_map: boundary mismatch");
  int saddle_like = 0, cap_like = 0;
  for (auto& mv : S.moves) {
    if (mv.kind == NamedMove::Birth || mv.kind == NamedMove::Death)
      ++cap_like;
    else
      ++saddle_like;
  }
  int degree = saddle_like - cap_like;
  BimoduleMorphism f = zero_morphism(src, tgt, degree);

  auto [src_bare, src_k] = remove_circles(S.source);
  const int tgt_k = remove_circles(S.target).second;
  const int n = src.n;
  for (int c = 0; c < src.tops(); ++c)
    for (int b = 0; b < src.bottoms(); ++b) {
      auto cw = closure_word(src_bare, src.bottom_basis[b], src.top_basis[c], src_k,
                             /*padded=*/true);
      auto base_arr = closure_arrangement(cw);

      // synthetic circle ids and the boundary-circle correspondence of the
      // prepended word against the canonical cache
      std::vector<int> synth;
      for (int sl : cw.prepend_slices) synth.push_back(base_arr.slice_main_edge[sl]);
      auto base_snap = snapshot(base_arr);
      const auto& canon = src.cache[0][c][b];  // circle data shared by all summands
      std::map<int, int> canon_to_word;
      for (auto& [id, fp] : fingerprints(base_arr, base_snap)) {
        if (fp.empty()) continue;
        auto it = canon.fp_to_circle.find(fp);
        if (it == canon.fp_to_circle.end())
          throw std::logic_error("cobordism_map: closure mismatch");
        canon_to_word[it->second] = id;
      }

      for (uint64_t u = 0; u < (uint64_t{1} << src_k); ++u) {
        int s = static_cast<int>(u);
        int k_circ = src.circle_count(s, c, b);
        for (uint64_t mask = 0; mask < (uint64_t{1} << k_circ); ++mask) {
          // basis state on the prepended word's circles
          TensorVector v;
          std::vector<int> ids;
          for (int j = 0; j < src_k; ++j) ids.push_back(synth[j]);
          for (int id : canon.circles) ids.push_back(canon_to_word[id]);
          std::sort(ids.begin(), ids.end());
          v.circle_ids = ids;
          uint64_t wmask = 0;
          for (int j = 0; j < src_k; ++j)
            if ((u >> j) & 1) wmask |= uint64_t{1} << v.index_of(synth[j]);
          for (int p = 0; p < k_circ; ++p)
            if ((mask >> p) & 1)
              wmask |= uint64_t{1} << v.index_of(canon_to_word[canon.circles[p]]);
          v.add_term(wmask, 1);

          SurgeryState st(base_arr, v);
          size_t consumed = 0;
          // boundary point -> the padding segment guarding it (or its live
          // replacement after earlier moves)
          auto locate = [&](int bp) {
            int level = bp < 2 * n ? cw.bottom_pad : cw.top_pad;
            int pos = bp < 2 * n ? bp + 1 : bp - 2 * n + 1;
            return edge_at_point(st.arrangement(), st.arrangement().point(level, pos));
          };
          for (auto& mv : S.moves) {
            switch (mv.kind) {
              case NamedMove::Birth:
                st.birth();
                break;
              case NamedMove::Death:
                if (consumed >= synth.size())
                  throw std::invalid_argument("cobordism_map: no circle left to cap off");
                st.death(synth[consumed++]);
                break;
              case NamedMove::MergeCircle: {
                if (consumed >= synth.size())
                  throw std::invalid_argument("cobordism_map: no circle left to merge");
                st.contract(locate(mv.p), synth[consumed++]);
                break;
              }
              case NamedMove::SplitOffCircle:
                st.split(locate(mv.p));
                break;
              case NamedMove::Saddle: {
                int e1 = locate(mv.p), e2 = locate(mv.q);
                // both feet on a single segment: the band pinches it
                if (e1 == e2)
                  st.split(e1);
                else
                  st.contract(e1, e2);
                break;
              }
            }
          }

          auto match = match_circles(st.arrangement(), st.snap(), tgt.cache[0][c][b]);
          if (static_cast<int>(match.internal_ids.size()) != tgt_k)
            throw std::logic_error("cobordism_map: wrong circle count after moves");
          int src_index = src.summand_offset(s, c, b) + static_cast<int>(mask);
          std::vector<long long> col(static_cast<size_t>(tgt.comp_dim(c, b)), 0);
          accumulate_output(tgt, c, b, st.vector(), match, 0, 1, col);
          for (size_t i = 0; i < col.size(); ++i)
            if (col[i] != 0) f.blocks[c][b].at(static_cast<int>(i), src_index) += col[i];
        }
      }
    }
  out.map = std::move(f);
  return out;
}

std::vector<int> TensorResult::middle_offsets(const GeometricBimodule& Y,
                                              const GeometricBimodule& X, int c,
                                              int b) const {
  std::vector<int> off;
  int acc = 0;
  for (int d = 0; d < Y.bottoms(); ++d) {
    off.push_back(acc);
    acc += Y.comp_dim(c, d) * X.comp_dim(d, b);
  }
  off.push_back(acc);
  return off;
}

TensorResult tensor_over(const GeometricBimodule& Y, const GeometricBimodule& X,
                         const std::vector<int>& saddle_order) {
  if (Y.n != X.m) throw std::invalid_argument("tensor_over: middle arity mismatch");
  TensorResult out;
  const int K = Y.m, N = X.n, M = X.m;

  // result: composed summand pairs, delooped, Y summand major
  struct Piece {
    int j, i;             // Y and X summand indices
    FlatTangle bare;      // composed circle-free tangle
    int circles;          // delooped count
    int base_summand;     // index of its first summand in the result
  };
  std::vector<Piece> pieces;
  GeometricBimodule R;
  R.m = K;
  R.n = N;
  R.top_basis = enumerate_matchings(K);
  R.bottom_basis = enumerate_matchings(N);
  for (size_t j = 0; j < Y.summands.size(); ++j)
    for (size_t i = 0; i < X.summands.size(); ++i) {
      auto composed = compose(Y.summands[j].tangle, X.summands[i].tangle);
      auto [bare, r] = remove_circles(composed);
      Piece p{static_cast<int>(j), static_cast<int>(i), bare, r,
              static_cast<int>(R.summands.size())};
      int base_shift = Y.summands[j].shift + X.summands[i].shift;
      for (uint64_t u = 0; u < (uint64_t{1} << r); ++u)
        R.summands.push_back({bare, base_shift + 2 * popcount(u) - r});
      pieces.push_back(p);
    }
  R.cache.resize(R.summands.size());
  for (size_t s = 0; s < R.summands.size(); ++s) {
    R.cache[s].assign(R.tops(), std::vector<GeometricBimodule::CompCache>(R.bottoms()));
    for (int c = 0; c < R.tops(); ++c)
      for (int b = 0; b < R.bottoms(); ++b) {
        auto cw = closure_word(R.summands[s].tangle, R.bottom_basis[b], R.top_basis[c]);
        auto arr = closure_arrangement(cw);
        auto snap = snapshot(arr);
        auto& cc = R.cache[s][c][b];
        cc.circles = snap.circle_ids;
        cc.edge_count = static_cast<int>(arr.edges.size());
        for (auto& [id, fp] : fingerprints(arr, snap)) cc.fp_to_circle[fp] = id;
      }
  }

  // witness: surgery on [b, X-tangle, W(d), d, Y-tangle, W(c)]
  out.witness.assign(R.tops(), {});
  for (int c = 0; c < R.tops(); ++c)
    for (int b = 0; b < R.bottoms(); ++b) {
      int cols = 0;
      for (int d = 0; d < Y.bottoms(); ++d) cols += Y.comp_dim(c, d) * X.comp_dim(d, b);
      Matrix<long long> w(R.comp_dim(c, b), cols);
      int col_base = 0;
      for (int d = 0; d < Y.bottoms(); ++d) {
        const Matching& mid = Y.bottom_basis[d];
        for (auto& piece : pieces) {
          int j = piece.j, i = piece.i;
          auto xw = flat_tangle_word(X.summands[i].tangle);
          auto yw = flat_tangle_word(Y.summands[j].tangle);
          const int Lx = static_cast<int>(xw.size());
          TangleWord ww;
          ww.bottom = 0;
          for (auto& sl : matching_word(X.bottom_basis[b])) ww.slices.push_back(sl);
          for (auto& sl : xw) ww.slices.push_back(sl);
          for (auto& sl : matching_reflected_word(mid)) ww.slices.push_back(sl);
          for (auto& sl : matching_word(mid)) ww.slices.push_back(sl);
          for (auto& sl : yw) ww.slices.push_back(sl);
          for (auto& sl : matching_reflected_word(Y.top_basis[c])) ww.slices.push_back(sl);
          auto arr = build_arrangement(ww);
          arr.marked_levels = {{N, 0},
                               {N + Lx + 2 * M + static_cast<int>(yw.size()), 1}};
          const int lift = X.cache[i][d][b].edge_count;

          auto caps = matching_reflected_word_arcs(mid);
          auto cups = matching_word_arcs(mid);
          std::vector<int> arcs;
          for (auto& [sl, arc] : cups) arcs.push_back(arc);
          std::sort(arcs.begin(), arcs.end());
          if (!saddle_order.empty()) {
            std::vector<int> perm;
            for (int t : saddle_order) perm.push_back(arcs[t]);
            arcs = perm;
          }

          for (int yidx = 0; yidx < Y.comp_dim(c, d); ++yidx)
            for (int xidx = 0; xidx < X.comp_dim(d, b); ++xidx) {
              // decode (summand, mask) pairs; skip foreign summands
              int yoff = Y.summand_offset(j, c, d);
              int xoff = X.summand_offset(i, d, b);
              int yk = Y.circle_count(j, c, d), xk = X.circle_count(i, d, b);
              if (yidx < yoff || yidx >= yoff + (1 << yk)) continue;
              if (xidx < xoff || xidx >= xoff + (1 << xk)) continue;
              uint64_t ymask = static_cast<uint64_t>(yidx - yoff);
              uint64_t xmask = static_cast<uint64_t>(xidx - xoff);
              auto vx = make_basis_state(X.cache[i][d][b].circles, xmask);
              std::map<int, int> lm;
              for (int id : Y.cache[j][c][d].circles) lm[id] = id + lift;
              auto vy = relabel(make_basis_state(Y.cache[j][c][d].circles, ymask), lm);
              SurgeryState st(arr, tensor_product(vx, vy));
              for (int arc : arcs) {
                int cap_slice = -1, cup_slice = -1;
                for (size_t t = 0; t < caps.size(); ++t)
                  if (caps[t].second == arc)
                    cap_slice = N + Lx + static_cast<int>(t);
                for (size_t t = 0; t < cups.size(); ++t)
                  if (cups[t].second == arc)
                    cup_slice = N + Lx + M + static_cast<int>(t);
                st.contract(st.arrangement().slice_main_edge[cap_slice],
                            st.arrangement().slice_main_edge[cup_slice]);
              }
              auto match =
                  match_circles(st.arrangement(), st.snap(), R.cache[piece.base_summand][c][b]);
              if (static_cast<int>(match.internal_ids.size()) != piece.circles)
                throw std::logic_error("tensor_over: circle count drifted");
              std::vector<long long> col(static_cast<size_t>(R.comp_dim(c, b)), 0);
              accumulate_output(R, c, b, st.vector(), match, piece.base_summand, 1, col);
              int column = col_base + yidx * X.comp_dim(d, b) + xidx;
              for (size_t t = 0; t < col.size(); ++t)
                if (col[t] != 0) w.at(static_cast<int>(t), column) += col[t];
            }
        }
        col_base += Y.comp_dim(c, d) * X.comp_dim(d, b);
      }
      out.witness[c].push_back(std::move(w));
    }
  out.result = std::move(R);
  return out;
}

}  // namespace arcring
