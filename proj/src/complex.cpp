#include "arcring/complex.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <set>
#include <stdexcept>

#include "arcring/arrangement.hpp"
#include "arcring/snf.hpp"

namespace arcring {

namespace {

int popcount(uint64_t v) { return std::popcount(v); }

GeometricBimodule object_at(const BoundedComplex& C, int deg) {
  int idx = deg - C.lo;
  if (idx < 0 || idx >= static_cast<int>(C.objects.size())) return zero_bimodule(C.m, C.n);
  return C.objects[static_cast<size_t>(idx)];
}

BimoduleMorphism diff_at(const BoundedComplex& C, int deg) {
  int idx = deg - C.lo;
  if (idx < 0 || idx + 1 >= static_cast<int>(C.objects.size()))
    return zero_morphism(object_at(C, deg), object_at(C, deg + 1), 0);
  return C.diffs[static_cast<size_t>(idx)];
}

BimoduleMorphism map_at(const BoundedComplex& C, const BoundedComplex& D, const ChainMap& f,
                        int deg) {
  auto it = f.parts.find(deg);
  if (it == f.parts.end()) return zero_morphism(object_at(C, deg), object_at(D, deg), 0);
  return it->second;
}

bool morphism_shape_ok(const GeometricBimodule& src, const GeometricBimodule& tgt,
                       const BimoduleMorphism& f) {
  if (static_cast<int>(f.blocks.size()) != tgt.tops()) return false;
  for (int c = 0; c < tgt.tops(); ++c) {
    if (static_cast<int>(f.blocks[static_cast<size_t>(c)].size()) != tgt.bottoms()) return false;
    for (int b = 0; b < tgt.bottoms(); ++b) {
      const auto& blk = f.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
      if (blk.rows != tgt.comp_dim(c, b) || blk.cols != src.comp_dim(c, b)) return false;
    }
  }
  return true;
}

// closure of the crossing word under b below and the reflection of c above;
// interfaces marked so closure circles fingerprint like the cached flat ones
Arrangement cube_closure(const TangleWord& D, const Matching& b, const Matching& c,
                         const std::vector<int>& choice) {
  TangleWord w;
  w.bottom = 0;
  for (auto& s : matching_word(b)) w.slices.push_back(s);
  int base = static_cast<int>(w.slices.size());
  for (auto& s : D.slices) w.slices.push_back(s);
  int top = static_cast<int>(w.slices.size());
  for (auto& s : matching_reflected_word(c)) w.slices.push_back(s);
  auto arr = build_arrangement(w, choice);
  arr.marked_levels = {{base, 0}, {top, 1}};
  return arr;
}

// the basis state of a closure arrangement named by delooping bits u over
// the internal circles and cmask over the canonical closure circles
TensorVector cube_state(const ArrSnapshot& snap, const CircleMatch& match,
                        const GeometricBimodule::CompCache& cc, uint64_t u, uint64_t cmask) {
  auto pos = [&](int id) {
    return static_cast<int>(std::lower_bound(snap.circle_ids.begin(), snap.circle_ids.end(), id) -
                            snap.circle_ids.begin());
  };
  uint64_t full = 0;
  for (size_t p = 0; p < match.internal_ids.size(); ++p)
    if ((u >> p) & 1) full |= uint64_t{1} << pos(match.internal_ids[p]);
  for (auto& [wid, cid] : match.boundary_to_canonical) {
    int cp = static_cast<int>(std::lower_bound(cc.circles.begin(), cc.circles.end(), cid) -
                              cc.circles.begin());
    if ((cmask >> cp) & 1) full |= uint64_t{1} << pos(wid);
  }
  return make_basis_state(snap.circle_ids, full);
}

Matrix<long long> four_block(const Matrix<long long>& tl, const Matrix<long long>& tr,
                             const Matrix<long long>& bl, const Matrix<long long>& br) {
  Matrix<long long> out(tl.rows + bl.rows, tl.cols + tr.cols);
  auto put = [&](const Matrix<long long>& m, int r0, int c0) {
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) out.at(r0 + i, c0 + j) = m.at(i, j);
  };
  put(tl, 0, 0);
  put(tr, 0, tl.cols);
  put(bl, tl.rows, 0);
  put(br, tl.rows, tl.cols);
  return out;
}

}  // namespace

BoundedComplex complex_of(const GeometricBimodule& M) { return {M.m, M.n, 0, {M}, {}}; }

bool is_complex(const BoundedComplex& C) {
  if (C.objects.empty()) return C.diffs.empty();
  if (C.diffs.size() + 1 != C.objects.size()) return false;
  for (size_t i = 0; i < C.diffs.size(); ++i) {
    if (C.diffs[i].degree != 0) return false;
    if (!morphism_shape_ok(C.objects[i], C.objects[i + 1], C.diffs[i])) return false;
    if (!morphism_homogeneous(C.objects[i], C.objects[i + 1], C.diffs[i])) return false;
  }
  for (size_t i = 0; i + 1 < C.diffs.size(); ++i) {
    auto sq = compose_morphisms(C.diffs[i + 1], C.diffs[i]);
    for (auto& row : sq.blocks)
      for (auto& blk : row)
        if (!blk.is_zero()) return false;
  }
  return true;
}

bool is_zero_complex(const BoundedComplex& C) {
  for (auto& obj : C.objects)
    if (!obj.summands.empty()) return false;
  return true;
}

std::vector<std::tuple<int, FlatTangle, int>> complex_fingerprint(const BoundedComplex& C) {
  std::vector<std::tuple<int, FlatTangle, int>> out;
  for (size_t i = 0; i < C.objects.size(); ++i)
    for (auto& s : C.objects[i].summands)
      out.push_back({C.lo + static_cast<int>(i), s.tangle, s.shift});
  std::sort(out.begin(), out.end());
  return out;
}

int edge_sign(uint64_t mask, int site) {
  return popcount(mask & ((uint64_t{1} << site) - 1)) % 2 ? -1 : 1;
}

ResolutionCube build_resolution_cube(const TangleWord& D_in, const std::vector<bool>& reversed) {
  if (D_in.bottom % 2 || top_count(D_in) % 2)
    throw std::invalid_argument("build_resolution_cube: odd boundary arity");
  TangleWord D = D_in;
  // a sliceless open word leaves its strands without segments; pad it
  if (D.slices.empty() && D.bottom > 0) D.slices.push_back({SliceKind::Vert, 1});
  auto o = orient_word(D, reversed);
  ResolutionCube cube;
  cube.k = D.crossings();
  cube.x = o.x;
  cube.y = o.y;
  if (cube.k > 62) throw std::invalid_argument("build_resolution_cube: too many crossings");
  const uint64_t verts = uint64_t{1} << cube.k;

  for (uint64_t mask = 0; mask < verts; ++mask) {
    std::vector<int> choice(static_cast<size_t>(cube.k));
    for (int j = 0; j < cube.k; ++j) choice[static_cast<size_t>(j)] = (mask >> j) & 1;
    auto arr = build_arrangement(D, choice);
    cube.resolution.push_back(arrangement_flat(arr, snapshot(arr)));
    cube.vertex.push_back(
        shift_bimodule(build_bimodule(cube.resolution.back()), -popcount(mask)));
  }

  for (uint64_t mask = 0; mask < verts; ++mask) {
    const auto& src = cube.vertex[mask];
    const int k_src = cube.resolution[mask].circles;
    std::vector<int> choice(static_cast<size_t>(cube.k));
    for (int j = 0; j < cube.k; ++j) choice[static_cast<size_t>(j)] = (mask >> j) & 1;
    for (int site = 0; site < cube.k; ++site) {
      if ((mask >> site) & 1) continue;
      const uint64_t tmask = mask | (uint64_t{1} << site);
      const auto& tgt = cube.vertex[tmask];
      const int k_tgt = cube.resolution[tmask].circles;
      auto f = zero_morphism(src, tgt, 0);
      for (int c = 0; c < src.tops(); ++c)
        for (int b = 0; b < src.bottoms(); ++b) {
          auto arr = cube_closure(D, src.bottom_basis[static_cast<size_t>(b)],
                                  src.top_basis[static_cast<size_t>(c)], choice);
          auto snap = snapshot(arr);
          const auto& scc = src.cache[0][static_cast<size_t>(c)][static_cast<size_t>(b)];
          auto smatch = match_circles(arr, snap, scc);
          if (static_cast<int>(smatch.internal_ids.size()) != k_src)
            throw std::logic_error("smoothing circles out of step with the vertex");
          const int circ = static_cast<int>(scc.circles.size());
          auto& blk = f.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
          for (uint64_t u = 0; u < (uint64_t{1} << k_src); ++u)
            for (uint64_t cm = 0; cm < (uint64_t{1} << circ); ++cm) {
              SurgeryState st(arr, cube_state(snap, smatch, scc, u, cm));
              st.toggle_site(site);
              const auto& tcc = tgt.cache[0][static_cast<size_t>(c)][static_cast<size_t>(b)];
              auto tmatch = match_circles(st.arrangement(), st.snap(), tcc);
              if (static_cast<int>(tmatch.internal_ids.size()) != k_tgt)
                throw std::logic_error("saddle output circles out of step with the vertex");
              std::vector<long long> col(static_cast<size_t>(tgt.comp_dim(c, b)), 0);
              accumulate_output(tgt, c, b, st.vector(), tmatch, 0, 1, col);
              int j = src.summand_offset(static_cast<int>(u), c, b) + static_cast<int>(cm);
              for (int i = 0; i < blk.rows; ++i) blk.at(i, j) = col[static_cast<size_t>(i)];
            }
        }
      cube.edge[{mask, site}] = std::move(f);
    }
  }
  return cube;
}

BoundedComplex build_cube(const TangleWord& D, const std::vector<bool>& reversed) {
  auto cube = build_resolution_cube(D, reversed);
  const uint64_t verts = uint64_t{1} << cube.k;
  std::vector<std::vector<uint64_t>> layer(static_cast<size_t>(cube.k) + 1);
  for (uint64_t mask = 0; mask < verts; ++mask)
    layer[static_cast<size_t>(popcount(mask))].push_back(mask);

  BoundedComplex C;
  C.m = cube.vertex[0].m;
  C.n = cube.vertex[0].n;
  C.lo = 0;
  std::vector<std::map<uint64_t, int>> part_index(layer.size());
  for (size_t i = 0; i < layer.size(); ++i) {
    GeometricBimodule obj = zero_bimodule(C.m, C.n);
    for (size_t j = 0; j < layer[i].size(); ++j) {
      part_index[i][layer[i][j]] = static_cast<int>(j);
      obj = direct_sum(obj, cube.vertex[layer[i][j]]);
    }
    C.objects.push_back(std::move(obj));
  }
  // offset of one vertex inside its layer's direct sum
  auto offset_of = [&](size_t lay, uint64_t mask, int c, int b) {
    int off = 0;
    int idx = part_index[lay].at(mask);
    for (int j = 0; j < idx; ++j) off += cube.vertex[layer[lay][static_cast<size_t>(j)]].comp_dim(c, b);
    return off;
  };
  for (size_t i = 0; i + 1 < C.objects.size(); ++i) {
    auto d = zero_morphism(C.objects[i], C.objects[i + 1], 0);
    for (uint64_t mask : layer[i])
      for (int site = 0; site < cube.k; ++site) {
        if ((mask >> site) & 1) continue;
        const auto& f = cube.edge.at({mask, site});
        const int sign = edge_sign(mask, site);
        const uint64_t tmask = mask | (uint64_t{1} << site);
        for (int c = 0; c < C.objects[i].tops(); ++c)
          for (int b = 0; b < C.objects[i].bottoms(); ++b) {
            const auto& blk = f.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
            int r0 = offset_of(i + 1, tmask, c, b);
            int c0 = offset_of(i, mask, c, b);
            auto& dst = d.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
            for (int r = 0; r < blk.rows; ++r)
              for (int q = 0; q < blk.cols; ++q) dst.at(r0 + r, c0 + q) += sign * blk.at(r, q);
          }
      }
    C.diffs.push_back(std::move(d));
  }
  return shift_complex(C, cube.x, 2 * cube.x - cube.y);
}

BoundedComplex shift_complex(const BoundedComplex& C, int k, int j) {
  BoundedComplex out;
  out.m = C.m;
  out.n = C.n;
  out.lo = C.lo - k;
  for (auto& obj : C.objects) out.objects.push_back(shift_bimodule(obj, j));
  for (auto& d : C.diffs) out.diffs.push_back(k % 2 ? scale_morphism(d, -1) : d);
  return out;
}

ChainMap identity_chain_map(const BoundedComplex& C) {
  ChainMap f;
  for (size_t i = 0; i < C.objects.size(); ++i)
    f.parts[C.lo + static_cast<int>(i)] = identity_morphism(C.objects[i]);
  return f;
}

bool is_chain_map(const BoundedComplex& C, const BoundedComplex& D, const ChainMap& f) {
  if (C.m != D.m || C.n != D.n) return false;
  for (auto& [deg, part] : f.parts) {
    auto src = object_at(C, deg);
    auto tgt = object_at(D, deg);
    if (part.degree != 0 || !morphism_shape_ok(src, tgt, part)) return false;
    if (!morphism_homogeneous(src, tgt, part)) return false;
  }
  int lo = std::min(C.lo, D.lo) - 1;
  int hi = std::max(C.hi(), D.hi()) + 1;
  if (C.empty() && D.empty()) return true;
  for (int deg = lo; deg < hi; ++deg) {
    auto lhs = compose_morphisms(map_at(C, D, f, deg + 1), diff_at(C, deg));
    auto rhs = compose_morphisms(diff_at(D, deg), map_at(C, D, f, deg));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

BoundedComplex cone(const BoundedComplex& C, const BoundedComplex& D, const ChainMap& f) {
  if (C.m != D.m || C.n != D.n) throw std::invalid_argument("cone: boundary mismatch");
  if (!is_chain_map(C, D, f)) throw std::invalid_argument("cone: not a chain map");
  BoundedComplex out;
  out.m = C.m;
  out.n = C.n;
  if (C.empty() && D.empty()) return out;
  out.lo = std::min(C.lo - 1, D.lo);
  int hi = std::max(C.hi() - 1, D.hi());
  const auto shape = zero_bimodule(C.m, C.n);
  for (int i = out.lo; i <= hi; ++i)
    out.objects.push_back(direct_sum(object_at(C, i + 1), object_at(D, i)));
  for (int i = out.lo; i < hi; ++i) {
    auto dc = diff_at(C, i + 1);
    auto dd = diff_at(D, i);
    auto fp = map_at(C, D, f, i + 1);
    BimoduleMorphism d;
    d.degree = 0;
    d.blocks.resize(static_cast<size_t>(shape.tops()));
    for (int c = 0; c < shape.tops(); ++c) {
      auto& row = d.blocks[static_cast<size_t>(c)];
      for (int b = 0; b < shape.bottoms(); ++b) {
        const auto& tl = dc.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
        const auto& bl = fp.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
        const auto& br = dd.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
        row.push_back(four_block(mat_neg(tl), Matrix<long long>(tl.rows, br.cols), bl, br));
      }
    }
    out.diffs.push_back(std::move(d));
  }
  return out;
}

// ---- tensor product ----

BoundedComplex tensor_complexes(const BoundedComplex& Y, const BoundedComplex& X) {
  if (Y.n != X.m) throw std::invalid_argument("tensor_complexes: middle arity mismatch");
  BoundedComplex out;
  out.m = Y.m;
  out.n = X.n;
  if (Y.empty() || X.empty()) return out;
  const int P = static_cast<int>(Y.objects.size());
  const int Q = static_cast<int>(X.objects.size());
  std::vector<std::vector<TensorResult>> T(static_cast<size_t>(P));
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < Q; ++q)
      T[static_cast<size_t>(p)].push_back(tensor_over(Y.objects[static_cast<size_t>(p)],
                                                      X.objects[static_cast<size_t>(q)]));
  const int tops = T[0][0].result.tops();
  const int bottoms = T[0][0].result.bottoms();
  const int mids = static_cast<int>(Y.objects[0].bottom_basis.size());

  // integral right inverses of the witness surjections, built on demand
  std::map<std::tuple<int, int, int, int>, Matrix<BigInt>> rinv;
  auto witness_rinv = [&](int p, int q, int c, int b) -> const Matrix<BigInt>& {
    auto key = std::make_tuple(p, q, c, b);
    auto it = rinv.find(key);
    if (it == rinv.end())
      it = rinv.emplace(key, integral_right_inverse(mat_cast<BigInt>(
                                 T[static_cast<size_t>(p)][static_cast<size_t>(q)]
                                     .witness[static_cast<size_t>(c)][static_cast<size_t>(b)])))
               .first;
    return it->second;
  };

  // transport a stacked-level map through the witnesses on both sides
  auto transport = [&](int p, int q, int tp, int tq, const Matrix<BigInt>& stacked, int c,
                       int b) {
    const auto& psi_src = T[static_cast<size_t>(p)][static_cast<size_t>(q)]
                              .witness[static_cast<size_t>(c)][static_cast<size_t>(b)];
    const auto& psi_tgt = T[static_cast<size_t>(tp)][static_cast<size_t>(tq)]
                              .witness[static_cast<size_t>(c)][static_cast<size_t>(b)];
    auto lift = mat_mul(mat_cast<BigInt>(psi_tgt), stacked);
    auto induced = mat_mul(lift, witness_rinv(p, q, c, b));
    if (!(mat_mul(induced, mat_cast<BigInt>(psi_src)) == lift))
      throw std::logic_error("tensor transport is not well defined");
    Matrix<long long> small(induced.rows, induced.cols);
    for (size_t i = 0; i < induced.data.size(); ++i)
      small.data[i] = induced.data[i].convert_to<long long>();
    return small;
  };

  auto horizontal = [&](int p, int q, int c, int b) {
    const auto& yb = Y.objects[static_cast<size_t>(p)];
    const auto& yb1 = Y.objects[static_cast<size_t>(p) + 1];
    const auto& xb = X.objects[static_cast<size_t>(q)];
    auto src_off = T[static_cast<size_t>(p)][static_cast<size_t>(q)].middle_offsets(yb, xb, c, b);
    auto tgt_off =
        T[static_cast<size_t>(p) + 1][static_cast<size_t>(q)].middle_offsets(yb1, xb, c, b);
    int rows = 0, cols = 0;
    for (int d = 0; d < mids; ++d) {
      rows += yb1.comp_dim(c, d) * xb.comp_dim(d, b);
      cols += yb.comp_dim(c, d) * xb.comp_dim(d, b);
    }
    Matrix<BigInt> st(rows, cols);
    for (int d = 0; d < mids; ++d) {
      const auto& blk =
          Y.diffs[static_cast<size_t>(p)].blocks[static_cast<size_t>(c)][static_cast<size_t>(d)];
      const int dx = X.objects[static_cast<size_t>(q)].comp_dim(d, b);
      for (int yr = 0; yr < blk.rows; ++yr)
        for (int yc = 0; yc < blk.cols; ++yc) {
          if (blk.at(yr, yc) == 0) continue;
          for (int xi = 0; xi < dx; ++xi)
            st.at(tgt_off[static_cast<size_t>(d)] + yr * dx + xi,
                  src_off[static_cast<size_t>(d)] + yc * dx + xi) = blk.at(yr, yc);
        }
    }
    return transport(p, q, p + 1, q, st, c, b);
  };

  auto vertical = [&](int p, int q, int c, int b) {
    const auto& yb = Y.objects[static_cast<size_t>(p)];
    const auto& xb = X.objects[static_cast<size_t>(q)];
    const auto& xb1 = X.objects[static_cast<size_t>(q) + 1];
    auto src_off = T[static_cast<size_t>(p)][static_cast<size_t>(q)].middle_offsets(yb, xb, c, b);
    auto tgt_off =
        T[static_cast<size_t>(p)][static_cast<size_t>(q) + 1].middle_offsets(yb, xb1, c, b);
    int rows = 0, cols = 0;
    for (int d = 0; d < mids; ++d) {
      rows += yb.comp_dim(c, d) * xb1.comp_dim(d, b);
      cols += yb.comp_dim(c, d) * xb.comp_dim(d, b);
    }
    Matrix<BigInt> st(rows, cols);
    for (int d = 0; d < mids; ++d) {
      const auto& blk =
          X.diffs[static_cast<size_t>(q)].blocks[static_cast<size_t>(d)][static_cast<size_t>(b)];
      const int dy = yb.comp_dim(c, d);
      for (int yi = 0; yi < dy; ++yi)
        for (int xr = 0; xr < blk.rows; ++xr)
          for (int xc = 0; xc < blk.cols; ++xc) {
            if (blk.at(xr, xc) == 0) continue;
            st.at(tgt_off[static_cast<size_t>(d)] + yi * blk.rows + xr,
                  src_off[static_cast<size_t>(d)] + yi * blk.cols + xc) = blk.at(xr, xc);
          }
    }
    return transport(p, q, p, q + 1, st, c, b);
  };

  out.lo = Y.lo + X.lo;
  const int total = P + Q - 1;
  // layer (p, q) pairs by total degree, p ascending
  std::vector<std::vector<std::pair<int, int>>> layer(static_cast<size_t>(total));
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < Q; ++q) layer[static_cast<size_t>(p + q)].push_back({p, q});
  for (auto& lay : layer) {
    GeometricBimodule obj = zero_bimodule(out.m, out.n);
    for (auto& [p, q] : lay)
      obj = direct_sum(obj, T[static_cast<size_t>(p)][static_cast<size_t>(q)].result);
    out.objects.push_back(std::move(obj));
  }
  auto offset_of = [&](int lay, int p, int q, int c, int b) {
    int off = 0;
    for (auto& [pp, qq] : layer[static_cast<size_t>(lay)]) {
      if (pp == p && qq == q) break;
      off += T[static_cast<size_t>(pp)][static_cast<size_t>(qq)].result.comp_dim(c, b);
    }
    return off;
  };
  for (int i = 0; i + 1 < total; ++i) {
    auto d = zero_morphism(out.objects[static_cast<size_t>(i)],
                           out.objects[static_cast<size_t>(i) + 1], 0);
    for (auto& [p, q] : layer[static_cast<size_t>(i)])
      for (int c = 0; c < tops; ++c)
        for (int b = 0; b < bottoms; ++b) {
          auto& dst = d.blocks[static_cast<size_t>(c)][static_cast<size_t>(b)];
          int c0 = offset_of(i, p, q, c, b);
          if (p + 1 < P) {
            auto blk = horizontal(p, q, c, b);
            int r0 = offset_of(i + 1, p + 1, q, c, b);
            for (int r = 0; r < blk.rows; ++r)
              for (int s = 0; s < blk.cols; ++s) dst.at(r0 + r, c0 + s) += blk.at(r, s);
          }
          if (q + 1 < Q) {
            auto blk = vertical(p, q, c, b);
            int r0 = offset_of(i + 1, p, q + 1, c, b);
            int sign = (Y.lo + p) % 2 ? -1 : 1;
            for (int r = 0; r < blk.rows; ++r)
              for (int s = 0; s < blk.cols; ++s) dst.at(r0 + r, c0 + s) += sign * blk.at(r, s);
          }
        }
    out.diffs.push_back(std::move(d));
  }
  return out;
}

// ---- simplification ----

namespace {

struct DomainOps {
  CoeffDomain dom;
  long long p;

  BigRat norm(const BigRat& v) const {
    if (dom != CoeffDomain::Fp) return v;
    BigInt r = numerator(v) % p;
    if (r < 0) r += p;
    return BigRat(r);
  }
  bool is_zero(const BigRat& v) const { return norm(v) == 0; }
  BigRat scalar_inv(const BigRat& v) const {
    if (dom == CoeffDomain::Fp) {
      BigInt r = numerator(v) % p;
      if (r < 0) r += p;
      return BigRat(boost::multiprecision::powm(r, BigInt(p - 2), BigInt(p)));
    }
    return 1 / v;
  }
};

// Gauss-Jordan inverse over the domain; empty when singular there, and for Z
// when the rational inverse is not integral
std::optional<Matrix<BigRat>> dom_inverse(Matrix<BigRat> a, const DomainOps& ops) {
  const int n = a.rows;
  Matrix<BigRat> inv = Matrix<BigRat>::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i)
      if (!ops.is_zero(a.at(i, col))) {
        pivot = i;
        break;
      }
    if (pivot < 0) return std::nullopt;
    for (int j = 0; j < n; ++j) {
      std::swap(a.at(col, j), a.at(pivot, j));
      std::swap(inv.at(col, j), inv.at(pivot, j));
    }
    BigRat piv = ops.scalar_inv(a.at(col, col));
    for (int j = 0; j < n; ++j) {
      a.at(col, j) = ops.norm(a.at(col, j) * piv);
      inv.at(col, j) = ops.norm(inv.at(col, j) * piv);
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      BigRat f = a.at(i, col);
      if (ops.is_zero(f)) continue;
      for (int j = 0; j < n; ++j) {
        a.at(i, j) = ops.norm(a.at(i, j) - f * a.at(col, j));
        inv.at(i, j) = ops.norm(inv.at(i, j) - f * inv.at(col, j));
      }
    }
  }
  if (ops.dom == CoeffDomain::Z)
    for (auto& v : inv.data)
      if (denominator(v) != 1) return std::nullopt;
  return inv;
}

struct Working {
  std::vector<GeometricBimodule> obj;
  // diff[i][c][b]: obj[i] -> obj[i+1]
  std::vector<std::vector<std::vector<Matrix<BigRat>>>> diff;
};

Matrix<BigRat> take(const Matrix<BigRat>& m, const std::vector<int>& rows,
                    const std::vector<int>& cols) {
  Matrix<BigRat> out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      out.at(static_cast<int>(i), static_cast<int>(j)) =
          m.at(rows[i], cols[j]);
  return out;
}

std::vector<int> span(int from, int len) {
  std::vector<int> out(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) out[static_cast<size_t>(i)] = from + i;
  return out;
}

std::vector<int> complement(int total, int from, int len) {
  std::vector<int> out;
  for (int i = 0; i < total; ++i)
    if (i < from || i >= from + len) out.push_back(i);
  return out;
}

struct Candidate {
  int shift = 0;
  int general = 0;  // 0 when every block is +I or every block is -I
  int s = 0, t = 0;
  std::vector<std::vector<Matrix<BigRat>>> inverse;  // [c][b]
};

std::optional<Candidate> find_candidate(const Working& W, size_t i, const DomainOps& ops) {
  std::optional<Candidate> best;
  const auto& src = W.obj[i];
  const auto& tgt = W.obj[i + 1];
  for (int s = 0; s < static_cast<int>(src.summands.size()); ++s)
    for (int t = 0; t < static_cast<int>(tgt.summands.size()); ++t) {
      if (!(src.summands[static_cast<size_t>(s)] == tgt.summands[static_cast<size_t>(t)]))
        continue;
      Candidate cand{src.summands[static_cast<size_t>(s)].shift, 0, s, t, {}};
      bool ok = true;
      int uniform = 0;  // sign once a diagonal entry is seen, 0 before
      cand.inverse.assign(static_cast<size_t>(src.tops()), {});
      for (int c = 0; c < src.tops() && ok; ++c)
        for (int b = 0; b < src.bottoms(); ++b) {
          int dim = 1 << src.circle_count(cand.s, c, b);
          auto phi = take(W.diff[i][static_cast<size_t>(c)][static_cast<size_t>(b)],
                          span(tgt.summand_offset(cand.t, c, b), dim),
                          span(src.summand_offset(cand.s, c, b), dim));
          auto inv = dom_inverse(phi, ops);
          if (!inv) {
            ok = false;
            break;
          }
          for (int r = 0; r < dim; ++r)
            for (int q = 0; q < dim; ++q) {
              const BigRat& v = phi.at(r, q);
              if (r != q) {
                if (!(v == 0)) cand.general = 1;
              } else if (v == 1 && uniform >= 0) {
                uniform = 1;
              } else if (v == -1 && uniform <= 0) {
                uniform = -1;
              } else {
                cand.general = 1;
              }
            }
          cand.inverse[static_cast<size_t>(c)].push_back(std::move(*inv));
        }
      if (!ok) continue;
      if (!best || std::tie(cand.shift, cand.general, cand.s, cand.t) <
                       std::tie(best->shift, best->general, best->s, best->t))
        best = std::move(cand);
    }
  return best;
}

void erase_summand(GeometricBimodule& M, int s) {
  M.summands.erase(M.summands.begin() + s);
  M.cache.erase(M.cache.begin() + s);
}

void apply_cancellation(Working& W, size_t i, const Candidate& cand, const DomainOps& ops) {
  auto& src = W.obj[i];
  auto& tgt = W.obj[i + 1];
  for (int c = 0; c < src.tops(); ++c)
    for (int b = 0; b < src.bottoms(); ++b) {
      const int dim = 1 << src.circle_count(cand.s, c, b);
      const int soff = src.summand_offset(cand.s, c, b);
      const int toff = tgt.summand_offset(cand.t, c, b);
      auto& B = W.diff[i][static_cast<size_t>(c)][static_cast<size_t>(b)];
      auto rest_rows = complement(B.rows, toff, dim);
      auto rest_cols = complement(B.cols, soff, dim);
      auto delta = take(B, span(toff, dim), rest_cols);
      auto gamma = take(B, rest_rows, span(soff, dim));
      auto eps = take(B, rest_rows, rest_cols);
      auto upd = mat_mul(gamma, mat_mul(cand.inverse[static_cast<size_t>(c)][static_cast<size_t>(b)], delta));
      for (int r = 0; r < eps.rows; ++r)
        for (int q = 0; q < eps.cols; ++q)
          eps.at(r, q) = ops.norm(eps.at(r, q) - upd.at(r, q));
      B = std::move(eps);
      if (i > 0) {
        auto& A = W.diff[i - 1][static_cast<size_t>(c)][static_cast<size_t>(b)];
        A = take(A, complement(A.rows, soff, dim), span(0, A.cols));
      }
      if (i + 1 < W.diff.size()) {
        auto& Z = W.diff[i + 1][static_cast<size_t>(c)][static_cast<size_t>(b)];
        Z = take(Z, span(0, Z.rows), complement(Z.cols, toff, dim));
      }
    }
  erase_summand(src, cand.s);
  erase_summand(tgt, cand.t);
}

}  // namespace

BoundedComplex simplify(const BoundedComplex& C, CoeffDomain dom, long long p) {
  DomainOps ops{dom, dom == CoeffDomain::Fp ? p : 0};
  if (dom == CoeffDomain::Fp && p < 2) throw std::invalid_argument("simplify: need a prime");
  Working W;
  W.obj = C.objects;
  for (auto& d : C.diffs) {
    std::vector<std::vector<Matrix<BigRat>>> blocks;
    for (auto& row : d.blocks) {
      blocks.emplace_back();
      for (auto& blk : row) {
        Matrix<BigRat> m(blk.rows, blk.cols);
        for (size_t v = 0; v < blk.data.size(); ++v) m.data[v] = ops.norm(BigRat(blk.data[v]));
        blocks.back().push_back(std::move(m));
      }
    }
    W.diff.push_back(std::move(blocks));
  }

  size_t i = 0;
  while (i < W.diff.size()) {
    auto cand = find_candidate(W, i, ops);
    if (cand) {
      apply_cancellation(W, i, *cand, ops);
      i = i > 0 ? i - 1 : 0;
    } else {
      ++i;
    }
  }

  BoundedComplex out;
  out.m = C.m;
  out.n = C.n;
  out.lo = C.lo;
  out.objects = std::move(W.obj);
  for (auto& d : W.diff) {
    // a Q-core may pick up denominators; rescaling one degree is an iso there
    BigInt scale = 1;
    if (dom == CoeffDomain::Q)
      for (auto& row : d)
        for (auto& blk : row)
          for (auto& v : blk.data)
            scale = boost::multiprecision::lcm(scale, denominator(v));
    BimoduleMorphism m;
    m.degree = 0;
    for (auto& row : d) {
      m.blocks.emplace_back();
      for (auto& blk : row) {
        Matrix<long long> small(blk.rows, blk.cols);
        for (size_t v = 0; v < blk.data.size(); ++v) {
          BigRat scaled = blk.data[v] * BigRat(scale);
          if (denominator(scaled) != 1)
            throw std::logic_error("simplification left the integers");
          small.data[v] = numerator(scaled).convert_to<long long>();
        }
        m.blocks.back().push_back(std::move(small));
      }
    }
    out.diffs.push_back(std::move(m));
  }
  while (!out.objects.empty() && out.objects.back().summands.empty()) {
    out.objects.pop_back();
    if (!out.diffs.empty()) out.diffs.pop_back();
  }
  while (!out.objects.empty() && out.objects.front().summands.empty()) {
    out.objects.erase(out.objects.begin());
    if (!out.diffs.empty()) out.diffs.erase(out.diffs.begin());
    ++out.lo;
  }
  if (out.objects.empty()) {
    out.lo = 0;
    out.diffs.clear();
  }
  return out;
}

// ---- homology ----

namespace {

// basis degrees of one closure component, in basis order
std::vector<int> component_degrees(const GeometricBimodule& M, int c, int b) {
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(M.summands.size()); ++s)
    for (uint64_t mk = 0; mk < (uint64_t{1} << M.circle_count(s, c, b)); ++mk)
      out.push_back(M.basis_degree(s, c, b, mk));
  return out;
}

Matrix<BigInt> degree_block(const Matrix<long long>& blk, const std::vector<int>& tdeg,
                            const std::vector<int>& sdeg, int j) {
  std::vector<int> rows, cols;
  for (int r = 0; r < static_cast<int>(tdeg.size()); ++r)
    if (tdeg[static_cast<size_t>(r)] == j) rows.push_back(r);
  for (int q = 0; q < static_cast<int>(sdeg.size()); ++q)
    if (sdeg[static_cast<size_t>(q)] == j) cols.push_back(q);
  Matrix<BigInt> out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t q = 0; q < cols.size(); ++q)
      out.at(static_cast<int>(r), static_cast<int>(q)) = blk.at(rows[r], cols[q]);
  return out;
}

}  // namespace

HomologyTable closure_homology(const BoundedComplex& C, int c, int b) {
  HomologyTable table;
  if (C.objects.empty()) return table;
  const int len = static_cast<int>(C.objects.size());
  std::vector<std::vector<int>> degs(static_cast<size_t>(len));
  std::set<int> all;
  for (int i = 0; i < len; ++i) {
    degs[static_cast<size_t>(i)] = component_degrees(C.objects[static_cast<size_t>(i)], c, b);
    for (int d : degs[static_cast<size_t>(i)]) all.insert(d);
  }
  for (int j : all) {
    std::vector<SmithResult> snf(static_cast<size_t>(len - 1));
    for (int i = 0; i + 1 < len; ++i)
      snf[static_cast<size_t>(i)] = smith_normal_form(degree_block(
          C.diffs[static_cast<size_t>(i)].blocks[static_cast<size_t>(c)][static_cast<size_t>(b)],
          degs[static_cast<size_t>(i) + 1], degs[static_cast<size_t>(i)], j));
    for (int i = 0; i < len; ++i) {
      int dim = static_cast<int>(
          std::count(degs[static_cast<size_t>(i)].begin(), degs[static_cast<size_t>(i)].end(), j));
      int r_out = i + 1 < len ? snf[static_cast<size_t>(i)].rank : 0;
      int r_in = i > 0 ? snf[static_cast<size_t>(i) - 1].rank : 0;
      HomologyTable::Group g;
      g.rank = dim - r_out - r_in;
      if (i > 0)
        for (auto& f : snf[static_cast<size_t>(i) - 1].invariant_factors)
          if (f > 1) g.torsion.push_back(f.convert_to<long long>());
      if (g.rank != 0 || !g.torsion.empty()) table.groups[{C.lo + i, j}] = std::move(g);
    }
  }
  return table;
}

std::map<std::pair<int, int>, HomologyTable> closures(const BoundedComplex& C) {
  std::map<std::pair<int, int>, HomologyTable> out;
  auto shape = zero_bimodule(C.m, C.n);
  for (int c = 0; c < shape.tops(); ++c)
    for (int b = 0; b < shape.bottoms(); ++b) out[{c, b}] = closure_homology(C, c, b);
  return out;
}

HomologyTable homology_Z(const BoundedComplex& C) {
  if (C.m != 0 || C.n != 0) throw std::invalid_argument("homology_Z: open boundary");
  return closure_homology(C, 0, 0);
}

std::map<std::pair<int, int>, int> homology_field(const BoundedComplex& C, int c, int b,
                                                  long long p) {
  std::map<std::pair<int, int>, int> out;
  if (C.objects.empty()) return out;
  const int len = static_cast<int>(C.objects.size());
  std::vector<std::vector<int>> degs(static_cast<size_t>(len));
  std::set<int> all;
  for (int i = 0; i < len; ++i) {
    degs[static_cast<size_t>(i)] = component_degrees(C.objects[static_cast<size_t>(i)], c, b);
    for (int d : degs[static_cast<size_t>(i)]) all.insert(d);
  }
  auto field_rank = [&](const Matrix<BigInt>& m) {
    if (p == 0) return rank_of(m);
    Matrix<long long> small(m.rows, m.cols);
    for (size_t v = 0; v < m.data.size(); ++v)
      small.data[v] = (m.data[v] % p).convert_to<long long>();
    return rank_mod_p(small, p);
  };
  for (int j : all) {
    std::vector<int> ranks(static_cast<size_t>(len), 0);
    for (int i = 0; i + 1 < len; ++i)
      ranks[static_cast<size_t>(i)] = field_rank(degree_block(
          C.diffs[static_cast<size_t>(i)].blocks[static_cast<size_t>(c)][static_cast<size_t>(b)],
          degs[static_cast<size_t>(i) + 1], degs[static_cast<size_t>(i)], j));
    for (int i = 0; i < len; ++i) {
      int dim = static_cast<int>(
          std::count(degs[static_cast<size_t>(i)].begin(), degs[static_cast<size_t>(i)].end(), j));
      int h = dim - (i + 1 < len ? ranks[static_cast<size_t>(i)] : 0) -
              (i > 0 ? ranks[static_cast<size_t>(i) - 1] : 0);
      if (h != 0) out[{C.lo + i, j}] = h;
    }
  }
  return out;
}

}  // namespace arcring
