#include "arcring/word.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace arcring {

namespace {

// Per-slice widths and position validation.
int slice_out_width(const Slice& s, int w) {
  switch (s.kind) {
    case SliceKind::X:
    case SliceKind::XBar:
      if (s.pos < 1 || s.pos > w - 1) throw std::invalid_argument("crossing position out of range");
      return w;
    case SliceKind::Cap:
      if (s.pos < 1 || s.pos > w - 1) throw std::invalid_argument("cap position out of range");
      return w - 2;
    case SliceKind::Cup:
      if (s.pos < 1 || s.pos > w + 1) throw std::invalid_argument("cup position out of range");
      return w + 2;
    case SliceKind::Vert:
      return w;
  }
  throw std::logic_error("unreachable");
}

// Diagram graph of a word: points at every level, segments between them.
// Crossings connect through (bottom-left to top-right and bottom-right to
// top-left); this is the strand-level connectivity used for components and
// orientations.
struct WordGraph {
  struct Edge {
    int a, b;       // tail, head in construction order
    int slice;      // -1 for none
    enum Kind { VertSeg, CupSeg, CapSeg, CrossP, CrossQ } kind;
  };
  std::vector<int> level_base;  // point id of position 1 at each level
  std::vector<int> widths;
  std::vector<Edge> edges;
  int n_points = 0;

  int point(int level, int pos1) const { return level_base[level] + pos1 - 1; }
};

WordGraph build_graph(const TangleWord& w_in) {
  TangleWord w = w_in;
  // a sliceless word still has strands; give them one segment each
  if (w.slices.empty() && w.bottom > 0) w.slices = {{SliceKind::Vert, 1}};
  WordGraph g;
  g.widths = strand_levels(w);
  g.level_base.resize(g.widths.size());
  int acc = 0;
  for (size_t l = 0; l < g.widths.size(); ++l) {
    g.level_base[l] = acc;
    acc += g.widths[l];
  }
  g.n_points = acc;
  for (size_t si = 0; si < w.slices.size(); ++si) {
    const Slice& s = w.slices[si];
    int l = static_cast<int>(si);
    int wl = g.widths[l];
    int i = s.pos;
    auto vert = [&](int jb, int jt) {
      g.edges.push_back({g.point(l, jb), g.point(l + 1, jt), l, WordGraph::Edge::VertSeg});
    };
    switch (s.kind) {
      case SliceKind::Vert:
        for (int j = 1; j <= wl; ++j) vert(j, j);
        break;
      case SliceKind::X:
      case SliceKind::XBar:
        for (int j = 1; j < i; ++j) vert(j, j);
        g.edges.push_back({g.point(l, i), g.point(l + 1, i + 1), l, WordGraph::Edge::CrossP});
        g.edges.push_back({g.point(l, i + 1), g.point(l + 1, i), l, WordGraph::Edge::CrossQ});
        for (int j = i + 2; j <= wl; ++j) vert(j, j);
        break;
      case SliceKind::Cap:
        for (int j = 1; j < i; ++j) vert(j, j);
        g.edges.push_back({g.point(l, i), g.point(l, i + 1), l, WordGraph::Edge::CapSeg});
        for (int j = i + 2; j <= wl; ++j) vert(j, j - 2);
        break;
      case SliceKind::Cup:
        for (int j = 1; j < i; ++j) vert(j, j);
        g.edges.push_back({g.point(l + 1, i), g.point(l + 1, i + 1), l, WordGraph::Edge::CupSeg});
        for (int j = i; j <= wl; ++j) vert(j, j + 2);
        break;
    }
  }
  return g;
}

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) {
    for (int i = 0; i < n; ++i) up[i] = i;
  }
  int find(int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void unite(int a, int b) { up[find(a)] = find(b); }
};

}  // namespace

int TangleWord::crossings() const {
  int k = 0;
  for (auto& s : slices)
    if (s.kind == SliceKind::X || s.kind == SliceKind::XBar) ++k;
  return k;
}

std::vector<int> strand_levels(const TangleWord& w) {
  if (w.bottom < 0) throw std::invalid_argument("negative bottom arity");
  std::vector<int> out{w.bottom};
  int cur = w.bottom;
  for (auto& s : w.slices) {
    cur = slice_out_width(s, cur);
    out.push_back(cur);
  }
  return out;
}

int top_count(const TangleWord& w) { return strand_levels(w).back(); }

FlatTangle word_tangle_flat(const TangleWord& w) {
  if (w.crossings() != 0)
    throw std::invalid_argument("word_tangle_flat: word has crossings");
  FlatTangle acc = vertical_tangle(w.bottom);
  int cur = w.bottom;
  for (auto& s : w.slices) {
    int next = slice_out_width(s, cur);
    FlatTangle st;
    if (s.kind == SliceKind::Vert) {
      st = vertical_tangle(cur);
    } else if (s.kind == SliceKind::Cap) {
      std::vector<int> pair(cur + next, -1);
      int i0 = s.pos - 1;
      pair[i0] = i0 + 1;
      pair[i0 + 1] = i0;
      for (int j = 0, t = 0; j < cur; ++j) {
        if (j == i0 || j == i0 + 1) continue;
        pair[j] = cur + t;
        pair[cur + t] = j;
        ++t;
      }
      st = FlatTangle{cur, next, pair, 0};
    } else {  // Cup
      std::vector<int> pair(cur + next, -1);
      int i0 = s.pos - 1;
      pair[cur + i0] = cur + i0 + 1;
      pair[cur + i0 + 1] = cur + i0;
      for (int j = 0, t = 0; j < cur; ++j, ++t) {
        if (t == i0) t += 2;
        pair[j] = cur + t;
        pair[cur + t] = j;
      }
      st = FlatTangle{cur, next, pair, 0};
    }
    acc = compose(st, acc);
    cur = next;
  }
  return acc;
}

WordComponents word_components(const TangleWord& w) {
  WordGraph g = build_graph(w);
  UnionFind uf(g.n_points);
  for (auto& e : g.edges) uf.unite(e.a, e.b);

  int nb = g.widths.front(), nt = g.widths.back();
  std::vector<int> bpts;
  for (int j = 1; j <= nb; ++j) bpts.push_back(g.point(0, j));
  for (int j = 1; j <= nt; ++j) bpts.push_back(g.point(static_cast<int>(g.widths.size()) - 1, j));

  // arcs first, by smallest boundary point; then closed by smallest point id
  std::vector<int> comp_of_root(g.n_points, -1);
  WordComponents out;
  out.boundary_component.resize(bpts.size());
  for (size_t i = 0; i < bpts.size(); ++i) {
    int r = uf.find(bpts[i]);
    if (comp_of_root[r] < 0) {
      comp_of_root[r] = out.count++;
      out.is_closed.push_back(false);
    }
    out.boundary_component[i] = comp_of_root[r];
  }
  for (int p = 0; p < g.n_points; ++p) {
    int r = uf.find(p);
    if (comp_of_root[r] < 0) {
      comp_of_root[r] = out.count++;
      out.is_closed.push_back(true);
    }
  }
  return out;
}

Orientation orient_word(const TangleWord& w, const std::vector<bool>& reversed) {
  WordGraph g = build_graph(w);
  UnionFind uf(g.n_points);
  for (auto& e : g.edges) uf.unite(e.a, e.b);

  // component indexing consistent with word_components
  WordComponents comps = word_components(w);
  int nb = g.widths.front(), nt = g.widths.back();
  std::vector<int> comp_of_root(g.n_points, -1);
  {
    std::vector<int> bpts;
    for (int j = 1; j <= nb; ++j) bpts.push_back(g.point(0, j));
    for (int j = 1; j <= nt; ++j)
      bpts.push_back(g.point(static_cast<int>(g.widths.size()) - 1, j));
    int next = 0;
    for (size_t i = 0; i < bpts.size(); ++i) {
      int r = uf.find(bpts[i]);
      if (comp_of_root[r] < 0) comp_of_root[r] = next++;
    }
    for (int p = 0; p < g.n_points; ++p) {
      int r = uf.find(p);
      if (comp_of_root[r] < 0) comp_of_root[r] = next++;
    }
  }

  if (!reversed.empty() && static_cast<int>(reversed.size()) != comps.count)
    throw std::invalid_argument("orient_word: reversal vector size mismatch");

  // incidences
  std::vector<std::vector<std::pair<int, int>>> inc(g.n_points);  // (edge, 0=tail 1=head)
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    inc[g.edges[ei].a].emplace_back(static_cast<int>(ei), 0);
    inc[g.edges[ei].b].emplace_back(static_cast<int>(ei), 1);
  }

  // default traversal: lowest-index edge of each component goes tail -> head
  std::vector<int> edir(g.edges.size(), 0);  // +1 tail->head, -1 head->tail
  std::vector<int> comp_seed(comps.count, -1);
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    int c = comp_of_root[uf.find(g.edges[ei].a)];
    if (comp_seed[c] < 0) comp_seed[c] = static_cast<int>(ei);
  }
  for (int c = 0; c < comps.count; ++c) {
    if (comp_seed[c] < 0) continue;
    edir[comp_seed[c]] = 1;
    // walk in both directions from the seed edge
    std::vector<int> stack{comp_seed[c]};
    while (!stack.empty()) {
      int ei = stack.back();
      stack.pop_back();
      const auto& e = g.edges[ei];
      // the point the strand leaves from, and the point it enters
      int head = edir[ei] > 0 ? e.b : e.a;
      int tail = edir[ei] > 0 ? e.a : e.b;
      for (int side = 0; side < 2; ++side) {
        int p = side == 0 ? head : tail;
        for (auto& [oi, at] : inc[p]) {
          if (oi == ei || edir[oi] != 0) continue;
          // leaving `head` means the next edge starts at p; entering `tail`
          // means the previous edge ends at p.
          int want;
          if (side == 0)
            want = at == 0 ? 1 : -1;
          else
            want = at == 1 ? 1 : -1;
          edir[oi] = want;
          stack.push_back(oi);
        }
      }
    }
  }

  // boundary marks induced by a traversal
  auto marks_of = [&](const std::vector<int>& dirs) {
    std::vector<int> mk(nb + nt, 0);
    int top_level = static_cast<int>(g.widths.size()) - 1;
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
      const auto& e = g.edges[ei];
      for (int side = 0; side < 2; ++side) {
        int p = side == 0 ? e.a : e.b;
        if (inc[p].size() != 1) continue;  // interior point
        bool outgoing = (side == 0) == (dirs[ei] > 0);
        // bottom boundary points are the first nb ids; top the last nt
        bool is_bottom = p < nb;
        int idx = is_bottom ? p : nb + (p - g.level_base[top_level]);
        // upward near the point: for bottom, strand leaving upward = outgoing;
        // for top, strand arriving upward = incoming.
        int m = is_bottom ? (outgoing ? 1 : -1) : (outgoing ? -1 : 1);
        mk[idx] = m;
      }
    }
    return mk;
  };

  std::vector<int> dir(comps.count, 1);
  std::vector<int> base_marks = marks_of(edir);

  if (!w.marks.empty()) {
    if (static_cast<int>(w.marks.size()) != nb + nt)
      throw std::invalid_argument("orientation marks: wrong count");
    // each arc's requested marks must match one traversal of it
    for (int bp = 0; bp < nb + nt; ++bp) {
      int c = comps.boundary_component[bp];
      int want = w.marks[bp];
      if (want != 1 && want != -1) throw std::invalid_argument("orientation marks must be +-1");
      int have = base_marks[bp];
      int need = want == have ? 1 : -1;
      if (dir[c] == 1 && need == -1) dir[c] = -1;
    }
    // consistency pass
    for (int bp = 0; bp < nb + nt; ++bp) {
      int c = comps.boundary_component[bp];
      if (base_marks[bp] * dir[c] != w.marks[bp])
        throw std::invalid_argument("orientation marks are inconsistent along a strand");
    }
  }
  if (!reversed.empty())
    for (int c = 0; c < comps.count; ++c)
      if (reversed[c]) dir[c] = -dir[c];

  // final edge directions and crossing signs
  std::vector<int> fdir(g.edges.size());
  for (size_t ei = 0; ei < g.edges.size(); ++ei)
    fdir[ei] = edir[ei] * dir[comp_of_root[uf.find(g.edges[ei].a)]];

  Orientation out;
  out.direction = dir;
  out.marks = marks_of(fdir);
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    const auto& e = g.edges[ei];
    if (e.kind != WordGraph::Edge::CrossP) continue;
    const auto& eq = g.edges[ei + 1];  // CrossQ is built right after CrossP
    const Slice& s = w.slices[e.slice];
    // direction vectors: P runs bottom-left to top-right, Q bottom-right to
    // top-left, when traversed tail to head.
    int px = fdir[ei], py = fdir[ei];        // P: (+1,+1) or (-1,-1)
    int qx = -fdir[ei + 1], qy = fdir[ei + 1];  // Q: (-1,+1) or (+1,-1)
    long long det;
    if (s.kind == SliceKind::X)
      det = static_cast<long long>(px) * qy - static_cast<long long>(py) * qx;
    else
      det = static_cast<long long>(qx) * py - static_cast<long long>(qy) * px;
    if (det > 0)
      ++out.y;
    else
      ++out.x;
    (void)eq;
  }
  return out;
}

namespace {

// Peel innermost adjacent pairs off the full point list; yields for each
// step the 1-based slot among the remaining points and the pair's smaller
// endpoint.
std::vector<std::pair<int, int>> peel_pairs(const Matching& m, const char* who) {
  std::vector<int> cur(2 * m.n);
  for (int i = 0; i < 2 * m.n; ++i) cur[i] = i;
  std::vector<std::pair<int, int>> out;
  while (!cur.empty()) {
    int idx = -1;
    for (size_t i = 0; i + 1 < cur.size(); ++i)
      if (m.pair_[cur[i]] == cur[i + 1]) {
        idx = static_cast<int>(i);
        break;
      }
    if (idx < 0) throw std::logic_error(std::string(who) + ": no adjacent pair found");
    out.push_back({idx + 1, cur[idx]});
    cur.erase(cur.begin() + idx, cur.begin() + idx + 2);
  }
  return out;
}

}  // namespace

std::vector<std::pair<Slice, int>> matching_word_arcs(const Matching& m) {
  auto steps = peel_pairs(m, "matching_word");
  std::vector<std::pair<Slice, int>> out;
  // cups build the matching from the top peel downward
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    out.push_back({{SliceKind::Cup, it->first}, it->second});
  return out;
}

std::vector<std::pair<Slice, int>> matching_reflected_word_arcs(const Matching& m) {
  auto steps = peel_pairs(m, "matching_reflected_word");
  std::vector<std::pair<Slice, int>> out;
  for (auto& s : steps) out.push_back({{SliceKind::Cap, s.first}, s.second});
  return out;
}

std::vector<Slice> matching_word(const Matching& m) {
  std::vector<Slice> out;
  for (auto& [s, arc] : matching_word_arcs(m)) out.push_back(s);
  return out;
}

std::vector<Slice> matching_reflected_word(const Matching& m) {
  std::vector<Slice> out;
  for (auto& [s, arc] : matching_reflected_word_arcs(m)) out.push_back(s);
  return out;
}

std::vector<Slice> flat_tangle_word(const FlatTangle& t) {
  if (t.circles != 0) throw std::invalid_argument("flat_tangle_word: tangle has free circles");
  std::vector<Slice> out;
  // caps between bottom-bottom pairs, innermost first
  std::vector<int> cur(t.bottom);
  for (int i = 0; i < t.bottom; ++i) cur[i] = i;
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i + 1 < cur.size(); ++i)
      if (t.pair_[cur[i]] == cur[i + 1]) {
        out.push_back({SliceKind::Cap, static_cast<int>(i) + 1});
        cur.erase(cur.begin() + i, cur.begin() + i + 2);
        progress = true;
        break;
      }
  }
  // what remains must be through strands, order preserved
  for (size_t i = 0; i < cur.size(); ++i) {
    if (t.pair_[cur[i]] < t.bottom)
      throw std::invalid_argument("flat_tangle_word: pairing admits no planar word");
  }
  for (size_t i = 0; i + 1 < cur.size(); ++i)
    if (t.pair_[cur[i]] >= t.pair_[cur[i + 1]])
      throw std::logic_error("flat_tangle_word: through strands out of order");

  // cups for top-top pairs: peel adjacent pairs off the full top line
  struct TopPt {
    int point;
    bool through;
  };
  std::vector<TopPt> top(t.top);
  for (int j = 0; j < t.top; ++j)
    top[j] = {t.bottom + j, t.pair_[t.bottom + j] < t.bottom};
  std::vector<int> removals;
  progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i + 1 < top.size(); ++i) {
      if (top[i].through || top[i + 1].through) continue;
      if (t.pair_[top[i].point] != top[i + 1].point) continue;
      removals.push_back(static_cast<int>(i) + 1);
      top.erase(top.begin() + i, top.begin() + i + 2);
      progress = true;
      break;
    }
  }
  if (top.size() != cur.size())
    throw std::invalid_argument("flat_tangle_word: pairing admits no planar word");
  for (auto it = removals.rbegin(); it != removals.rend(); ++it)
    out.push_back({SliceKind::Cup, *it});
  return out;
}

TangleWord curl_word(int strands, int strand, bool left_twisted) {
  if (strand < 1 || strand > strands) throw std::invalid_argument("curl_word: bad strand");
  TangleWord w;
  w.bottom = strands;
  w.slices = {{SliceKind::Cup, strand + 1},
              {left_twisted ? SliceKind::X : SliceKind::XBar, strand},
              {SliceKind::Cap, strand + 1}};
  return w;
}

TangleWord tangency_word(int strands, int pos) {
  if (pos < 1 || pos > strands - 1) throw std::invalid_argument("tangency_word: bad position");
  TangleWord w;
  w.bottom = strands;
  w.slices = {{SliceKind::X, pos}, {SliceKind::XBar, pos}};
  return w;
}

TangleWord triple_word(int strands, int pos, bool second_form) {
  if (pos < 1 || pos + 1 > strands - 1) throw std::invalid_argument("triple_word: bad position");
  TangleWord w;
  w.bottom = strands;
  if (!second_form)
    w.slices = {{SliceKind::X, pos}, {SliceKind::X, pos + 1}, {SliceKind::X, pos}};
  else
    w.slices = {{SliceKind::X, pos + 1}, {SliceKind::X, pos}, {SliceKind::X, pos + 1}};
  return w;
}

TangleWord identity_word(int strands) {
  TangleWord w;
  w.bottom = strands;
  return w;
}

TangleWord concat(const TangleWord& lower, const TangleWord& upper) {
  if (top_count(lower) != upper.bottom)
    throw std::invalid_argument("concat: interface arities differ");
  TangleWord w;
  w.bottom = lower.bottom;
  w.slices = lower.slices;
  w.slices.insert(w.slices.end(), upper.slices.begin(), upper.slices.end());
  return w;
}

}  // namespace arcring
