#include "arcring/arrangement.hpp"

#include <algorithm>
#include <stdexcept>

namespace arcring {

int Arrangement::add_point() { return n_points++; }

int Arrangement::add_edge(int a, int b, bool active) {
  edges.push_back({a, b, active});
  return static_cast<int>(edges.size()) - 1;
}

bool Arrangement::vertical_first(SliceKind kind) {
  // smoothing 0 of a positive crossing keeps the strands parallel; the
  // opposite crossing swaps the two labels
  return kind == SliceKind::X;
}

Arrangement::Delta Arrangement::toggle_site(int site) {
  const Site& s = sites.at(site);
  int e = s.first_edge;
  bool vert_now = vertical_first(s.kind) == (site_choice[site] == 0);
  Delta d;
  if (vert_now) {
    d.deactivated = {e, e + 1};
    d.activated = {e + 2, e + 3};
  } else {
    d.deactivated = {e + 2, e + 3};
    d.activated = {e, e + 1};
  }
  for (int x : d.deactivated) edges[x].active = false;
  for (int x : d.activated) edges[x].active = true;
  site_choice[site] ^= 1;
  return d;
}

Arrangement::Delta Arrangement::contract(int e1, int e2) {
  if (e1 == e2) throw std::invalid_argument("contract: need two distinct segments");
  if (!edges[e1].active || !edges[e2].active)
    throw std::invalid_argument("contract: inactive segment");
  Delta d;
  d.deactivated = {e1, e2};
  edges[e1].active = false;
  edges[e2].active = false;
  d.activated.push_back(add_edge(edges[e1].a, edges[e2].a));
  d.activated.push_back(add_edge(edges[e1].b, edges[e2].b));
  return d;
}

Arrangement::Delta Arrangement::split(int e) {
  if (!edges[e].active) throw std::invalid_argument("split: inactive segment");
  Delta d;
  d.deactivated = {e};
  edges[e].active = false;
  d.activated.push_back(add_edge(edges[e].a, edges[e].b));
  int p = add_point();
  d.activated.push_back(add_edge(p, p));
  return d;
}

Arrangement::Delta Arrangement::birth() {
  Delta d;
  int p = add_point();
  d.activated.push_back(add_edge(p, p));
  return d;
}

Arrangement::Delta Arrangement::kill(const std::vector<int>& component_edges) {
  Delta d;
  for (int e : component_edges) {
    if (!edges[e].active) throw std::invalid_argument("kill: inactive segment");
    edges[e].active = false;
    d.deactivated.push_back(e);
  }
  return d;
}

Arrangement build_arrangement(const TangleWord& w, const std::vector<int>& choice) {
  if (static_cast<int>(choice.size()) != w.crossings())
    throw std::invalid_argument("build_arrangement: one smoothing bit per crossing");
  Arrangement g;
  g.widths = strand_levels(w);
  g.level_base.resize(g.widths.size());
  int acc = 0;
  for (size_t l = 0; l < g.widths.size(); ++l) {
    g.level_base[l] = acc;
    acc += g.widths[l];
  }
  g.n_points = acc;

  int next_crossing = 0;
  for (size_t si = 0; si < w.slices.size(); ++si) {
    const Slice& s = w.slices[si];
    int l = static_cast<int>(si);
    int wl = g.widths[l];
    int i = s.pos;
    g.slice_first_edge.push_back(static_cast<int>(g.edges.size()));
    g.slice_main_edge.push_back(-1);
    g.slice_site.push_back(-1);
    auto vert = [&](int jb, int jt) { g.add_edge(g.point(l, jb), g.point(l + 1, jt)); };
    switch (s.kind) {
      case SliceKind::Vert:
        for (int j = 1; j <= wl; ++j) vert(j, j);
        break;
      case SliceKind::X:
      case SliceKind::XBar: {
        for (int j = 1; j < i; ++j) vert(j, j);
        int bit = choice[next_crossing];
        bool vertical = Arrangement::vertical_first(s.kind) == (bit == 0);
        int first = static_cast<int>(g.edges.size());
        g.add_edge(g.point(l, i), g.point(l + 1, i), vertical);
        g.add_edge(g.point(l, i + 1), g.point(l + 1, i + 1), vertical);
        g.add_edge(g.point(l, i), g.point(l, i + 1), !vertical);
        g.add_edge(g.point(l + 1, i), g.point(l + 1, i + 1), !vertical);
        g.slice_site.back() = static_cast<int>(g.sites.size());
        g.sites.push_back({l, i, s.kind, first});
        g.site_choice.push_back(bit);
        ++next_crossing;
        for (int j = i + 2; j <= wl; ++j) vert(j, j);
        break;
      }
      case SliceKind::Cap:
        for (int j = 1; j < i; ++j) vert(j, j);
        g.slice_main_edge.back() = g.add_edge(g.point(l, i), g.point(l, i + 1));
        for (int j = i + 2; j <= wl; ++j) vert(j, j - 2);
        break;
      case SliceKind::Cup:
        for (int j = 1; j < i; ++j) vert(j, j);
        g.slice_main_edge.back() = g.add_edge(g.point(l + 1, i), g.point(l + 1, i + 1));
        for (int j = i; j <= wl; ++j) vert(j, j + 2);
        break;
    }
  }
  return g;
}

namespace {

struct DSU {
  std::vector<int> up;
  explicit DSU(int n) : up(n) {
    for (int i = 0; i < n; ++i) up[i] = i;
  }
  int find(int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void unite(int a, int b) { up[find(a)] = find(b); }
};

}  // namespace

ArrSnapshot snapshot(const Arrangement& a) {
  ArrSnapshot s;
  int ne = static_cast<int>(a.edges.size());
  s.comp_of_edge.assign(ne, -1);
  s.comp_of_point.assign(a.n_points, -1);

  std::vector<int> degree(a.n_points, 0);
  DSU dsu(a.n_points);
  for (int e = 0; e < ne; ++e) {
    if (!a.edges[e].active) continue;
    ++degree[a.edges[e].a];
    ++degree[a.edges[e].b];
    dsu.unite(a.edges[e].a, a.edges[e].b);
  }
  // component id = minimal active edge index
  std::map<int, int> id_of_root;
  for (int e = 0; e < ne; ++e) {
    if (!a.edges[e].active) continue;
    int r = dsu.find(a.edges[e].a);
    if (!id_of_root.count(r)) id_of_root[r] = e;
  }
  std::map<int, bool> open_of_root;
  for (int p = 0; p < a.n_points; ++p) {
    if (degree[p] == 1) open_of_root[dsu.find(p)] = true;
  }
  for (int e = 0; e < ne; ++e) {
    if (!a.edges[e].active) continue;
    s.comp_of_edge[e] = id_of_root[dsu.find(a.edges[e].a)];
  }
  for (int p = 0; p < a.n_points; ++p) {
    if (degree[p] > 0) s.comp_of_point[p] = id_of_root[dsu.find(p)];
  }
  for (auto& [root, id] : id_of_root) {
    if (open_of_root.count(root))
      s.arc_ids.push_back(id);
    else
      s.circle_ids.push_back(id);
  }
  std::sort(s.arc_ids.begin(), s.arc_ids.end());
  std::sort(s.circle_ids.begin(), s.circle_ids.end());
  return s;
}

bool ArrSnapshot::is_circle(int comp) const {
  return std::binary_search(circle_ids.begin(), circle_ids.end(), comp);
}

FlatTangle arrangement_flat(const Arrangement& a, const ArrSnapshot& s) {
  int nb = a.widths.empty() ? 0 : a.widths.front();
  int nt = a.widths.empty() ? 0 : a.widths.back();
  int top_level = a.levels() - 1;
  std::map<int, std::vector<int>> ends;  // component -> boundary indices
  for (int j = 1; j <= nb; ++j) {
    int c = s.comp_of_point[a.point(0, j)];
    if (c < 0) throw std::logic_error("arrangement_flat: bare boundary point");
    ends[c].push_back(j - 1);
  }
  for (int j = 1; j <= nt; ++j) {
    int c = s.comp_of_point[a.point(top_level, j)];
    if (c < 0) throw std::logic_error("arrangement_flat: bare boundary point");
    ends[c].push_back(nb + j - 1);
  }
  std::vector<int> pair(nb + nt, -1);
  for (auto& [c, pts] : ends) {
    if (pts.size() != 2) throw std::logic_error("arrangement_flat: arc without two ends");
    pair[pts[0]] = pts[1];
    pair[pts[1]] = pts[0];
  }
  return make_flat_tangle(nb, nt, pair, static_cast<int>(s.circle_ids.size()));
}

std::map<int, std::set<std::pair<int, int>>> fingerprints(const Arrangement& a,
                                                          const ArrSnapshot& s) {
  std::map<int, std::set<std::pair<int, int>>> out;
  for (int id : s.circle_ids) out[id];
  for (int id : s.arc_ids) out[id];
  for (auto& [level, tag] : a.marked_levels) {
    for (int j = 1; j <= a.widths[level]; ++j) {
      int c = s.comp_of_point[a.point(level, j)];
      if (c >= 0) out[c].insert({tag, j - 1});
    }
  }
  return out;
}

SurgeryState::SurgeryState(Arrangement arr, TensorVector v)
    : arr_(std::move(arr)), snap_(snapshot(arr_)), v_(std::move(v)) {
  resync();
}

void SurgeryState::resync() {
  if (v_.circle_ids != snap_.circle_ids)
    throw std::logic_error("surgery state out of sync with its circles");
}

void SurgeryState::toggle_site(int site) { surgery(arr_.toggle_site(site)); }
void SurgeryState::contract(int e1, int e2) { surgery(arr_.contract(e1, e2)); }
void SurgeryState::split(int e) { surgery(arr_.split(e)); }

void SurgeryState::birth() {
  auto d = arr_.birth();
  snap_ = snapshot(arr_);
  v_ = alg_birth(v_, snap_.comp_of_edge[d.activated[0]]);
  resync();
}

void SurgeryState::death(int circle_id) {
  if (!snap_.is_circle(circle_id)) throw std::invalid_argument("death: not a circle");
  std::vector<int> comp_edges;
  for (size_t e = 0; e < snap_.comp_of_edge.size(); ++e)
    if (snap_.comp_of_edge[e] == circle_id) comp_edges.push_back(static_cast<int>(e));
  v_ = alg_death(v_, circle_id);
  arr_.kill(comp_edges);
  snap_ = snapshot(arr_);
  resync();
}

void SurgeryState::surgery(const Arrangement::Delta& d) {
  std::set<int> before, after;
  for (int e : d.deactivated) before.insert(snap_.comp_of_edge[e]);
  ArrSnapshot next = snapshot(arr_);
  for (int e : d.activated) after.insert(next.comp_of_edge[e]);

  int closed_before = 0, closed_after = 0;
  for (int c : before) closed_before += snap_.is_circle(c) ? 1 : 0;
  for (int c : after) closed_after += next.is_circle(c) ? 1 : 0;

  if (before.size() == 2 && after.size() == 1) {
    if (closed_before == 2 && closed_after == 1) {
      auto it = before.begin();
      int i = *it++, j = *it;
      v_ = alg_multiply(v_, i, j, *after.begin());
    } else if (closed_before == 0 && closed_after == 0) {
      // two boundary arcs fuse; no tensor factor involved
    } else {
      throw std::logic_error("saddle mixes a boundary arc with a circle");
    }
  } else if (before.size() == 1 && after.size() == 2) {
    if (closed_before == 1 && closed_after == 2) {
      auto it = after.begin();
      int i = *it++, j = *it;
      v_ = alg_comultiply(v_, *before.begin(), i, j);
    } else if (closed_before == 0 && closed_after == 0) {
      // one arc resurgered into two arcs cannot happen by a single saddle,
      // but two arcs can already share a component id only via the boundary
      throw std::logic_error("saddle split a boundary arc");
    } else {
      throw std::logic_error("saddle mixes a boundary arc with a circle");
    }
  } else if (closed_before == 0 && closed_after == 0) {
    // arcs reshaped into arcs (1->1 or 2->2); identity on the tensor factors
  } else {
    throw std::logic_error("unsupported surgery shape");
  }
  snap_ = std::move(next);
  resync();
}

}  // namespace arcring
