#include "arcring/tensor.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace arcring {

namespace {

void check_ids(const std::vector<int>& ids) {
  if (ids.size() > 63) throw std::invalid_argument("too many circles for mask representation");
  for (size_t i = 1; i < ids.size(); ++i)
    if (ids[i - 1] >= ids[i]) throw std::invalid_argument("circle ids must be strictly increasing");
}

// Remove bit at position `pos`, compacting higher bits down.
uint64_t drop_bit(uint64_t mask, int pos) {
  uint64_t low = mask & ((uint64_t{1} << pos) - 1);
  uint64_t high = (mask >> (pos + 1)) << pos;
  return low | high;
}

// Insert a zero bit at position `pos`.
uint64_t insert_bit(uint64_t mask, int pos, int value) {
  uint64_t low = mask & ((uint64_t{1} << pos) - 1);
  uint64_t high = (mask >> pos) << (pos + 1);
  return low | high | (static_cast<uint64_t>(value) << pos);
}

}  // namespace

int TensorVector::index_of(int circle_id) const {
  auto it = std::lower_bound(circle_ids.begin(), circle_ids.end(), circle_id);
  if (it == circle_ids.end() || *it != circle_id)
    throw std::invalid_argument("circle id not present in state");
  return static_cast<int>(it - circle_ids.begin());
}

void TensorVector::add_term(uint64_t mask, long long c) {
  if (c == 0) return;
  auto it = terms.find(mask);
  if (it == terms.end()) {
    terms.emplace(mask, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

TensorVector make_basis_state(const std::vector<int>& circle_ids, uint64_t mask, int shift) {
  check_ids(circle_ids);
  if (circle_ids.size() < 63 && (mask >> circle_ids.size()) != 0)
    throw std::invalid_argument("labeling mask exceeds circle count");
  TensorVector v;
  v.circle_ids = circle_ids;
  v.shift = shift;
  v.terms[mask] = 1;
  return v;
}

int labeling_degree(int arity, uint64_t mask, int shift) {
  int x = std::popcount(mask);
  return 2 * x - arity + shift;
}

int state_degree(const TensorVector& v) {
  if (v.is_zero()) throw std::logic_error("degree of zero state");
  int d = labeling_degree(v.arity(), v.terms.begin()->first, v.shift);
  for (auto& [m, c] : v.terms)
    if (labeling_degree(v.arity(), m, v.shift) != d)
      throw std::logic_error("state is not homogeneous");
  return d;
}

TensorVector add(const TensorVector& a, const TensorVector& b) {
  if (a.circle_ids != b.circle_ids || a.shift != b.shift)
    throw std::invalid_argument("adding states over different circle sets");
  TensorVector out = a;
  for (auto& [m, c] : b.terms) out.add_term(m, c);
  return out;
}

TensorVector scale(const TensorVector& a, long long c) {
  TensorVector out;
  out.circle_ids = a.circle_ids;
  out.shift = a.shift;
  if (c != 0)
    for (auto& [m, k] : a.terms) out.terms[m] = k * c;
  return out;
}

TensorVector alg_multiply(const TensorVector& v, int id_a, int id_b, int id_out) {
  if (id_a == id_b) throw std::invalid_argument("alg_multiply: factors must differ");
  int pa = v.index_of(id_a), pb = v.index_of(id_b);
  // new circle set: remove both, insert id_out
  std::vector<int> ids;
  ids.reserve(v.circle_ids.size() - 1);
  for (int id : v.circle_ids)
    if (id != id_a && id != id_b) ids.push_back(id);
  ids.insert(std::upper_bound(ids.begin(), ids.end(), id_out), id_out);
  check_ids(ids);
  int pout = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id_out) - ids.begin());

  TensorVector out;
  out.circle_ids = ids;
  out.shift = v.shift;
  int hi = std::max(pa, pb), lo = std::min(pa, pb);
  for (auto& [m, c] : v.terms) {
    int la = (m >> pa) & 1, lb = (m >> pb) & 1;
    if (la && lb) continue;  // X*X = 0
    int lout = la | lb;
    uint64_t rest = drop_bit(drop_bit(m, hi), lo);
    out.add_term(insert_bit(rest, pout, lout), c);
  }
  return out;
}

TensorVector alg_comultiply(const TensorVector& v, int id_in, int id_out1, int id_out2) {
  if (id_out1 == id_out2) throw std::invalid_argument("alg_comultiply: outputs must differ");
  int pin = v.index_of(id_in);
  std::vector<int> ids;
  for (int id : v.circle_ids)
    if (id != id_in) ids.push_back(id);
  ids.insert(std::upper_bound(ids.begin(), ids.end(), id_out1), id_out1);
  ids.insert(std::upper_bound(ids.begin(), ids.end(), id_out2), id_out2);
  check_ids(ids);
  int p1 = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id_out1) - ids.begin());
  int p2 = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id_out2) - ids.begin());

  TensorVector out;
  out.circle_ids = ids;
  out.shift = v.shift;
  auto place = [&](uint64_t rest, int l1, int l2, long long c) {
    // insert in ascending position order to keep bit positions consistent
    uint64_t m;
    if (p1 < p2) {
      m = insert_bit(rest, p1, l1);
      m = insert_bit(m, p2, l2);
    } else {
      m = insert_bit(rest, p2, l2);
      m = insert_bit(m, p1, l1);
    }
    out.add_term(m, c);
  };
  for (auto& [m, c] : v.terms) {
    int lin = (m >> pin) & 1;
    uint64_t rest = drop_bit(m, pin);
    if (lin) {
      place(rest, 1, 1, c);  // X -> X@X
    } else {
      place(rest, 0, 1, c);  // 1 -> 1@X + X@1
      place(rest, 1, 0, c);
    }
  }
  return out;
}

TensorVector alg_birth(const TensorVector& v, int id_new) {
  std::vector<int> ids = v.circle_ids;
  ids.insert(std::upper_bound(ids.begin(), ids.end(), id_new), id_new);
  check_ids(ids);
  int p = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id_new) - ids.begin());
  TensorVector out;
  out.circle_ids = ids;
  out.shift = v.shift;
  for (auto& [m, c] : v.terms) out.add_term(insert_bit(m, p, 0), c);
  return out;
}

TensorVector alg_death(const TensorVector& v, int id_gone) {
  int p = v.index_of(id_gone);
  std::vector<int> ids;
  for (int id : v.circle_ids)
    if (id != id_gone) ids.push_back(id);
  TensorVector out;
  out.circle_ids = ids;
  out.shift = v.shift;
  for (auto& [m, c] : v.terms) {
    if (!((m >> p) & 1)) continue;  // e(1) = 0
    out.add_term(drop_bit(m, p), c);
  }
  return out;
}

TensorVector tensor_product(const TensorVector& a, const TensorVector& b) {
  TensorVector out;
  out.shift = a.shift + b.shift;
  std::vector<std::pair<int, std::pair<int, int>>> order;  // id -> (side, pos)
  for (int p = 0; p < a.arity(); ++p) order.push_back({a.circle_ids[p], {0, p}});
  for (int p = 0; p < b.arity(); ++p) order.push_back({b.circle_ids[p], {1, p}});
  std::sort(order.begin(), order.end());
  for (size_t i = 1; i < order.size(); ++i)
    if (order[i - 1].first == order[i].first)
      throw std::invalid_argument("tensor_product: circle sets overlap");
  for (auto& [id, sp] : order) out.circle_ids.push_back(id);
  for (auto& [ma, ca] : a.terms)
    for (auto& [mb, cb] : b.terms) {
      uint64_t nm = 0;
      for (size_t np = 0; np < order.size(); ++np) {
        auto [side, p] = order[np].second;
        uint64_t src = side == 0 ? ma : mb;
        if ((src >> p) & 1) nm |= uint64_t{1} << np;
      }
      out.add_term(nm, ca * cb);
    }
  return out;
}

TensorVector relabel(const TensorVector& v, const std::map<int, int>& id_map) {
  std::vector<std::pair<int, int>> order;  // (new id, old position)
  order.reserve(v.circle_ids.size());
  for (int p = 0; p < v.arity(); ++p) {
    auto it = id_map.find(v.circle_ids[p]);
    if (it == id_map.end()) throw std::invalid_argument("relabel: missing id in map");
    order.emplace_back(it->second, p);
  }
  std::sort(order.begin(), order.end());
  for (size_t i = 1; i < order.size(); ++i)
    if (order[i - 1].first == order[i].first)
      throw std::invalid_argument("relabel: id map is not injective");
  TensorVector out;
  out.shift = v.shift;
  for (auto& [nid, p] : order) out.circle_ids.push_back(nid);
  for (auto& [m, c] : v.terms) {
    uint64_t nm = 0;
    for (size_t np = 0; np < order.size(); ++np)
      if ((m >> order[np].second) & 1) nm |= uint64_t{1} << np;
    out.add_term(nm, c);
  }
  return out;
}

}  // namespace arcring
