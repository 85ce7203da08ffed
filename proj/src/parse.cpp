#include "arcring/parse.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace arcring {

ParseError::ParseError(ParseFault fault_, int line_, int col_, const std::string& what_)
    : std::runtime_error(what_), fault(fault_), line(line_), col(col_) {}

namespace {

struct Token {
  std::string text;
  int line = 0, col = 0;
};

[[noreturn]] void fail(ParseFault f, const Token& t, const std::string& msg) {
  std::ostringstream os;
  os << msg;
  if (t.line > 0) os << " (line " << t.line << ", col " << t.col << ")";
  throw ParseError(f, t.line, t.col, os.str());
}

bool is_sep(char c) { return c == ' ' || c == '\t' || c == '\r' || c == ','; }

// statements split on ';' and newlines, '#' comments stripped
std::vector<std::vector<Token>> statements(const std::string& text) {
  std::vector<std::vector<Token>> out;
  std::vector<Token> cur;
  int line = 1, col = 1;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i, ++col;
      continue;
    }
    if (c == '\n') {
      flush();
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ';') {
      flush();
      ++col;
      ++i;
      continue;
    }
    if (is_sep(c)) {
      ++col;
      ++i;
      continue;
    }
    Token t{"", line, col};
    while (i < text.size() && !is_sep(text[i]) && text[i] != ';' && text[i] != '\n' &&
           text[i] != '#') {
      t.text.push_back(text[i]);
      ++i;
      ++col;
    }
    cur.push_back(std::move(t));
  }
  flush();
  return out;
}

int int_of(const Token& t, ParseFault f) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(t.text, &pos);
  } catch (const std::exception&) {
    fail(ParseFault::Syntax, t, "expected an integer, got '" + t.text + "'");
  }
  if (pos != t.text.size()) fail(ParseFault::Syntax, t, "expected an integer, got '" + t.text + "'");
  if (v < -1000000 || v > 1000000) fail(f, t, "integer out of range");
  return static_cast<int>(v);
}

std::optional<SliceKind> kind_of(const std::string& s) {
  if (s == "x") return SliceKind::X;
  if (s == "xbar") return SliceKind::XBar;
  if (s == "cap") return SliceKind::Cap;
  if (s == "cup") return SliceKind::Cup;
  if (s == "vert") return SliceKind::Vert;
  return std::nullopt;
}

const char* kind_name(SliceKind k) {
  switch (k) {
    case SliceKind::X: return "x";
    case SliceKind::XBar: return "xbar";
    case SliceKind::Cap: return "cap";
    case SliceKind::Cup: return "cup";
    case SliceKind::Vert: return "vert";
  }
  return "?";
}

void check_slice(const Token& where, SliceKind k, int pos, int cur) {
  if (pos < 1) fail(ParseFault::Arity, where, "slice position must be at least 1");
  switch (k) {
    case SliceKind::X:
    case SliceKind::XBar:
    case SliceKind::Cap:
      if (pos > cur - 1) fail(ParseFault::Arity, where, "slice position exceeds strand count");
      break;
    case SliceKind::Cup:
      if (pos > cur + 1) fail(ParseFault::Arity, where, "slice position exceeds strand count");
      break;
    case SliceKind::Vert:
      if (cur == 0 || pos > cur) fail(ParseFault::Arity, where, "vert slice on missing strands");
      break;
  }
}

int width_after(SliceKind k, int cur) {
  if (k == SliceKind::Cap) return cur - 2;
  if (k == SliceKind::Cup) return cur + 2;
  return cur;
}

}  // namespace

TangleInput parse_tangle(const std::string& text) {
  TangleInput out;
  bool saw_bottom = false, saw_slice = false, saw_orient = false;
  Token orient_tok;
  std::string orient_signs;
  std::vector<std::pair<int, Token>> reversals;
  int cur = 0;

  for (const auto& st : statements(text)) {
    const Token& head = st[0];
    if (head.text == "bottom") {
      if (saw_bottom) fail(ParseFault::Syntax, head, "duplicate bottom statement");
      if (saw_slice) fail(ParseFault::Syntax, head, "bottom must precede slices");
      if (st.size() != 2) fail(ParseFault::Syntax, head, "bottom takes one count");
      int n = int_of(st[1], ParseFault::Arity);
      if (n < 0) fail(ParseFault::Arity, st[1], "bottom count must be nonnegative");
      out.word.bottom = n;
      cur = n;
      saw_bottom = true;
      continue;
    }
    if (head.text == "orient") {
      if (saw_orient) fail(ParseFault::Syntax, head, "duplicate orient statement");
      if (st.size() != 2) fail(ParseFault::Syntax, head, "orient takes one sign string");
      for (char c : st[1].text)
        if (c != '+' && c != '-')
          fail(ParseFault::Syntax, st[1], "orient wants a string of + and - signs");
      orient_signs = st[1].text;
      orient_tok = st[1];
      saw_orient = true;
      continue;
    }
    if (head.text == "reverse-component") {
      if (st.size() != 2) fail(ParseFault::Syntax, head, "reverse-component takes one index");
      int k = int_of(st[1], ParseFault::Orientation);
      if (k < 0) fail(ParseFault::Orientation, st[1], "unknown component");
      reversals.emplace_back(k, st[1]);
      continue;
    }
    size_t at = 0;
    if (head.text == "slice") {
      if (st.size() != 3) fail(ParseFault::Syntax, head, "slice takes a kind and a position");
      at = 1;
    } else if (st.size() != 2) {
      fail(ParseFault::Syntax, head, "unknown statement '" + head.text + "'");
    }
    auto k = kind_of(st[at].text);
    if (!k) fail(ParseFault::Syntax, st[at], "unknown slice kind '" + st[at].text + "'");
    int pos = int_of(st[at + 1], ParseFault::Arity);
    check_slice(st[at + 1], *k, pos, cur);
    out.word.slices.push_back({*k, pos});
    cur = width_after(*k, cur);
    saw_slice = true;
  }

  if (saw_orient) {
    int expected = out.word.bottom + cur;
    if (static_cast<int>(orient_signs.size()) != expected)
      fail(ParseFault::Orientation, orient_tok, "orientation mark count mismatch");
    for (char c : orient_signs) out.word.marks.push_back(c == '+' ? 1 : -1);
  }

  WordComponents comps = word_components(out.word);
  out.reversed.assign(static_cast<size_t>(comps.count), false);
  for (const auto& [k, tok] : reversals) {
    if (k >= comps.count) fail(ParseFault::Orientation, tok, "unknown component");
    out.reversed[static_cast<size_t>(k)] = !out.reversed[static_cast<size_t>(k)];
  }
  if (std::none_of(out.reversed.begin(), out.reversed.end(), [](bool b) { return b; }))
    out.reversed.clear();

  try {
    orient_word(out.word, out.reversed);
  } catch (const std::invalid_argument& e) {
    fail(ParseFault::Orientation, orient_tok, e.what());
  }
  return out;
}

TangleWord parse_braid(const std::string& text, int strands) {
  if (strands < 1) throw ParseError(ParseFault::Arity, 0, 0, "braid needs at least one strand");
  TangleWord w = identity_word(strands);
  for (const auto& st : statements(text))
    for (const auto& t : st) {
      size_t i = 0;
      const std::string& s = t.text;
      if (i < s.size() && (s[i] == 's' || s[i] == 'S')) ++i;
      bool neg = false;
      if (i < s.size() && s[i] == '-') {
        neg = true;
        ++i;
      }
      size_t d0 = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == d0) fail(ParseFault::Syntax, t, "expected a braid generator, got '" + s + "'");
      int k = std::stoi(s.substr(d0, i - d0));
      if (i < s.size()) {
        std::string tail = s.substr(i);
        if (tail == "^-1" || tail == "^{-1}")
          neg = !neg;
        else
          fail(ParseFault::Syntax, t, "expected a braid generator, got '" + s + "'");
      }
      if (k < 1 || k > strands - 1) fail(ParseFault::Arity, t, "generator index out of range");
      w.slices.push_back({neg ? SliceKind::XBar : SliceKind::X, k});
    }
  return w;
}

TangleWord braid_closure(const TangleWord& braid) {
  const int b = braid.bottom;
  if (top_count(braid) != b)
    throw std::invalid_argument("braid_closure: word does not preserve its width");
  TangleWord w;
  w.bottom = 0;
  for (int i = 1; i <= b; ++i) w.slices.push_back({SliceKind::Cup, i});
  for (const auto& s : braid.slices) w.slices.push_back({s.kind, s.pos + b});
  for (int i = b; i >= 1; --i) w.slices.push_back({SliceKind::Cap, i});
  return w;
}

namespace {

// --- PD codes ---

struct Occ {
  int c = -1, s = -1;
  bool operator==(const Occ& o) const = default;
  bool operator<(const Occ& o) const { return std::tie(c, s) < std::tie(o.c, o.s); }
};

struct PdCode {
  std::vector<std::array<int, 4>> x;
  int loops = 0;
  std::map<int, std::vector<Occ>> occ;  // edge label -> its two slots
};

PdCode scan_pd(const std::string& text) {
  PdCode pd;
  int line = 1, col = 1;
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size()) {
      char c = text[i];
      if (c == '#') {
        while (i < text.size() && text[i] != '\n') ++i, ++col;
      } else if (c == '\n') {
        ++line;
        col = 1;
        ++i;
      } else if (is_sep(c) || c == ';') {
        ++col;
        ++i;
      } else {
        break;
      }
    }
  };
  auto here = [&] { return Token{std::string(1, i < text.size() ? text[i] : '?'), line, col}; };
  while (true) {
    skip();
    if (i >= text.size()) break;
    char c = text[i];
    if (c == 'X' || c == 'x') {
      ++i, ++col;
      skip();
      if (i >= text.size() || (text[i] != '(' && text[i] != '['))
        fail(ParseFault::Syntax, here(), "expected ( or [ after X");
      char close = text[i] == '(' ? ')' : ']';
      ++i, ++col;
      std::array<int, 4> slots{};
      for (int s = 0; s < 4; ++s) {
        skip();
        Token t{"", line, col};
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          t.text.push_back(text[i]);
          ++i, ++col;
        }
        if (t.text.empty()) fail(ParseFault::Syntax, t, "expected an edge label");
        slots[static_cast<size_t>(s)] = int_of(t, ParseFault::Pd);
        if (slots[static_cast<size_t>(s)] < 1) fail(ParseFault::Pd, t, "edge labels are positive");
      }
      skip();
      if (i >= text.size() || text[i] != close)
        fail(ParseFault::Syntax, here(), "unterminated crossing");
      ++i, ++col;
      pd.x.push_back(slots);
    } else if (c == 'O' || c == 'o') {
      ++i, ++col;
      skip();
      if (i < text.size() && (text[i] == '(' || text[i] == '[')) {
        char close = text[i] == '(' ? ')' : ']';
        ++i, ++col;
        skip();
        if (i >= text.size() || text[i] != close)
          fail(ParseFault::Syntax, here(), "unterminated loop");
        ++i, ++col;
      }
      ++pd.loops;
    } else {
      fail(ParseFault::Syntax, here(), "expected X(...) or O");
    }
  }
  (void)expect;
  for (size_t ci = 0; ci < pd.x.size(); ++ci)
    for (int s = 0; s < 4; ++s)
      pd.occ[pd.x[ci][static_cast<size_t>(s)]].push_back({static_cast<int>(ci), s});
  for (const auto& [e, v] : pd.occ)
    if (v.size() != 2)
      throw ParseError(ParseFault::Pd, 0, 0,
                       "edge " + std::to_string(e) + " must appear exactly twice");
  if (pd.x.size() > 16) throw ParseError(ParseFault::Pd, 0, 0, "too many crossings");
  return pd;
}

Occ other_occ(const PdCode& pd, int edge, const Occ& at) {
  const auto& v = pd.occ.at(edge);
  return v[0] == at ? v[1] : v[0];
}

// flow[occurrence] = +1 strand enters the crossing there, -1 it leaves.
// Under slots are fixed (in at 0, out at 2); over slots are resolved by
// propagation, with the consecutive-numbering rule breaking free loops.
struct PdFlow {
  std::vector<std::array<int, 4>> flow;
  Occ head(const PdCode& pd, int edge) const {
    for (const auto& o : pd.occ.at(edge))
      if (flow[static_cast<size_t>(o.c)][static_cast<size_t>(o.s)] > 0) return o;
    return {};
  }
  Occ tail(const PdCode& pd, int edge) const {
    for (const auto& o : pd.occ.at(edge))
      if (flow[static_cast<size_t>(o.c)][static_cast<size_t>(o.s)] < 0) return o;
    return {};
  }
};

PdFlow resolve_flow(const PdCode& pd) {
  const size_t k = pd.x.size();
  PdFlow f;
  f.flow.assign(k, {0, 0, 0, 0});
  auto set_flow = [&](const Occ& o, int v) -> bool {
    int& cell = f.flow[static_cast<size_t>(o.c)][static_cast<size_t>(o.s)];
    if (cell == 0) {
      cell = v;
      return true;
    }
    if (cell != v) throw ParseError(ParseFault::Pd, 0, 0, "inconsistent PD orientations");
    return false;
  };
  auto propagate = [&](Occ seed, int v) {
    std::vector<std::pair<Occ, int>> work{{seed, v}};
    while (!work.empty()) {
      auto [o, val] = work.back();
      work.pop_back();
      if (!set_flow(o, val)) continue;
      // over partner at the same crossing flows the other way
      if (o.s == 1 || o.s == 3) {
        Occ partner{o.c, o.s == 1 ? 3 : 1};
        work.emplace_back(partner, -val);
      }
      // the edge's far end flows the other way
      int e = pd.x[static_cast<size_t>(o.c)][static_cast<size_t>(o.s)];
      work.emplace_back(other_occ(pd, e, o), -val);
    }
  };
  // seed from the fixed under slots
  for (size_t ci = 0; ci < k; ++ci) {
    propagate({static_cast<int>(ci), 0}, 1);
    propagate({static_cast<int>(ci), 2}, -1);
  }
  // leftover all-over components: use consecutive edge numbering
  for (size_t ci = 0; ci < k; ++ci) {
    if (f.flow[ci][1] != 0) continue;
    int b = pd.x[ci][1], d = pd.x[ci][3];
    int in_slot = (d == b + 1) ? 1 : (b == d + 1) ? 3 : (b > d ? 1 : 3);
    propagate({static_cast<int>(ci), in_slot}, 1);
  }
  return f;
}

int pd_component(const PdCode& pd, const PdFlow& f, int edge) {
  // walk forward to the smallest label reachable; that label names the cycle
  int best = edge, e = edge;
  for (size_t guard = 0; guard <= 2 * pd.occ.size() + 2; ++guard) {
    Occ h = f.head(pd, e);
    int s_out = h.s == 0 ? 2 : (h.s == 1 ? 3 : 1);
    e = pd.x[static_cast<size_t>(h.c)][static_cast<size_t>(s_out)];
    best = std::min(best, e);
    if (e == edge) return best;
  }
  throw ParseError(ParseFault::Pd, 0, 0, "inconsistent PD orientations");
}

// --- Morse sweep: depth-first search over cap / placement moves ---

struct Leg {
  int edge = 0;
  Occ reach;
  int arc = 0;
};

struct CupRec {
  int edge = 0;
  Occ left_reach, right_reach;
};

struct Sweep {
  const PdCode& pd;
  const PdFlow& flow;
  std::vector<Slice> slices;
  std::vector<CupRec> cups;  // in slice order of their Cup entries
  std::vector<Leg> legs;
  uint32_t placed = 0;
  int next_arc = 0;
  long nodes = 0;
  std::set<std::vector<int>> seen;

  explicit Sweep(const PdCode& p, const PdFlow& fl) : pd(p), flow(fl) {}

  std::vector<int> key() const {
    std::vector<int> k{static_cast<int>(placed)};
    std::map<int, int> canon;
    for (const auto& l : legs) {
      auto [it, fresh] = canon.emplace(l.arc, static_cast<int>(canon.size()));
      k.push_back(l.edge);
      k.push_back(l.reach.c * 4 + l.reach.s);
      k.push_back(it->second);
      (void)fresh;
    }
    return k;
  }

  bool edge_fresh(int e) const {
    if (std::any_of(legs.begin(), legs.end(), [&](const Leg& l) { return l.edge == e; }))
      return false;
    for (const auto& o : pd.occ.at(e))
      if (placed & (uint32_t{1} << o.c)) return false;
    return true;
  }

  void force_caps() {
    bool again = true;
    while (again) {
      again = false;
      for (size_t p = 0; p + 1 < legs.size(); ++p)
        if (legs[p].edge == legs[p + 1].edge && legs[p].arc != legs[p + 1].arc) {
          slices.push_back({SliceKind::Cap, static_cast<int>(p) + 1});
          legs.erase(legs.begin() + static_cast<long>(p), legs.begin() + static_cast<long>(p) + 2);
          again = true;
          break;
        }
    }
  }

  // place crossing ci with cyclic pair p at leg position pos; cups indicates
  // which of the two bottom slots are fed by fresh cups
  void place(int ci, int p, size_t pos, bool cup_left, bool cup_right) {
    const auto& xs = pd.x[static_cast<size_t>(ci)];
    const int sl = p, sr = (p + 1) % 4;
    const int u = xs[static_cast<size_t>(sl)], v = xs[static_cast<size_t>(sr)];
    if (u == v) {
      // one cup feeds both bottom slots
      slices.push_back({SliceKind::Cup, static_cast<int>(pos) + 1});
      cups.push_back({u, Occ{ci, sl}, Occ{ci, sr}});
      int arc = next_arc++;
      legs.insert(legs.begin() + static_cast<long>(pos),
                  {Leg{u, Occ{ci, sl}, arc}, Leg{v, Occ{ci, sr}, arc}});
    } else {
      if (cup_left) {
        slices.push_back({SliceKind::Cup, static_cast<int>(pos) + 1});
        cups.push_back({u, other_occ(pd, u, Occ{ci, sl}), Occ{ci, sl}});
        int arc = next_arc++;
        legs.insert(legs.begin() + static_cast<long>(pos),
                    {Leg{u, other_occ(pd, u, Occ{ci, sl}), arc}, Leg{u, Occ{ci, sl}, arc}});
        ++pos;  // the consumable leg sits right of its sibling
      }
      if (cup_right) {
        slices.push_back({SliceKind::Cup, static_cast<int>(pos) + 2});
        cups.push_back({v, Occ{ci, sr}, other_occ(pd, v, Occ{ci, sr})});
        int arc = next_arc++;
        legs.insert(legs.begin() + static_cast<long>(pos) + 1,
                    {Leg{v, Occ{ci, sr}, arc}, Leg{v, other_occ(pd, v, Occ{ci, sr}), arc}});
      }
    }
    // consume (pos, pos+1), emit the top pair
    const int stl = (p + 3) % 4, str = (p + 2) % 4;
    const int ftl = xs[static_cast<size_t>(stl)], ftr = xs[static_cast<size_t>(str)];
    const SliceKind kind = (p % 2 == 0) ? SliceKind::XBar : SliceKind::X;
    slices.push_back({kind, static_cast<int>(pos) + 1});
    legs[pos] = Leg{ftl, other_occ(pd, ftl, Occ{ci, stl}), next_arc++};
    legs[pos + 1] = Leg{ftr, other_occ(pd, ftr, Occ{ci, str}), next_arc++};
    placed |= uint32_t{1} << ci;
    force_caps();
  }

  bool solve() {
    if (++nodes > 200000) throw ParseError(ParseFault::Pd, 0, 0, "PD code too entangled");
    if (placed == (uint32_t{1} << pd.x.size()) - 1 && legs.empty()) return true;
    if (!seen.insert(key()).second) return false;

    const auto saved_slices = slices;
    const auto saved_cups = cups;
    const auto saved_legs = legs;
    const auto saved_placed = placed;
    const auto saved_arc = next_arc;
    auto restore = [&] {
      slices = saved_slices;
      cups = saved_cups;
      legs = saved_legs;
      placed = saved_placed;
      next_arc = saved_arc;
    };

    for (int ci = 0; ci < static_cast<int>(pd.x.size()); ++ci) {
      if (placed & (uint32_t{1} << ci)) continue;
      for (int p = 0; p < 4; ++p) {
        const auto& xs = pd.x[static_cast<size_t>(ci)];
        const int u = xs[static_cast<size_t>(p)], v = xs[static_cast<size_t>((p + 1) % 4)];
        const Occ ou{ci, p}, ov{ci, (p + 1) % 4};
        if (u == v) {
          if (other_occ(pd, u, ou) != ov) continue;  // not the bottom-spanning loop
          for (size_t pos = 0; pos <= legs.size(); ++pos) {
            place(ci, p, pos, false, false);
            if (solve()) return true;
            restore();
          }
          continue;
        }
        auto iu = std::find_if(legs.begin(), legs.end(),
                               [&](const Leg& l) { return l.reach == ou; });
        auto iv = std::find_if(legs.begin(), legs.end(),
                               [&](const Leg& l) { return l.reach == ov; });
        if (iu != legs.end() && iv != legs.end()) {
          if (iv - iu == 1) {
            place(ci, p, static_cast<size_t>(iu - legs.begin()), false, false);
            if (solve()) return true;
            restore();
          }
        } else if (iu != legs.end() && edge_fresh(v)) {
          place(ci, p, static_cast<size_t>(iu - legs.begin()), false, true);
          if (solve()) return true;
          restore();
        } else if (iv != legs.end() && edge_fresh(u)) {
          place(ci, p, static_cast<size_t>(iv - legs.begin()), true, false);
          if (solve()) return true;
          restore();
        } else if (iu == legs.end() && iv == legs.end() && edge_fresh(u) && edge_fresh(v)) {
          for (size_t pos = 0; pos <= legs.size(); ++pos) {
            place(ci, p, pos, true, true);
            if (solve()) return true;
            restore();
          }
        }
      }
    }
    return false;
  }
};

}  // namespace

TangleInput parse_pd(const std::string& text) {
  PdCode pd = scan_pd(text);
  PdFlow flow = pd.x.empty() ? PdFlow{} : resolve_flow(pd);

  TangleInput out;
  out.word.bottom = 0;
  std::vector<CupRec> cups;
  if (!pd.x.empty()) {
    Sweep sweep(pd, flow);
    if (!sweep.solve())
      throw ParseError(ParseFault::Pd, 0, 0, "non-planar or inconsistent PD code");
    out.word.slices = sweep.slices;
    cups = sweep.cups;
  }
  for (int l = 0; l < pd.loops; ++l) {
    out.word.slices.push_back({SliceKind::Cup, 1});
    out.word.slices.push_back({SliceKind::Cap, 1});
  }

  // PD orientations -> reversal overrides: a closed component's default
  // direction is its first cup traversed left to right, which follows the
  // PD direction exactly when that cup's right leg reaches the edge's head
  WordComponents comps = word_components(out.word);
  out.reversed.assign(static_cast<size_t>(comps.count), false);
  std::map<int, int> comp_of_pd;  // pd component label -> word component
  int next_comp = 0;
  for (const auto& rec : cups) {
    int label = pd_component(pd, flow, rec.edge);
    auto [it, fresh] = comp_of_pd.emplace(label, next_comp);
    if (fresh) {
      ++next_comp;
      Occ head = flow.head(pd, rec.edge);
      out.reversed[static_cast<size_t>(it->second)] = !(rec.right_reach == head);
    }
  }
  if (std::none_of(out.reversed.begin(), out.reversed.end(), [](bool b) { return b; }))
    out.reversed.clear();
  return out;
}

std::string emit_tangle(const TangleInput& t) {
  std::ostringstream os;
  os << "bottom " << t.word.bottom;
  for (const auto& s : t.word.slices) os << "; " << kind_name(s.kind) << " " << s.pos;
  if (!t.word.marks.empty()) {
    os << "; orient ";
    for (int m : t.word.marks) os << (m > 0 ? '+' : '-');
  }
  for (size_t k = 0; k < t.reversed.size(); ++k)
    if (t.reversed[k]) os << "; reverse-component " << k;
  os << "\n";
  return os.str();
}

}  // namespace arcring
