#include "pentree/trees.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"

namespace pentree {

// ---------------------------------------------------------------- PlaneTree

PlaneTree PlaneTree::from_rotations(const std::vector<std::vector<int>>& ccw,
                                    std::vector<Color> colors) {
  const int n = static_cast<int>(ccw.size());
  if (n == 0) throw TreeError("empty tree");
  PlaneTree t;
  t.slots_.resize(n);
  int half_edges = 0, stubs = 0;
  for (int u = 0; u < n; ++u) {
    if (ccw[u].empty()) throw TreeError("node " + std::to_string(u) + " has no slot");
    t.slots_[u].reserve(ccw[u].size());
    for (int v : ccw[u]) {
      if (v == kStub) {
        ++stubs;
      } else if (v != kLeg) {
        if (v < 0 || v >= n) throw TreeError("neighbour out of range at node " + std::to_string(u));
        if (v == u) throw TreeError("loop at node " + std::to_string(u));
        ++half_edges;
      }
      t.slots_[u].push_back({v, -1});
    }
  }
  if (stubs > 1) throw TreeError("more than one stub");
  for (int u = 0; u < n; ++u) {
    for (auto& s : t.slots_[u]) {
      if (s.to < 0) continue;
      const auto& other = ccw[s.to];
      if (std::count(other.begin(), other.end(), u) != 1 ||
          std::count(ccw[u].begin(), ccw[u].end(), s.to) != 1)
        throw TreeError("asymmetric or repeated edge " + std::to_string(u) + "-" + std::to_string(s.to));
      s.back = static_cast<int>(std::find(other.begin(), other.end(), u) - other.begin());
    }
  }
  if (half_edges != 2 * (n - 1)) throw TreeError("edge count is not nodes - 1");
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& s : t.slots_[u])
      if (s.to >= 0 && !seen[s.to]) {
        seen[s.to] = 1;
        ++reached;
        stack.push_back(s.to);
      }
  }
  if (reached != n) throw TreeError("tree is disconnected");
  if (!colors.empty()) {
    if (static_cast<int>(colors.size()) != n) throw TreeError("color array size mismatch");
    for (int u = 0; u < n; ++u)
      for (const auto& s : t.slots_[u])
        if (s.to >= 0 && colors[u] == colors[s.to]) throw TreeError("edge joins two nodes of the same color");
  }
  t.colors_ = std::move(colors);
  return t;
}

int PlaneTree::num_legs() const {
  int k = 0;
  for (const auto& node : slots_)
    for (const auto& s : node) k += s.to == kLeg;
  return k;
}

int PlaneTree::num_inner_edges() const {
  int k = 0;
  for (const auto& node : slots_)
    for (const auto& s : node) k += s.to >= 0;
  return k / 2;
}

std::vector<std::vector<int>> PlaneTree::rotations() const {
  std::vector<std::vector<int>> out(slots_.size());
  for (std::size_t u = 0; u < slots_.size(); ++u)
    for (const auto& s : slots_[u]) out[u].push_back(s.to);
  return out;
}

bool PlaneTree::operator==(const PlaneTree& o) const {
  if (slots_.size() != o.slots_.size() || colors_ != o.colors_) return false;
  for (std::size_t u = 0; u < slots_.size(); ++u) {
    if (slots_[u].size() != o.slots_[u].size()) return false;
    for (std::size_t i = 0; i < slots_[u].size(); ++i)
      if (slots_[u][i].to != o.slots_[u][i].to) return false;
  }
  return true;
}

char PlantedTree::kind() const {
  return tree.is_edge(root, tree.cw(root, root_slot)) ? 'A' : 'B';
}

// ---------------------------------------------------------------- text form

std::string serialize(const PlantedTree& p) {
  const PlaneTree& t = p.tree;
  for (int u = 0; u < t.num_nodes(); ++u)
    if (t.degree(u) != 5) throw TreeError("text form requires a 5-regular tree");
  struct Frame {
    int node, slot, remaining;
  };
  std::string out;
  out.reserve(t.num_nodes() * 6);
  out.push_back('(');
  std::vector<Frame> stack;
  if (p.is_stub_planted())
    stack.push_back({p.root, t.cw(p.root, p.root_slot), 4});
  else
    stack.push_back({p.root, p.root_slot, 5});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.remaining == 0) {
      out.push_back(')');
      stack.pop_back();
      continue;
    }
    const int s = f.slot;
    const int u = f.node;
    --f.remaining;
    f.slot = t.cw(u, s);
    const int v = t.to(u, s);
    if (v == kLeg) {
      out.push_back('l');
    } else if (v == kStub) {
      throw TreeError("stub away from the root");
    } else {
      out.push_back('(');
      stack.push_back({v, t.cw(v, t.back(u, s)), 4});
    }
  }
  return out;
}

PlantedTree parse_tree(const std::string& text) {
  std::size_t end = text.size();
  while (end > 0 && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  std::size_t pos = 0;
  while (pos < end && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos >= end || text[pos] != '(') throw ParseError("expected '('", pos);
  std::vector<std::vector<int>> cw;  // clockwise slot lists, parent first
  std::vector<int> stack;
  bool done = false;
  for (; pos < end; ++pos) {
    const char c = text[pos];
    if (done) throw ParseError("trailing characters", pos);
    if (c == '(') {
      const int v = static_cast<int>(cw.size());
      if (stack.empty()) {
        cw.push_back({});
      } else {
        const int u = stack.back();
        if (cw[u].size() >= 5) throw ParseError("node has more than 5 slots", pos);
        cw[u].push_back(v);
        cw.push_back({u});
      }
      stack.push_back(v);
    } else if (c == 'l') {
      if (stack.empty()) throw ParseError("leg outside a node", pos);
      const int u = stack.back();
      if (cw[u].size() >= 5) throw ParseError("node has more than 5 slots", pos);
      cw[u].push_back(kLeg);
    } else if (c == ')') {
      if (stack.empty()) throw ParseError("unbalanced ')'", pos);
      const int u = stack.back();
      stack.pop_back();
      if (stack.empty()) {
        if (cw[u].size() == 4) {
          cw[u].insert(cw[u].begin(), kStub);
        } else if (cw[u].size() != 5) {
          throw ParseError("root must list 4 or 5 slots", pos);
        }
        done = true;
      } else if (cw[u].size() != 5) {
        throw ParseError("node must list 4 slots", pos);
      }
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  if (!done) throw ParseError("unterminated tree", end);
  std::vector<std::vector<int>> ccw(cw.size());
  for (std::size_t u = 0; u < cw.size(); ++u) {
    const int d = static_cast<int>(cw[u].size());
    for (int k = 0; k < d; ++k) ccw[u].push_back(cw[u][(d - k) % d]);
  }
  PlantedTree p;
  p.tree = PlaneTree::from_rotations(ccw);
  p.root = 0;
  p.root_slot = 0;
  return p;
}

std::string tree_to_json(const PlaneTree& t) {
  nlohmann::json j;
  nlohmann::json nodes = nlohmann::json::array();
  for (int u = 0; u < t.num_nodes(); ++u) {
    nlohmann::json row = nlohmann::json::array();
    const int d = t.degree(u);
    for (int k = 0; k < d; ++k) row.push_back(t.to(u, (d - k) % d));
    nodes.push_back(std::move(row));
  }
  j["nodes"] = std::move(nodes);
  if (t.has_colors()) {
    nlohmann::json colors = nlohmann::json::array();
    for (Color c : t.colors()) colors.push_back(static_cast<int>(c));
    j["colors"] = std::move(colors);
  }
  return j.dump();
}

PlaneTree tree_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<std::vector<int>> ccw;
    for (const auto& row : j.at("nodes")) {
      std::vector<int> cw = row.get<std::vector<int>>();
      const int d = static_cast<int>(cw.size());
      std::vector<int> r;
      for (int k = 0; k < d; ++k) r.push_back(cw[(d - k) % d]);
      ccw.push_back(std::move(r));
    }
    std::vector<Color> colors;
    if (j.contains("colors"))
      for (const auto& c : j["colors"]) colors.push_back(static_cast<Color>(c.get<int>() != 0));
    return PlaneTree::from_rotations(ccw, std::move(colors));
  } catch (const nlohmann::json::exception& e) {
    throw TreeError(std::string("malformed tree JSON: ") + e.what());
  }
}

PlantedTree canonical_planted(const PlaneTree& t) {
  PlantedTree best{t, 0, 0};
  std::string best_s;
  for (int u = 0; u < t.num_nodes(); ++u)
    for (int i = 0; i < t.degree(u); ++i) {
      if (t.to(u, i) == kStub) continue;
      PlantedTree p{t, u, i};
      std::string s = serialize(p);
      if (best_s.empty() || s < best_s) {
        best_s = std::move(s);
        best.root = u;
        best.root_slot = i;
      }
    }
  return best;
}

std::string canonical_string(const PlaneTree& t) { return serialize(canonical_planted(t)); }

// ---------------------------------------------------------------- leg-balanced

namespace {

void require_five_regular(const PlaneTree& t) {
  for (int u = 0; u < t.num_nodes(); ++u) {
    if (t.degree(u) != 5) throw TreeError("tree is not 5-regular");
    for (int i = 0; i < 5; ++i)
      if (t.to(u, i) == kStub) throw TreeError("unexpected stub");
  }
}

}  // namespace

bool is_leg_balanced(const PlaneTree& t) {
  require_five_regular(t);
  for (int u = 0; u < t.num_nodes(); ++u)
    for (int i = 0; i < 5; ++i) {
      const int v = t.to(u, i);
      if (v < u) continue;
      const bool a = t.is_leg(u, t.cw(u, i));
      const bool b = t.is_leg(v, t.cw(v, t.back(u, i)));
      if (a == b) return false;
    }
  return true;
}

PlaneTree expand_to_T5c(const PlaneTree& t) {
  if (!is_leg_balanced(t)) throw TreeError("tree is not leg-balanced");
  const int n = t.num_nodes();
  std::vector<std::vector<int>> rot(n);
  for (int u = 0; u < n; ++u) rot[u] = std::vector<int>(5, kLeg);
  int last_legs = 0;
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < 5; ++i) {
      const int v = t.to(u, i);
      if (v > u) {
        const int b = static_cast<int>(rot.size());
        rot.push_back({u, v});
        rot[u][i] = b;
        rot[v][t.back(u, i)] = b;
      } else if (v == kLeg && t.is_edge(u, t.cw(u, i))) {
        const int b = static_cast<int>(rot.size());
        rot.push_back({u, kLeg});
        rot[u][i] = b;
        ++last_legs;
      }
    }
  if (last_legs != n - 1) throw TreeError("sector count mismatch in expansion");
  std::vector<Color> colors(rot.size(), Color::kBlack);
  std::fill(colors.begin(), colors.begin() + n, Color::kWhite);
  return PlaneTree::from_rotations(rot, std::move(colors));
}

namespace {

void require_T5c_shape(const PlaneTree& t) {
  if (!t.has_colors()) throw TreeError("bicolored tree expected");
  for (int u = 0; u < t.num_nodes(); ++u) {
    const bool white = t.color(u) == Color::kWhite;
    if (t.degree(u) != (white ? 5 : 2))
      throw TreeError(std::string(white ? "white" : "black") + " node " + std::to_string(u) +
                      " has degree " + std::to_string(t.degree(u)));
    if (!white && t.is_leg(u, 0) && t.is_leg(u, 1)) throw TreeError("black node with two legs");
    for (int i = 0; i < t.degree(u); ++i)
      if (t.to(u, i) == kStub) throw TreeError("unexpected stub");
  }
}

bool is_type_two(const PlaneTree& t, int b) {
  return t.color(b) == Color::kBlack && t.is_edge(b, 0) && t.is_edge(b, 1);
}

}  // namespace

PlaneTree reduce_from_T5c(const PlaneTree& t) {
  require_T5c_shape(t);
  std::vector<int> id(t.num_nodes(), -1);
  int n = 0;
  for (int u = 0; u < t.num_nodes(); ++u)
    if (t.color(u) == Color::kWhite) id[u] = n++;
  std::vector<std::vector<int>> rot(n);
  for (int u = 0; u < t.num_nodes(); ++u) {
    if (t.color(u) != Color::kWhite) continue;
    for (int i = 0; i < 5; ++i) {
      if (t.is_leg(u, i)) {
        rot[id[u]].push_back(kLeg);
        continue;
      }
      const int b = t.to(u, i);
      const int other = 1 - t.back(u, i);
      rot[id[u]].push_back(t.is_leg(b, other) ? kLeg : id[t.to(b, other)]);
    }
  }
  return PlaneTree::from_rotations(rot);
}

bool check_C1_C2(const PlaneTree& t) {
  require_T5c_shape(t);
  auto leads_to_type_two = [&](int w, int slot) {
    const int s = t.cw(w, slot);
    return t.is_edge(w, s) && is_type_two(t, t.to(w, s));
  };
  for (int b = 0; b < t.num_nodes(); ++b) {
    if (t.color(b) != Color::kBlack) continue;
    if (is_type_two(t, b)) {
      const bool e = leads_to_type_two(t.to(b, 0), t.back(b, 0));
      const bool f = leads_to_type_two(t.to(b, 1), t.back(b, 1));
      if (e == f) return false;
    } else {
      const int i = t.is_edge(b, 0) ? 0 : 1;
      if (!leads_to_type_two(t.to(b, i), t.back(b, i))) return false;
    }
  }
  return true;
}

int leg_index(const PlaneTree& t, int u, int i) {
  if (t.num_legs() == 0) throw TreeError("tree has no leg");
  if (u < 0 || u >= t.num_nodes() || i < 0 || i >= t.degree(u)) throw TreeError("bad corner");
  int count = 0;
  int node = u, slot = i;
  while (!t.is_leg(node, slot)) {
    if (t.to(node, slot) == kStub) throw TreeError("walk reached the stub");
    const int v = t.to(node, slot);
    const int j = t.back(node, slot);
    node = v;
    slot = t.cw(v, j);
    ++count;
  }
  return count;
}

PlaneTree five_star() {
  std::vector<std::vector<int>> rot{{1, 2, 3, 4, 5}};
  for (int k = 1; k <= 5; ++k) rot.push_back({0, kLeg, kLeg, kLeg, kLeg});
  return PlaneTree::from_rotations(rot);
}

PlaneTree single_node() { return PlaneTree::from_rotations({{kLeg, kLeg, kLeg, kLeg, kLeg}}); }

}  // namespace pentree
