#include "pentree/grammar.hpp"

namespace pentree {

namespace {

constexpr std::array<const char*, kNumSubtypes> kPatterns{
    "SLLL", "SLSL", "SSLL", "SLLS", "SSSL", "SSLS", "SLSS", "SSSS",
    "LLLL", "LSLL", "LLSL", "LLLS", "LSSL", "LSLS", "LLSS", "LSSS"};

struct Tables {
  std::array<std::vector<NodeKind>, kNumSubtypes> children;
  std::array<int, 16> of_mask{};
  Tables() {
    for (int s = 0; s < kNumSubtypes; ++s) {
      const char* p = kPatterns[s];
      unsigned mask = 0;
      for (int i = 0; i < 4; ++i) {
        if (p[i] != 'S') continue;
        mask |= 1u << i;
        const bool next_subtree = i == 3 || p[i + 1] == 'S';
        children[s].push_back(next_subtree ? NodeKind::kB : NodeKind::kA);
      }
      of_mask[mask] = s;
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

// Slot index (in the ccw rotation [parent, c4, c3, c2, c1]) of c(i+1).
constexpr int slot_of(int i) { return 4 - i; }

// Fills rot[offset ..] from a preorder list; the root's parent slot gets
// root_parent.
void build(const std::vector<std::uint8_t>& pre, NodeKind root_kind, int offset, int root_parent,
           std::vector<std::vector<int>>& rot) {
  if (pre.empty()) throw TreeError("empty subtype list");
  struct Spot {
    int node, i;
    NodeKind kind;
  };
  std::vector<Spot> pending;
  const auto& tab = tables();
  for (std::size_t k = 0; k < pre.size(); ++k) {
    const int s = pre[k];
    if (s >= kNumSubtypes) throw TreeError("bad subtype " + std::to_string(s));
    const int u = offset + static_cast<int>(k);
    auto& r = rot[u];
    r.assign(5, kLeg);
    if (k == 0) {
      if (subtype_kind(s) != root_kind) throw TreeError("root has the wrong kind");
      r[0] = root_parent;
    } else {
      if (pending.empty()) throw TreeError("subtype list continues after the tree is complete at " + std::to_string(k));
      const Spot sp = pending.back();
      pending.pop_back();
      if (subtype_kind(s) != sp.kind) throw TreeError("node " + std::to_string(k) + " has the wrong kind");
      rot[sp.node][slot_of(sp.i)] = u;
      r[0] = sp.node;
    }
    const char* p = kPatterns[s];
    int c = static_cast<int>(tab.children[s].size());
    for (int i = 3; i >= 0; --i) {
      if (p[i] != 'S') continue;
      --c;
      pending.push_back({u, i, tab.children[s][c]});
    }
  }
  if (!pending.empty()) throw TreeError("subtype list ends before the tree is complete");
}

}  // namespace

const char* subtype_pattern(int subtype) { return kPatterns.at(subtype); }

std::string subtype_name(int subtype) {
  return std::string(1, subtype < 8 ? 'a' : 'b') + std::to_string(subtype % 8 + 1);
}

const std::vector<NodeKind>& subtype_children(int subtype) { return tables().children.at(subtype); }

int subtype_of_mask(unsigned mask) { return tables().of_mask.at(mask & 15u); }

PlantedTree planted_from_preorder(const std::vector<std::uint8_t>& pre, NodeKind root_kind) {
  std::vector<std::vector<int>> rot(pre.size());
  build(pre, root_kind, 0, kStub, rot);
  return {PlaneTree::from_rotations(rot), 0, 0};
}

std::vector<std::uint8_t> preorder_subtypes(const PlantedTree& p) {
  const PlaneTree& t = p.tree;
  if (!p.is_stub_planted()) throw TreeError("tree is not planted at a stub");
  std::vector<std::uint8_t> out;
  out.reserve(t.num_nodes());
  std::vector<std::pair<int, int>> stack{{p.root, p.root_slot}};
  while (!stack.empty()) {
    const auto [u, parent_slot] = stack.back();
    stack.pop_back();
    if (t.degree(u) != 5) throw TreeError("node of degree other than 5");
    unsigned mask = 0;
    int slots[4];
    int s = parent_slot;
    for (int i = 0; i < 4; ++i) {
      s = t.cw(u, s);
      slots[i] = s;
      if (t.is_edge(u, s)) mask |= 1u << i;
      else if (!t.is_leg(u, s)) throw TreeError("unexpected stub");
    }
    out.push_back(static_cast<std::uint8_t>(subtype_of_mask(mask)));
    for (int i = 3; i >= 0; --i)
      if (mask >> i & 1u) stack.push_back({t.to(u, slots[i]), t.back(u, slots[i])});
  }
  return out;
}

PlaneTree join_preorders(const std::vector<std::uint8_t>& a_pre, const std::vector<std::uint8_t>& b_pre) {
  const int na = static_cast<int>(a_pre.size());
  std::vector<std::vector<int>> rot(a_pre.size() + b_pre.size());
  build(a_pre, NodeKind::kA, 0, na, rot);
  build(b_pre, NodeKind::kB, na, 0, rot);
  return PlaneTree::from_rotations(rot);
}

}  // namespace pentree
