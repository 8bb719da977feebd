// Plane trees with legs.
//
// Each node stores its slots in counterclockwise order, like the darts around
// a vertex of a PlaneMap. A slot is a leg, a half-edge to another node, or the
// dangling root half-edge of a planted tree (a stub). "Followed clockwise"
// means the previous slot in that order.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pentree/planemap.hpp"

namespace pentree {

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public TreeError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : TreeError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

inline constexpr int kLeg = -1;
inline constexpr int kStub = -2;

struct TreeSlot {
  int to = kLeg;   // node id, kLeg or kStub
  int back = -1;   // slot index at `to` for half-edges
};

class PlaneTree {
 public:
  PlaneTree() = default;

  // ccw[u] lists the neighbours of u counterclockwise (kLeg / kStub allowed).
  static PlaneTree from_rotations(const std::vector<std::vector<int>>& ccw,
                                  std::vector<Color> colors = {});

  int num_nodes() const { return static_cast<int>(slots_.size()); }
  int degree(int u) const { return static_cast<int>(slots_[u].size()); }
  const TreeSlot& slot(int u, int i) const { return slots_[u][i]; }
  int to(int u, int i) const { return slots_[u][i].to; }
  int back(int u, int i) const { return slots_[u][i].back; }
  bool is_leg(int u, int i) const { return slots_[u][i].to == kLeg; }
  bool is_edge(int u, int i) const { return slots_[u][i].to >= 0; }
  int cw(int u, int i) const { return (i + degree(u) - 1) % degree(u); }
  int ccw(int u, int i) const { return (i + 1) % degree(u); }
  int num_legs() const;
  int num_inner_edges() const;

  bool has_colors() const { return !colors_.empty(); }
  Color color(int u) const { return colors_.at(u); }
  const std::vector<Color>& colors() const { return colors_; }

  std::vector<std::vector<int>> rotations() const;

  bool operator==(const PlaneTree& o) const;

 private:
  std::vector<std::vector<TreeSlot>> slots_;
  std::vector<Color> colors_;
};

// A tree with a distinguished root slot. If the root slot is a stub, this is a
// planted tree of the grammar; otherwise a whole tree planted at a half-edge
// or leg.
struct PlantedTree {
  PlaneTree tree;
  int root = 0;
  int root_slot = 0;

  bool is_stub_planted() const { return tree.to(root, root_slot) == kStub; }
  // 'A' iff the root slot is followed clockwise by an inner edge, else 'B'.
  char kind() const;
};

// Text form of 5-regular trees: preorder from the root, slots listed
// clockwise starting at the root slot. The root prints 5 symbols (4 when the
// root slot is a stub, which is left implicit), other nodes print the 4 slots
// after their parent edge. A leg is 'l'.
std::string serialize(const PlantedTree& t);
PlantedTree parse_tree(const std::string& text);

// JSON mirror: {"nodes": [[neighbour or -1, ...], ...]} with neighbours in
// clockwise order, plus optional "colors".
std::string tree_to_json(const PlaneTree& t);
PlaneTree tree_from_json(const std::string& text);

// Lexicographically least serialization over all plantings at a slot.
PlantedTree canonical_planted(const PlaneTree& t);
std::string canonical_string(const PlaneTree& t);

bool is_leg_balanced(const PlaneTree& t);

PlaneTree expand_to_T5c(const PlaneTree& t);
PlaneTree reduce_from_T5c(const PlaneTree& t);
bool check_C1_C2(const PlaneTree& t);

// Corner (u, i) lies between slot i and slot ccw(u, i).
int leg_index(const PlaneTree& t, int u, int i);

// The star with one centre and five neighbours carrying four legs each.
PlaneTree five_star();
PlaneTree single_node();

}  // namespace pentree
