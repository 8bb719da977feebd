// Subtypes of nodes in planted leg-balanced trees.
//
// A node of a planted tree has four slots after its parent edge, read
// clockwise: c1 c2 c3 c4. Each slot holds a subtree ('S') or a leg ('L'). The
// node is an A-node when c1 holds a subtree and a B-node otherwise; the 16
// patterns give the 16 subtypes a1..a8 (ids 0..7) and b1..b8 (ids 8..15):
//
//   a1 SLLL  a2 SLSL  a3 SSLL  a4 SLLS  a5 SSSL  a6 SSLS  a7 SLSS  a8 SSSS
//   b1 LLLL  b2 LSLL  b3 LLSL  b4 LLLS  b5 LSSL  b6 LSLS  b7 LLSS  b8 LSSS
//
// A subtree in slot ci is an A-tree when c(i+1) is a leg and a B-tree when
// c(i+1) is a subtree or i = 4, which makes the whole tree leg-balanced.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pentree/trees.hpp"

namespace pentree {

enum class NodeKind : std::uint8_t { kA = 0, kB = 1 };

inline constexpr int kNumSubtypes = 16;

// Pattern c1..c4 of a subtype.
const char* subtype_pattern(int subtype);
std::string subtype_name(int subtype);
inline NodeKind subtype_kind(int subtype) { return subtype < 8 ? NodeKind::kA : NodeKind::kB; }
// Kinds of the children of a subtype, in slot order c1..c4.
const std::vector<NodeKind>& subtype_children(int subtype);
// Subtype of a pattern given as a 4-bit mask (bit i set iff c(i+1) is 'S').
int subtype_of_mask(unsigned mask);

// Stub-planted tree from the preorder list of subtypes (children visited in
// slot order). Node ids follow the preorder. Throws TreeError when the list
// does not describe exactly one tree of the requested root kind.
PlantedTree planted_from_preorder(const std::vector<std::uint8_t>& pre, NodeKind root_kind);
// Inverse of planted_from_preorder for a stub-planted tree.
std::vector<std::uint8_t> preorder_subtypes(const PlantedTree& t);
// Tree obtained by gluing an A-tree and a B-tree at their stubs. The nodes of
// the A-tree come first, then those of the B-tree.
PlaneTree join_preorders(const std::vector<std::uint8_t>& a_pre, const std::vector<std::uint8_t>& b_pre);

}  // namespace pentree
