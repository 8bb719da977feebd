// Opening and closure between quadrangular tree-biorientations and bicolored
// trees, and the resulting bijection between 5c-triangulations and
// leg-balanced 5-regular trees.
#pragma once

#include <stdexcept>
#include <vector>

#include "pentree/orientation.hpp"
#include "pentree/planemap.hpp"
#include "pentree/trees.hpp"

namespace pentree {

class BijectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClosureResult {
  Biorientation bio;
  // Q dart of each tree slot; tree node u is vertex u of Q.
  std::vector<std::vector<int>> dart_of_slot;
  int local_closures = 0;
  int final_closures = 0;
};

// Inner vertices become nodes (in increasing id order), outgoing half-edges
// become slots: 2-way edges give tree edges, 1-way edges give legs.
PlaneTree open_Phi(const Biorientation& y);

// Closure of a bicolored tree with positive excess d into a quadrangular
// dissection of the 2d-gon. Nodes keep their ids; polygon vertices follow.
ClosureResult close_Psi_detailed(const PlaneTree& t);
Biorientation close_Psi(const PlaneTree& t);

PlaneTree map_to_tree(const PlaneMap& m);
// Inner vertices of the result are the tree nodes (same ids); the five outer
// vertices follow. The result is not rooted.
PlaneMap tree_to_map(const PlaneTree& tau);

// Same node ids, same colors, rotations equal up to cyclic shift.
bool same_plane_tree(const PlaneTree& a, const PlaneTree& b);

}  // namespace pentree
