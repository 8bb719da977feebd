// Biorientations of plane maps: regular orientations, minimization, the left
// co-accessibility tree and the 5c-biorientation of an angular map.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pentree/planemap.hpp"

namespace pentree {

class OrientationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Biorientation {
  PlaneMap map;
  std::vector<std::uint8_t> out;  // out[d] = 1 iff d is outgoing at tail(d)
  std::optional<int> root;

  int outdegree(int v) const;
  bool two_way(int d) const { return out[d] && out[map.twin(d)]; }
  bool one_way(int d) const { return out[d] != out[map.twin(d)]; }
};

// Tree on a subset of vertices given by the dart from each vertex's parent.
struct CoaccessTree {
  int root = -1;
  std::vector<int> parent_dart;  // -1 for the root and for vertices off the tree
};

// Regular orientation degrees: inner white 4, inner black 1, root 1, other
// outer vertices 0.
std::vector<int> regular_alpha(const PlaneMap& q, int root);

Biorientation compute_alpha_orientation(const PlaneMap& q, const std::vector<int>& alpha);
Biorientation reroot_to(const Biorientation& x, int b5);
Biorientation minimize_orientation(const Biorientation& x);
// Face potentials of the minimization (0 everywhere iff x is minimal).
std::vector<int> minimization_potential(const Biorientation& x);

// Depth-first search from b5 over outgoing darts, scanning each vertex
// clockwise from its parent edge, restricted to b5 and the inner vertices.
CoaccessTree left_coaccessibility_tree(const Biorientation& x0, int b5);
// Reference construction: parent swaps from a BFS tree while some external
// edge closes a clockwise cycle. Capped at 10 * edges^2 swaps.
CoaccessTree left_tree_by_swaps(const Biorientation& x0, int b5);

// Every external edge counterclockwise, via positions along the tree contour.
bool external_edges_ccw(const Biorientation& x0, const CoaccessTree& tree);
// Same predicate, via cycle_interior on every fundamental cycle.
bool external_edges_ccw_by_cycles(const Biorientation& x0, const CoaccessTree& tree);

// Default b5: the first black vertex along the outer face.
int default_b5(const PlaneMap& q);

Biorientation build_5c_biorientation(const PlaneMap& q, std::optional<int> b5 = std::nullopt);

// Throws OrientationError unless x is admissible, has the 5c outdegrees and
// its 2-way edges form a spanning tree of the inner vertices.
void audit_5c_biorientation(const Biorientation& x);

std::string biorientation_to_json(const Biorientation& x);
Biorientation biorientation_from_json(const std::string& text);

}  // namespace pentree
