// Dart-based plane maps.
//
// Conventions used throughout the library:
//   next(d)   the dart following d counterclockwise around tail(d)
//   face(d)   the orbit of d under d -> next(twin(d)); this is the face on the
//             right of d when d is read as an arrow tail -> head
// Inner faces are therefore walked clockwise and the outer face walks the
// outer contour counterclockwise.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pentree {

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Color : std::uint8_t { kWhite = 0, kBlack = 1 };

struct DartRecord {
  int twin = -1;
  int next = -1;
  int tail = -1;
};

class PlaneMap {
 public:
  PlaneMap() = default;

  // Validates the dart table (involution, permutation, connectivity,
  // simplicity, Euler). colors may be empty.
  static PlaneMap from_darts(std::vector<DartRecord> darts, int outer_face_dart,
                             std::optional<int> root_dart = std::nullopt,
                             std::vector<Color> colors = {});

  // Each face is a vertex cycle read with the face on the right of its darts.
  // faces[outer_index] becomes the outer face. Vertices are 0..num_vertices-1.
  static PlaneMap from_faces(int num_vertices,
                             const std::vector<std::vector<int>>& faces,
                             int outer_index,
                             std::vector<Color> colors = {});

  int num_darts() const { return static_cast<int>(darts_.size()); }
  int num_edges() const { return num_darts() / 2; }
  int num_vertices() const { return static_cast<int>(vertex_dart_.size()); }
  int num_faces() const { return static_cast<int>(face_dart_.size()); }

  int twin(int d) const { return darts_[d].twin; }
  int next(int d) const { return darts_[d].next; }
  int prev(int d) const { return prev_[d]; }
  int tail(int d) const { return darts_[d].tail; }
  int head(int d) const { return darts_[darts_[d].twin].tail; }
  // Successor of d along its face.
  int face_next(int d) const { return darts_[darts_[d].twin].next; }
  int face(int d) const { return face_of_[d]; }
  int outer_face() const { return outer_face_; }
  bool is_outer_face(int f) const { return f == outer_face_; }
  int face_dart(int f) const { return face_dart_[f]; }
  int vertex_dart(int v) const { return vertex_dart_[v]; }
  int degree(int v) const { return degree_[v]; }
  int face_degree(int f) const;

  const std::vector<DartRecord>& darts() const { return darts_; }
  std::optional<int> root_dart() const { return root_; }
  int root_vertex() const;
  PlaneMap with_root(std::optional<int> root_dart) const;

  bool has_colors() const { return !colors_.empty(); }
  Color color(int v) const { return colors_.at(v); }
  const std::vector<Color>& colors() const { return colors_; }

  // Darts out of v in counterclockwise order starting at vertex_dart(v).
  std::vector<int> out_darts(int v) const;
  // Darts of face f in orbit order starting at face_dart(f).
  std::vector<int> face_darts(int f) const;
  // Tails of the darts of face f in orbit order.
  std::vector<int> face_vertices(int f) const;
  // All faces as vertex cycles, indexed by face id.
  std::vector<std::vector<int>> face_lists() const;
  std::vector<int> outer_vertices() const;
  std::vector<bool> outer_vertex_mask() const;
  // True iff both sides of the edge of d are inner faces.
  bool is_inner_edge(int d) const {
    return face_of_[d] != outer_face_ && face_of_[darts_[d].twin] != outer_face_;
  }
  // Dart u -> v or -1. O(deg u).
  int find_dart(int u, int v) const;

 private:
  void index();

  std::vector<DartRecord> darts_;
  std::vector<int> prev_;
  std::vector<int> face_of_;
  std::vector<int> face_dart_;
  std::vector<int> vertex_dart_;
  std::vector<int> degree_;
  std::vector<Color> colors_;
  int outer_face_ = -1;
  std::optional<int> root_;
};

enum class Orientation { kClockwise, kCounterclockwise };

struct CycleRef {
  std::vector<int> darts;
  std::vector<int> interior_faces;  // sorted
  Orientation orientation = Orientation::kClockwise;
};

CycleRef cycle_interior(const PlaneMap& map, const std::vector<int>& cycle);

// Vertices strictly inside a cycle (incident to an interior face, not on the
// cycle).
std::vector<int> cycle_inside_vertices(const PlaneMap& map, const CycleRef& cycle);

// Exhaustive search over simple k-cycles, k in {3, 4}.
std::vector<CycleRef> separating_cycles(const PlaneMap& map, int k);

// Triangular dissection of a simple 5-gon with no separating 3- or 4-cycle.
bool is_5c(const PlaneMap& map);
// Same test through exhaustive cycle search; slow, used for cross-checks.
bool is_5c_exhaustive(const PlaneMap& map);
// Triangulation of the sphere (outer face included) with no separating 3- or
// 4-cycle, i.e. 5-connected when it has at least 7 vertices.
bool is_5connected_triangulation(const PlaneMap& map);

// Inserts a black vertex per inner face. Inner face i of M (in face id order,
// skipping the outer face) becomes black vertex num_vertices(M) + i.
PlaneMap angular_map(const PlaneMap& m);
PlaneMap inverse_angular(const PlaneMap& q);

// Outer contour v1..v5 of a rooted dissection with root dart v1 -> v2 and an
// inner face on the right of each v_i -> v_{i+1}.
std::vector<int> outer_contour(const PlaneMap& m);

struct Augmented {
  PlaneMap map;
  bool five_connected = false;
};

Augmented augment_apex(const PlaneMap& m);
PlaneMap delete_apex(const PlaneMap& t);

// Repeatedly deletes outer degree-3 vertices.
PlaneMap shell_outer_deg3(const PlaneMap& m);

// Re-roots a dissection at the contour dart leaving vertex v.
PlaneMap root_at_outer_vertex(const PlaneMap& m, int v);

// Rooted code (rooted isomorphism invariant, complete).
std::string canonical_code(const PlaneMap& map, int root_dart);
std::string canonical_code(const PlaneMap& map);
// Minimum over rootings at outer corners.
std::string unrooted_canonical_code(const PlaneMap& map);
// Isomorphism of the underlying sphere map, ignoring outer face and root.
std::string sphere_canonical_code(const PlaneMap& map);

// Built-in instances.
PlaneMap wheel_w5();
PlaneMap icosahedron();
PlaneMap octahedron();
// Icosahedron with one vertex deleted, rooted.
PlaneMap icosahedron_minus_vertex();

}  // namespace pentree
