// Brute-force ground truth at small sizes.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pentree/orientation.hpp"
#include "pentree/planemap.hpp"
#include "pentree/trees.hpp"

namespace pentree {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kOracleMaxN = 8;

// All leg-balanced 5-regular plane trees with n nodes up to isomorphism, each
// given in canonical planting, sorted by canonical string.
std::vector<PlantedTree> enumerate_trees(int n, int max_n = kOracleMaxN);

// Number of (tree, marked inner edge) pairs up to isomorphism.
long long count_marked_edges(const std::vector<PlantedTree>& trees);

// Rooted 5c-triangulations with n inner vertices, one per isomorphism class.
std::vector<PlaneMap> enumerate_rooted_maps(int n, int max_n = kOracleMaxN);

// Outer vertices v1..v5 of degree 3, as a 5-bit mask (bit i for v_{i+1}).
unsigned degree_three_mask(const PlaneMap& rooted);

struct FXCounts {
  int n = 0;
  std::array<long long, 32> by_set{};
  long long total = 0;
};
FXCounts classify_FX(int n, int max_n = kOracleMaxN);
bool has_adjacent_pair(unsigned mask);

// True iff no simple directed circuit of y (2-way edges usable both ways)
// is clockwise. Throws OracleError when more than cycle_cap circuits exist.
bool exhaustive_cycle_check(const Biorientation& y, long long cycle_cap = 2000000);

struct LegIndexReport {
  long long corners = 0;
  long long empty_sectors = 0;     // corners with leg-index < 3
  long long black_nonempty = 0;    // black corners with leg-index >= 3
  long long outer_black = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
// Checks on the closure of a bicolored tree of excess 5: corners of
// leg-index < 3 give empty sectors, black corners of leg-index >= 3 give
// non-empty sectors, and every outer black vertex has positive indegree.
LegIndexReport check_leg_index_lemmas(const PlaneTree& t);

struct BruteForceResult {
  long long degree_solutions = 0;  // biorientations with the degree spec
  long long tree_solutions = 0;    // of which minimal with 2-way edges a tree
  std::vector<std::uint8_t> found;  // out flags of the last minimal one
};
// Every biorientation of the inner edges of q with no 0-way edge, outer
// outdegree 0, inner white outdegree 5 and inner black outdegree 2.
BruteForceResult brute_force_5c_biorientations(const PlaneMap& q, long long cap = 50000000);

struct BijectionReport {
  int n = 0;
  long long trees = 0, marked_edges = 0, rooted_maps = 0, corners = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
// For every tree with n nodes: the image is 5c, maps back to the same tree,
// and passes the leg-index checks; every rooted map with n inner vertices
// survives the opposite round trip.
BijectionReport check_bijection(int n, int max_n = kOracleMaxN);

struct UniquenessReport {
  int n = 0;
  long long instances = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
// Brute force over the angular maps of all 5c-triangulations with n inner
// vertices: exactly one minimal tree-biorientation, equal to the built one.
UniquenessReport check_orientation_uniqueness(int n, int max_n = 6);

}  // namespace pentree
