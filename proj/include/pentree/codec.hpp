// Succinct coding of 5-connected triangulations through planted A-trees and
// pairs of words over the node subtypes.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pentree/planemap.hpp"
#include "pentree/trees.hpp"

namespace pentree {

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// w lists the A-nodes (letters 0..7 for a1..a8), wp the B-nodes (letters
// 0..7 for b1..b8).
struct CodeWords {
  std::vector<std::uint8_t> w, wp;

  std::array<int, 8> a_counts() const;
  std::array<int, 8> b_counts() const;
  // Both counting equations between the letter multiplicities.
  bool compatible() const;
  // Total number of B-spots carried by the B-nodes.
  int b_spots_of_b_nodes() const;
  bool operator==(const CodeWords& o) const { return w == o.w && wp == o.wp; }
};

CodeWords classify_nodes(const PlantedTree& t);

struct LukasiewiczCheck {
  int b_failure = -1;  // first prefix length i violating the B-forest condition
  int a_failure = -1;  // first i violating the A-aggregation condition
  bool ok() const { return b_failure < 0 && a_failure < 0; }
};
LukasiewiczCheck check_lukasiewicz(const CodeWords& c);

// Inverse of classify_nodes; nodes of the result are numbered in preorder.
PlantedTree decode_words(const CodeWords& c);

enum class PackMode : std::uint8_t { kPacked = 0, kEntropy = 1 };

inline constexpr std::uint8_t kBlobVersion = 1;

std::string pack_words(const CodeWords& c, PackMode mode);
CodeWords unpack_words(const std::string& blob);
// Bits of the blob after all headers (the coded symbols only).
std::size_t symbol_bits(const std::string& blob);

// log2 of the multinomial coefficients of w and wp.
double multinomial_bits(const CodeWords& c);

// The A-tree of a 5-connected triangulation: delete the lowest-id vertex of
// degree 5, open the resulting 5c-triangulation into a tree and cut off the
// lowest-id node with a single inner edge.
PlantedTree map_to_a_tree(const PlaneMap& m);
// Inverse up to isomorphism of the unrooted sphere map.
PlaneMap a_tree_to_map(const PlantedTree& a);

std::string encode_map(const PlaneMap& m, PackMode mode = PackMode::kEntropy);
PlaneMap decode_map(const std::string& blob);

}  // namespace pentree
