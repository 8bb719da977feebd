#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "pentree/codec.hpp"
#include "pentree/grammar.hpp"
#include "pentree/sampler.hpp"

using namespace pentree;

namespace {

constexpr std::uint8_t b1 = 0, b4 = 3, a8 = 7;

// All preorder subtype lists of planted trees of the given kind with at most
// `budget` nodes.
void grow(std::vector<std::uint8_t>& pre, std::vector<NodeKind>& pending, int budget,
          const std::function<void(const std::vector<std::uint8_t>&)>& emit) {
  if (pending.empty()) {
    emit(pre);
    return;
  }
  if (static_cast<int>(pre.size() + pending.size()) > budget) return;
  const NodeKind kind = pending.back();
  pending.pop_back();
  const int first = kind == NodeKind::kA ? 0 : 8;
  for (int s = first; s < first + 8; ++s) {
    const auto& kids = subtype_children(s);
    pre.push_back(static_cast<std::uint8_t>(s));
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) pending.push_back(*it);
    grow(pre, pending, budget, emit);
    pending.resize(pending.size() - kids.size());
    pre.pop_back();
  }
  pending.push_back(kind);
}

std::vector<PlantedTree> all_a_trees(int max_nodes) {
  std::vector<PlantedTree> out;
  std::vector<std::uint8_t> pre;
  std::vector<NodeKind> pending{NodeKind::kA};
  grow(pre, pending, max_nodes, [&](const std::vector<std::uint8_t>& p) {
    out.push_back(planted_from_preorder(p, NodeKind::kA));
  });
  return out;
}

// The forest condition of the B-word, written out directly.
bool forest_prefixes_ok(const std::vector<int>& b_spots, int s) {
  const int nb = static_cast<int>(b_spots.size());
  int acc = 0;
  for (int i = 1; i < nb; ++i) {
    acc += b_spots[i - 1];
    if (acc <= i + s - nb) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("codec") {
  TEST_CASE("the icosahedron") {
    const PlantedTree a = map_to_a_tree(icosahedron());
    const CodeWords c = classify_nodes(a);
    CHECK(c.w == std::vector<std::uint8_t>{a8});
    CHECK(c.wp == std::vector<std::uint8_t>{b1, b1, b1, b1});
    CHECK(c.compatible());
    CHECK(c.w.size() + c.wp.size() == 5);
    CHECK(preorder_subtypes(decode_words(c)) == preorder_subtypes(a));
    for (PackMode mode : {PackMode::kPacked, PackMode::kEntropy}) {
      const std::string blob = encode_map(icosahedron(), mode);
      CHECK(blob.substr(0, 4) == "P5CT");
      CHECK(static_cast<int>(blob[4]) == 1);
      CHECK(static_cast<int>(blob[5]) == 1);  // n_A
      CHECK(static_cast<int>(blob[6]) == static_cast<int>(mode));
      CHECK(unpack_words(blob) == c);
      const PlaneMap back = decode_map(blob);
      CHECK(sphere_canonical_code(back) == sphere_canonical_code(icosahedron()));
    }
  }

  TEST_CASE("forest condition on a two-letter word") {
    // b4 carries one B-spot, b1 none; one tree from two nodes
    CHECK(forest_prefixes_ok({1, 0}, 1));
    CHECK_FALSE(forest_prefixes_ok({0, 1}, 1));
    // the same situation inside a valid word: a8 followed by four B-trees
    CodeWords good{{a8}, {b1, b1, b1, b4, b1}};
    CodeWords bad{{a8}, {b1, b1, b1, b1, b4}};
    REQUIRE(good.compatible());
    REQUIRE(bad.compatible());
    CHECK(check_lukasiewicz(good).ok());
    const LukasiewiczCheck r = check_lukasiewicz(bad);
    CHECK(r.b_failure == 4);
    CHECK_THROWS_WITH_AS(decode_words(bad), doctest::Contains("prefix 4"), CodecError);
  }

  TEST_CASE("incompatible words are rejected") {
    CodeWords c{{a8}, {b1, b1, b1}};
    CHECK_FALSE(c.compatible());
    CHECK_THROWS_AS(decode_words(c), CodecError);
    CHECK_THROWS_AS(decode_words(CodeWords{{}, {}}), CodecError);
    CHECK_THROWS_AS(decode_words(CodeWords{{9}, {}}), CodecError);
  }

  TEST_CASE("classification and decoding are inverse on random trees") {
    SamplerStream s(BoltzmannContext::singular(), 21);
    for (int size : {5, 9, 30, 100, 1000}) {
      for (int rep = 0; rep < 20; ++rep) {
        const auto pre = s.recursive_tree('A', size);
        const PlantedTree t = planted_from_preorder(pre, NodeKind::kA);
        const CodeWords c = classify_nodes(t);
        CHECK(c.compatible());
        CHECK(static_cast<int>(c.w.size() + c.wp.size()) == size);
        CHECK(check_lukasiewicz(c).ok());
        const PlantedTree back = decode_words(c);
        CHECK(preorder_subtypes(back) == pre);
        CHECK(classify_nodes(back) == c);
      }
    }
  }

  TEST_CASE("fraction of words passing both conditions") {
    // group the trees by letter multiplicities
    std::map<std::pair<std::array<int, 8>, std::array<int, 8>>, CodeWords> classes;
    for (const auto& t : all_a_trees(9)) {
      const CodeWords c = classify_nodes(t);
      classes.emplace(std::make_pair(c.a_counts(), c.b_counts()), c);
    }
    CHECK(classes.size() > 5);
    for (auto [key, c] : classes) {
      std::sort(c.w.begin(), c.w.end());
      std::sort(c.wp.begin(), c.wp.end());
      long long total = 0, pass = 0;
      CodeWords x = c;
      do {
        x.wp = c.wp;
        do {
          ++total;
          pass += check_lukasiewicz(x).ok();
        } while (std::next_permutation(x.wp.begin(), x.wp.end()));
      } while (std::next_permutation(x.w.begin(), x.w.end()));
      const int na = static_cast<int>(c.w.size()), nb = static_cast<int>(c.wp.size());
      const int s = c.b_spots_of_b_nodes();
      // pass / total == (nb - s) / nb * 1 / na
      CHECK(pass * nb * na == total * (nb - s));
    }
  }

  TEST_CASE("packing round trips") {
    SamplerStream s(BoltzmannContext::singular(), 22);
    for (int size : {5, 50, 500}) {
      const CodeWords c = classify_nodes(planted_from_preorder(s.recursive_tree('A', size), NodeKind::kA));
      for (PackMode mode : {PackMode::kPacked, PackMode::kEntropy}) {
        const std::string blob = pack_words(c, mode);
        CHECK(unpack_words(blob) == c);
      }
      const std::size_t packed = symbol_bits(pack_words(c, PackMode::kPacked));
      CHECK(packed >= 3 * static_cast<std::size_t>(size));
      CHECK(packed < 3 * static_cast<std::size_t>(size) + 8);
      const std::size_t coded = symbol_bits(pack_words(c, PackMode::kEntropy));
      CHECK(static_cast<double>(coded) <= multinomial_bits(c) + 40);
    }
  }

  TEST_CASE("varint header") {
    CodeWords c;
    c.w.assign(300, 0);
    const std::string blob = pack_words(c, PackMode::kPacked);
    // 300 = 0b10_0101100 little-endian base 128
    CHECK(static_cast<unsigned char>(blob[5]) == 0xAC);
    CHECK(static_cast<unsigned char>(blob[6]) == 0x02);
    CHECK(unpack_words(blob) == c);
  }

  TEST_CASE("damaged blobs are rejected") {
    const std::string blob = encode_map(icosahedron());
    std::string bad = blob;
    bad[0] = 'Q';
    CHECK_THROWS_AS(unpack_words(bad), CodecError);
    bad = blob;
    bad[4] = 9;
    CHECK_THROWS_AS(unpack_words(bad), CodecError);
    CHECK_THROWS_AS(unpack_words(blob.substr(0, 6)), CodecError);
    CHECK_THROWS_AS(unpack_words(""), CodecError);
  }

  TEST_CASE("map round trips") {
    SamplerStream s(BoltzmannContext::singular(), 23);
    for (int n : {10, 12, 30, 100, 400}) {
      const PlaneMap m = sample_5conn_any(s, n, SizeMode::exact_size()).map;
      for (PackMode mode : {PackMode::kPacked, PackMode::kEntropy}) {
        const std::string blob = encode_map(m, mode);
        const CodeWords c = unpack_words(blob);
        CHECK(static_cast<int>(c.w.size() + c.wp.size()) == m.num_vertices() - 7);
        CHECK(sphere_canonical_code(decode_map(blob)) == sphere_canonical_code(m));
        CHECK(encode_map(m, mode) == blob);
      }
    }
    CHECK_THROWS(encode_map(octahedron()));
    // no 5-connected triangulation has 13 vertices
    CHECK_THROWS_AS(sample_5conn_any(s, 11, SizeMode::exact_size()), SamplerError);
  }

  TEST_CASE("rates") {
    SamplerStream s(BoltzmannContext::singular(), 24);
    const PlaneMap m = sample_5conn_deg5(s, 3000, SizeMode::exact_size()).map;
    const double v = m.num_vertices();
    const std::string packed = encode_map(m, PackMode::kPacked);
    const std::string coded = encode_map(m, PackMode::kEntropy);
    CHECK(symbol_bits(packed) / (v - 7) == doctest::Approx(3.0).epsilon(0.01));
    CHECK(8.0 * coded.size() / v < 2.35);
  }
}
