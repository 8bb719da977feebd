#include <doctest.h>

#include <algorithm>
#include <set>

#include "pentree/oracle.hpp"
#include "pentree/trees.hpp"

using namespace pentree;

namespace {

struct BlackTypes {
  int white = 0, edge_leg = 0, edge_edge = 0;
};

BlackTypes black_types(const PlaneTree& t) {
  BlackTypes b;
  for (int u = 0; u < t.num_nodes(); ++u) {
    if (t.color(u) == Color::kWhite) {
      ++b.white;
      continue;
    }
    const int edges = t.is_edge(u, 0) + t.is_edge(u, 1);
    (edges == 2 ? b.edge_edge : b.edge_leg)++;
  }
  return b;
}

// Half-edges of inner edges whose clockwise successor is an inner edge.
int edge_followed_half_edges(const PlaneTree& t) {
  int k = 0;
  for (int u = 0; u < t.num_nodes(); ++u)
    for (int i = 0; i < t.degree(u); ++i)
      if (t.is_edge(u, i) && t.is_edge(u, t.cw(u, i))) ++k;
  return k;
}

std::vector<PlaneTree> small_trees() {
  std::vector<PlaneTree> out;
  for (int n = 1; n <= 8; ++n)
    for (const auto& p : enumerate_trees(n)) out.push_back(p.tree);
  return out;
}

}  // namespace

TEST_SUITE("trees") {
  TEST_CASE("leg-balanced examples") {
    CHECK(is_leg_balanced(single_node()));
    CHECK(is_leg_balanced(five_star()));
    const PlaneTree pair = PlaneTree::from_rotations({{1, kLeg, kLeg, kLeg, kLeg}, {0, kLeg, kLeg, kLeg, kLeg}});
    CHECK_FALSE(is_leg_balanced(pair));
    const PlaneTree bad_degree = PlaneTree::from_rotations({{kLeg, kLeg, kLeg}});
    CHECK_THROWS_AS(is_leg_balanced(bad_degree), TreeError);
  }

  TEST_CASE("leg and edge counts of leg-balanced trees") {
    for (const auto& t : small_trees()) {
      const int n = t.num_nodes();
      CHECK(t.num_legs() == 3 * n + 2);
      CHECK(t.num_inner_edges() == n - 1);
      // one half-edge of each inner edge is followed by a leg
      CHECK(edge_followed_half_edges(t) == n - 1);
    }
  }

  TEST_CASE("expansion of the single node and the star") {
    const PlaneTree one = expand_to_T5c(single_node());
    CHECK(one.num_nodes() == 1);
    CHECK(check_C1_C2(one));
    const PlaneTree star = expand_to_T5c(five_star());
    const BlackTypes b = black_types(star);
    CHECK(b.white == 6);
    CHECK(b.edge_edge == 5);
    CHECK(b.edge_leg == 5);
    CHECK(check_C1_C2(star));
    CHECK(canonical_string(reduce_from_T5c(star)) == canonical_string(five_star()));
  }

  TEST_CASE("moving a mid-edge black node breaks C1/C2") {
    const PlaneTree star = expand_to_T5c(five_star());
    auto rot = star.rotations();
    int moved = 0;
    for (int u = 0; u < star.num_nodes() && !moved; ++u) {
      if (star.color(u) != Color::kBlack || !(star.is_edge(u, 0) && star.is_edge(u, 1))) continue;
      // use the endpoint on a leaf of the star, where the swap keeps the reduced tree
      for (int k = 0; k < 2 && !moved; ++k) {
        const int w = star.to(u, k);
        auto& r = rot[w];
        const auto pos = std::find(r.begin(), r.end(), u) - r.begin();
        const auto prev = (pos + r.size() - 1) % r.size();
        if (r[prev] != kLeg && star.degree(r[prev]) == 2 && star.is_edge(r[prev], 0) && star.is_edge(r[prev], 1))
          continue;
        std::swap(r[pos], r[prev]);
        moved = 1;
      }
    }
    REQUIRE(moved);
    CHECK_FALSE(check_C1_C2(PlaneTree::from_rotations(rot, star.colors())));
  }

  TEST_CASE("expansion round trip and counts on all small trees") {
    for (const auto& t : small_trees()) {
      const PlaneTree x = expand_to_T5c(t);
      const BlackTypes b = black_types(x);
      CHECK(b.white == t.num_nodes());
      CHECK(b.edge_edge == t.num_nodes() - 1);
      CHECK(b.edge_leg == b.edge_edge);
      CHECK(check_C1_C2(x));
      CHECK(canonical_string(reduce_from_T5c(x)) == canonical_string(t));
    }
  }

  TEST_CASE("expansion rejects trees that are not leg-balanced") {
    const PlaneTree pair = PlaneTree::from_rotations({{1, kLeg, kLeg, kLeg, kLeg}, {0, kLeg, kLeg, kLeg, kLeg}});
    CHECK_THROWS_AS(expand_to_T5c(pair), TreeError);
  }

  TEST_CASE("leg-index") {
    const PlaneTree star = five_star();
    for (int i = 0; i < 5; ++i) CHECK(leg_index(star, 0, i) == 1);
    for (const auto& t : small_trees()) {
      int zero = 0;
      for (int u = 0; u < t.num_nodes(); ++u)
        for (int i = 0; i < t.degree(u); ++i) {
          const int li = leg_index(t, u, i);
          CHECK(li >= 0);
          zero += li == 0;
          CHECK((li == 0) == t.is_leg(u, i));
        }
      CHECK(zero == t.num_legs());
    }
    const PlaneTree no_legs = PlaneTree::from_rotations({{1}, {0}});
    CHECK_THROWS_AS(leg_index(no_legs, 0, 0), TreeError);
  }

  TEST_CASE("canonical forms and the text format") {
    CHECK(canonical_string(single_node()) == "(lllll)");
    std::set<std::string> forms;
    for (int u = 0; u < 6; ++u)
      for (int i = 0; i < 5; ++i) forms.insert(serialize(PlantedTree{five_star(), u, i}));
    CHECK(forms.size() > 1);
    for (const auto& f : forms) CHECK(canonical_string(parse_tree(f).tree) == canonical_string(five_star()));
    for (const auto& t : small_trees()) {
      const std::string s = canonical_string(t);
      CHECK(serialize(parse_tree(s)) == s);
      for (int u = 0; u < t.num_nodes(); ++u) {
        const std::string p = serialize(PlantedTree{t, u, 0});
        CHECK(serialize(parse_tree(p)) == p);
      }
      CHECK(canonical_string(tree_from_json(tree_to_json(t))) == s);
    }
  }

  TEST_CASE("parse errors report a position") {
    try {
      parse_tree("(llxll)");
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 3);
    }
    CHECK_THROWS_AS(parse_tree("(llll"), ParseError);
    CHECK_THROWS_AS(parse_tree("(lllll)x"), ParseError);
  }
}
