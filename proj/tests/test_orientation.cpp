#include <doctest.h>

#include <algorithm>
#include <queue>

#include "pentree/bijection.hpp"
#include "pentree/oracle.hpp"
#include "pentree/orientation.hpp"
#include "pentree/planemap.hpp"
#include "pentree/sampler.hpp"

using namespace pentree;

namespace {

int center_of_w5(const PlaneMap& q) {
  const auto outer = q.outer_vertex_mask();
  for (int v = 0; v < q.num_vertices(); ++v)
    if (!outer[v] && q.color(v) == Color::kWhite) return v;
  return -1;
}

std::vector<PlaneMap> small_angular_maps() {
  std::vector<PlaneMap> out;
  for (int n = 1; n <= 8; ++n)
    for (const auto& p : enumerate_trees(n)) out.push_back(angular_map(tree_to_map(p.tree)));
  return out;
}

std::vector<int> outdegrees(const Biorientation& x) {
  std::vector<int> d(x.map.num_vertices());
  for (int v = 0; v < x.map.num_vertices(); ++v) d[v] = x.outdegree(v);
  return d;
}

// A 5c-like triangulation of the pentagon whose vertex x (5) has degree 4,
// so its link 0-1-2-a is a separating 4-cycle.
PlaneMap with_separating_quadrangle() {
  const int x = 5, a = 6;
  return PlaneMap::from_faces(
      7, {{4, 3, 2, 1, 0}, {0, 1, x}, {1, 2, x}, {2, a, x}, {a, 0, x}, {2, 3, a}, {3, 4, a}, {4, 0, a}}, 0);
}

// Path of 2-way edges from u to v as darts, by BFS.
std::vector<int> tree_path(const Biorientation& y, int u, int v) {
  const PlaneMap& q = y.map;
  std::vector<int> via(q.num_vertices(), -2);
  std::queue<int> todo;
  via[u] = -1;
  todo.push(u);
  while (!todo.empty()) {
    const int w = todo.front();
    todo.pop();
    for (int d : q.out_darts(w))
      if (y.two_way(d) && via[q.head(d)] == -2) {
        via[q.head(d)] = d;
        todo.push(q.head(d));
      }
  }
  std::vector<int> path;
  for (int w = v; w != u; w = q.tail(via[w])) {
    REQUIRE(via[w] >= 0);
    path.push_back(via[w]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TEST_SUITE("orientation") {
  TEST_CASE("regular orientation of the angular map of W5") {
    const PlaneMap q = angular_map(wheel_w5());
    const int b5 = default_b5(q);
    const auto alpha = regular_alpha(q, b5);
    const Biorientation x = compute_alpha_orientation(q, alpha);
    CHECK(x.outdegree(center_of_w5(q)) == 4);
    CHECK(x.outdegree(b5) == 1);
    CHECK(outdegrees(x) == alpha);
    for (int d = 0; d < q.num_darts(); ++d)
      if (q.is_inner_edge(d)) CHECK(x.one_way(d));
  }

  TEST_CASE("alpha with the wrong sum is rejected") {
    const PlaneMap q = angular_map(wheel_w5());
    auto alpha = regular_alpha(q, default_b5(q));
    --alpha[center_of_w5(q)];
    CHECK_THROWS_AS(compute_alpha_orientation(q, alpha), OrientationError);
  }

  TEST_CASE("alpha-orientations exist on all small instances") {
    for (const auto& q : small_angular_maps()) {
      const auto alpha = regular_alpha(q, default_b5(q));
      CHECK(outdegrees(compute_alpha_orientation(q, alpha)) == alpha);
    }
  }

  TEST_CASE("rerooting") {
    const PlaneMap q = angular_map(wheel_w5());
    const int b5 = default_b5(q);
    const Biorientation x = compute_alpha_orientation(q, regular_alpha(q, b5));
    CHECK(reroot_to(x, b5).out == x.out);
    const auto outer = q.outer_vertex_mask();
    for (int v = 0; v < q.num_vertices(); ++v) {
      if (!outer[v] || q.color(v) != Color::kBlack || v == b5) continue;
      const Biorientation other = compute_alpha_orientation(q, regular_alpha(q, v));
      const Biorientation back = reroot_to(other, b5);
      auto expected = outdegrees(other);
      std::swap(expected[v], expected[b5]);
      CHECK(outdegrees(back) == expected);
    }
    for (const auto& m : small_angular_maps()) {
      const int r = default_b5(m);
      for (int v = 0; v < m.num_vertices(); ++v)
        if (m.outer_vertex_mask()[v] && m.color(v) == Color::kBlack && v != r)
          CHECK_NOTHROW(reroot_to(compute_alpha_orientation(m, regular_alpha(m, v)), r));
    }
  }

  TEST_CASE("minimization removes clockwise circuits and keeps outdegrees") {
    int moved = 0;
    for (const auto& q : small_angular_maps()) {
      const int b5 = default_b5(q);
      const Biorientation x = reroot_to(compute_alpha_orientation(q, regular_alpha(q, b5)), b5);
      const Biorientation x0 = minimize_orientation(x);
      CHECK(outdegrees(x0) == outdegrees(x));
      CHECK(exhaustive_cycle_check(x0));
      const auto p = minimization_potential(x0);
      CHECK(std::all_of(p.begin(), p.end(), [](int v) { return v == 0; }));
      CHECK(minimize_orientation(x0).out == x0.out);
      moved += x0.out != x.out;
    }
    CHECK(moved > 0);
  }

  TEST_CASE("left co-accessibility trees") {
    for (const auto& q : small_angular_maps()) {
      const int b5 = default_b5(q);
      const Biorientation x0 = minimize_orientation(reroot_to(compute_alpha_orientation(q, regular_alpha(q, b5)), b5));
      const CoaccessTree t = left_coaccessibility_tree(x0, b5);
      CHECK(external_edges_ccw(x0, t));
      CHECK(external_edges_ccw_by_cycles(x0, t));
      const CoaccessTree s = left_tree_by_swaps(x0, b5);
      CHECK(s.parent_dart == t.parent_dart);
    }
  }

  TEST_CASE("5c-biorientation of the angular map of W5") {
    const PlaneMap q = angular_map(wheel_w5());
    const Biorientation y = build_5c_biorientation(q);
    const int c = center_of_w5(q);
    CHECK(y.outdegree(c) == 5);
    int two_way = 0;
    for (int d = 0; d < q.num_darts(); ++d) two_way += y.two_way(d);
    CHECK(two_way == 0);
    for (int d : q.out_darts(c)) CHECK(y.out[d]);
    CHECK(exhaustive_cycle_check(y));
  }

  TEST_CASE("5c-biorientations pass the audit and the circuit check") {
    for (const auto& q : small_angular_maps()) {
      const Biorientation y = build_5c_biorientation(q);
      CHECK_NOTHROW(audit_5c_biorientation(y));
      CHECK(exhaustive_cycle_check(y));
      int inner = 0, two_way = 0;
      for (bool o : q.outer_vertex_mask()) inner += !o;
      for (int d = 0; d < q.num_darts(); ++d) two_way += y.two_way(d);
      CHECK(two_way / 2 == inner - 1);
    }
  }

  TEST_CASE("1-way edges have the interior of their cycle on the left") {
    SamplerStream s(BoltzmannContext::singular(), 3);
    for (int n : {8, 12, 20}) {
      const PlaneMap q = angular_map(sample_5c(s, n, SizeMode::exact_size()));
      const Biorientation y = build_5c_biorientation(q);
      const auto outer = q.outer_vertex_mask();
      for (int d = 0; d < q.num_darts(); ++d) {
        if (!y.out[d] || y.two_way(d) || outer[q.tail(d)] || outer[q.head(d)]) continue;
        std::vector<int> cycle{d};
        for (int e : tree_path(y, q.head(d), q.tail(d))) cycle.push_back(e);
        CHECK(cycle_interior(q, cycle).orientation == Orientation::kCounterclockwise);
      }
    }
  }

  TEST_CASE("a reversed edge creates a detectable clockwise circuit") {
    const PlaneMap q = angular_map(icosahedron_minus_vertex());
    const Biorientation y = build_5c_biorientation(q);
    const auto outer = q.outer_vertex_mask();
    int found = 0;
    for (int d = 0; d < q.num_darts() && !found; ++d) {
      if (!y.out[d] || y.two_way(d) || outer[q.tail(d)] || outer[q.head(d)]) continue;
      std::vector<int> cycle{d};
      for (int e : tree_path(y, q.head(d), q.tail(d))) cycle.push_back(e);
      // reversing d turns its counterclockwise cycle into a clockwise one
      Biorientation z = y;
      z.out[d] = 0;
      z.out[q.twin(d)] = 1;
      CHECK_FALSE(exhaustive_cycle_check(z));
      found = 1;
    }
    CHECK(found);
  }

  TEST_CASE("separating quadrangle has no 5c-biorientation") {
    const PlaneMap m = with_separating_quadrangle();
    CHECK_FALSE(is_5c(m));
    CHECK(separating_cycles(m, 4).size() == 1);
    CHECK_THROWS_AS(build_5c_biorientation(angular_map(m)), OrientationError);
  }

  TEST_CASE("biorientation JSON round trip") {
    const Biorientation y = build_5c_biorientation(angular_map(icosahedron_minus_vertex()));
    const Biorientation z = biorientation_from_json(biorientation_to_json(y));
    CHECK(z.out == y.out);
    CHECK_NOTHROW(audit_5c_biorientation(z));
  }
}
