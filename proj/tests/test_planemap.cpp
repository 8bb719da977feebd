#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "pentree/bijection.hpp"
#include "pentree/map_io.hpp"
#include "pentree/planemap.hpp"
#include "pentree/sampler.hpp"
#include "support.hpp"

using namespace pentree;

namespace {

void check_counts(const PlaneMap& m) {
  int deg_sum = 0;
  for (int v = 0; v < m.num_vertices(); ++v) deg_sum += m.degree(v);
  CHECK(deg_sum == 2 * m.num_edges());
  CHECK(m.num_vertices() - m.num_edges() + m.num_faces() == 2);
}

// Relabels darts and vertices by random permutations.
PlaneMap relabel(const PlaneMap& m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<int> dp(m.num_darts()), vp(m.num_vertices());
  std::iota(dp.begin(), dp.end(), 0);
  std::iota(vp.begin(), vp.end(), 0);
  std::shuffle(dp.begin(), dp.end(), gen);
  std::shuffle(vp.begin(), vp.end(), gen);
  std::vector<DartRecord> darts(m.num_darts());
  for (int d = 0; d < m.num_darts(); ++d)
    darts[dp[d]] = DartRecord{dp[m.twin(d)], dp[m.next(d)], vp[m.tail(d)]};
  std::optional<int> root;
  if (m.root_dart()) root = dp[*m.root_dart()];
  std::vector<Color> colors;
  if (m.has_colors()) {
    colors.resize(m.num_vertices());
    for (int v = 0; v < m.num_vertices(); ++v) colors[vp[v]] = m.color(v);
  }
  return PlaneMap::from_darts(darts, dp[m.face_dart(m.outer_face())], root, colors);
}

}  // namespace

TEST_SUITE("planemap") {
  TEST_CASE("built maps satisfy Euler and the handshake") {
    const PlaneMap w5 = wheel_w5();
    CHECK(w5.num_vertices() == 6);
    CHECK(w5.num_edges() == 10);
    CHECK(w5.num_faces() == 6);
    const PlaneMap ico = icosahedron();
    CHECK(ico.num_vertices() == 12);
    CHECK(ico.num_edges() == 30);
    CHECK(ico.num_faces() == 20);
    for (const auto& m : {w5, ico, octahedron(), icosahedron_minus_vertex()}) check_counts(m);
  }

  TEST_CASE("bad dart tables are rejected") {
    std::vector<DartRecord> loop{{0, 1, 0}, {0, 0, 0}};
    CHECK_THROWS_WITH_AS(PlaneMap::from_darts(loop, 0), doctest::Contains("twin not fixed-point-free"), MapError);
    std::vector<DartRecord> odd{{1, 0, 0}};
    CHECK_THROWS_AS(PlaneMap::from_darts(odd, 0), MapError);
    // two disjoint edges
    std::vector<DartRecord> two{{1, 0, 0}, {0, 1, 1}, {3, 2, 2}, {2, 3, 3}};
    CHECK_THROWS_AS(PlaneMap::from_darts(two, 0), MapError);
    CHECK_THROWS_AS(PlaneMap::from_darts(wheel_w5().darts(), 999), MapError);
  }

  TEST_CASE("cycle orientation of the outer pentagon") {
    const PlaneMap w5 = wheel_w5();
    std::vector<int> ccw, cw;
    for (int i = 0; i < 5; ++i) {
      ccw.push_back(w5.find_dart((i + 1) % 5, i));
      cw.push_back(w5.find_dart(i, (i + 1) % 5));
    }
    std::reverse(ccw.begin(), ccw.end());
    const CycleRef a = cycle_interior(w5, ccw);
    CHECK(a.orientation == Orientation::kCounterclockwise);
    CHECK(a.interior_faces.size() == 5);
    const CycleRef b = cycle_interior(w5, cw);
    CHECK(b.orientation == Orientation::kClockwise);
    CHECK(b.interior_faces == a.interior_faces);
  }

  TEST_CASE("octahedron equator encloses four faces") {
    const PlaneMap oct = octahedron();
    std::vector<int> eq;
    for (int i = 0; i < 4; ++i) eq.push_back(oct.find_dart(1 + i, 1 + (i + 1) % 4));
    const CycleRef c = cycle_interior(oct, eq);
    const auto outside = testsupport::faces_outside(oct, eq);
    CHECK(c.interior_faces.size() == 4);
    CHECK(static_cast<int>(outside.size()) == oct.num_faces() - 4);
    for (int f : c.interior_faces) CHECK(outside.count(f) == 0);
    std::vector<int> rev;
    for (auto it = eq.rbegin(); it != eq.rend(); ++it) rev.push_back(oct.twin(*it));
    CHECK(cycle_interior(oct, rev).orientation != c.orientation);
  }

  TEST_CASE("non-simple walks are rejected") {
    const PlaneMap w5 = wheel_w5();
    const int a = w5.find_dart(0, 1), b = w5.find_dart(1, 0);
    CHECK_THROWS_AS(cycle_interior(w5, {a, b}), MapError);
  }

  TEST_CASE("separating cycles against brute force") {
    CHECK(separating_cycles(icosahedron(), 3).empty());
    CHECK(separating_cycles(icosahedron(), 4).empty());
    CHECK(separating_cycles(wheel_w5(), 3).empty());
    const int oct4 = testsupport::count_separating_cycles(octahedron(), 4);
    CHECK(oct4 == 3);
    CHECK(static_cast<int>(separating_cycles(octahedron(), 4).size()) == oct4);
    SamplerStream s(BoltzmannContext::singular(), 7);
    for (int i = 0; i < 5; ++i) {
      const PlaneMap m = sample_5c(s, 9, SizeMode::exact_size());
      for (int k : {3, 4})
        CHECK(static_cast<int>(separating_cycles(m, k).size()) == testsupport::count_separating_cycles(m, k));
    }
  }

  TEST_CASE("5c recognition") {
    CHECK(is_5c(wheel_w5()));
    CHECK(is_5c(icosahedron_minus_vertex()));
    // pentagon with one chord: a triangle and a quadrangle
    const PlaneMap chord = PlaneMap::from_faces(5, {{4, 3, 2, 1, 0}, {0, 1, 2}, {0, 2, 3, 4}}, 0);
    CHECK_FALSE(is_5c(chord));
    CHECK(is_5c_exhaustive(icosahedron_minus_vertex()));
  }

  TEST_CASE("angular map of W5") {
    const PlaneMap q = angular_map(wheel_w5());
    CHECK(q.num_vertices() == 11);
    CHECK(q.num_edges() == 15);
    CHECK(q.face_degree(q.outer_face()) == 10);
    int inner = 0;
    for (int d = 0; d < q.num_darts(); ++d) inner += q.is_inner_edge(d);
    CHECK(inner / 2 == 5);
    CHECK(unrooted_canonical_code(inverse_angular(q)) == unrooted_canonical_code(wheel_w5()));
    for (int d = 0; d < q.num_darts(); ++d) CHECK(q.color(q.tail(d)) != q.color(q.head(d)));
  }

  TEST_CASE("angular map rejects a face on two outer edges") {
    // triangle v0 v1 v2 uses two outer edges of the pentagon
    const PlaneMap bad = PlaneMap::from_faces(5, {{4, 3, 2, 1, 0}, {0, 1, 2}, {0, 2, 3}, {0, 3, 4}}, 0);
    CHECK_THROWS_AS(angular_map(bad), MapError);
  }

  TEST_CASE("angular round trip on small 5c maps") {
    SamplerStream s(BoltzmannContext::singular(), 11);
    for (int n : {7, 8, 10, 15}) {
      const PlaneMap m = sample_5c(s, n, SizeMode::exact_size());
      CHECK(unrooted_canonical_code(inverse_angular(angular_map(m))) == unrooted_canonical_code(m));
    }
  }

  TEST_CASE("apex augmentation") {
    const PlaneMap m = icosahedron_minus_vertex();
    const Augmented a = augment_apex(root_at_outer_vertex(m, m.outer_vertices().front()));
    CHECK(a.five_connected);
    CHECK(sphere_canonical_code(a.map) == sphere_canonical_code(icosahedron()));
    CHECK(unrooted_canonical_code(delete_apex(a.map)) == unrooted_canonical_code(m));
    const Augmented w = augment_apex(wheel_w5());
    CHECK_FALSE(w.five_connected);
    CHECK_FALSE(is_5connected_triangulation(w.map));
  }

  TEST_CASE("shelling outer degree-3 vertices") {
    const PlaneMap m = icosahedron_minus_vertex();
    CHECK(canonical_code(shell_outer_deg3(m)) == canonical_code(m));
    CHECK_THROWS(shell_outer_deg3(wheel_w5()));
    SamplerStream s(BoltzmannContext::singular(), 5);
    double loss = 0;
    const int runs = 40;
    for (int i = 0; i < runs; ++i) {
      const PlaneMap x = sample_5c(s, 60, SizeMode::exact_size());
      const PlaneMap y = shell_outer_deg3(x);
      CHECK(is_5c(y));
      CHECK_FALSE(has_outer_degree3(y));
      CHECK(augment_apex(y).five_connected);
      loss += x.num_vertices() - y.num_vertices();
    }
    CHECK(loss / runs < 10.0);
  }

  TEST_CASE("covering an outer vertex by a degree-3 vertex is undone by shelling") {
    const PlaneMap m = icosahedron_minus_vertex();
    const auto v = outer_contour(m);
    // a new vertex x outside v1, adjacent to v5, v1 and v2
    std::vector<std::vector<int>> faces;
    for (int f = 0; f < m.num_faces(); ++f)
      if (!m.is_outer_face(f)) faces.push_back(m.face_vertices(f));
    const int x = m.num_vertices();
    faces.push_back({v[1], v[0], x});
    faces.push_back({v[0], v[4], x});
    faces.push_back({v[1], x, v[4], v[3], v[2]});
    const PlaneMap covered = PlaneMap::from_faces(x + 1, faces, static_cast<int>(faces.size()) - 1);
    CHECK(is_5c(covered));
    CHECK(unrooted_canonical_code(shell_outer_deg3(root_at_outer_vertex(covered, x))) == unrooted_canonical_code(m));
  }

  TEST_CASE("canonical codes") {
    const PlaneMap w5 = wheel_w5();
    CHECK(canonical_code(relabel(w5, 1)) == canonical_code(w5));
    CHECK(canonical_code(relabel(w5, 2)) == canonical_code(relabel(w5, 3)));
    const PlaneMap m = icosahedron_minus_vertex();
    CHECK(unrooted_canonical_code(w5) != unrooted_canonical_code(m));
    std::set<std::string> codes;
    for (int v : m.outer_vertices()) codes.insert(canonical_code(root_at_outer_vertex(m, v)));
    CHECK(codes.size() == 1);
    CHECK(sphere_canonical_code(relabel(icosahedron(), 9)) == sphere_canonical_code(icosahedron()));
    CHECK(sphere_canonical_code(icosahedron()) != sphere_canonical_code(octahedron()));
  }

  TEST_CASE("map JSON round trip") {
    const PlaneMap q = angular_map(icosahedron_minus_vertex());
    const PlaneMap back = map_from_json(map_to_json(q));
    CHECK(back.darts().size() == q.darts().size());
    CHECK(map_to_json(back) == map_to_json(q));
    CHECK(map_to_dot(q).find("graph") != std::string::npos);
  }
}
