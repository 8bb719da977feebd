#include "pentree/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "pentree/bijection.hpp"

namespace pentree {

namespace {

void require_cap(int n, int max_n) {
  if (n < 1) throw OracleError("size must be positive");
  if (n > max_n) throw OracleError("size " + std::to_string(n) + " exceeds the oracle cap " + std::to_string(max_n));
}

// Tree from the preorder list of child masks: the root has 5 slots, other
// nodes 4 slots after their parent, listed clockwise.
PlaneTree tree_from_masks(const std::vector<unsigned>& masks) {
  const int n = static_cast<int>(masks.size());
  std::vector<std::vector<int>> cw(n);
  std::vector<std::pair<int, int>> open;  // (node, clockwise slot position)
  for (int k = 0; k < n; ++k) {
    const int width = k == 0 ? 5 : 4;
    auto& r = cw[k];
    r.assign(5, kLeg);
    if (k > 0) {
      const auto [p, pos] = open.back();
      open.pop_back();
      cw[p][pos] = k;
      r[0] = p;
    }
    const int offset = k == 0 ? 0 : 1;
    for (int i = width - 1; i >= 0; --i)
      if (masks[k] >> i & 1u) open.push_back({k, offset + i});
  }
  // cw lists neighbours clockwise; rotations are counterclockwise.
  for (auto& r : cw) std::reverse(r.begin() + 1, r.end());
  return PlaneTree::from_rotations(cw);
}

void generate(int n, std::vector<unsigned>& masks, int open, const std::function<void()>& emit) {
  const int used = static_cast<int>(masks.size());
  if (open == 0) {
    if (used == n) emit();
    return;
  }
  const int width = used == 0 ? 5 : 4;
  for (unsigned m = 0; m < (1u << width); ++m) {
    const int p = __builtin_popcount(m);
    const int next_open = (used == 0 ? 0 : open - 1) + p;
    if (used + 1 + next_open > n) continue;
    masks.push_back(m);
    generate(n, masks, next_open, emit);
    masks.pop_back();
  }
}

}  // namespace

std::vector<PlantedTree> enumerate_trees(int n, int max_n) {
  require_cap(n, max_n);
  std::set<std::string> seen;
  std::vector<unsigned> masks;
  generate(n, masks, 1, [&] {
    const PlaneTree t = tree_from_masks(masks);
    if (is_leg_balanced(t)) seen.insert(canonical_string(t));
  });
  std::vector<PlantedTree> out;
  for (const auto& s : seen) out.push_back(parse_tree(s));
  return out;
}

long long count_marked_edges(const std::vector<PlantedTree>& trees) {
  long long total = 0;
  for (const auto& p : trees) {
    const PlaneTree& t = p.tree;
    std::set<std::string> sides;
    for (int u = 0; u < t.num_nodes(); ++u)
      for (int i = 0; i < t.degree(u); ++i) {
        if (!t.is_edge(u, i)) continue;
        PlantedTree side{t, u, i};
        if (side.kind() == 'A') sides.insert(serialize(side));
      }
    total += static_cast<long long>(sides.size());
  }
  return total;
}

std::vector<PlaneMap> enumerate_rooted_maps(int n, int max_n) {
  std::map<std::string, PlaneMap> found;
  for (const auto& p : enumerate_trees(n, max_n)) {
    const PlaneMap m = tree_to_map(p.tree);
    for (int v : m.outer_vertices()) {
      PlaneMap r = root_at_outer_vertex(m, v);
      found.emplace(canonical_code(r), std::move(r));
    }
  }
  std::vector<PlaneMap> out;
  for (auto& [code, m] : found) out.push_back(std::move(m));
  return out;
}

unsigned degree_three_mask(const PlaneMap& rooted) {
  const auto v = outer_contour(rooted);
  unsigned mask = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (rooted.degree(v[i]) == 3) mask |= 1u << i;
  return mask;
}

bool has_adjacent_pair(unsigned mask) {
  for (int i = 0; i < 5; ++i)
    if ((mask >> i & 1u) && (mask >> ((i + 1) % 5) & 1u)) return true;
  return false;
}

FXCounts classify_FX(int n, int max_n) {
  FXCounts c;
  c.n = n;
  for (const auto& m : enumerate_rooted_maps(n, max_n)) {
    ++c.by_set[degree_three_mask(m)];
    ++c.total;
  }
  return c;
}

bool exhaustive_cycle_check(const Biorientation& y, long long cycle_cap) {
  const PlaneMap& q = y.map;
  const int nv = q.num_vertices();
  std::vector<std::vector<int>> out(nv);
  for (int d = 0; d < q.num_darts(); ++d)
    if (y.out[d]) out[q.tail(d)].push_back(d);
  long long cycles = 0;
  bool clean = true;
  std::vector<char> on_path(nv, 0);
  std::vector<int> path;
  // Circuits are enumerated from their smallest vertex.
  std::function<void(int, int)> walk = [&](int start, int v) {
    for (int d : out[v]) {
      if (!clean) return;
      const int w = q.head(d);
      if (w < start) continue;
      if (w == start) {
        if (path.size() + 1 < 3) continue;
        if (++cycles > cycle_cap) throw OracleError("circuit enumeration cap exceeded");
        path.push_back(d);
        if (cycle_interior(q, path).orientation == Orientation::kClockwise) clean = false;
        path.pop_back();
        continue;
      }
      if (on_path[w]) continue;
      on_path[w] = 1;
      path.push_back(d);
      walk(start, w);
      path.pop_back();
      on_path[w] = 0;
    }
  };
  for (int s = 0; s < nv && clean; ++s) {
    on_path[s] = 1;
    walk(s, s);
    on_path[s] = 0;
  }
  return clean;
}

LegIndexReport check_leg_index_lemmas(const PlaneTree& t) {
  LegIndexReport rep;
  const ClosureResult closure = close_Psi_detailed(t);
  const Biorientation& y = closure.bio;
  const PlaneMap& q = y.map;
  for (int u = 0; u < t.num_nodes(); ++u)
    for (int i = 0; i < t.degree(u); ++i) {
      ++rep.corners;
      const int li = leg_index(t, u, i);
      const int from = closure.dart_of_slot[u][i];
      const int to = closure.dart_of_slot[u][t.ccw(u, i)];
      const bool empty = t.degree(u) == 1 ? q.degree(u) == 1 : q.next(from) == to;
      const std::string where = "corner (" + std::to_string(u) + "," + std::to_string(i) + ")";
      if (li < 3) {
        ++rep.empty_sectors;
        if (!empty) rep.violations.push_back(where + " has leg-index " + std::to_string(li) + " but a non-empty sector");
      } else if (t.has_colors() && t.color(u) == Color::kBlack) {
        ++rep.black_nonempty;
        if (empty) rep.violations.push_back(where + " is black with leg-index " + std::to_string(li) + " but an empty sector");
      }
    }
  for (int v : q.outer_vertices()) {
    if (q.color(v) != Color::kBlack) continue;
    ++rep.outer_black;
    int in = 0;
    for (int d : q.out_darts(v)) in += y.out[q.twin(d)];
    if (in == 0) rep.violations.push_back("outer black vertex " + std::to_string(v) + " has indegree 0");
  }
  return rep;
}

BruteForceResult brute_force_5c_biorientations(const PlaneMap& q, long long cap) {
  if (!q.has_colors()) throw OracleError("bicolored map expected");
  const int nv = q.num_vertices();
  const auto outer = q.outer_vertex_mask();
  std::vector<int> target(nv);
  for (int v = 0; v < nv; ++v) target[v] = outer[v] ? 0 : (q.color(v) == Color::kWhite ? 5 : 2);
  std::vector<int> edges;
  for (int d = 0; d < q.num_darts(); ++d)
    if (d < q.twin(d) && !q.is_outer_face(q.face(d)) && !q.is_outer_face(q.face(q.twin(d))))
      edges.push_back(d);
  // Order edges by their smaller endpoint so vertices complete early.
  std::stable_sort(edges.begin(), edges.end(), [&](int a, int b) {
    return std::min(q.tail(a), q.head(a)) < std::min(q.tail(b), q.head(b));
  });
  std::vector<int> have(nv, 0), left(nv, 0);
  for (int d : edges) {
    ++left[q.tail(d)];
    ++left[q.head(d)];
  }
  std::vector<std::uint8_t> out(q.num_darts(), 0);
  BruteForceResult res;
  long long steps = 0;
  const int inner = static_cast<int>(std::count(outer.begin(), outer.end(), false));
  auto feasible = [&](int v) { return have[v] <= target[v] && have[v] + left[v] >= target[v]; };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (++steps > cap) throw OracleError("brute-force step cap exceeded");
    if (k == edges.size()) {
      ++res.degree_solutions;
      std::vector<int> dsu(nv);
      std::iota(dsu.begin(), dsu.end(), 0);
      std::function<int(int)> find = [&](int v) { return dsu[v] == v ? v : dsu[v] = find(dsu[v]); };
      int two_way = 0;
      for (int d : edges) {
        if (!(out[d] && out[q.twin(d)])) continue;
        ++two_way;
        const int a = find(q.tail(d)), b = find(q.head(d));
        if (a == b) return;
        dsu[a] = b;
      }
      if (two_way != inner - 1) return;
      Biorientation y{q, out, std::nullopt};
      if (!exhaustive_cycle_check(y)) return;
      ++res.tree_solutions;
      res.found = out;
      return;
    }
    const int d = edges[k];
    const int a = q.tail(d), b = q.head(d);
    --left[a];
    --left[b];
    // 1-way a->b, 1-way b->a, 2-way.
    for (int choice = 0; choice < 3; ++choice) {
      const int oa = choice != 1, ob = choice != 0;
      have[a] += oa;
      have[b] += ob;
      out[d] = static_cast<std::uint8_t>(oa);
      out[q.twin(d)] = static_cast<std::uint8_t>(ob);
      if (feasible(a) && feasible(b)) rec(k + 1);
      have[a] -= oa;
      have[b] -= ob;
    }
    out[d] = out[q.twin(d)] = 0;
    ++left[a];
    ++left[b];
  };
  rec(0);
  return res;
}

BijectionReport check_bijection(int n, int max_n) {
  BijectionReport rep;
  rep.n = n;
  const auto trees = enumerate_trees(n, max_n);
  rep.trees = static_cast<long long>(trees.size());
  rep.marked_edges = count_marked_edges(trees);
  for (const auto& p : trees) {
    const std::string name = canonical_string(p.tree);
    try {
      const PlaneMap m = tree_to_map(p.tree);
      if (!is_5c(m)) rep.failures.push_back(name + ": image is not 5c");
      if (m.num_vertices() != n + 5) rep.failures.push_back(name + ": image has the wrong size");
      if (!same_plane_tree(map_to_tree(m), p.tree)) rep.failures.push_back(name + ": tree round trip differs");
      const LegIndexReport li = check_leg_index_lemmas(expand_to_T5c(p.tree));
      rep.corners += li.corners;
      for (const auto& v : li.violations) rep.failures.push_back(name + ": " + v);
    } catch (const std::exception& e) {
      rep.failures.push_back(name + ": " + e.what());
    }
  }
  for (const auto& m : enumerate_rooted_maps(n, max_n)) {
    ++rep.rooted_maps;
    try {
      const PlaneMap back = tree_to_map(map_to_tree(m));
      if (unrooted_canonical_code(back) != unrooted_canonical_code(m))
        rep.failures.push_back("rooted map " + std::to_string(rep.rooted_maps) + ": map round trip differs");
    } catch (const std::exception& e) {
      rep.failures.push_back("rooted map " + std::to_string(rep.rooted_maps) + ": " + e.what());
    }
  }
  return rep;
}

UniquenessReport check_orientation_uniqueness(int n, int max_n) {
  UniquenessReport rep;
  rep.n = n;
  for (const auto& p : enumerate_trees(n, max_n)) {
    ++rep.instances;
    const std::string name = canonical_string(p.tree);
    try {
      const PlaneMap q = angular_map(tree_to_map(p.tree));
      const BruteForceResult brute = brute_force_5c_biorientations(q);
      const Biorientation built = build_5c_biorientation(q);
      if (brute.tree_solutions != 1)
        rep.failures.push_back(name + ": " + std::to_string(brute.tree_solutions) + " minimal tree-biorientations");
      else if (brute.found != built.out)
        rep.failures.push_back(name + ": built biorientation differs from the brute-force one");
    } catch (const std::exception& e) {
      rep.failures.push_back(name + ": " + e.what());
    }
  }
  return rep;
}

}  // namespace pentree
