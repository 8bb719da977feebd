#include "pentree/planemap.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace pentree {

namespace {

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

}  // namespace

// ---------------------------------------------------------------- PlaneMap

PlaneMap PlaneMap::from_darts(std::vector<DartRecord> darts, int outer_face_dart,
                              std::optional<int> root_dart,
                              std::vector<Color> colors) {
  const int n = static_cast<int>(darts.size());
  if (n == 0) throw MapError("empty dart table");
  if (n % 2 != 0) throw MapError("odd number of darts");
  int max_tail = -1;
  std::vector<int> hits(n, 0);
  for (int d = 0; d < n; ++d) {
    const auto& r = darts[d];
    if (r.twin < 0 || r.twin >= n) throw MapError("twin out of range at dart " + std::to_string(d));
    if (r.next < 0 || r.next >= n) throw MapError("next out of range at dart " + std::to_string(d));
    if (r.tail < 0) throw MapError("negative tail at dart " + std::to_string(d));
    if (r.twin == d) throw MapError("twin not fixed-point-free at dart " + std::to_string(d));
    if (darts[r.twin].twin != d) throw MapError("twin not an involution at dart " + std::to_string(d));
    ++hits[r.next];
    max_tail = std::max(max_tail, r.tail);
  }
  for (int d = 0; d < n; ++d) {
    if (hits[d] != 1) throw MapError("next not a permutation");
    if (darts[darts[d].next].tail != darts[d].tail)
      throw MapError("next leaves the tail vertex at dart " + std::to_string(d));
  }
  if (outer_face_dart < 0 || outer_face_dart >= n) throw MapError("bad outer face dart");
  if (root_dart && (*root_dart < 0 || *root_dart >= n)) throw MapError("bad root dart");

  const int nv = max_tail + 1;
  // each vertex is a single next-orbit
  std::vector<int> count(nv, 0), orbit_seen(nv, 0);
  for (const auto& r : darts) ++count[r.tail];
  std::vector<char> visited(n, 0);
  for (int d = 0; d < n; ++d) {
    if (visited[d]) continue;
    const int v = darts[d].tail;
    if (orbit_seen[v]) throw MapError("vertex " + std::to_string(v) + " has several rotation cycles");
    orbit_seen[v] = 1;
    int len = 0;
    int e = d;
    do {
      visited[e] = 1;
      ++len;
      e = darts[e].next;
    } while (e != d);
    if (len != count[v]) throw MapError("inconsistent rotation at vertex " + std::to_string(v));
  }
  for (int v = 0; v < nv; ++v)
    if (count[v] == 0) throw MapError("isolated vertex " + std::to_string(v));

  // connectivity over twin/next
  std::fill(visited.begin(), visited.end(), 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int d = stack.back();
    stack.pop_back();
    for (int e : {darts[d].twin, darts[d].next}) {
      if (!visited[e]) {
        visited[e] = 1;
        ++reached;
        stack.push_back(e);
      }
    }
  }
  if (reached != n) throw MapError("disconnected map");

  // simplicity
  std::vector<std::uint64_t> keys;
  keys.reserve(n / 2);
  for (int d = 0; d < n; ++d) {
    const int a = darts[d].tail, b = darts[darts[d].twin].tail;
    if (a == b) throw MapError("loop at vertex " + std::to_string(a));
    if (a < b) keys.push_back(pair_key(a, b));
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i + 1 < keys.size(); ++i)
    if (keys[i] == keys[i + 1])
      throw MapError("multiple edge between " + std::to_string(keys[i] >> 32) + " and " +
                     std::to_string(keys[i] & 0xffffffffu));

  if (!colors.empty()) {
    if (static_cast<int>(colors.size()) != nv) throw MapError("color array size mismatch");
    for (int d = 0; d < n; ++d)
      if (colors[darts[d].tail] == colors[darts[darts[d].twin].tail])
        throw MapError("edge joins two vertices of the same color");
  }

  PlaneMap m;
  m.darts_ = std::move(darts);
  m.colors_ = std::move(colors);
  m.root_ = root_dart;
  m.index();
  m.outer_face_ = m.face_of_[outer_face_dart];
  const int euler = m.num_vertices() - m.num_edges() + m.num_faces();
  if (euler != 2) throw MapError("Euler characteristic " + std::to_string(euler) + " (map not planar)");
  return m;
}

void PlaneMap::index() {
  const int n = num_darts();
  prev_.assign(n, -1);
  int nv = 0;
  for (int d = 0; d < n; ++d) {
    prev_[darts_[d].next] = d;
    nv = std::max(nv, darts_[d].tail + 1);
  }
  vertex_dart_.assign(nv, -1);
  degree_.assign(nv, 0);
  for (int d = 0; d < n; ++d) {
    const int v = darts_[d].tail;
    if (vertex_dart_[v] < 0) vertex_dart_[v] = d;
    ++degree_[v];
  }
  face_of_.assign(n, -1);
  face_dart_.clear();
  for (int d = 0; d < n; ++d) {
    if (face_of_[d] >= 0) continue;
    const int f = static_cast<int>(face_dart_.size());
    face_dart_.push_back(d);
    int e = d;
    do {
      face_of_[e] = f;
      e = darts_[darts_[e].twin].next;
    } while (e != d);
  }
}

PlaneMap PlaneMap::from_faces(int num_vertices, const std::vector<std::vector<int>>& faces,
                              int outer_index, std::vector<Color> colors) {
  if (outer_index < 0 || outer_index >= static_cast<int>(faces.size()))
    throw MapError("bad outer face index");
  // sides of all faces bucketed by tail and sorted by head within a bucket
  std::vector<int> side_start(faces.size() + 1, 0);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) side_start[fi + 1] = side_start[fi] + static_cast<int>(faces[fi].size());
  const int total = side_start.back();
  std::vector<int> bucket(num_vertices + 1, 0);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& f = faces[fi];
    const int k = static_cast<int>(f.size());
    if (k < 2) throw MapError("face of degree < 2");
    for (int i = 0; i < k; ++i) {
      const int a = f[i], b = f[(i + 1) % k];
      if (a < 0 || a >= num_vertices || b < 0 || b >= num_vertices) throw MapError("vertex out of range in face list");
      if (a == b) throw MapError("loop in face list");
      ++bucket[a + 1];
    }
  }
  for (int v = 0; v < num_vertices; ++v) bucket[v + 1] += bucket[v];
  std::vector<std::pair<int, int>> sides(total);  // (head, side id)
  {
    std::vector<int> fill(bucket.begin(), bucket.end() - 1);
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      const auto& f = faces[fi];
      const int k = static_cast<int>(f.size());
      for (int i = 0; i < k; ++i) sides[fill[f[i]]++] = {f[(i + 1) % k], side_start[fi] + i};
    }
  }
  for (int v = 0; v < num_vertices; ++v) {
    std::sort(sides.begin() + bucket[v], sides.begin() + bucket[v + 1]);
    for (int i = bucket[v]; i + 1 < bucket[v + 1]; ++i)
      if (sides[i].first == sides[i + 1].first)
        throw MapError("dart " + std::to_string(v) + "->" + std::to_string(sides[i].first) + " used by two faces");
  }
  auto find_side = [&](int a, int b) {
    const auto first = sides.begin() + bucket[a], last = sides.begin() + bucket[a + 1];
    const auto it = std::lower_bound(first, last, std::make_pair(b, -1));
    return (it != last && it->first == b) ? it->second : -1;
  };
  // dart of each side, numbered by first appearance
  std::vector<int> dart_of_side(total, -1);
  std::vector<DartRecord> darts;
  darts.reserve(total);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& f = faces[fi];
    const int k = static_cast<int>(f.size());
    for (int i = 0; i < k; ++i) {
      const int sd = side_start[fi] + i;
      if (dart_of_side[sd] >= 0) continue;
      const int a = f[i], b = f[(i + 1) % k];
      const int other = find_side(b, a);
      if (other < 0) throw MapError("edge side without a face");
      const int d = static_cast<int>(darts.size());
      darts.push_back({d + 1, -1, a});
      darts.push_back({d, -1, b});
      dart_of_side[sd] = d;
      dart_of_side[other] = d + 1;
    }
  }
  const int outer_dart = dart_of_side[side_start[outer_index]];
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& f = faces[fi];
    const int k = static_cast<int>(f.size());
    for (int i = 0; i < k; ++i) {
      // side u->v then v->w: next of v->u is v->w
      const int in = dart_of_side[side_start[fi] + i];
      const int out = dart_of_side[side_start[fi] + (i + 1) % k];
      const int back = darts[in].twin;
      if (darts[back].next >= 0) throw MapError("inconsistent face list at vertex " + std::to_string(f[(i + 1) % k]));
      darts[back].next = out;
    }
  }
  int max_tail = -1;
  for (const auto& r : darts) max_tail = std::max(max_tail, r.tail);
  if (max_tail + 1 != num_vertices) throw MapError("vertex count mismatch in face list");
  return from_darts(std::move(darts), outer_dart, std::nullopt, std::move(colors));
}

int PlaneMap::face_degree(int f) const {
  int len = 0;
  const int d0 = face_dart_[f];
  int e = d0;
  do {
    ++len;
    e = face_next(e);
  } while (e != d0);
  return len;
}

int PlaneMap::root_vertex() const {
  if (!root_) throw MapError("map is not rooted");
  return tail(*root_);
}

PlaneMap PlaneMap::with_root(std::optional<int> root_dart) const {
  if (root_dart && (*root_dart < 0 || *root_dart >= num_darts())) throw MapError("bad root dart");
  PlaneMap m = *this;
  m.root_ = root_dart;
  return m;
}

std::vector<int> PlaneMap::out_darts(int v) const {
  std::vector<int> out;
  out.reserve(degree_[v]);
  const int d0 = vertex_dart_[v];
  int e = d0;
  do {
    out.push_back(e);
    e = next(e);
  } while (e != d0);
  return out;
}

std::vector<int> PlaneMap::face_darts(int f) const {
  std::vector<int> out;
  const int d0 = face_dart_[f];
  int e = d0;
  do {
    out.push_back(e);
    e = face_next(e);
  } while (e != d0);
  return out;
}

std::vector<int> PlaneMap::face_vertices(int f) const {
  std::vector<int> out;
  for (int d : face_darts(f)) out.push_back(tail(d));
  return out;
}

std::vector<std::vector<int>> PlaneMap::face_lists() const {
  std::vector<std::vector<int>> out(num_faces());
  for (int f = 0; f < num_faces(); ++f) out[f] = face_vertices(f);
  return out;
}

std::vector<int> PlaneMap::outer_vertices() const { return face_vertices(outer_face_); }

std::vector<bool> PlaneMap::outer_vertex_mask() const {
  std::vector<bool> mask(num_vertices(), false);
  for (int v : outer_vertices()) mask[v] = true;
  return mask;
}

int PlaneMap::find_dart(int u, int v) const {
  if (u < 0 || u >= num_vertices()) return -1;
  const int d0 = vertex_dart_[u];
  int e = d0;
  do {
    if (head(e) == v) return e;
    e = next(e);
  } while (e != d0);
  return -1;
}

// ---------------------------------------------------------------- cycles

CycleRef cycle_interior(const PlaneMap& map, const std::vector<int>& cycle) {
  const int k = static_cast<int>(cycle.size());
  if (k < 3) throw MapError("cycle shorter than 3");
  std::unordered_set<int> verts;
  for (int i = 0; i < k; ++i) {
    const int d = cycle[i];
    if (d < 0 || d >= map.num_darts()) throw MapError("cycle dart out of range");
    if (map.head(d) != map.tail(cycle[(i + 1) % k])) throw MapError("cycle darts do not chain");
    if (!verts.insert(map.tail(d)).second) throw MapError("cycle is not simple");
  }
  std::vector<char> blocked(map.num_darts(), 0);
  for (int d : cycle) blocked[d] = blocked[map.twin(d)] = 1;
  auto flood = [&](int start) {
    std::vector<char> in(map.num_faces(), 0);
    std::vector<int> stack{start}, region;
    in[start] = 1;
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      region.push_back(f);
      const int d0 = map.face_dart(f);
      int e = d0;
      do {
        if (!blocked[e]) {
          const int g = map.face(map.twin(e));
          if (!in[g]) {
            in[g] = 1;
            stack.push_back(g);
          }
        }
        e = map.face_next(e);
      } while (e != d0);
    }
    std::sort(region.begin(), region.end());
    return region;
  };
  CycleRef ref;
  ref.darts = cycle;
  auto right = flood(map.face(cycle[0]));
  if (!std::binary_search(right.begin(), right.end(), map.outer_face())) {
    ref.interior_faces = std::move(right);
    ref.orientation = Orientation::kClockwise;
  } else {
    auto left = flood(map.face(map.twin(cycle[0])));
    if (std::binary_search(left.begin(), left.end(), map.outer_face()))
      throw MapError("cycle does not separate the outer face");
    ref.interior_faces = std::move(left);
    ref.orientation = Orientation::kCounterclockwise;
  }
  return ref;
}

std::vector<int> cycle_inside_vertices(const PlaneMap& map, const CycleRef& cycle) {
  std::unordered_set<int> on;
  for (int d : cycle.darts) on.insert(map.tail(d));
  std::vector<char> mark(map.num_vertices(), 0);
  std::vector<int> out;
  for (int f : cycle.interior_faces)
    for (int d : map.face_darts(f)) {
      const int v = map.tail(d);
      if (!on.count(v) && !mark[v]) {
        mark[v] = 1;
        out.push_back(v);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CycleRef> separating_cycles(const PlaneMap& map, int k) {
  if (k != 3 && k != 4) throw MapError("separating_cycles supports k = 3 or 4");
  const int nv = map.num_vertices();
  std::vector<std::vector<int>> adj(nv);
  for (int v = 0; v < nv; ++v)
    for (int d : map.out_darts(v)) adj[v].push_back(map.head(d));
  std::vector<CycleRef> out;
  std::vector<int> path;
  auto consider = [&]() {
    std::vector<int> darts;
    for (int i = 0; i < k; ++i) darts.push_back(map.find_dart(path[i], path[(i + 1) % k]));
    CycleRef ref = cycle_interior(map, darts);
    const int inside = static_cast<int>(cycle_inside_vertices(map, ref).size());
    const int outside = nv - k - inside;
    if (inside >= 1 && outside >= 1) out.push_back(std::move(ref));
  };
  // smallest vertex first, second vertex smaller than last
  auto extend = [&](auto&& self) -> void {
    const int len = static_cast<int>(path.size());
    const int last = path.back();
    if (len == k) {
      if (path[1] < path[k - 1] && map.find_dart(last, path[0]) >= 0) consider();
      return;
    }
    for (int w : adj[last]) {
      if (w <= path[0]) continue;
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      path.push_back(w);
      self(self);
      path.pop_back();
    }
  };
  for (int v = 0; v < nv; ++v) {
    path = {v};
    extend(extend);
  }
  return out;
}

namespace {

using Triple = std::array<int, 3>;

std::uint64_t triple_key(int a, int b, int c) {
  std::array<int, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return (static_cast<std::uint64_t>(t[0]) << 42) ^ (static_cast<std::uint64_t>(t[1]) << 21) ^
         static_cast<std::uint64_t>(t[2]);
}

// Separating-cycle test for a triangulated region: a 3-cycle bounds no vertex
// iff it is a face, a 4-cycle iff a diagonal splits it into two faces. The
// caller guarantees the other side always holds a vertex.
bool no_short_separating_cycle(const PlaneMap& map, bool include_outer) {
  const int nv = map.num_vertices();
  std::unordered_set<std::uint64_t> tri;
  tri.reserve(map.num_faces() * 2);
  for (int f = 0; f < map.num_faces(); ++f) {
    if (!include_outer && f == map.outer_face()) continue;
    const auto vs = map.face_vertices(f);
    if (vs.size() == 3) tri.insert(triple_key(vs[0], vs[1], vs[2]));
  }
  std::vector<std::vector<int>> adj(nv);
  for (int v = 0; v < nv; ++v) {
    for (int d : map.out_darts(v)) adj[v].push_back(map.head(d));
    std::sort(adj[v].begin(), adj[v].end());
  }
  auto adjacent = [&](int a, int b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
  auto is_tri = [&](int a, int b, int c) { return tri.count(triple_key(a, b, c)) > 0; };
  for (int a = 0; a < nv; ++a) {
    const auto& na = adj[a];
    for (std::size_t i = 0; i < na.size(); ++i) {
      const int b = na[i];
      if (b <= a) continue;
      for (std::size_t j = i + 1; j < na.size(); ++j) {
        const int d = na[j];
        if (adjacent(b, d) && !is_tri(a, b, d)) return false;
        // 4-cycles a-b-c-d with a minimal
        for (int c : adj[b]) {
          if (c <= a || c == d) continue;
          if (!adjacent(c, d)) continue;
          const bool split_ac = is_tri(a, b, c) && is_tri(a, c, d);
          const bool split_bd = is_tri(b, c, d) && is_tri(b, d, a);
          if (!split_ac && !split_bd) return false;
        }
      }
    }
  }
  return true;
}

bool is_triangular_pentagon(const PlaneMap& map) {
  const auto outer = map.outer_vertices();
  if (outer.size() != 5) return false;
  std::unordered_set<int> distinct(outer.begin(), outer.end());
  if (distinct.size() != 5) return false;
  for (int f = 0; f < map.num_faces(); ++f)
    if (f != map.outer_face() && map.face_degree(f) != 3) return false;
  return true;
}

}  // namespace

bool is_5c(const PlaneMap& map) {
  if (!is_triangular_pentagon(map)) return false;
  return no_short_separating_cycle(map, false);
}

bool is_5c_exhaustive(const PlaneMap& map) {
  if (!is_triangular_pentagon(map)) return false;
  return separating_cycles(map, 3).empty() && separating_cycles(map, 4).empty();
}

bool is_5connected_triangulation(const PlaneMap& map) {
  for (int f = 0; f < map.num_faces(); ++f)
    if (map.face_degree(f) != 3) return false;
  if (map.num_vertices() < 12) return false;
  for (int v = 0; v < map.num_vertices(); ++v)
    if (map.degree(v) < 5) return false;
  return no_short_separating_cycle(map, true);
}

// ---------------------------------------------------------------- angular map

PlaneMap angular_map(const PlaneMap& m) {
  const int nv = m.num_vertices();
  const int outer = m.outer_face();
  const auto outer_darts = m.face_darts(outer);
  {
    std::unordered_set<int> distinct;
    for (int d : outer_darts)
      if (!distinct.insert(m.tail(d)).second) throw MapError("outer contour is not simple");
  }
  std::vector<int> black_of(m.num_faces(), -1);
  int nb = 0;
  for (int f = 0; f < m.num_faces(); ++f) {
    if (f == outer) continue;
    if (m.face_degree(f) != 3) throw MapError("inner face of degree != 3");
    black_of[f] = nv + nb++;
  }
  std::vector<int> outer_edges_on(m.num_faces(), 0);
  for (int d : outer_darts) {
    const int f = m.face(m.twin(d));
    if (++outer_edges_on[f] > 1) throw MapError("inner face incident to two outer edges");
  }
  std::vector<std::vector<int>> faces;
  std::vector<int> outer_face;
  for (int d : outer_darts) {
    outer_face.push_back(m.tail(d));
    outer_face.push_back(black_of[m.face(m.twin(d))]);
  }
  faces.push_back(std::move(outer_face));
  for (int d = 0; d < m.num_darts(); ++d) {
    if (d > m.twin(d) || !m.is_inner_edge(d)) continue;
    faces.push_back({m.tail(d), black_of[m.face(m.twin(d))], m.head(d), black_of[m.face(d)]});
  }
  std::vector<Color> colors(nv + nb, Color::kWhite);
  for (int i = nv; i < nv + nb; ++i) colors[i] = Color::kBlack;
  return PlaneMap::from_faces(nv + nb, faces, 0, std::move(colors));
}

PlaneMap inverse_angular(const PlaneMap& q) {
  if (!q.has_colors()) throw MapError("angular map must be bicolored");
  const auto outer_darts = q.face_darts(q.outer_face());
  {
    std::unordered_set<int> distinct;
    for (int d : outer_darts)
      if (!distinct.insert(q.tail(d)).second) throw MapError("outer contour is not simple");
  }
  for (int f = 0; f < q.num_faces(); ++f)
    if (f != q.outer_face() && q.face_degree(f) != 4) throw MapError("inner face of degree != 4");
  std::vector<int> white_id(q.num_vertices(), -1);
  int nw = 0;
  for (int v = 0; v < q.num_vertices(); ++v)
    if (q.color(v) == Color::kWhite) white_id[v] = nw++;
  std::vector<std::vector<int>> faces;
  std::vector<int> outer_face;
  for (int d : outer_darts)
    if (q.color(q.tail(d)) == Color::kWhite) outer_face.push_back(white_id[q.tail(d)]);
  faces.push_back(std::move(outer_face));
  for (int v = 0; v < q.num_vertices(); ++v) {
    if (q.color(v) != Color::kBlack) continue;
    if (q.degree(v) != 3) throw MapError("black vertex of degree != 3");
    const auto ds = q.out_darts(v);
    faces.push_back({white_id[q.head(ds[0])], white_id[q.head(ds[2])], white_id[q.head(ds[1])]});
  }
  return PlaneMap::from_faces(nw, faces, 0);
}

// ---------------------------------------------------------------- apex, shelling

std::vector<int> outer_contour(const PlaneMap& m) {
  if (!m.root_dart()) throw MapError("map is not rooted");
  const int d = *m.root_dart();
  if (m.face(m.twin(d)) != m.outer_face() || m.face(d) == m.outer_face())
    throw MapError("root dart is not an outer contour dart");
  std::vector<int> tails;
  int e = m.twin(d);
  do {
    tails.push_back(m.tail(e));
    e = m.face_next(e);
  } while (e != m.twin(d));
  const int k = static_cast<int>(tails.size());
  std::unordered_set<int> distinct(tails.begin(), tails.end());
  if (static_cast<int>(distinct.size()) != k) throw MapError("malformed outer contour");
  std::vector<int> v(k);
  for (int i = 1; i <= k; ++i) v[i - 1] = tails[(k + 2 - i) % k];
  return v;
}

namespace {

struct Removal {
  std::vector<std::vector<int>> faces;  // relabeled, merged face first
  std::vector<int> relabel;             // old id -> new id, -1 for the removed vertex
};

// Deletes vertex v; the faces around v merge into one face.
Removal remove_vertex(const PlaneMap& m, int v) {
  std::vector<std::vector<int>> paths, kept;
  for (int f = 0; f < m.num_faces(); ++f) {
    auto vs = m.face_vertices(f);
    const auto it = std::find(vs.begin(), vs.end(), v);
    if (it == vs.end()) {
      kept.push_back(std::move(vs));
      continue;
    }
    if (std::count(vs.begin(), vs.end(), v) != 1) throw MapError("vertex repeated on a face");
    std::rotate(vs.begin(), it, vs.end());
    paths.emplace_back(vs.begin() + 1, vs.end());
  }
  std::unordered_map<int, int> by_start;
  for (std::size_t i = 0; i < paths.size(); ++i) by_start[paths[i].front()] = static_cast<int>(i);
  std::vector<int> merged = paths[0];
  std::size_t used = 1;
  while (merged.back() != paths[0].front()) {
    const auto it = by_start.find(merged.back());
    if (it == by_start.end() || used >= paths.size()) throw MapError("faces around vertex do not close");
    const auto& p = paths[it->second];
    merged.insert(merged.end(), p.begin() + 1, p.end());
    ++used;
  }
  merged.pop_back();
  if (used != paths.size()) throw MapError("faces around vertex do not close");
  Removal r;
  r.relabel.resize(m.num_vertices());
  for (int u = 0; u < m.num_vertices(); ++u) r.relabel[u] = u < v ? u : (u == v ? -1 : u - 1);
  r.faces.push_back(std::move(merged));
  for (auto& f : kept) r.faces.push_back(std::move(f));
  for (auto& f : r.faces)
    for (int& u : f) u = r.relabel[u];
  return r;
}

}  // namespace

PlaneMap root_at_outer_vertex(const PlaneMap& m, int v) {
  for (int d : m.out_darts(v))
    if (m.face(m.twin(d)) == m.outer_face() && m.face(d) != m.outer_face()) return m.with_root(d);
  throw MapError("vertex " + std::to_string(v) + " is not on the outer contour");
}

Augmented augment_apex(const PlaneMap& m) {
  const auto v = outer_contour(m);
  const int k = static_cast<int>(v.size());
  const int apex = m.num_vertices();
  std::vector<std::vector<int>> faces;
  for (int f = 0; f < m.num_faces(); ++f)
    if (f != m.outer_face()) faces.push_back(m.face_vertices(f));
  const int outer_index = static_cast<int>(faces.size());
  for (int i = 0; i < k; ++i) faces.push_back({v[(i + 1) % k], v[i], apex});
  PlaneMap t = PlaneMap::from_faces(apex + 1, faces, outer_index);
  Augmented out;
  out.map = t.with_root(t.find_dart(apex, v[0]));
  out.five_connected = true;
  for (int u : v)
    if (m.degree(u) < 4) out.five_connected = false;
  return out;
}

PlaneMap delete_apex(const PlaneMap& t) {
  if (!t.root_dart()) throw MapError("map is not rooted");
  const int root = *t.root_dart();
  const int r = t.tail(root);
  if (t.degree(r) != 5) throw MapError("root vertex degree is not 5");
  const int v1 = t.head(root);
  const int v2 = t.head(t.next(root));
  Removal rem = remove_vertex(t, r);
  PlaneMap m = PlaneMap::from_faces(t.num_vertices() - 1, rem.faces, 0);
  const int d = m.find_dart(rem.relabel[v1], rem.relabel[v2]);
  if (d < 0 || m.face(m.twin(d)) != m.outer_face()) throw MapError("malformed outer contour after apex deletion");
  return m.with_root(d);
}

PlaneMap shell_outer_deg3(const PlaneMap& m) {
  if (m.num_vertices() <= 6) throw MapError("trivial map cannot be shelled");
  PlaneMap cur = m;
  while (true) {
    const auto v = outer_contour(cur);
    int victim = -1;
    for (int u : v)
      if (cur.degree(u) == 3) {
        victim = u;
        break;
      }
    if (victim < 0) return cur;
    int new_root_vertex = v[0];
    if (victim == v[0]) {
      for (int d : cur.out_darts(victim)) {
        const int w = cur.head(d);
        if (std::find(v.begin(), v.end(), w) == v.end()) new_root_vertex = w;
      }
    }
    Removal rem = remove_vertex(cur, victim);
    PlaneMap next = PlaneMap::from_faces(cur.num_vertices() - 1, rem.faces, 0);
    cur = root_at_outer_vertex(next, rem.relabel[new_root_vertex]);
  }
}

// ---------------------------------------------------------------- canonical codes

namespace {

std::string code_from(const PlaneMap& map, int root, bool with_outer) {
  const int n = map.num_darts();
  std::vector<int> label(n, -1), order;
  order.reserve(n);
  label[root] = 0;
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int d = order[i];
    for (int e : {map.twin(d), map.next(d)}) {
      if (label[e] < 0) {
        label[e] = static_cast<int>(order.size());
        order.push_back(e);
      }
    }
  }
  std::string out;
  out.reserve(n * 3);
  put_varint(out, n);
  for (int d : order) {
    put_varint(out, label[map.twin(d)]);
    put_varint(out, label[map.next(d)]);
    std::uint8_t flags = 0;
    if (with_outer && map.face(d) == map.outer_face()) flags |= 1;
    if (map.has_colors() && map.color(map.tail(d)) == Color::kBlack) flags |= 2;
    out.push_back(static_cast<char>(flags));
  }
  return out;
}

}  // namespace

std::string canonical_code(const PlaneMap& map, int root_dart) {
  if (root_dart < 0 || root_dart >= map.num_darts()) throw MapError("bad root dart");
  return code_from(map, root_dart, true);
}

std::string canonical_code(const PlaneMap& map) {
  if (!map.root_dart()) throw MapError("map is not rooted");
  return code_from(map, *map.root_dart(), true);
}

std::string unrooted_canonical_code(const PlaneMap& map) {
  std::string best;
  bool have = false;
  for (int d = 0; d < map.num_darts(); ++d) {
    if (map.face(map.twin(d)) != map.outer_face()) continue;
    std::string c = code_from(map, d, true);
    if (!have || c < best) {
      best = std::move(c);
      have = true;
    }
  }
  return best;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::size_t count_classes(std::vector<std::uint64_t> h) {
  std::sort(h.begin(), h.end());
  return static_cast<std::size_t>(std::unique(h.begin(), h.end()) - h.begin());
}

}  // namespace

std::string sphere_canonical_code(const PlaneMap& map) {
  const int n = map.num_darts();
  // Dart colors refined along next and twin until the partition is stable;
  // the codes are then compared only from the darts of the rarest color.
  std::vector<std::uint64_t> color(n), fresh(n);
  for (int d = 0; d < n; ++d)
    color[d] = mix(static_cast<std::uint64_t>(map.degree(map.tail(d))) << 32 | map.degree(map.head(d)));
  std::size_t classes = count_classes(color);
  for (int round = 0; round < 64; ++round) {
    for (int d = 0; d < n; ++d)
      fresh[d] = mix(color[d] ^ mix(color[map.next(d)] + 0x51ull) ^ mix(mix(color[map.twin(d)]) + 0x7full));
    const std::size_t k = count_classes(fresh);
    color.swap(fresh);
    if (k <= classes) break;
    classes = k;
  }
  std::vector<std::uint64_t> sorted = color;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t pick = 0;
  std::size_t pick_size = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (pick_size == 0 || j - i < pick_size) {
      pick = sorted[i];
      pick_size = j - i;
    }
    i = j;
  }
  std::string best;
  bool have = false;
  for (int d = 0; d < n; ++d) {
    if (color[d] != pick) continue;
    std::string c = code_from(map, d, false);
    if (!have || c < best) {
      best = std::move(c);
      have = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------- instances

PlaneMap wheel_w5() {
  std::vector<std::vector<int>> faces{{4, 3, 2, 1, 0}};
  for (int i = 0; i < 5; ++i) faces.push_back({i, (i + 1) % 5, 5});
  PlaneMap m = PlaneMap::from_faces(6, faces, 0);
  return m.with_root(m.find_dart(0, 1));
}

PlaneMap icosahedron() {
  std::vector<std::vector<int>> faces;
  auto up = [](int i) { return 1 + (i % 5); };
  auto lo = [](int i) { return 6 + (i % 5); };
  for (int i = 0; i < 5; ++i) {
    faces.push_back({0, up(i), up(i + 1)});
    faces.push_back({up(i), lo(i), up(i + 1)});
    faces.push_back({up(i + 1), lo(i), lo(i + 1)});
    faces.push_back({11, lo(i + 1), lo(i)});
  }
  PlaneMap m = PlaneMap::from_faces(12, faces, 0);
  // root at the apex 0 with the outer face on the left of the root dart
  const int d = m.find_dart(0, 1);
  return PlaneMap::from_darts(m.darts(), m.twin(d), d);
}

PlaneMap octahedron() {
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < 4; ++i) {
    faces.push_back({0, 1 + i, 1 + (i + 1) % 4});
    faces.push_back({5, 1 + (i + 1) % 4, 1 + i});
  }
  return PlaneMap::from_faces(6, faces, 0);
}

PlaneMap icosahedron_minus_vertex() { return delete_apex(icosahedron()); }

}  // namespace pentree
