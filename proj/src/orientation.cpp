#include "pentree/orientation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>

#include "json.hpp"
#include "pentree/map_io.hpp"

namespace pentree {

int Biorientation::outdegree(int v) const {
  int k = 0;
  for (int d : map.out_darts(v)) k += out[d];
  return k;
}

std::vector<int> regular_alpha(const PlaneMap& q, int root) {
  if (!q.has_colors()) throw OrientationError("regular orientation needs a bicolored map");
  const auto outer = q.outer_vertex_mask();
  std::vector<int> alpha(q.num_vertices());
  for (int v = 0; v < q.num_vertices(); ++v) {
    if (outer[v])
      alpha[v] = v == root ? 1 : 0;
    else
      alpha[v] = q.color(v) == Color::kWhite ? 4 : 1;
  }
  return alpha;
}

Biorientation compute_alpha_orientation(const PlaneMap& q, const std::vector<int>& alpha) {
  const int nv = q.num_vertices();
  if (static_cast<int>(alpha.size()) != nv) throw OrientationError("alpha size mismatch");
  long long sum = 0, ne = 0;
  for (int a : alpha) {
    if (a < 0) throw OrientationError("negative alpha");
    sum += a;
  }
  for (int d = 0; d < q.num_darts(); ++d)
    if (d < q.twin(d) && q.is_inner_edge(d)) ++ne;
  if (sum != ne)
    throw OrientationError("alpha sums to " + std::to_string(sum) + ", expected " + std::to_string(ne) +
                           " inner edges");
  Biorientation x{q, std::vector<std::uint8_t>(q.num_darts(), 0), std::nullopt};
  // Greedy start with forced moves (a vertex whose remaining edges must all
  // go one way), then reverse directed paths from vertices above their
  // target outdegree to vertices below it.
  std::vector<int> need = alpha, avail(nv, 0);
  std::vector<char> decided(q.num_darts(), 0);
  for (int d = 0; d < q.num_darts(); ++d)
    if (q.is_inner_edge(d)) ++avail[q.tail(d)];
  std::vector<int> pending;
  auto assign = [&](int o) {
    decided[o] = decided[q.twin(o)] = 1;
    x.out[o] = 1;
    --need[q.tail(o)];
    --avail[q.tail(o)];
    --avail[q.head(o)];
    pending.push_back(q.tail(o));
    pending.push_back(q.head(o));
  };
  auto settle = [&]() {
    while (!pending.empty()) {
      const int v = pending.back();
      pending.pop_back();
      if (avail[v] == 0 || (need[v] > 0 && need[v] < avail[v])) continue;
      const bool take = need[v] > 0;
      const int first = q.vertex_dart(v);
      int d = first;
      do {
        if (!decided[d] && q.is_inner_edge(d)) assign(take ? d : q.twin(d));
        d = q.next(d);
      } while (d != first);
    }
  };
  for (int v = 0; v < nv; ++v) pending.push_back(v);
  settle();
  std::vector<int> layer;
  {
    std::vector<char> seen(nv, 0);
    for (int v : q.outer_vertices()) {
      seen[v] = 1;
      layer.push_back(v);
    }
    for (std::size_t k = 0; k < layer.size(); ++k)
      for (int d : q.out_darts(layer[k]))
        if (!seen[q.head(d)]) {
          seen[q.head(d)] = 1;
          layer.push_back(q.head(d));
        }
  }
  for (int d0 : layer)
    for (int d : q.out_darts(d0)) {
    if (decided[d] || !q.is_inner_edge(d)) continue;
    const int u = q.tail(d), v = q.head(d);
    const long long lhs = static_cast<long long>(need[u]) * avail[v];
    const long long rhs = static_cast<long long>(need[v]) * avail[u];
    assign(lhs >= rhs ? d : q.twin(d));
    settle();
    }
  // Each pass grows a backward search forest from the vertices below target
  // and reverses, for as many excess units as still possible, the forest
  // path to a root.
  std::vector<int> excess(nv), toward(nv), queue, path;
  queue.reserve(nv);
  for (int v = 0; v < nv; ++v) excess[v] = -need[v];
  while (true) {
    bool open = false;
    queue.clear();
    for (int v = 0; v < nv; ++v) {
      open = open || excess[v] > 0;
      toward[v] = excess[v] < 0 ? -2 : -1;
      if (excess[v] < 0) queue.push_back(v);
    }
    if (!open) break;
    for (std::size_t k = 0; k < queue.size(); ++k) {
      const int w = queue[k];
      const int first = q.vertex_dart(w);
      int d = first;
      do {
        const int e = q.twin(d);
        const int u = q.head(d);
        if (x.out[e] && toward[u] == -1) {
          toward[u] = e;
          queue.push_back(u);
        }
        d = q.next(d);
      } while (d != first);
    }
    for (int s : layer) {
      while (excess[s] > 0) {
        if (toward[s] == -1) throw OrientationError("alpha infeasible: no orientation with these outdegrees");
        path.clear();
        int v = s;
        bool valid = true;
        while (toward[v] >= 0) {
          const int d = toward[v];
          if (!x.out[d]) {
            valid = false;
            break;
          }
          path.push_back(d);
          v = q.head(d);
        }
        if (!valid || excess[v] >= 0) break;
        for (int d : path) {
          x.out[d] = 0;
          x.out[q.twin(d)] = 1;
        }
        --excess[s];
        ++excess[v];
      }
    }
  }
  const auto outer = q.outer_vertex_mask();
  for (int v = 0; v < nv; ++v)
    if (outer[v] && alpha[v] == 1) x.root = v;
  return x;
}

Biorientation reroot_to(const Biorientation& x, int b5) {
  const PlaneMap& q = x.map;
  int root = -1;
  if (x.root) {
    root = *x.root;
  } else {
    const auto outer = q.outer_vertex_mask();
    for (int v = 0; v < q.num_vertices(); ++v)
      if (outer[v] && x.outdegree(v) == 1) root = v;
  }
  if (root < 0) throw OrientationError("orientation has no root");
  Biorientation y = x;
  y.root = b5;
  if (root == b5) return y;
  std::vector<int> via(q.num_vertices(), -1);
  std::vector<char> seen(q.num_vertices(), 0);
  std::queue<int> bfs;
  bfs.push(root);
  seen[root] = 1;
  while (!bfs.empty() && !seen[b5]) {
    const int v = bfs.front();
    bfs.pop();
    for (int d : q.out_darts(v)) {
      if (!x.out[d] || seen[q.head(d)]) continue;
      seen[q.head(d)] = 1;
      via[q.head(d)] = d;
      bfs.push(q.head(d));
    }
  }
  if (!seen[b5]) throw OrientationError("no directed path to b5 (orientation not co-accessible)");
  for (int v = b5; v != root;) {
    const int d = via[v];
    y.out[d] = 0;
    y.out[q.twin(d)] = 1;
    v = q.tail(d);
  }
  return y;
}

std::vector<int> minimization_potential(const Biorientation& x) {
  const PlaneMap& q = x.map;
  const int nf = q.num_faces();
  std::vector<std::vector<std::pair<int, int>>> arcs(nf);
  for (int d = 0; d < q.num_darts(); ++d) {
    if (d > q.twin(d)) continue;
    const int e = q.twin(d);
    if (!q.is_inner_edge(d)) {
      if (x.out[d] || x.out[e]) throw OrientationError("outer edge carries an orientation");
      arcs[q.face(d)].push_back({q.face(e), 0});
      arcs[q.face(e)].push_back({q.face(d), 0});
      continue;
    }
    if (x.out[d] == x.out[e]) throw OrientationError("minimization expects 1-way inner edges");
    const int o = x.out[d] ? d : e;
    const int l = q.face(q.twin(o)), r = q.face(o);
    arcs[l].push_back({r, 1});
    arcs[r].push_back({l, 0});
  }
  std::vector<int> dist(nf, -1);
  std::vector<char> done(nf, 0);
  std::deque<int> dq;
  dist[q.outer_face()] = 0;
  dq.push_back(q.outer_face());
  while (!dq.empty()) {
    const int f = dq.front();
    dq.pop_front();
    if (done[f]) continue;
    done[f] = 1;
    for (auto [g, w] : arcs[f]) {
      const int nd = dist[f] + w;
      if (dist[g] < 0 || nd < dist[g]) {
        dist[g] = nd;
        if (w == 0)
          dq.push_front(g);
        else
          dq.push_back(g);
      }
    }
  }
  return dist;
}

Biorientation minimize_orientation(const Biorientation& x) {
  const auto p = minimization_potential(x);
  const PlaneMap& q = x.map;
  Biorientation y = x;
  for (int d = 0; d < q.num_darts(); ++d) {
    if (!x.out[d] || !q.is_inner_edge(d)) continue;
    const int l = q.face(q.twin(d)), r = q.face(d);
    if (p[r] - p[l] == 1) {
      y.out[d] = 0;
      y.out[q.twin(d)] = 1;
    }
  }
  return y;
}

namespace {

std::vector<char> tree_vertex_mask(const PlaneMap& q, int b5) {
  const auto outer = q.outer_vertex_mask();
  std::vector<char> allowed(q.num_vertices(), 0);
  for (int v = 0; v < q.num_vertices(); ++v) allowed[v] = !outer[v] || v == b5;
  return allowed;
}

void require_spanning(const PlaneMap& q, const CoaccessTree& t, const std::vector<char>& allowed) {
  for (int v = 0; v < q.num_vertices(); ++v)
    if (allowed[v] && v != t.root && t.parent_dart[v] < 0)
      throw OrientationError("vertex " + std::to_string(v) +
                             " unreachable from b5 (not co-accessible: separating 4-cycle)");
}

// Dart cycle made of e = a -> b followed by the tree path from b to a.
std::vector<int> fundamental_cycle(const PlaneMap& q, const CoaccessTree& t, int e) {
  const int a = q.tail(e), b = q.head(e);
  std::vector<int> anc_a;
  for (int v = a;; v = q.tail(t.parent_dart[v])) {
    anc_a.push_back(v);
    if (t.parent_dart[v] < 0) break;
  }
  std::vector<int> up;  // darts from b upward
  int lca = b;
  while (std::find(anc_a.begin(), anc_a.end(), lca) == anc_a.end()) {
    const int pd = t.parent_dart[lca];
    up.push_back(q.twin(pd));
    lca = q.tail(pd);
  }
  std::vector<int> down;  // darts from lca down to a, collected in reverse
  for (int v = a; v != lca; v = q.tail(t.parent_dart[v])) down.push_back(t.parent_dart[v]);
  std::reverse(down.begin(), down.end());
  std::vector<int> cycle{e};
  cycle.insert(cycle.end(), up.begin(), up.end());
  cycle.insert(cycle.end(), down.begin(), down.end());
  return cycle;
}

bool is_ancestor(const PlaneMap& q, const CoaccessTree& t, int anc, int v) {
  for (;;) {
    if (v == anc) return true;
    if (t.parent_dart[v] < 0) return false;
    v = q.tail(t.parent_dart[v]);
  }
}

std::vector<int> external_darts(const Biorientation& x, const CoaccessTree& t, const std::vector<char>& allowed) {
  const PlaneMap& q = x.map;
  std::vector<int> out;
  for (int d = 0; d < q.num_darts(); ++d) {
    if (!x.out[d] || !allowed[q.tail(d)] || !allowed[q.head(d)]) continue;
    if (t.parent_dart[q.head(d)] == d || t.parent_dart[q.tail(d)] == q.twin(d)) continue;
    out.push_back(d);
  }
  return out;
}

}  // namespace

CoaccessTree left_coaccessibility_tree(const Biorientation& x0, int b5) {
  const PlaneMap& q = x0.map;
  const auto allowed = tree_vertex_mask(q, b5);
  CoaccessTree t;
  t.root = b5;
  t.parent_dart.assign(q.num_vertices(), -1);
  std::vector<char> visited(q.num_vertices(), 0);
  struct Frame {
    int cur, remaining;
  };
  std::vector<Frame> stack;
  visited[b5] = 1;
  stack.push_back({q.vertex_dart(b5), q.degree(b5)});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.remaining == 0) {
      stack.pop_back();
      continue;
    }
    const int d = f.cur;
    f.cur = q.prev(d);
    --f.remaining;
    const int w = q.head(d);
    if (!x0.out[d] || !allowed[w] || visited[w]) continue;
    visited[w] = 1;
    t.parent_dart[w] = d;
    stack.push_back({q.prev(q.twin(d)), q.degree(w) - 1});
  }
  require_spanning(q, t, allowed);
  return t;
}

CoaccessTree left_tree_by_swaps(const Biorientation& x0, int b5) {
  const PlaneMap& q = x0.map;
  const auto allowed = tree_vertex_mask(q, b5);
  CoaccessTree t;
  t.root = b5;
  t.parent_dart.assign(q.num_vertices(), -1);
  std::vector<char> seen(q.num_vertices(), 0);
  std::queue<int> bfs;
  bfs.push(b5);
  seen[b5] = 1;
  while (!bfs.empty()) {
    const int v = bfs.front();
    bfs.pop();
    for (int d : q.out_darts(v)) {
      const int w = q.head(d);
      if (!x0.out[d] || !allowed[w] || seen[w]) continue;
      seen[w] = 1;
      t.parent_dart[w] = d;
      bfs.push(w);
    }
  }
  require_spanning(q, t, allowed);
  const long long cap = 10LL * q.num_edges() * q.num_edges();
  for (long long iter = 0;; ++iter) {
    if (iter > cap) throw OrientationError("parent-swap iteration cap exceeded");
    bool swapped = false;
    for (int e : external_darts(x0, t, allowed)) {
      const auto cycle = fundamental_cycle(q, t, e);
      const bool cw = cycle_interior(q, cycle).orientation == Orientation::kClockwise;
      if (is_ancestor(q, t, q.head(e), q.tail(e))) {
        if (cw) throw OrientationError("clockwise directed circuit in a minimal orientation");
        continue;
      }
      if (cw) {
        t.parent_dart[q.head(e)] = e;
        swapped = true;
        break;
      }
    }
    if (!swapped) return t;
  }
}

bool external_edges_ccw(const Biorientation& x0, const CoaccessTree& t) {
  const PlaneMap& q = x0.map;
  const int nd = q.num_darts();
  std::vector<char> in_tree(nd, 0);
  int tree_edges = 0;
  for (int v = 0; v < q.num_vertices(); ++v) {
    const int p = t.parent_dart[v];
    if (p < 0) continue;
    in_tree[p] = in_tree[q.twin(p)] = 1;
    ++tree_edges;
  }
  std::vector<char> allowed(q.num_vertices(), 0);
  allowed[t.root] = 1;
  for (int v = 0; v < q.num_vertices(); ++v)
    if (t.parent_dart[v] >= 0) allowed[v] = 1;
  if (tree_edges == 0) return true;
  std::vector<int> next_tree(nd, -1);
  for (int v = 0; v < q.num_vertices(); ++v) {
    if (!allowed[v]) continue;
    std::vector<int> ds;
    for (int d : q.out_darts(v))
      if (in_tree[d]) ds.push_back(d);
    for (std::size_t i = 0; i < ds.size(); ++i) next_tree[ds[i]] = ds[(i + 1) % ds.size()];
  }
  std::vector<int> pos(nd, -1);
  int start = -1;
  for (int d : q.out_darts(t.root))
    if (in_tree[d]) start = d;
  int prev_dart = start;
  for (int k = 1; k <= 2 * tree_edges; ++k) {
    const int arrive = q.twin(prev_dart);
    const int leave = next_tree[arrive];
    for (int e = q.next(arrive); e != leave; e = q.next(e)) pos[e] = k;
    prev_dart = leave;
  }
  if (prev_dart != start) throw OrientationError("tree contour did not close");
  for (int d : external_darts(x0, t, allowed))
    if (!(pos[d] < pos[q.twin(d)])) return false;
  return true;
}

bool external_edges_ccw_by_cycles(const Biorientation& x0, const CoaccessTree& t) {
  const PlaneMap& q = x0.map;
  std::vector<char> allowed(q.num_vertices(), 0);
  allowed[t.root] = 1;
  for (int v = 0; v < q.num_vertices(); ++v)
    if (t.parent_dart[v] >= 0) allowed[v] = 1;
  for (int e : external_darts(x0, t, allowed)) {
    const auto cycle = fundamental_cycle(q, t, e);
    if (cycle_interior(q, cycle).orientation != Orientation::kCounterclockwise) return false;
  }
  return true;
}

int default_b5(const PlaneMap& q) {
  if (!q.has_colors()) throw OrientationError("bicolored map expected");
  for (int v : q.outer_vertices())
    if (q.color(v) == Color::kBlack) return v;
  throw OrientationError("no black outer vertex");
}

namespace {

void require_G(const PlaneMap& q) {
  if (!q.has_colors()) throw OrientationError("not in G: map is not bicolored");
  const auto outer = q.outer_vertices();
  if (outer.size() != 10) throw OrientationError("not in G: outer degree is not 10");
  std::vector<char> seen(q.num_vertices(), 0);
  for (int v : outer) {
    if (seen[v]) throw OrientationError("not in G: outer contour is not simple");
    seen[v] = 1;
  }
  for (int f = 0; f < q.num_faces(); ++f)
    if (f != q.outer_face() && q.face_degree(f) != 4) throw OrientationError("not in G: inner face of degree != 4");
  for (int v = 0; v < q.num_vertices(); ++v)
    if (q.color(v) == Color::kBlack && q.degree(v) != 3) throw OrientationError("not in G: black vertex of degree != 3");
}

}  // namespace

Biorientation build_5c_biorientation(const PlaneMap& q, std::optional<int> b5_opt) {
  require_G(q);
  const int b5 = b5_opt ? *b5_opt : default_b5(q);
  const auto outer = q.outer_vertex_mask();
  if (b5 < 0 || b5 >= q.num_vertices() || !outer[b5] || q.color(b5) != Color::kBlack)
    throw OrientationError("b5 must be an outer black vertex");
  Biorientation x;
  try {
    x = compute_alpha_orientation(q, regular_alpha(q, b5));
  } catch (const OrientationError& e) {
    throw OrientationError(std::string("no regular orientation (separating 3-cycle): ") + e.what());
  }
  x = reroot_to(x, b5);
  const Biorientation x0 = minimize_orientation(x);
  const CoaccessTree tree = left_coaccessibility_tree(x0, b5);
  if (!external_edges_ccw(x0, tree)) throw OrientationError("left co-accessibility tree verification failed");
  Biorientation y = x0;
  for (int v = 0; v < q.num_vertices(); ++v) {
    const int p = tree.parent_dart[v];
    if (p < 0) continue;
    if (q.tail(p) == b5)
      y.out[p] = 0;
    y.out[q.twin(p)] = 1;
  }
  y.root = b5;
  audit_5c_biorientation(y);
  return y;
}

void audit_5c_biorientation(const Biorientation& x) {
  const PlaneMap& q = x.map;
  const auto outer = q.outer_vertex_mask();
  int inner = 0;
  for (int v = 0; v < q.num_vertices(); ++v) {
    const int k = x.outdegree(v);
    if (outer[v]) {
      if (k != 0) throw OrientationError("outer vertex " + std::to_string(v) + " has positive outdegree");
      continue;
    }
    ++inner;
    const int want = q.color(v) == Color::kWhite ? 5 : 2;
    if (k != want)
      throw OrientationError("inner vertex " + std::to_string(v) + " has outdegree " + std::to_string(k));
  }
  std::vector<int> dsu(q.num_vertices());
  std::iota(dsu.begin(), dsu.end(), 0);
  auto find = [&](int v) {
    while (dsu[v] != v) v = dsu[v] = dsu[dsu[v]];
    return v;
  };
  int two_way = 0;
  for (int d = 0; d < q.num_darts(); ++d) {
    if (d > q.twin(d)) continue;
    if (q.is_inner_edge(d) && !x.out[d] && !x.out[q.twin(d)])
      throw OrientationError("0-way inner edge");
    if (!x.two_way(d)) continue;
    ++two_way;
    const int a = find(q.tail(d)), b = find(q.head(d));
    if (a == b) throw OrientationError("2-way edges contain a cycle");
    dsu[a] = b;
  }
  if (two_way != inner - 1) throw OrientationError("2-way edges do not span the inner vertices");
}

std::string biorientation_to_json(const Biorientation& x) {
  auto j = nlohmann::json::parse(map_to_json(x.map));
  nlohmann::json flags = nlohmann::json::array();
  for (auto f : x.out) flags.push_back(static_cast<int>(f));
  j["out_flags"] = std::move(flags);
  j["root_vertex"] = x.root ? nlohmann::json(*x.root) : nlohmann::json(nullptr);
  return j.dump();
}

Biorientation biorientation_from_json(const std::string& text) {
  Biorientation x;
  x.map = map_from_json(text);
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& f : j.at("out_flags")) x.out.push_back(static_cast<std::uint8_t>(f.get<int>() != 0));
    if (j.contains("root_vertex") && !j["root_vertex"].is_null()) x.root = j["root_vertex"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw OrientationError(std::string("malformed biorientation JSON: ") + e.what());
  }
  if (static_cast<int>(x.out.size()) != x.map.num_darts()) throw OrientationError("out_flags size mismatch");
  return x;
}

}  // namespace pentree
