#include "pentree/bijection.hpp"

#include <algorithm>

namespace pentree {

PlaneTree open_Phi(const Biorientation& y) {
  const PlaneMap& q = y.map;
  if (!q.has_colors()) throw BijectionError("opening needs a bicolored map");
  const auto outer = q.outer_vertex_mask();
  std::vector<int> node(q.num_vertices(), -1);
  int n = 0;
  for (int v = 0; v < q.num_vertices(); ++v)
    if (!outer[v]) node[v] = n++;
  if (n == 0) throw BijectionError("map has no inner vertex");
  std::vector<std::vector<int>> rot(n);
  std::vector<Color> colors(n);
  for (int v = 0; v < q.num_vertices(); ++v) {
    if (outer[v]) {
      if (y.outdegree(v) != 0) throw BijectionError("outer vertex with an outgoing half-edge");
      continue;
    }
    colors[node[v]] = q.color(v);
    for (int d : q.out_darts(v)) {
      if (!y.out[d]) continue;
      if (y.two_way(d)) {
        if (outer[q.head(d)]) throw BijectionError("2-way edge reaches the outer contour");
        rot[node[v]].push_back(node[q.head(d)]);
      } else {
        rot[node[v]].push_back(kLeg);
      }
    }
    if (rot[node[v]].empty()) throw BijectionError("inner vertex of outdegree 0");
  }
  try {
    return PlaneTree::from_rotations(rot, std::move(colors));
  } catch (const TreeError& e) {
    throw BijectionError(std::string("2-way edges do not form a tree: ") + e.what());
  }
}

ClosureResult close_Psi_detailed(const PlaneTree& t) {
  if (!t.has_colors()) throw BijectionError("closure needs a bicolored tree");
  const int n = t.num_nodes();
  const int legs = t.num_legs();
  const int edges = t.num_inner_edges();
  const int excess = legs - edges;
  if (excess < 1) throw BijectionError("tree excess must be positive");
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < t.degree(u); ++i)
      if (t.to(u, i) == kStub) throw BijectionError("unexpected stub");

  // contour word: leg tokens and edge-side tokens in counterclockwise order
  struct Token {
    bool leg;
    int from, to;   // sides: from -> to; legs: from = node
    int slot;       // legs: slot at the node
  };
  std::vector<Token> tok;
  tok.reserve(2 * edges + legs + legs);
  {
    int u = 0, i = 0;
    do {
      if (t.is_leg(u, i)) {
        tok.push_back({true, u, -1, i});
        i = t.ccw(u, i);
      } else {
        const int v = t.to(u, i);
        tok.push_back({false, u, v, -1});
        i = t.ccw(v, t.back(u, i));
        u = v;
      }
    } while (!(u == 0 && i == 0));
  }
  const int m0 = static_cast<int>(tok.size());
  std::vector<int> nx(m0), pv(m0);
  for (int k = 0; k < m0; ++k) {
    nx[k] = (k + 1) % m0;
    pv[k] = (k + m0 - 1) % m0;
  }
  std::vector<char> alive(m0, 1);
  std::vector<std::vector<int>> leg_end(n);
  for (int u = 0; u < n; ++u) leg_end[u].assign(t.degree(u), -1);
  std::vector<std::vector<int>> faces;
  faces.reserve(legs + 1);
  std::vector<int> work;
  for (int k = 0; k < m0; ++k)
    if (tok[k].leg) work.push_back(k);
  int live = m0;
  int local = 0;
  while (!work.empty()) {
    const int l = work.back();
    work.pop_back();
    if (!alive[l] || live < 5) continue;
    const int t1 = nx[l], t2 = nx[t1], t3 = nx[t2];
    if (tok[t1].leg || tok[t2].leg || tok[t3].leg) continue;
    const int u = tok[l].from;
    faces.push_back({u, tok[t1].to, tok[t2].to, tok[t3].to});
    leg_end[u][tok[l].slot] = tok[t3].to;
    const int z = static_cast<int>(tok.size());
    tok.push_back({false, u, tok[t3].to, -1});
    nx.push_back(nx[t3]);
    pv.push_back(pv[l]);
    alive.push_back(1);
    nx[pv[l]] = z;
    pv[nx[t3]] = z;
    alive[l] = alive[t1] = alive[t2] = alive[t3] = 0;
    live -= 3;
    ++local;
    int p = pv[z];
    for (int k = 0; k < 3 && p != z; ++k, p = pv[p])
      if (tok[p].leg) work.push_back(p);
  }

  // final closure against the 2d-gon
  const int two_d = 2 * excess;
  int start = -1;
  for (int k = 0; k < static_cast<int>(tok.size()) && start < 0; ++k)
    if (alive[k] && tok[k].leg) start = k;
  if (start < 0) throw BijectionError("final closure: no leg left");
  std::vector<int> legs_left;
  std::vector<std::vector<int>> paths;  // vertices after each leg's node up to the next leg's node
  {
    int k = start;
    do {
      legs_left.push_back(k);
      std::vector<int> path;
      int s = nx[k];
      while (!tok[s].leg) {
        path.push_back(tok[s].to);
        s = nx[s];
      }
      if (path.size() > 2) throw BijectionError("final closure: unclosed pattern 1000 remains");
      paths.push_back(std::move(path));
      k = s;
    } while (k != start);
  }
  const int r = static_cast<int>(legs_left.size());
  long long total_j = 0;
  for (const auto& p : paths) total_j += 2 - static_cast<int>(p.size());
  if (total_j != two_d) throw BijectionError("final closure: leg/side balance does not match the excess");
  const int u1 = tok[legs_left[0]].from;
  std::vector<int> pi(r + 1);
  pi[0] = t.color(u1) == Color::kWhite ? 1 : 0;
  for (int i = 0; i < r; ++i) {
    const int j = 2 - static_cast<int>(paths[i].size());
    pi[i + 1] = ((pi[i] - j) % two_d + two_d) % two_d;
  }
  if (pi[r] != pi[0]) throw BijectionError("final closure does not wrap around");
  auto polygon = [&](int p) { return n + ((p % two_d) + two_d) % two_d; };
  for (int i = 0; i < r; ++i) {
    const Token& leg = tok[legs_left[i]];
    leg_end[leg.from][leg.slot] = polygon(pi[i]);
    std::vector<int> face{leg.from};
    face.insert(face.end(), paths[i].begin(), paths[i].end());
    const int j = 2 - static_cast<int>(paths[i].size());
    for (int s = 0; s <= j; ++s) face.push_back(polygon(pi[i + 1] + s));
    faces.push_back(std::move(face));
  }
  std::vector<int> outer_face;
  for (int p = 0; p < two_d; ++p) outer_face.push_back(polygon(-p));
  faces.push_back(std::move(outer_face));

  std::vector<Color> colors(n + two_d);
  for (int u = 0; u < n; ++u) colors[u] = t.color(u);
  for (int p = 0; p < two_d; ++p) colors[n + p] = p % 2 == 0 ? Color::kWhite : Color::kBlack;
  for (int i = 0; i < r; ++i) {
    const Token& leg = tok[legs_left[i]];
    if (colors[leg.from] == colors[n + pi[i]]) throw BijectionError("final closure: color clash");
  }

  ClosureResult res;
  try {
    res.bio.map = PlaneMap::from_faces(n + two_d, faces, static_cast<int>(faces.size()) - 1, std::move(colors));
  } catch (const MapError& e) {
    throw BijectionError(std::string("closure produced an invalid map: ") + e.what());
  }
  const PlaneMap& q = res.bio.map;
  res.bio.out.assign(q.num_darts(), 0);
  res.dart_of_slot.resize(n);
  for (int u = 0; u < n; ++u) {
    for (int i = 0; i < t.degree(u); ++i) {
      const int target = t.is_leg(u, i) ? leg_end[u][i] : t.to(u, i);
      const int d = q.find_dart(u, target);
      if (d < 0) throw BijectionError("closure lost a half-edge");
      res.dart_of_slot[u].push_back(d);
      res.bio.out[d] = 1;
    }
  }
  res.local_closures = local;
  res.final_closures = r;
  // audit: quadrangular inner faces and rotation agreement at every node
  for (int f = 0; f < q.num_faces(); ++f)
    if (f != q.outer_face() && q.face_degree(f) != 4) throw BijectionError("closure produced a non-quadrangular face");
  for (int u = 0; u < n; ++u) {
    std::vector<int> outs;
    for (int d : q.out_darts(u))
      if (res.bio.out[d]) outs.push_back(d);
    const auto& want = res.dart_of_slot[u];
    if (outs.size() != want.size()) throw BijectionError("closure audit: outdegree mismatch");
    const auto it = std::find(outs.begin(), outs.end(), want[0]);
    std::rotate(outs.begin(), it, outs.end());
    if (outs != want) throw BijectionError("closure audit: rotation mismatch");
  }
  return res;
}

Biorientation close_Psi(const PlaneTree& t) { return close_Psi_detailed(t).bio; }

PlaneTree map_to_tree(const PlaneMap& m) {
  PlaneMap q;
  try {
    q = angular_map(m);
  } catch (const MapError& e) {
    throw BijectionError(std::string("not a triangular dissection of the 5-gon: ") + e.what());
  }
  if (q.face_degree(q.outer_face()) != 10) throw BijectionError("outer face is not a pentagon");
  Biorientation y;
  try {
    y = build_5c_biorientation(q);
  } catch (const OrientationError& e) {
    throw BijectionError(std::string("map is not a 5c-triangulation: ") + e.what());
  }
  PlaneTree tau = reduce_from_T5c(open_Phi(y));
  if (!is_leg_balanced(tau)) throw BijectionError("opening produced a tree that is not leg-balanced");
  return tau;
}

PlaneMap tree_to_map(const PlaneTree& tau) {
  const PlaneTree big = expand_to_T5c(tau);
  const Biorientation y = close_Psi(big);
  const PlaneMap& q = y.map;
  for (int v = 0; v < q.num_vertices(); ++v)
    if (q.color(v) == Color::kBlack && q.degree(v) != 3) throw BijectionError("closure left a black vertex of degree != 3");
  return inverse_angular(q);
}

bool same_plane_tree(const PlaneTree& a, const PlaneTree& b) {
  if (a.num_nodes() != b.num_nodes() || a.colors() != b.colors()) return false;
  for (int u = 0; u < a.num_nodes(); ++u) {
    const int d = a.degree(u);
    if (b.degree(u) != d) return false;
    bool found = false;
    for (int s = 0; s < d && !found; ++s) {
      bool ok = true;
      for (int i = 0; i < d && ok; ++i) ok = a.to(u, i) == b.to(u, (i + s) % d);
      found = ok;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace pentree
