// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pentree/planemap.hpp"

namespace testsupport {

using Poly = std::vector<long long>;

inline Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline Poly add(std::initializer_list<Poly> terms) {
  Poly c(terms.begin()->size(), 0);
  for (const auto& t : terms)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += t[i];
  return c;
}

inline Poly scale(const Poly& a, long long s) {
  Poly c(a);
  for (auto& x : c) x *= s;
  return c;
}

inline Poly times_t(const Poly& a) {
  Poly c(a.size(), 0);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) c[i + 1] = a[i];
  return c;
}

// Tree series by plain fixed-point iteration on machine integers (order <= 22).
inline std::pair<Poly, Poly> naive_AB(int order) {
  Poly a(order + 1, 0), b(order + 1, 0), one(order + 1, 0);
  one[0] = 1;
  for (int it = 0; it <= order + 1; ++it) {
    const Poly ab = mul(a, b), bb = mul(b, b);
    Poly na = times_t(add({a, mul(a, a), scale(ab, 2), scale(mul(ab, b), 3), mul(bb, bb)}));
    Poly nb = times_t(add({one, scale(a, 2), b, scale(ab, 2), bb, mul(bb, b)}));
    a = na;
    b = nb;
  }
  return {a, b};
}

// Faces reachable from the outer face without crossing a dart of `cycle`.
inline std::set<int> faces_outside(const pentree::PlaneMap& m, const std::vector<int>& cycle) {
  std::set<int> blocked;
  for (int d : cycle) {
    blocked.insert(d);
    blocked.insert(m.twin(d));
  }
  std::set<int> seen{m.outer_face()};
  std::vector<int> stack{m.outer_face()};
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    for (int d = 0; d < m.num_darts(); ++d) {
      if (m.face(d) != f || blocked.count(d)) continue;
      const int g = m.face(m.twin(d));
      if (seen.insert(g).second) stack.push_back(g);
    }
  }
  return seen;
}

// Number of separating simple k-cycles, by enumerating vertex sequences and
// flood-filling faces.
inline int count_separating_cycles(const pentree::PlaneMap& m, int k) {
  const int nv = m.num_vertices();
  std::vector<std::set<int>> adj(nv);
  for (int d = 0; d < m.num_darts(); ++d) adj[m.tail(d)].insert(m.head(d));
  std::set<std::vector<int>> cycles;
  std::vector<int> path;
  std::function<void(int)> grow = [&](int v) {
    if (static_cast<int>(path.size()) == k) {
      if (adj[v].count(path[0])) {
        std::vector<int> key = path;
        // canonical form: smallest vertex first, smaller neighbour second
        if (key[1] > key.back()) std::reverse(key.begin() + 1, key.end());
        cycles.insert(key);
      }
      return;
    }
    for (int w : adj[v])
      if (w > path[0] && std::find(path.begin(), path.end(), w) == path.end()) {
        path.push_back(w);
        grow(w);
        path.pop_back();
      }
  };
  for (int s = 0; s < nv; ++s) {
    path = {s};
    grow(s);
  }
  int separating = 0;
  for (const auto& c : cycles) {
    std::vector<int> darts;
    for (int i = 0; i < k; ++i) darts.push_back(m.find_dart(c[i], c[(i + 1) % k]));
    const std::set<int> out = faces_outside(m, darts);
    bool in_side = false, out_side = false;
    for (int v = 0; v < nv; ++v) {
      if (std::find(c.begin(), c.end(), v) != c.end()) continue;
      const int f = m.face(m.vertex_dart(v));
      (out.count(f) ? out_side : in_side) = true;
    }
    separating += in_side && out_side;
  }
  return separating;
}

inline std::vector<int> degree_histogram(const pentree::PlaneMap& m) {
  std::vector<int> h;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (static_cast<int>(h.size()) <= m.degree(v)) h.resize(m.degree(v) + 1, 0);
    ++h[m.degree(v)];
  }
  return h;
}

}  // namespace testsupport
