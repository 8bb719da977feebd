#include "pentree/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>

#include "pentree/bijection.hpp"
#include "pentree/grammar.hpp"
#include "pentree/series.hpp"

namespace pentree {

namespace {

constexpr unsigned kPrec = 256;

mpf_class mpf(double v) { return mpf_class(v, kPrec); }

mpf_class mpf(const mpq_class& q) {
  mpf_class r(0, kPrec);
  mpf_set_q(r.get_mpf_t(), q.get_mpq_t());
  return r;
}

mpf_class mpf(const mpz_class& z) {
  mpf_class r(0, kPrec);
  mpf_set_z(r.get_mpf_t(), z.get_mpz_t());
  return r;
}

struct Eval {
  mpf_class g[3];
  mpf_class j[3][3];
};

// Equations A = t phiA, B = t phiB and the vanishing Jacobian determinant of
// (A, B) -> (t phiA, t phiB), with their derivatives in (t, A, B).
Eval evaluate(const mpf_class& t, const mpf_class& a, const mpf_class& b) {
  Eval e;
  for (auto& x : e.g) x = mpf_class(0, kPrec);
  for (auto& row : e.j)
    for (auto& x : row) x = mpf_class(0, kPrec);
  const mpf_class b2 = b * b, b3 = b2 * b;
  const mpf_class phi_a = a + a * a + 2 * a * b + 3 * a * b2 + b2 * b2;
  const mpf_class phi_b = 1 + 2 * a + b + 2 * a * b + b2 + b3;
  const mpf_class p = 1 + 2 * a + 2 * b + 3 * b2;       // d phiA / dA
  const mpf_class r = 2 * a + 6 * a * b + 4 * b3;       // d phiA / dB
  const mpf_class s = 2 + 2 * b;                        // d phiB / dA
  const mpf_class q = 1 + 2 * a + 2 * b + 3 * b2;       // d phiB / dB
  e.g[0] = t * phi_a - a;
  e.g[1] = t * phi_b - b;
  const mpf_class one_p = 1 - t * p, one_q = 1 - t * q;
  e.g[2] = one_p * one_q - t * t * r * s;
  e.j[0][0] = phi_a;
  e.j[0][1] = t * p - 1;
  e.j[0][2] = t * r;
  e.j[1][0] = phi_b;
  e.j[1][1] = t * s;
  e.j[1][2] = t * q - 1;
  const mpf_class p_a = 2, p_b = 2 + 6 * b, q_a = 2, q_b = 2 + 6 * b;
  const mpf_class r_a = 2 + 6 * b, r_b = 6 * a + 12 * b2, s_a = 0, s_b = 2;
  e.j[2][0] = -p * one_q - q * one_p - 2 * t * r * s;
  e.j[2][1] = -t * p_a * one_q - t * q_a * one_p - t * t * (r_a * s + r * s_a);
  e.j[2][2] = -t * p_b * one_q - t * q_b * one_p - t * t * (r_b * s + r * s_b);
  return e;
}

mpf_class max_abs(const mpf_class (&g)[3]) {
  mpf_class m(0, kPrec);
  for (const auto& x : g)
    if (abs(x) > m) m = abs(x);
  return m;
}

// Solves j * d = -g by Gaussian elimination with partial pivoting.
void newton_step(Eval& e, mpf_class (&d)[3]) {
  mpf_class m[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) m[i][k] = e.j[i][k];
    m[i][3] = -e.g[i];
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int i = c + 1; i < 3; ++i)
      if (abs(m[i][c]) > abs(m[piv][c])) piv = i;
    if (m[piv][c] == 0) throw SamplerError("singular Newton system");
    for (int k = 0; k < 4; ++k) std::swap(m[c][k], m[piv][k]);
    for (int i = c + 1; i < 3; ++i) {
      const mpf_class f = m[i][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[i][k] -= f * m[c][k];
    }
  }
  for (int i = 2; i >= 0; --i) {
    mpf_class acc = m[i][3];
    for (int k = i + 1; k < 3; ++k) acc -= m[i][k] * d[k];
    d[i] = acc / m[i][i];
  }
}

}  // namespace

SingularPoint eval_singular() {
  mpf_set_default_prec(kPrec);
  const Constants& k = constants();
  mpf_class t = mpf((k.rho_lo + k.rho_hi) / 2);
  // partial sums of the series as a seed
  const TreeSeries ts = solve_AB(200);
  mpf_class a(0, kPrec), b(0, kPrec), tp(1, kPrec);
  for (int n = 1; n <= 200; ++n) {
    tp *= t;
    a += mpf(ts.a[n]) * tp;
    b += mpf(ts.b[n]) * tp;
  }
  const mpf_class tol("1e-60", kPrec);
  Eval e = evaluate(t, a, b);
  mpf_class res = max_abs(e.g);
  for (int it = 0; it < 200 && res > tol; ++it) {
    mpf_class d[3] = {mpf(0.0), mpf(0.0), mpf(0.0)};
    newton_step(e, d);
    mpf_class lambda = mpf(1.0);
    bool moved = false;
    for (int h = 0; h < 60; ++h) {
      const mpf_class nt = t + lambda * d[0], na = a + lambda * d[1], nb = b + lambda * d[2];
      Eval ne = evaluate(nt, na, nb);
      const mpf_class nres = max_abs(ne.g);
      if (nres < res) {
        t = nt;
        a = na;
        b = nb;
        e = ne;
        res = nres;
        moved = true;
        break;
      }
      lambda /= 2;
    }
    if (!moved) break;
  }
  SingularPoint sp{t, a, b, 0};
  const mpf_class r0 = abs(e.g[0]), r1 = abs(e.g[1]);
  sp.residual = std::max(r0.get_d(), r1.get_d());
  if (!(sp.residual < 1e-20) || !(mpf_class(abs(e.g[2])).get_d() < 1e-20)) throw SamplerError("singular point refinement did not converge");
  return sp;
}

// ---------------------------------------------------------------- context

void BoltzmannContext::set_probabilities(const mpf_class& x, const mpf_class& a, const mpf_class& b) {
  x_ = x.get_d();
  a_ = a.get_d();
  b_ = b.get_d();
  const mpf_class ab = a * b, b2 = b * b;
  const mpf_class wa[8] = {a, a * a, ab, ab, ab * b, ab * b, ab * b, b2 * b2};
  const mpf_class wb[8] = {mpf(1.0), a, a, b, ab, ab, b2, b2 * b};
  mpf_class sa(0, kPrec), sb(0, kPrec);
  for (int i = 0; i < 8; ++i) {
    const mpf_class pa = x * wa[i] / a, pb = x * wb[i] / b;
    prob_[i] = pa.get_d();
    prob_[8 + i] = pb.get_d();
    sa += pa;
    sb += pb;
  }
  if (std::abs(sa.get_d() - 1) > 1e-12 || std::abs(sb.get_d() - 1) > 1e-12)
    throw SamplerError("branch probabilities do not sum to 1");
  for (int g = 0; g < 2; ++g) {
    double acc = 0;
    for (int i = 0; i < 8; ++i) {
      acc += prob_[8 * g + i];
      cumulative_[8 * g + i] = acc;
    }
    cumulative_[8 * g + 7] = 1.0;
  }
}

BoltzmannContext BoltzmannContext::singular() {
  static const SingularPoint sp = eval_singular();
  BoltzmannContext c;
  c.set_probabilities(sp.rho, sp.a, sp.b);
  return c;
}

BoltzmannContext BoltzmannContext::at(double x) {
  mpf_set_default_prec(kPrec);
  const Constants& k = constants();
  if (!(x > 0) || x > k.rho) throw SamplerError("Boltzmann parameter must lie in (0, rho]");
  if (x == k.rho) return singular();
  const mpf_class t = mpf(x);
  mpf_class a(0, kPrec), b(0, kPrec);
  const mpf_class tol("1e-40", kPrec);
  for (int it = 0; it < 10000000; ++it) {
    const mpf_class b2 = b * b;
    const mpf_class na = t * (a + a * a + 2 * a * b + 3 * a * b2 + b2 * b2);
    const mpf_class nb = t * (1 + 2 * a + b + 2 * a * b + b2 + b2 * b);
    const bool done = abs(na - a) < tol && abs(nb - b) < tol;
    a = na;
    b = nb;
    if (done) break;
  }
  BoltzmannContext c;
  c.set_probabilities(t, a, b);
  return c;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------- stream

struct SamplerStream::Tables {
  int n = 0;
  // scaled counts x^k [t^k] of A, B, A^2, AB, B^2, AB^2, B^3, B^4
  std::vector<double> a, b, a2, ab, b2, ab2, b3, b4;
  const std::vector<double>* product(int na, int nb) const {
    switch (na * 8 + nb) {
      case 8: return &a;
      case 1: return &b;
      case 16: return &a2;
      case 9: return &ab;
      case 2: return &b2;
      case 10: return &ab2;
      case 3: return &b3;
      case 4: return &b4;
      default: return nullptr;
    }
  }
};

SamplerStream::SamplerStream(const BoltzmannContext& ctx, std::uint64_t seed, ExactMethod method)
    : ctx_(ctx), gen_(seed), method_(method) {}
SamplerStream::~SamplerStream() = default;
SamplerStream::SamplerStream(SamplerStream&&) noexcept = default;

double SamplerStream::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

int SamplerStream::uniform_int(int k) {
  const int r = static_cast<int>(uniform() * k);
  return std::min(r, k - 1);
}

bool SamplerStream::boltzmann_tree(char kind, int cap, std::vector<std::uint8_t>& out) {
  out.clear();
  std::vector<std::uint8_t> stack{static_cast<std::uint8_t>(kind == 'A' ? 0 : 1)};
  const auto& cum = ctx_.cumulative_;
  while (!stack.empty()) {
    const int g = stack.back();
    stack.pop_back();
    if (static_cast<int>(out.size()) >= cap) return false;
    const double u = uniform();
    int s = 8 * g;
    while (s < 8 * g + 7 && u >= cum[s]) ++s;
    out.push_back(static_cast<std::uint8_t>(s));
    const auto& ch = subtype_children(s);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(static_cast<std::uint8_t>(*it));
  }
  return true;
}

void SamplerStream::ensure_tables(int n) {
  if (tables_ && tables_->n >= n) return;
  const int size = std::max(n, tables_ ? 2 * tables_->n : 64);
  auto t = std::make_unique<Tables>();
  t->n = size;
  for (auto* v : {&t->a, &t->b, &t->a2, &t->ab, &t->b2, &t->ab2, &t->b3, &t->b4}) v->assign(size + 1, 0.0);
  const double x = ctx_.x();
  auto conv = [](const std::vector<double>& p, const std::vector<double>& q, int m) {
    double s = 0;
    for (int i = 1; i < m; ++i) s += p[i] * q[m - i];
    return s;
  };
  for (int k = 1; k <= size; ++k) {
    const int m = k - 1;
    if (m >= 1) {
      t->a2[m] = conv(t->a, t->a, m);
      t->ab[m] = conv(t->a, t->b, m);
      t->b2[m] = conv(t->b, t->b, m);
      t->b3[m] = conv(t->b2, t->b, m);
      t->ab2[m] = conv(t->a, t->b2, m);
      t->b4[m] = conv(t->b2, t->b2, m);
    }
    t->a[k] = x * (t->a[m] + t->a2[m] + 2 * t->ab[m] + 3 * t->ab2[m] + t->b4[m]);
    t->b[k] = x * ((m == 0 ? 1.0 : 0.0) + 2 * t->a[m] + t->b[m] + 2 * t->ab[m] + t->b2[m] + t->b3[m]);
  }
  // products at the top index
  const int m = size;
  t->a2[m] = conv(t->a, t->a, m);
  t->ab[m] = conv(t->a, t->b, m);
  t->b2[m] = conv(t->b, t->b, m);
  t->b3[m] = conv(t->b2, t->b, m);
  t->ab2[m] = conv(t->a, t->b2, m);
  t->b4[m] = conv(t->b2, t->b2, m);
  tables_ = std::move(t);
}

namespace {

// Index in [lo, hi] drawn with probability weight(i) / total, scanning from
// both ends so that lopsided splits cost little.
template <class W>
int draw_split(double u, double total, int lo, int hi, W weight) {
  const double target = u * total;
  double acc = 0;
  int last = lo;
  while (lo <= hi) {
    double w = weight(lo);
    if (w > 0) {
      acc += w;
      last = lo;
      if (acc > target) return lo;
    }
    ++lo;
    if (lo > hi + 1 || hi < lo) break;
    w = weight(hi);
    if (w > 0) {
      acc += w;
      last = hi;
      if (acc > target) return hi;
    }
    --hi;
  }
  return last;
}

}  // namespace

std::vector<std::uint8_t> SamplerStream::recursive_tree(char kind, int size) {
  if (size < 1) throw SamplerError("tree size must be positive");
  ensure_tables(size);
  const Tables& t = *tables_;
  std::vector<std::uint8_t> out;
  out.reserve(size);
  struct Task {
    std::uint8_t group;
    int size;
  };
  std::vector<Task> stack{{static_cast<std::uint8_t>(kind == 'A' ? 0 : 1), size}};
  std::vector<int> sizes;
  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    const int m = task.size - 1;
    // weight of each production at child total m
    double w[8];
    double total = 0;
    for (int i = 0; i < 8; ++i) {
      const int s = 8 * task.group + i;
      const auto& ch = subtype_children(s);
      int na = 0, nb = 0;
      for (auto c : ch) (c == NodeKind::kA ? na : nb)++;
      if (ch.empty())
        w[i] = m == 0 ? 1.0 : 0.0;
      else
        w[i] = (*t.product(na, nb))[m];
      total += w[i];
    }
    if (!(total > 0)) throw SamplerError("no tree of the requested size");
    const double target = uniform() * total;
    int pick = -1;
    double acc = 0;
    for (int i = 0; i < 8; ++i) {
      if (w[i] <= 0) continue;
      acc += w[i];
      pick = i;
      if (acc > target) break;
    }
    const int s = 8 * task.group + pick;
    out.push_back(static_cast<std::uint8_t>(s));
    const auto& ch = subtype_children(s);
    if (ch.empty()) continue;
    // split m among the children in slot order
    int na = 0, nb = 0;
    for (auto c : ch) (c == NodeKind::kA ? na : nb)++;
    sizes.assign(ch.size(), 0);
    int rest = m;
    for (std::size_t j = 0; j + 1 < ch.size(); ++j) {
      const auto& first = ch[j] == NodeKind::kA ? t.a : t.b;
      const double whole = (*t.product(na, nb))[rest];
      (ch[j] == NodeKind::kA ? na : nb)--;
      const auto& others = *t.product(na, nb);
      const int pick_size =
          draw_split(uniform(), whole, 1, rest - 1, [&](int i) { return first[i] * others[rest - i]; });
      sizes[j] = pick_size;
      rest -= pick_size;
    }
    sizes.back() = rest;
    for (std::size_t j = ch.size(); j-- > 0;)
      stack.push_back({static_cast<std::uint8_t>(ch[j] == NodeKind::kA ? 0 : 1), sizes[j]});
  }
  if (static_cast<int>(out.size()) != size) throw SamplerError("recursive generation produced the wrong size");
  return out;
}

int SamplerStream::draw_pair_split(int n) {
  ensure_tables(n);
  const Tables& t = *tables_;
  return draw_split(uniform(), t.ab[n], 1, n - 1, [&](int i) { return t.a[i] * t.b[n - i]; });
}

// ---------------------------------------------------------------- samplers

TreePair sample_tree_pair(SamplerStream& s, int n, SizeMode mode) {
  TreePair p;
  auto& cnt = s.counters();
  if (mode.exact) {
    if (n < 6) throw SamplerError("no leg-balanced tree with a marked inner edge has " + std::to_string(n) + " nodes");
    const bool recursive = s.method() == ExactMethod::kRecursive ||
                           (s.method() == ExactMethod::kAuto && n <= kTableLimit);
    if (recursive) {
      ++cnt.boltzmann_draws;
      const int na = s.draw_pair_split(n);
      p.a = s.recursive_tree('A', na);
      p.b = s.recursive_tree('B', n - na);
      ++cnt.pair_samples;
      return p;
    }
    std::vector<std::uint8_t> a, b;
    for (;;) {
      ++cnt.boltzmann_draws;
      if (!s.boltzmann_tree('A', n - 1, a)) continue;
      if (!s.boltzmann_tree('B', n - static_cast<int>(a.size()), b)) continue;
      if (static_cast<int>(a.size() + b.size()) == n) break;
    }
    p.a = std::move(a);
    p.b = std::move(b);
  } else {
    if (!(mode.eps > 0) || mode.eps >= 1) throw SamplerError("approximate mode needs 0 < eps < 1");
    const int lo = std::max(6, static_cast<int>(std::ceil(n * (1 - mode.eps))));
    const int hi = static_cast<int>(std::floor(n * (1 + mode.eps)));
    if (hi < lo) throw SamplerError("empty size window");
    std::vector<std::uint8_t> a, b;
    for (;;) {
      ++cnt.boltzmann_draws;
      if (!s.boltzmann_tree('A', hi - 1, a)) continue;
      if (!s.boltzmann_tree('B', hi - static_cast<int>(a.size()), b)) continue;
      if (static_cast<int>(a.size() + b.size()) >= lo) break;
    }
    p.a = std::move(a);
    p.b = std::move(b);
  }
  ++cnt.pair_samples;
  return p;
}

PlaneMap sample_5c(SamplerStream& s, int n, SizeMode mode) {
  if (mode.exact && n == 1) {
    const PlaneMap w = wheel_w5();
    const auto outer = w.outer_vertices();
    return root_at_outer_vertex(w, outer[s.uniform_int(static_cast<int>(outer.size()))]);
  }
  const TreePair p = sample_tree_pair(s, n, mode);
  const PlaneMap m = tree_to_map(join_preorders(p.a, p.b));
  const auto outer = m.outer_vertices();
  if (outer.size() != 5) throw SamplerError("closure did not produce a pentagon");
  return root_at_outer_vertex(m, outer[s.uniform_int(5)]);
}

bool has_outer_degree3(const PlaneMap& m) {
  for (int v : m.outer_vertices())
    if (m.degree(v) == 3) return true;
  return false;
}

namespace {

// The map with the two chords at v1, or nullopt when a chord would double an
// edge or close a separating 3- or 4-cycle.
std::optional<PlaneMap> chorded(const PlaneMap& m) {
  const auto v = outer_contour(m);
  const int v1 = v[0], v2 = v[1], v3 = v[2], v4 = v[3], v5 = v[4];
  if (m.find_dart(v1, v3) >= 0 || m.find_dart(v1, v4) >= 0) return std::nullopt;
  std::vector<std::vector<int>> faces{{v1, v4, v3}, {v3, v2, v1}, {v1, v5, v4}};
  for (int f = 0; f < m.num_faces(); ++f)
    if (f != m.outer_face()) faces.push_back(m.face_vertices(f));
  PlaneMap t = PlaneMap::from_faces(m.num_vertices(), faces, 0);
  std::set<std::array<int, 3>> tri;
  for (const auto& f : faces) {
    std::array<int, 3> k{f[0], f[1], f[2]};
    std::sort(k.begin(), k.end());
    tri.insert(k);
  }
  auto is_tri = [&](int a, int b, int c) {
    std::array<int, 3> k{a, b, c};
    std::sort(k.begin(), k.end());
    return tri.count(k) > 0;
  };
  auto neighbours = [&](int x) {
    std::vector<int> out;
    for (int d : t.out_darts(x)) out.push_back(t.head(d));
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto n1 = neighbours(v1);
  for (int w : {v3, v4}) {
    const auto nw = neighbours(w);
    // 3-cycles v1 w c
    for (int c : nw)
      if (c != v1 && std::binary_search(n1.begin(), n1.end(), c) && !is_tri(v1, w, c)) return std::nullopt;
    // 4-cycles v1 w c d
    for (int c : nw) {
      if (c == v1) continue;
      const auto nc = neighbours(c);
      for (int d : n1) {
        if (d == w || d == c || !std::binary_search(nc.begin(), nc.end(), d)) continue;
        const bool split_c = is_tri(v1, w, c) && is_tri(v1, c, d);
        const bool split_d = is_tri(w, c, d) && is_tri(w, d, v1);
        if (!split_c && !split_d) return std::nullopt;
      }
    }
  }
  return t.with_root(t.find_dart(v1, v3));
}

}  // namespace

bool is_admissible(const PlaneMap& m) { return chorded(m).has_value(); }

PlaneMap add_root_chords(const PlaneMap& m) {
  auto t = chorded(m);
  if (!t) throw SamplerError("rooted map is not admissible");
  return *t;
}

namespace {

// Exact sizes with no 5-connected triangulation would make rejection spin forever.
void require_connected_size(int n, SizeMode mode) {
  if (n < 10) throw SamplerError("5-connected triangulations need n >= 10");
  if (mode.exact && n < 40 && series_F5co(n)[n] == 0)
    throw SamplerError("no 5-connected triangulation has " + std::to_string(n + 2) + " vertices");
}

}  // namespace

ConnectedSample sample_5conn_deg5(SamplerStream& s, int n, SizeMode mode) {
  require_connected_size(n, mode);
  ConnectedSample out;
  PlaneMap m;
  if (mode.exact) {
    for (;;) {
      m = sample_5c(s, n - 4, mode);
      ++out.calls;
      ++s.counters().map_calls;
      if (!has_outer_degree3(m)) break;
    }
  } else {
    m = shell_outer_deg3(sample_5c(s, n - 4, mode));
    ++out.calls;
    ++s.counters().map_calls;
  }
  Augmented aug = augment_apex(m);
  if (!aug.five_connected) throw SamplerError("augmentation is not 5-connected");
  out.map = std::move(aug.map);
  return out;
}

ConnectedSample sample_5conn_any(SamplerStream& s, int n, SizeMode mode) {
  require_connected_size(n, mode);
  ConnectedSample out;
  for (;;) {
    const PlaneMap m = sample_5c(s, mode.exact ? n - 3 : n, mode);
    ++out.calls;
    ++s.counters().map_calls;
    if (auto t = chorded(m)) {
      out.map = std::move(*t);
      return out;
    }
  }
}

}  // namespace pentree
