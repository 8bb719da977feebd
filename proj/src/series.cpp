#include "pentree/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pentree {

// ---------------------------------------------------------------- PowerSeries

PowerSeries::PowerSeries(int order, std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) {
  c_.resize(order + 1);
}

PowerSeries PowerSeries::constant(int order, long value) {
  PowerSeries s(order);
  s.c_[0] = value;
  return s;
}

PowerSeries PowerSeries::monomial(int order, int power, long value) {
  PowerSeries s(order);
  if (power <= order) s.c_[power] = value;
  return s;
}

PowerSeries PowerSeries::poly(int order, const std::vector<long>& coeffs) {
  PowerSeries s(order);
  for (std::size_t k = 0; k < coeffs.size() && static_cast<int>(k) <= order; ++k) s.c_[k] = coeffs[k];
  return s;
}

int PowerSeries::valuation() const {
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) return static_cast<int>(k);
  return -1;
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
  PowerSeries r(std::min(order(), o.order()));
  for (int k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] + o.c_[k];
  return r;
}

PowerSeries PowerSeries::operator-(const PowerSeries& o) const {
  PowerSeries r(std::min(order(), o.order()));
  for (int k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] - o.c_[k];
  return r;
}

PowerSeries PowerSeries::operator-() const {
  PowerSeries r(order());
  for (int k = 0; k <= order(); ++k) r.c_[k] = -c_[k];
  return r;
}

PowerSeries PowerSeries::operator*(const PowerSeries& o) const {
  const int n = std::min(order(), o.order());
  PowerSeries r(n);
  for (int i = 0; i <= n; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; i + j <= n; ++j)
      if (o.c_[j] != 0) r.c_[i + j] += c_[i] * o.c_[j];
  }
  return r;
}

PowerSeries PowerSeries::operator*(long s) const {
  PowerSeries r(order());
  for (int k = 0; k <= order(); ++k) r.c_[k] = c_[k] * s;
  return r;
}

PowerSeries PowerSeries::pow(int e) const {
  if (e < 0) throw SeriesError("negative power");
  PowerSeries r = constant(order(), 1);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

PowerSeries PowerSeries::shift(int k) const {
  PowerSeries r(order());
  for (int i = 0; i <= order(); ++i) {
    const int j = i + k;
    if (j < 0) {
      if (c_[i] != 0) throw SeriesError("shift would drop a nonzero coefficient");
      continue;
    }
    if (j <= order()) r.c_[j] = c_[i];
  }
  return r;
}

PowerSeries PowerSeries::inverse() const {
  if (c_.empty() || (c_[0] != 1 && c_[0] != -1)) throw SeriesError("inverse needs a unit constant term");
  const int n = order();
  PowerSeries r(n);
  r.c_[0] = c_[0];  // 1/(+-1) = +-1
  for (int k = 1; k <= n; ++k) {
    mpz_class acc = 0;
    for (int i = 1; i <= k; ++i) acc += c_[i] * r.c_[k - i];
    r.c_[k] = -acc * c_[0];
  }
  return r;
}

PowerSeries PowerSeries::compose(const PowerSeries& inner) const {
  if (inner.c_.empty() || inner.c_[0] != 0) throw SeriesError("composition needs an inner series without constant term");
  const int n = std::min(order(), inner.order());
  PowerSeries r(n);
  for (int k = n; k >= 0; --k) {
    r = r * inner.truncate(n);
    r.c_[0] += c_[k];
  }
  return r;
}

PowerSeries PowerSeries::truncate(int order) const {
  PowerSeries r(order);
  for (int k = 0; k <= order && k <= this->order(); ++k) r.c_[k] = c_[k];
  return r;
}

// ---------------------------------------------------------------- tree series

TreeSeries solve_AB(int order) {
  if (order < 1) throw SeriesError("order must be at least 1");
  const int n = order;
  std::vector<mpz_class> a(n + 1), b(n + 1), a2(n + 1), ab(n + 1), b2(n + 1), b3(n + 1), ab2(n + 1), b4(n + 1);
  auto conv = [](const std::vector<mpz_class>& x, const std::vector<mpz_class>& y, int m) {
    mpz_class s = 0;
    for (int i = 1; i < m; ++i)
      if (x[i] != 0 && y[m - i] != 0) s += x[i] * y[m - i];
    return s;
  };
  for (int k = 1; k <= n; ++k) {
    const int m = k - 1;
    // products at index m only involve a, b below m (zero constant terms)
    if (m >= 1) {
      a2[m] = conv(a, a, m);
      ab[m] = conv(a, b, m);
      b2[m] = conv(b, b, m);
      b3[m] = conv(b2, b, m);
      ab2[m] = conv(a, b2, m);
      b4[m] = conv(b2, b2, m);
    }
    a[k] = a[m] + a2[m] + 2 * ab[m] + 3 * ab2[m] + b4[m];
    b[k] = (m == 0 ? 1 : 0) + 2 * a[m] + b[m] + 2 * ab[m] + b2[m] + b3[m];
  }
  return {PowerSeries(n, a), PowerSeries(n, b)};
}

PowerSeries series_F5c(int order) {
  const TreeSeries s = solve_AB(order);
  const PowerSeries& a = s.a;
  const PowerSeries& b = s.b;
  const PowerSeries one = PowerSeries::constant(order, 1);
  const PowerSeries t = PowerSeries::monomial(order, 1);
  const PowerSeries ab = a * b;
  return t * (one + a * 3 + ab * 2 + a * a + ab * b) - ab * 2;
}

namespace {

// (1 - 3t + t^2) / (1 + t)^2 (F5c - t): the series F^(0).
PowerSeries series_F0(const PowerSeries& f5c) {
  const int k = f5c.order();
  const PowerSeries t = PowerSeries::monomial(k, 1);
  const PowerSeries num = PowerSeries::poly(k, {1, -3, 1});
  const PowerSeries den = PowerSeries::poly(k, {1, 2, 1}).inverse();
  return num * den * (f5c - t);
}

}  // namespace

PowerSeries series_F5co(int order) { return series_F0(series_F5c(order)).shift(4); }

PowerSeries series_five_AB(int order) {
  const TreeSeries s = solve_AB(order);
  return s.a * s.b * 5;
}

DegreeThreeSeries series_degree_three(int order) {
  const PowerSeries f0 = series_F0(series_F5c(order));
  const PowerSeries inv = PowerSeries::poly(order, {1, -3, 1}).inverse();
  DegreeThreeSeries d;
  d.none = f0;
  d.single = PowerSeries::poly(order, {0, 1, -1}) * inv * f0;
  d.pair = PowerSeries::poly(order, {0, 0, 1}) * inv * f0;
  return d;
}

// ---------------------------------------------------------------- identities

bool IdentityReport::ok() const {
  return std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.first_failure < 0; });
}

namespace {

int first_nonzero(const PowerSeries& s) { return s.valuation(); }

}  // namespace

int check_B_equation(const PowerSeries& b) {
  const int k = b.order();
  const PowerSeries one = PowerSeries::constant(k, 1);
  const PowerSeries t = PowerSeries::monomial(k, 1);
  const PowerSeries b1 = b + one;
  const PowerSeries lhs = -(b1.pow(6) * t * t) + (b * b * 3 + one) * b1 * b1 * t * 2 - b * b - b * 2;
  return first_nonzero(lhs);
}

IdentityReport verify_identities(int order) {
  if (order < 10) throw SeriesError("identity checks need order >= 10");
  const int k = order;
  IdentityReport rep;
  rep.order = k;
  const TreeSeries ts = solve_AB(k);
  const PowerSeries& a = ts.a;
  const PowerSeries& b = ts.b;
  const PowerSeries one = PowerSeries::constant(k, 1);
  const PowerSeries t = PowerSeries::monomial(k, 1);

  rep.results.push_back({"B equation", check_B_equation(b)});

  const PowerSeries s = -(b * (one + b).inverse());
  const PowerSeries s1 = one + s;
  {
    const PowerSeries lhs = t * t - (s * s * 4 + s * 2 + one) * s1 * s1 * t * 2 - s * (s + one * 2) * s1.pow(4);
    rep.results.push_back({"S equation", first_nonzero(lhs)});
  }
  rep.results.push_back({"S as tree series", first_nonzero(-s - t * (one + a * 2 + b * b))});

  const PowerSeries f5c = series_F5c(k);
  const PowerSeries f0 = series_F0(f5c);
  {
    const PowerSeries h_tilde = PowerSeries::poly(k, {1, -5, 5}).inverse();
    const PowerSeries inner = t * (one + t).inverse();
    const PowerSeries h = h_tilde.compose(inner);
    int fail = first_nonzero(f5c - t - f0 * h);
    const PowerSeries f5co = series_F5co(k);
    const int fail_co = first_nonzero(f5co - f0.shift(4));
    if (fail < 0 || (fail_co >= 0 && fail_co < fail)) fail = fail_co;
    rep.results.push_back({"heaps factorization", fail});
  }
  {
    const DegreeThreeSeries d = series_degree_three(k);
    int fail = -1;
    auto note = [&](int f) {
      if (f >= 0 && (fail < 0 || f < fail)) fail = f;
    };
    note(first_nonzero(d.pair - t * t * (d.pair * 2 + d.single * 3 + d.none)));
    note(first_nonzero(d.single - t * (d.pair + d.single * 2 + d.none)));
    note(first_nonzero(f5c - t - (d.none + d.single * 5 + d.pair * 5)));
    rep.results.push_back({"degree-3 outer sets", fail});
  }
  {
    // f_n from the count of legs followed by a leg
    const PowerSeries ab = a * b;
    const PowerSeries f1 = t * (one + a * 3 + a * a + ab * 2 + ab * b);
    rep.results.push_back({"F1 - 2F2", first_nonzero(f1 - ab * 2 - f5c)});
  }
  return rep;
}

// ---------------------------------------------------------------- constants

namespace {

mpq_class eval_poly(const std::vector<mpz_class>& c, const mpq_class& x) {
  // c[0] is the leading coefficient
  mpq_class r = 0;
  for (const auto& a : c) r = r * x + a;
  return r;
}

int sign_of(const mpq_class& q) { return sgn(q); }

// Bisection on [lo, hi] with a sign change, to width 2^-bits.
std::pair<mpq_class, mpq_class> bisect(const std::vector<mpz_class>& c, mpq_class lo, mpq_class hi, int bits) {
  int slo = sign_of(eval_poly(c, lo));
  if (slo == 0) return {lo, lo};
  mpq_class eps(1);
  eps /= mpz_class(1) << bits;
  while (hi - lo > eps) {
    mpq_class mid = (lo + hi) / 2;
    const int sm = sign_of(eval_poly(c, mid));
    if (sm == 0) return {mid, mid};
    if (sm == slo)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

// First sign change scanning upward from `from` with step 1/steps.
std::pair<mpq_class, mpq_class> first_bracket(const std::vector<mpz_class>& c, const mpq_class& from, const mpq_class& to,
                                              long steps) {
  mpq_class step(1, steps);
  mpq_class x = from;
  int s = sign_of(eval_poly(c, x));
  while (x < to) {
    mpq_class y = x + step;
    const int sy = sign_of(eval_poly(c, y));
    if (sy != s || sy == 0) return {x, y};
    x = y;
  }
  throw SeriesError("root bracketing failed");
}

std::vector<mpz_class> coeffs(std::initializer_list<const char*> cs) {
  std::vector<mpz_class> v;
  for (const char* s : cs) v.emplace_back(s);
  return v;
}

Constants compute_constants() {
  // degree 6, leading coefficient first
  const auto p6 = coeffs({"4194304", "-1339392", "319317", "-1107616", "561984", "-79104", "1024"});
  // degree 12 (even)
  const auto p12 = coeffs({"2641807540224", "0", "-9996558453964800", "0", "130110438205440000", "0",
                           "-338664164994000000", "0", "-1765321451082421875", "0", "-1274277847500000000", "0",
                           "551368000000000000"});
  Constants k{};
  // the smaller positive root lies below 27/256 and is rejected
  const auto br = first_bracket(p6, mpq_class(27, 256), mpq_class(1), 4096);
  std::tie(k.rho_lo, k.rho_hi) = bisect(p6, br.first, br.second, 200);
  const auto bk = first_bracket(p12, mpq_class(0), mpq_class(4), 4096);
  std::tie(k.kappa_lo, k.kappa_hi) = bisect(p12, bk.first, bk.second, 200);
  const mpq_class rho_q = (k.rho_lo + k.rho_hi) / 2;
  const mpq_class kappa_q = (k.kappa_lo + k.kappa_hi) / 2;
  k.rho = rho_q.get_d();
  k.kappa = kappa_q.get_d();
  const mpq_class pdeg5 = (1 - 3 * rho_q + rho_q * rho_q) / ((1 + rho_q) * (1 + rho_q));
  k.p_deg5 = pdeg5.get_d();
  k.kappa_prime = mpq_class(rho_q * rho_q * rho_q * rho_q * pdeg5 * kappa_q).get_d();
  k.alpha5 = std::log2(1.0 / k.rho);
  k.p_adm = kKappaSecond / (k.rho * k.rho * k.rho * k.kappa);
  k.xi = 6.0 * k.kappa_prime / (5.0 * kKappaSecond);
  return k;
}

}  // namespace

const Constants& constants() {
  static const Constants k = compute_constants();
  return k;
}

// ---------------------------------------------------------------- bivariate

namespace {

// Dense series in two variables truncated at weight a + 2b <= max_weight and
// b <= max_b.
class Bi {
 public:
  Bi(int max_weight, int max_b) : w_(max_weight), mb_(max_b), c_((w_ + 1) * (mb_ + 1)) {}
  bool in_range(int a, int b) const { return a >= 0 && b >= 0 && b <= mb_ && a + 2 * b <= w_; }
  mpz_class& at(int a, int b) { return c_[a * (mb_ + 1) + b]; }
  const mpz_class& at(int a, int b) const { return c_[a * (mb_ + 1) + b]; }
  int max_weight() const { return w_; }
  int max_b() const { return mb_; }

  Bi operator+(const Bi& o) const {
    Bi r(w_, mb_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }
  Bi operator-(const Bi& o) const {
    Bi r(w_, mb_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
  }
  Bi operator*(long s) const {
    Bi r(w_, mb_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
  }
  Bi operator*(const Bi& o) const {
    Bi r(w_, mb_);
    std::vector<std::pair<int, int>> nz, onz;
    for (int a = 0; a <= w_; ++a)
      for (int b = 0; b <= mb_; ++b) {
        if (!in_range(a, b)) continue;
        if (at(a, b) != 0) nz.emplace_back(a, b);
        if (o.at(a, b) != 0) onz.emplace_back(a, b);
      }
    for (auto [a1, b1] : nz)
      for (auto [a2, b2] : onz) {
        const int a = a1 + a2, b = b1 + b2;
        if (in_range(a, b)) r.at(a, b) += at(a1, b1) * o.at(a2, b2);
      }
    return r;
  }
  bool operator==(const Bi& o) const { return c_ == o.c_; }

 private:
  int w_, mb_;
  std::vector<mpz_class> c_;
};

struct Inverted {
  Bi u, v;
};

Inverted invert_xy(int weight, int max_b) {
  Bi x(weight, max_b), y(weight, max_b);
  if (x.in_range(1, 0)) x.at(1, 0) = 1;
  if (y.in_range(0, 1)) y.at(0, 1) = 1;
  Bi u = x, v = y;
  for (int it = 0; it <= weight; ++it) {
    const Bi u2 = u * u, v2 = v * v, u4 = u2 * u2;
    const Bi nu = x + u * v * 2 - u2 * u;
    const Bi nv = y + u2 + v2 - u2 * v * 3 + u4 + u2 * v2 * 8 + u4 * u2 * 2 - u4 * v * 8;
    if (nu == u && nv == v) break;
    u = nu;
    v = nv;
  }
  // back-substitution
  const Bi u2 = u * u, v2 = v * v, u4 = u2 * u2;
  const Bi bx = u - u * v * 2 + u2 * u;
  const Bi by = v - u2 - v2 + u2 * v * 3 - u4 - u2 * v2 * 8 - u4 * u2 * 2 + u4 * v * 8;
  if (!(bx == x) || !(by == y)) throw SeriesError("inversion back-substitution mismatch");
  return {u, v};
}

TrivariateSeries to_trivariate(const Bi& m, int p, int order) {
  TrivariateSeries s;
  s.order = order;
  s.terms.resize(order + 1);
  for (int a = 0; a <= m.max_weight(); ++a)
    for (int b = 0; b <= m.max_b(); ++b) {
      if (!m.in_range(a, b) || m.at(a, b) == 0) continue;
      const int twice = a + 2 * b + 2 - p;
      if (twice < 0 || twice % 2 != 0) throw SeriesError("non-integral power of t");
      const int k = twice / 2;
      if (k <= order) s.terms[k][{a, b}] = m.at(a, b);
    }
  return s;
}

Bi m5(const Inverted& iv) {
  const Bi& u = iv.u;
  const Bi& v = iv.v;
  const Bi u2 = u * u;
  return u * (u2 * u2 * 6 - u2 * v * 5 - v * v * 10 + v * 5);
}

Bi m6(const Inverted& iv) {
  const Bi& u = iv.u;
  const Bi& v = iv.v;
  const Bi u2 = u * u, u4 = u2 * u2, v2 = v * v;
  return u4 * u2 * 7 + u4 * v * 17 - u4 * 4 - u2 * v2 * 48 + u2 * v * 15 - v2 * v * 4 + v2 * 3;
}

}  // namespace

mpz_class TrivariateSeries::coeff(int k, int a, int b) const {
  if (k < 0 || k > order) return 0;
  const auto it = terms[k].find({a, b});
  return it == terms[k].end() ? mpz_class(0) : it->second;
}

PowerSeries TrivariateSeries::specialize(long x0, long y0) const {
  PowerSeries s(order);
  for (int k = 0; k <= order; ++k)
    for (const auto& [ab, c] : terms[k]) {
      mpz_class xp, yp;
      mpz_pow_ui(xp.get_mpz_t(), mpz_class(x0).get_mpz_t(), ab.first);
      mpz_pow_ui(yp.get_mpz_t(), mpz_class(y0).get_mpz_t(), ab.second);
      s[k] += c * xp * yp;
    }
  return s;
}

BivariatePair bivariate_F5_F6(int order) {
  if (order < 1) throw SeriesError("order must be at least 1");
  // t^k of F5 needs weight 2k + 3, of F6 weight 2k + 4
  const int w = 2 * order + 4;
  const Inverted iv = invert_xy(w, w / 2);
  return {to_trivariate(m5(iv), 5, order), to_trivariate(m6(iv), 6, order)};
}

TrivariateSeries bivariate_F5(int order, int max_y) {
  if (order < 1) throw SeriesError("order must be at least 1");
  const int w = 2 * order + 3;
  const Inverted iv = invert_xy(w, std::min(max_y, w / 2));
  return to_trivariate(m5(iv), 5, order);
}

std::string format_series(const PowerSeries& s, const std::string& var) {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k <= s.order(); ++k) {
    const mpz_class& c = s[k];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (k == 0 || mag != 1) os << mag.get_str();
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace pentree
