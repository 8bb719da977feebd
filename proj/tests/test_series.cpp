#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "pentree/series.hpp"
#include "support.hpp"

using namespace pentree;

namespace {

std::vector<long> coeffs(const PowerSeries& s, int from, int to) {
  std::vector<long> out;
  for (int k = from; k <= to; ++k) out.push_back(s[k].get_si());
  return out;
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("tree series against plain fixed-point iteration") {
    const int order = 20;
    const TreeSeries ab = solve_AB(order);
    const auto [a, b] = testsupport::naive_AB(order);
    for (int k = 0; k <= order; ++k) {
      CHECK(ab.a[k].get_si() == a[k]);
      CHECK(ab.b[k].get_si() == b[k]);
    }
    CHECK(coeffs(ab.a, 1, 5) == std::vector<long>{0, 0, 0, 0, 1});
    CHECK(coeffs(ab.b, 1, 5) == std::vector<long>{1, 1, 2, 5, 13});
    CHECK((ab.a * ab.b)[6] == 1);
  }

  TEST_CASE("5c-triangulation series") {
    const PowerSeries f = series_F5c(20);
    CHECK(coeffs(f, 1, 14) == std::vector<long>{1, 0, 0, 0, 0, 1, 5, 20, 75, 270, 956, 3365, 11830, 41665});
    const PowerSeries g = series_F5co(20);
    CHECK(coeffs(g, 1, 20) ==
          std::vector<long>{0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 5, 10, 40, 131, 465, 1630, 5815, 20815, 74992});
    CHECK(series_five_AB(20)[11] == 9560);
    for (int k = 0; k <= 20; ++k) {
      CHECK(f[k] >= 0);
      CHECK(g[k] >= 0);
    }
  }

  TEST_CASE("f_n from the leg count formula") {
    const int order = 30;
    const TreeSeries ab = solve_AB(order);
    const PowerSeries one = PowerSeries::constant(order, 1);
    const PowerSeries& a = ab.a;
    const PowerSeries& b = ab.b;
    const PowerSeries f1 = (one + a * 3 + a * a + a * b * 2 + a * b * b).shift(1).truncate(order);
    const PowerSeries f2 = (a * b).truncate(order);
    CHECK((f1 - f2 * 2) == series_F5c(order));
    CHECK((series_five_AB(order)) == f2 * 5);
    // (n - 1) f_n = 5 [t^n] AB
    const PowerSeries f = series_F5c(order);
    for (int n = 1; n <= order; ++n) CHECK(f[n] * (n - 1) == f2[n] * 5);
  }

  TEST_CASE("identities") {
    const IdentityReport r = verify_identities(60);
    std::set<std::string> names;
    for (const auto& x : r.results) names.insert(x.name);
    for (const char* n : {"B equation", "S equation", "S as tree series", "heaps factorization", "degree-3 outer sets"})
      CHECK_MESSAGE(names.count(n) == 1, n);
    for (const auto& x : r.results) CHECK_MESSAGE(x.first_failure == -1, x.name);
    CHECK(r.ok());
    CHECK_THROWS_AS(verify_identities(5), SeriesError);
  }

  TEST_CASE("the B equation notices a perturbed coefficient") {
    PowerSeries b = solve_AB(30).b;
    CHECK(check_B_equation(b) == -1);
    for (int k : {1, 7, 19}) {
      PowerSeries p = b;
      p[k] += 1;
      CHECK(check_B_equation(p) == k);
    }
  }

  TEST_CASE("degree-3 series") {
    const DegreeThreeSeries d = series_degree_three(30);
    CHECK(d.none.shift(4) == series_F5co(30));
    // the single and pair classes start later than the whole class
    CHECK(d.single[6] == 0);
    CHECK(d.single[7] == 1);
  }

  TEST_CASE("constants") {
    const Constants& c = constants();
    CHECK(std::abs(c.rho - 0.24775) < 1e-5);
    CHECK(std::abs(c.kappa - 0.54851) < 1e-5);
    CHECK(std::abs(c.kappa_prime - 0.00042228) < 1e-8);
    auto rel = [](double x, double y) { return std::abs(x - y) / y; };
    CHECK(rel(c.p_deg5, 0.20433) < 5e-4);
    CHECK(rel(c.p_adm, 0.12146) < 5e-4);
    CHECK(rel(c.xi, 0.50016) < 5e-4);
    CHECK(rel(c.alpha5, 2.013) < 5e-4);
    CHECK(c.alpha5 == doctest::Approx(std::log2(1 / c.rho)).epsilon(1e-12));
    CHECK(c.rho_lo <= c.rho_hi);
    CHECK(c.rho_lo < 0.2477536);
    CHECK(c.rho_hi > 0.2477535);
    CHECK(c.rho > 27.0 / 256.0);
  }

  TEST_CASE("bivariate expansions") {
    const BivariatePair p = bivariate_F5_F6(6);
    CHECK(p.f5.coeff(0, 3, 0) == 5);
    CHECK(p.f5.coeff(0, 1, 1) == 5);
    CHECK(p.f5.terms[0].size() >= 2);
    CHECK(p.f5.coeff(1, 5, 0) == 1);
    CHECK(p.f5.coeff(1, 3, 1) == 5);
    CHECK(p.f5.coeff(1, 1, 2) == 5);
    CHECK(p.f6.coeff(0, 4, 0) == 14);
    CHECK(p.f6.coeff(0, 2, 1) == 21);
    CHECK(p.f6.coeff(0, 0, 2) == 3);
    const PowerSeries f = bivariate_F5(40, 0).specialize(1, 0);
    const PowerSeries target = series_F5c(40);
    for (int k = 1; k <= 40; ++k) CHECK(f[k] == target[k]);
    CHECK(f[0] == 5);
  }

  TEST_CASE("power series arithmetic") {
    const PowerSeries x = PowerSeries::poly(10, {1, -1});
    const PowerSeries inv = x.inverse();
    for (int k = 0; k <= 10; ++k) CHECK(inv[k] == 1);
    CHECK((x * inv) == PowerSeries::constant(10, 1));
    const PowerSeries t = PowerSeries::monomial(10, 1);
    const PowerSeries geo = inv.compose(t * 2);
    for (int k = 0; k <= 10; ++k) CHECK(geo[k] == (1L << k));
    CHECK(format_series(PowerSeries::poly(3, {0, 1, 0, -2})) == "t - 2t^3");
    CHECK_THROWS_AS(PowerSeries::poly(3, {2, 1}).inverse(), SeriesError);
  }
}
