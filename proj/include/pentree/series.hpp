// Truncated power series with big-integer coefficients, the tree and map
// generating functions, and the numeric constants attached to them.
#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pentree {

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficients of t^0 .. t^order.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(int order) : c_(order + 1) {}
  PowerSeries(int order, std::vector<mpz_class> coeffs);
  static PowerSeries constant(int order, long value);
  static PowerSeries monomial(int order, int power, long value = 1);
  // Polynomial from low-to-high coefficients.
  static PowerSeries poly(int order, const std::vector<long>& coeffs);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const mpz_class& operator[](int k) const { return c_[k]; }
  mpz_class& operator[](int k) { return c_[k]; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  // Index of the first nonzero coefficient, or -1.
  int valuation() const;

  PowerSeries operator+(const PowerSeries& o) const;
  PowerSeries operator-(const PowerSeries& o) const;
  PowerSeries operator-() const;
  PowerSeries operator*(const PowerSeries& o) const;
  PowerSeries operator*(long s) const;
  PowerSeries pow(int e) const;
  // Multiplies by t^k (k may be negative when the low terms vanish).
  PowerSeries shift(int k) const;
  // Multiplicative inverse; the constant term must be +1 or -1.
  PowerSeries inverse() const;
  // this(inner(t)); inner must have zero constant term.
  PowerSeries compose(const PowerSeries& inner) const;
  PowerSeries truncate(int order) const;
  bool operator==(const PowerSeries& o) const { return c_ == o.c_; }

 private:
  std::vector<mpz_class> c_;
};

struct TreeSeries {
  PowerSeries a, b;
};

// A = t(A + A^2 + 2AB + 3AB^2 + B^4), B = t(1 + 2A + B + 2AB + B^2 + B^3).
TreeSeries solve_AB(int order);

// Rooted 5c-triangulations counted by inner vertices.
PowerSeries series_F5c(int order);
// Same, restricted to no outer vertex of degree 3.
PowerSeries series_F5co(int order);
// Sum over n of (n-1) f_n t^n, computed as 5AB.
PowerSeries series_five_AB(int order);

// Generating functions of rooted 5c-triangulations whose degree-3 outer
// vertices are exactly a given set of size 0, 1 or 2 (non-adjacent).
struct DegreeThreeSeries {
  PowerSeries none, single, pair;
};
DegreeThreeSeries series_degree_three(int order);

struct IdentityResult {
  std::string name;
  int first_failure = -1;  // -1 when the identity holds to the order
};

struct IdentityReport {
  int order = 0;
  std::vector<IdentityResult> results;
  bool ok() const;
};

IdentityReport verify_identities(int order);
// The algebraic equation satisfied by B, checked on an arbitrary input.
int check_B_equation(const PowerSeries& b);

struct Constants {
  double rho, kappa, kappa_prime, alpha5, p_deg5, p_adm, xi;
  // rho as an exact dyadic bracket [lo, hi] of width <= 2^-200
  mpq_class rho_lo, rho_hi;
  mpq_class kappa_lo, kappa_hi;
};
// The external constant used for p_adm and xi.
inline constexpr double kKappaSecond = 0.0010131;

const Constants& constants();

// Trivariate series: terms[k] maps (power of x, power of y) to the
// coefficient of t^k x^a y^b.
struct TrivariateSeries {
  int order = 0;
  std::vector<std::map<std::pair<int, int>, mpz_class>> terms;
  mpz_class coeff(int k, int a, int b) const;
  // Coefficients of F(t, x0, y0) for integer x0, y0.
  PowerSeries specialize(long x0, long y0) const;
};

struct BivariatePair {
  TrivariateSeries f5, f6;
};
BivariatePair bivariate_F5_F6(int order);
// F5 alone with a cap on the power of y (used for F5(t, 1, 0)).
TrivariateSeries bivariate_F5(int order, int max_y);

std::string format_series(const PowerSeries& s, const std::string& var = "t");

}  // namespace pentree
