// Boltzmann and exact-size random generation of leg-balanced trees, and of
// 5c-triangulations and 5-connected triangulations through the bijection.
#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "pentree/planemap.hpp"
#include "pentree/trees.hpp"

namespace pentree {

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SingularPoint {
  mpf_class rho, a, b;
  double residual = 0;  // max of the two defining equations
};

// Singular point of the tree system, to about 70 digits.
SingularPoint eval_singular();

class BoltzmannContext {
 public:
  // Context at the singularity.
  static BoltzmannContext singular();
  // Context at 0 < x <= rho (fixed-point evaluation of A and B).
  static BoltzmannContext at(double x);

  double x() const { return x_; }
  double a() const { return a_; }
  double b() const { return b_; }
  // Branch probabilities of the A and B productions, indexed by subtype
  // (0..7 for A, 8..15 for B).
  const std::array<double, 16>& branch_probabilities() const { return prob_; }

 private:
  void set_probabilities(const mpf_class& x, const mpf_class& a, const mpf_class& b);
  double x_ = 0, a_ = 0, b_ = 0;
  std::array<double, 16> prob_{};
  std::array<double, 16> cumulative_{};
  friend class SamplerStream;
};

// Deterministic 64-bit stream seed for stream `index` of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct SizeMode {
  bool exact = true;
  double eps = 0;
  static SizeMode exact_size() { return {true, 0}; }
  static SizeMode approx(double e) { return {false, e}; }
};

enum class ExactMethod {
  kAuto,       // counting tables up to kTableLimit, rejection above
  kRejection,  // Boltzmann draws with early abort until the size is hit
  kRecursive,  // size splitting driven by counting tables
};

inline constexpr int kTableLimit = 20000;

// Pair of planted trees, each given by its preorder subtype list.
struct TreePair {
  std::vector<std::uint8_t> a, b;
  int size() const { return static_cast<int>(a.size() + b.size()); }
};

struct SamplerCounters {
  long long boltzmann_draws = 0;  // individual tree-pair draws
  long long pair_samples = 0;
  long long map_calls = 0;        // 5c samples used by the 5-connected samplers
};

// One random stream: a context, a generator and cached counting tables.
class SamplerStream {
 public:
  SamplerStream(const BoltzmannContext& ctx, std::uint64_t seed, ExactMethod method = ExactMethod::kAuto);
  ~SamplerStream();
  SamplerStream(SamplerStream&&) noexcept;

  const BoltzmannContext& context() const { return ctx_; }
  std::mt19937_64& generator() { return gen_; }
  double uniform();
  int uniform_int(int k);
  SamplerCounters& counters() { return counters_; }
  ExactMethod method() const { return method_; }

  // Free Boltzmann draw of one planted tree of the given kind ('A' or 'B');
  // returns false when the size exceeds cap.
  bool boltzmann_tree(char kind, int cap, std::vector<std::uint8_t>& out);
  // Uniform planted tree of the given kind with exactly `size` nodes, from
  // the counting tables.
  std::vector<std::uint8_t> recursive_tree(char kind, int size);
  // Size of the A side of a uniform pair with n nodes, from the tables.
  int draw_pair_split(int n);
  // Counting tables (scaled by x^n) up to size n.
  void ensure_tables(int n);

 private:
  struct Tables;
  BoltzmannContext ctx_;
  std::mt19937_64 gen_;
  ExactMethod method_;
  SamplerCounters counters_;
  std::unique_ptr<Tables> tables_;
};

TreePair sample_tree_pair(SamplerStream& s, int n, SizeMode mode);

// Uniform rooted 5c-triangulation with n inner vertices.
PlaneMap sample_5c(SamplerStream& s, int n, SizeMode mode);

struct ConnectedSample {
  PlaneMap map;
  long long calls = 0;  // 5c samples drawn
};

// Rooted 5-connected triangulation with n vertices whose root vertex has
// degree 5.
ConnectedSample sample_5conn_deg5(SamplerStream& s, int n, SizeMode mode);
// Rooted 5-connected triangulation with n vertices.
ConnectedSample sample_5conn_any(SamplerStream& s, int n, SizeMode mode);

bool has_outer_degree3(const PlaneMap& m);
// Rooted 5c-triangulation whose outer vertices v1 v3 and v1 v4 can be joined
// without creating a separating 3- or 4-cycle.
bool is_admissible(const PlaneMap& m);
// Adds the edges v1 v3 and v1 v4; the result is rooted at v1 -> v3 with the
// triangle v1 v4 v3 as outer face. Throws SamplerError if not admissible.
PlaneMap add_root_chords(const PlaneMap& m);

}  // namespace pentree
