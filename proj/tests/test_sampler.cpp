#include <doctest.h>

#include <cmath>
#include <map>

#include "pentree/bijection.hpp"
#include "pentree/grammar.hpp"
#include "pentree/map_io.hpp"
#include "pentree/oracle.hpp"
#include "pentree/sampler.hpp"
#include "pentree/series.hpp"

using namespace pentree;

namespace {

const BoltzmannContext& ctx() {
  static const BoltzmannContext c = BoltzmannContext::singular();
  return c;
}

double chi_square(const std::map<std::string, int>& counts, int classes, int draws) {
  const double expected = static_cast<double>(draws) / classes;
  double x2 = 0;
  for (const auto& [k, c] : counts) x2 += (c - expected) * (c - expected) / expected;
  x2 += (classes - static_cast<int>(counts.size())) * expected;
  return x2;
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("singular point") {
    const SingularPoint p = eval_singular();
    CHECK(p.residual < 1e-20);
    CHECK(std::abs(p.rho.get_d() - constants().rho) < 1e-10);
    CHECK(p.b > p.a);
    CHECK(p.a > 0);
  }

  TEST_CASE("branch probabilities") {
    const auto& pr = ctx().branch_probabilities();
    double sa = 0, sb = 0;
    for (int i = 0; i < 8; ++i) {
      sa += pr[i];
      sb += pr[8 + i];
      CHECK(pr[i] > 0);
      CHECK(pr[8 + i] > 0);
    }
    CHECK(std::abs(sa - 1) < 1e-12);
    CHECK(std::abs(sb - 1) < 1e-12);
  }

  TEST_CASE("branch frequencies follow the probabilities") {
    // the root subtype of each draw is an independent sample of the branch law
    SamplerStream s(ctx(), 99);
    const int draws = 100000;
    std::array<long long, 16> hits{};
    std::vector<std::uint8_t> out;
    for (int k = 0; k < draws; ++k)
      for (char kind : {'A', 'B'}) {
        s.boltzmann_tree(kind, 1, out);
        ++hits[out.front()];
      }
    const auto& pr = ctx().branch_probabilities();
    for (int i = 0; i < 16; ++i) {
      const double sd = std::sqrt(draws * pr[i] * (1 - pr[i]));
      CHECK_MESSAGE(std::abs(hits[i] - draws * pr[i]) < 4 * sd, subtype_name(i));
    }
  }

  TEST_CASE("size 6 gives the star") {
    SamplerStream s(ctx(), 1);
    for (int i = 0; i < 20; ++i) {
      const TreePair p = sample_tree_pair(s, 6, SizeMode::exact_size());
      CHECK(canonical_string(join_preorders(p.a, p.b)) == canonical_string(five_star()));
    }
    CHECK_THROWS_AS(sample_tree_pair(s, 3, SizeMode::exact_size()), SamplerError);
  }

  TEST_CASE("size 7 pairs are uniform") {
    SamplerStream s(ctx(), 2);
    const int draws = 3000;
    std::map<std::string, int> counts;
    for (int i = 0; i < draws; ++i) {
      const TreePair p = sample_tree_pair(s, 7, SizeMode::exact_size());
      counts[std::string(p.a.begin(), p.a.end()) + "|" + std::string(p.b.begin(), p.b.end())]++;
    }
    const int classes = static_cast<int>((solve_AB(7).a * solve_AB(7).b)[7].get_si());
    CHECK(classes == 6);
    CHECK(static_cast<int>(counts.size()) == classes);
    CHECK(chi_square(counts, classes, draws) < 20.515);  // 5 degrees of freedom, 1e-3
  }

  TEST_CASE("rooted 5c-triangulations") {
    SamplerStream s(ctx(), 3);
    std::map<std::string, int> roots;
    for (int i = 0; i < 500; ++i) {
      const PlaneMap m = sample_5c(s, 6, SizeMode::exact_size());
      roots[std::to_string(*m.root_dart())]++;
    }
    CHECK(roots.size() == 5);
    CHECK(chi_square(roots, 5, 500) < 18.467);
    const int draws = 2000;
    std::map<std::string, int> maps;
    for (int i = 0; i < draws; ++i) {
      const PlaneMap m = sample_5c(s, 7, SizeMode::exact_size());
      CHECK(is_5c(m));
      maps[canonical_code(m)]++;
    }
    CHECK(maps.size() == 5);
    CHECK(chi_square(maps, 5, draws) < 18.467);  // 4 degrees of freedom, 1e-3
  }

  TEST_CASE("exact sizes hit every rooted map at size 8") {
    SamplerStream s(ctx(), 4);
    std::map<std::string, int> seen;
    const auto all = enumerate_rooted_maps(8);
    for (int i = 0; i < 2000; ++i) seen[canonical_code(sample_5c(s, 8, SizeMode::exact_size()))]++;
    CHECK(seen.size() == all.size());
    for (const auto& m : all) CHECK(seen.count(canonical_code(m)) == 1);
    CHECK(chi_square(seen, static_cast<int>(all.size()), 2000) < 43.82);  // 19 degrees of freedom
  }

  TEST_CASE("5-connected triangulations") {
    SamplerStream s(ctx(), 5);
    for (int i = 0; i < 5; ++i) {
      const ConnectedSample c = sample_5conn_deg5(s, 10, SizeMode::exact_size());
      CHECK(sphere_canonical_code(c.map) == sphere_canonical_code(icosahedron()));
    }
    for (int n : {40, 100}) {
      const ConnectedSample c = sample_5conn_deg5(s, n, SizeMode::exact_size());
      CHECK(c.map.num_vertices() == n + 2);
      CHECK(is_5connected_triangulation(c.map));
      CHECK(c.map.degree(c.map.root_vertex()) == 5);
      const PlaneMap inner = delete_apex(c.map);
      CHECK(is_5c(inner));
      CHECK_FALSE(has_outer_degree3(inner));
      const ConnectedSample any = sample_5conn_any(s, n, SizeMode::exact_size());
      CHECK(any.map.num_vertices() == n + 2);
      CHECK(is_5connected_triangulation(any.map));
      const ConnectedSample approx = sample_5conn_deg5(s, n, SizeMode::approx(0.2));
      CHECK(is_5connected_triangulation(approx.map));
    }
    CHECK_THROWS_AS(sample_5conn_deg5(s, 9, SizeMode::exact_size()), SamplerError);
    CHECK_THROWS_AS(sample_5conn_deg5(s, 11, SizeMode::exact_size()), SamplerError);
  }

  TEST_CASE("admissible maps give 5-connected triangulations") {
    SamplerStream s(ctx(), 6);
    int admissible = 0;
    for (int i = 0; i < 200; ++i) {
      const PlaneMap m = sample_5c(s, 30, SizeMode::exact_size());
      if (!is_admissible(m)) {
        CHECK_THROWS_AS(add_root_chords(m), SamplerError);
        continue;
      }
      ++admissible;
      const PlaneMap t = add_root_chords(m);
      CHECK(separating_cycles(t, 3).empty());
      CHECK(separating_cycles(t, 4).empty());
    }
    CHECK(admissible > 0);
  }

  TEST_CASE("same seed, same output") {
    auto draw = [](std::uint64_t seed) {
      SamplerStream s(ctx(), seed);
      return map_to_json(sample_5conn_any(s, 60, SizeMode::exact_size()).map);
    };
    CHECK(draw(42) == draw(42));
    CHECK(draw(42) != draw(43));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  }

  TEST_CASE("exact methods agree on the size") {
    for (ExactMethod m : {ExactMethod::kRejection, ExactMethod::kRecursive}) {
      SamplerStream s(ctx(), 8, m);
      const TreePair p = sample_tree_pair(s, 300, SizeMode::exact_size());
      CHECK(p.size() == 300);
    }
    SamplerStream s(ctx(), 9);
    const TreePair p = sample_tree_pair(s, 1000, SizeMode::approx(0.1));
    CHECK(p.size() >= 900);
    CHECK(p.size() <= 1100);
  }
}
