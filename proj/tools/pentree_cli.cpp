// pentree command line: sampling, coding, conversion, series and checks.
//
// Results go to stdout (or --out), diagnostics to stderr. Exit status is 0 on
// success, 1 when an input or a check fails, 2 on usage errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pentree/bijection.hpp"
#include "pentree/codec.hpp"
#include "pentree/map_io.hpp"
#include "pentree/oracle.hpp"
#include "pentree/orientation.hpp"
#include "pentree/planemap.hpp"
#include "pentree/sampler.hpp"
#include "pentree/series.hpp"
#include "pentree/trees.hpp"

using json = nlohmann::json;
using namespace pentree;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  bool json = false;
  bool quiet = false;
  int jobs = 1;
};

// Raised when a validation or check fails; maps to exit status 1.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
}

json big_number(const mpz_class& c) {
  if (c.fits_slong_p()) return c.get_si();
  return c.get_str();
}

// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must be
// stored by index so the output does not depend on the schedule.
template <class Body>
void parallel_for(int count, int jobs, Body body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      try {
        for (int i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------- sample

struct SampleOptions {
  std::string family = "5c";
  int n = 0;
  bool exact = false;
  double approx = 0;
  int count = 1;
  std::string format = "map-json";
  std::string out;
};

struct SampleResult {
  PlaneMap map;
  long long calls = 1;
};

int degree_count(const PlaneMap& m, int d) {
  int k = 0;
  for (int v = 0; v < m.num_vertices(); ++v) k += m.degree(v) == d;
  return k;
}

int run_sample(const Globals& g, const SampleOptions& o) {
  if (o.exact == (o.approx > 0)) throw CLI::ValidationError("sample", "give exactly one of --exact and --approx EPS");
  const SizeMode mode = o.exact ? SizeMode::exact_size() : SizeMode::approx(o.approx);
  const BoltzmannContext ctx = BoltzmannContext::singular();
  std::vector<SampleResult> results(o.count);
  parallel_for(o.count, g.jobs, [&](int i) {
    SamplerStream stream(ctx, derive_seed(g.seed, static_cast<std::uint64_t>(i)));
    if (o.family == "5c") {
      results[i].map = sample_5c(stream, o.n, mode);
    } else {
      ConnectedSample s = o.family == "5conn-deg5" ? sample_5conn_deg5(stream, o.n, mode) : sample_5conn_any(stream, o.n, mode);
      results[i].map = std::move(s.map);
      results[i].calls = s.calls;
    }
  });
  std::ostringstream os;
  if (o.format == "map-json") {
    for (const auto& r : results) os << map_to_json(r.map) << "\n";
  } else if (o.format == "dot") {
    for (const auto& r : results) os << map_to_dot(r.map);
  } else {
    json rows = json::array();
    for (int i = 0; i < o.count; ++i) {
      const PlaneMap& m = results[i].map;
      rows.push_back({{"index", i},
                      {"vertices", m.num_vertices()},
                      {"edges", m.num_edges()},
                      {"faces", m.num_faces()},
                      {"degree5", degree_count(m, 5)},
                      {"degree5_fraction", static_cast<double>(degree_count(m, 5)) / m.num_vertices()},
                      {"calls", results[i].calls}});
    }
    if (g.json) {
      os << json{{"pentree_version", PENTREE_VERSION},
                 {"family", o.family},
                 {"n", o.n},
                 {"seed", g.seed},
                 {"samples", rows}}
                .dump()
         << "\n";
    } else {
      os << "# pentree " << PENTREE_VERSION << " family " << o.family << " n " << o.n << " seed " << g.seed << "\n";
      os << "index\tvertices\tedges\tdegree5\tcalls\n";
      for (const auto& r : rows)
        os << r["index"] << "\t" << r["vertices"] << "\t" << r["edges"] << "\t" << r["degree5"] << "\t" << r["calls"] << "\n";
    }
  }
  write_output(o.out, os.str());
  return 0;
}

// ---------------------------------------------------------------- codec

int run_encode(const Globals& g, const std::string& in, const std::string& out, int mode) {
  const PlaneMap m = map_from_json(read_input(in));
  if (!is_5connected_triangulation(m)) throw CheckFailed("input is not a 5-connected triangulation");
  const std::string blob = encode_map(m, mode == 0 ? PackMode::kPacked : PackMode::kEntropy);
  write_output(out, blob);
  if (!g.quiet)
    std::cerr << "encoded " << m.num_vertices() << " vertices into " << blob.size() << " bytes ("
              << 8.0 * static_cast<double>(blob.size()) / m.num_vertices() << " bits/vertex)\n";
  return 0;
}

int run_decode(const Globals&, const std::string& in, const std::string& out) {
  const PlaneMap m = decode_map(read_input(in));
  write_output(out, map_to_json(m) + "\n");
  return 0;
}

// ---------------------------------------------------------------- convert

int run_convert(const Globals& g, const std::string& in, const std::string& out, bool to_tree, bool tree_json) {
  const std::string text = read_input(in);
  if (to_tree) {
    const PlaneMap m = map_from_json(text);
    const PlaneTree t = map_to_tree(m.root_dart() ? m : root_at_outer_vertex(m, m.outer_vertices().front()));
    write_output(out, (tree_json ? tree_to_json(t) : canonical_string(t)) + "\n");
  } else {
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = first != std::string::npos && text[first] == '{';
    const PlaneTree t = is_json ? tree_from_json(text) : parse_tree(text.substr(0, text.find_last_not_of(" \t\r\n") + 1)).tree;
    if (!is_leg_balanced(t)) throw CheckFailed("tree is not leg-balanced");
    write_output(out, map_to_json(tree_to_map(t)) + "\n");
  }
  (void)g;
  return 0;
}

// ---------------------------------------------------------------- series

json trivariate_json(const TrivariateSeries& s) {
  json terms = json::array();
  for (int k = 0; k <= s.order; ++k)
    for (const auto& [xy, c] : s.terms[k])
      if (c != 0) terms.push_back({{"t", k}, {"x", xy.first}, {"y", xy.second}, {"c", big_number(c)}});
  return terms;
}

std::string trivariate_text(const TrivariateSeries& s) {
  std::ostringstream os;
  for (int k = 0; k <= s.order; ++k) {
    os << "t^" << k << ":";
    bool any = false;
    for (const auto& [xy, c] : s.terms[k]) {
      if (c == 0) continue;
      os << (any ? " + " : " ") << c.get_str();
      if (xy.first) os << "*x" << (xy.first > 1 ? "^" + std::to_string(xy.first) : "");
      if (xy.second) os << "*y" << (xy.second > 1 ? "^" + std::to_string(xy.second) : "");
      any = true;
    }
    if (!any) os << " 0";
    os << "\n";
  }
  return os.str();
}

int run_series(const Globals& g, const std::string& family, int terms) {
  if (terms < 1) throw CLI::ValidationError("--terms", "must be positive");
  json doc{{"pentree_version", PENTREE_VERSION}, {"family", family}, {"terms", terms}};
  std::ostringstream os;
  auto univariate = [&](const std::string& key, const std::string& label, const PowerSeries& s) {
    json list = json::array();
    for (int k = 1; k <= terms; ++k) list.push_back(big_number(s[k]));
    doc[key] = list;
    if (!g.quiet && !g.json) os << "# " << label << " coefficients of t^1..t^" << terms << "\n";
    for (int k = 1; k <= terms; ++k) os << s[k].get_str() << (k == terms ? "\n" : " ");
  };
  if (family == "5c") {
    univariate("coefficients", "F5c", series_F5c(terms));
  } else if (family == "5co") {
    univariate("coefficients", "F5co", series_F5co(terms));
  } else if (family == "AB") {
    const TreeSeries ab = solve_AB(terms);
    univariate("A", "A", ab.a);
    univariate("B", "B", ab.b);
  } else {
    const BivariatePair p = bivariate_F5_F6(terms - 1);
    const TrivariateSeries& s = family == "F5xy" ? p.f5 : p.f6;
    doc["terms_by_order"] = trivariate_json(s);
    os << trivariate_text(s);
  }
  std::cout << (g.json ? doc.dump() + "\n" : os.str());
  return 0;
}

int run_constants(const Globals& g) {
  const Constants& c = constants();
  if (g.json) {
    std::cout << json{{"pentree_version", PENTREE_VERSION},
                      {"rho", c.rho},
                      {"kappa", c.kappa},
                      {"kappa_prime", c.kappa_prime},
                      {"kappa_second", kKappaSecond},
                      {"alpha5", c.alpha5},
                      {"p_deg5", c.p_deg5},
                      {"p_adm", c.p_adm},
                      {"xi", c.xi}}
                     .dump()
              << "\n";
    return 0;
  }
  std::cout.precision(10);
  std::cout << "rho          " << c.rho << "\n"
            << "kappa        " << c.kappa << "\n"
            << "kappa_prime  " << c.kappa_prime << "\n"
            << "kappa_second " << kKappaSecond << " (external)\n"
            << "alpha5       " << c.alpha5 << "\n"
            << "p_deg5       " << c.p_deg5 << "\n"
            << "p_adm        " << c.p_adm << "\n"
            << "xi           " << c.xi << "\n";
  return 0;
}

// ---------------------------------------------------------------- validate

int run_validate(const Globals& g, const std::string& in, bool biorientation) {
  const std::string text = read_input(in);
  json report{{"pentree_version", PENTREE_VERSION}};
  bool ok = true;
  if (biorientation) {
    const Biorientation x = biorientation_from_json(text);
    try {
      audit_5c_biorientation(x);
      report["audit"] = "ok";
    } catch (const std::exception& e) {
      report["audit"] = e.what();
      ok = false;
    }
    if (x.map.num_vertices() <= 60) {
      const bool minimal = exhaustive_cycle_check(x);
      report["minimal"] = minimal;
      ok = ok && minimal;
    }
  } else {
    const PlaneMap m = map_from_json(text);
    const int outer = m.face_degree(m.outer_face());
    report["vertices"] = m.num_vertices();
    report["outer_degree"] = outer;
    if (outer == 5) {
      ok = is_5c(m);
      report["family"] = "5c";
    } else {
      ok = is_5connected_triangulation(m);
      report["family"] = "5-connected triangulation";
    }
  }
  report["valid"] = ok;
  if (g.json) {
    std::cout << report.dump() << "\n";
  } else if (!g.quiet) {
    for (auto it = report.begin(); it != report.end(); ++it) std::cout << it.key() << ": " << it.value() << "\n";
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- verify

int run_verify(const Globals& g, const std::string& level, int max_n) {
  const bool full = level == "full";
  if (max_n <= 0) max_n = full ? kOracleMaxN : 7;
  if (max_n > kOracleMaxN) throw CLI::ValidationError("--max-n", "at most " + std::to_string(kOracleMaxN));
  json items = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    all = all && ok;
    items.push_back({{"check", name}, {"pass", ok}, {"detail", detail}});
    if (!g.json && !(g.quiet && ok)) std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
  };
  const int order = std::max(40, max_n + 2);
  const TreeSeries ab = solve_AB(order);
  const PowerSeries ab_product = (ab.a * ab.b).truncate(order);
  const PowerSeries f5c = series_F5c(order);
  const DegreeThreeSeries d3 = series_degree_three(order);

  const IdentityReport ids = verify_identities(full ? 60 : 20);
  std::string bad;
  for (const auto& r : ids.results)
    if (r.first_failure >= 0) bad += r.name + " at order " + std::to_string(r.first_failure) + "; ";
  record("series identities to order " + std::to_string(ids.order), ids.ok(), bad);

  for (int n = 1; n <= max_n; ++n) {
    const BijectionReport b = check_bijection(n);
    const std::string tag = " n=" + std::to_string(n);
    record("marked trees" + tag, mpz_class(static_cast<long>(b.marked_edges)) == ab_product[n],
           std::to_string(b.marked_edges) + " vs series " + ab_product[n].get_str());
    record("rooted maps" + tag, mpz_class(static_cast<long>(b.rooted_maps)) == f5c[n],
           std::to_string(b.rooted_maps) + " vs series " + f5c[n].get_str());
    record("bijection round trips and leg-index checks" + tag, b.ok(), b.ok() ? "" : b.failures.front());
    const FXCounts fx = classify_FX(n);
    bool fx_ok = true;
    std::string fx_detail;
    for (unsigned mask = 0; mask < 32; ++mask) {
      const int size = __builtin_popcount(mask);
      mpz_class expected = 0;
      if (has_adjacent_pair(mask) || size > 2) {
        // the single-vertex map has all five outer vertices of degree 3
        expected = (n == 1 && mask == 31) ? 1 : 0;
      } else {
        expected = size == 0 ? d3.none[n] : size == 1 ? d3.single[n] : d3.pair[n];
      }
      if (mpz_class(static_cast<long>(fx.by_set[mask])) != expected) {
        fx_ok = false;
        fx_detail = "set " + std::to_string(mask) + ": " + std::to_string(fx.by_set[mask]) + " vs " + expected.get_str();
      }
    }
    record("degree-3 outer sets" + tag, fx_ok, fx_detail);
    if (full && n <= 6) {
      const UniquenessReport u = check_orientation_uniqueness(n);
      record("orientation uniqueness" + tag, u.ok(), u.ok() ? std::to_string(u.instances) + " instances" : u.failures.front());
    }
  }
  if (g.json) std::cout << json{{"pentree_version", PENTREE_VERSION}, {"level", level}, {"max_n", max_n}, {"pass", all}, {"checks", items}}.dump() << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pentree " PENTREE_VERSION ": 5c-triangulations, leg-balanced trees and 5-connected triangulation coding"};
  app.set_version_flag("--version", PENTREE_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_flag("--quiet", g.quiet, "Suppress informational output");
  app.add_option("--jobs", g.jobs, "Worker threads for independent instances")->check(CLI::PositiveNumber)->capture_default_str();

  SampleOptions so;
  auto* sample = app.add_subcommand("sample", "Random 5c or 5-connected triangulations");
  sample->add_option("--family", so.family)->check(CLI::IsMember({"5c", "5conn-deg5", "5conn"}))->capture_default_str();
  sample->add_option("--n", so.n, "Size: inner vertices for 5c, vertices minus 2 otherwise")->required();
  sample->add_flag("--exact", so.exact, "Exact size");
  sample->add_option("--approx", so.approx, "Approximate size with relative tolerance EPS")->check(CLI::PositiveNumber);
  sample->add_option("--count", so.count)->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--out", so.format, "Output format")->check(CLI::IsMember({"map-json", "dot", "stats"}))->capture_default_str();
  sample->add_option("--output", so.out, "Output file (default stdout)");

  std::string in, out;
  int mode = 1;
  auto* encode = app.add_subcommand("encode", "Encode a 5-connected triangulation (map JSON) into a blob");
  encode->add_option("--in", in, "Map JSON (default stdin)");
  encode->add_option("--out", out, "Blob file (default stdout)");
  encode->add_option("--mode", mode, "0 = 3-bit symbols, 1 = arithmetic coded")->check(CLI::Range(0, 1))->capture_default_str();
  auto* decode = app.add_subcommand("decode", "Decode a blob into map JSON");
  decode->add_option("--in", in, "Blob file (default stdin)");
  decode->add_option("--out", out, "Map JSON (default stdout)");

  bool to_tree = false, to_map = false, tree_json = false;
  auto* convert = app.add_subcommand("convert", "Convert between 5c maps and leg-balanced trees");
  convert->add_option("--in", in, "Input file (default stdin)");
  convert->add_option("--out", out, "Output file (default stdout)");
  auto* tt = convert->add_flag("--to-tree", to_tree, "Map JSON to tree text");
  auto* tm = convert->add_flag("--to-map", to_map, "Tree text or tree JSON to map JSON");
  tt->excludes(tm);
  convert->add_flag("--tree-json", tree_json, "Write trees as JSON");

  std::string family = "5c";
  int terms = 14;
  auto* series = app.add_subcommand("series", "Series coefficients");
  series->add_option("--family", family)->check(CLI::IsMember({"5c", "5co", "AB", "F5xy", "F6xy"}))->capture_default_str();
  series->add_option("--terms", terms)->capture_default_str();

  auto* consts = app.add_subcommand("constants", "Numeric constants");

  bool bio = false;
  auto* validate = app.add_subcommand("validate", "Check a map (5c or 5-connected) or a 5c-biorientation");
  validate->add_option("--in", in, "Input JSON (default stdin)");
  validate->add_flag("--biorientation", bio, "Input is a biorientation");

  std::string level = "fast";
  int max_n = 0;
  auto* verify = app.add_subcommand("verify", "Exhaustive small-size checks");
  verify->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}))->capture_default_str();
  verify->add_option("--max-n", max_n, "Largest tree size (default 7 fast, 8 full)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sample) {
      if (so.n < 1) throw CLI::ValidationError("--n", "must be positive");
      return run_sample(g, so);
    }
    if (*encode) return run_encode(g, in, out, mode);
    if (*decode) return run_decode(g, in, out);
    if (*convert) {
      if (!to_tree && !to_map) throw CLI::ValidationError("convert", "give --to-tree or --to-map");
      return run_convert(g, in, out, to_tree, tree_json);
    }
    if (*series) return run_series(g, family, terms);
    if (*consts) return run_constants(g);
    if (*validate) return run_validate(g, in, bio);
    if (*verify) return run_verify(g, level, max_n);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
