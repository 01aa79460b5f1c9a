// cubelam: command-line front end. Reads one JSON document (file, '-' for
// stdin, or inline text starting with '{'), writes one JSON document.
// Exit status: 0 success, 1 verification or construction failure, 2 bad input.

#include "cubelam/cube.hpp"
#include "cubelam/hulls.hpp"
#include "cubelam/json_io.hpp"
#include "cubelam/periodic.hpp"
#include "cubelam/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

namespace {

using namespace cubelam;
using json::Json;

enum class Mode { Exact, Float };

struct RunConfig {
  std::string subcommand;
  std::string input;
  Mode mode = Mode::Exact;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> mc;
  std::string out;
  int grid = 256;
  int battery = 24;
  unsigned workers = 0;
};

/// Result of a subcommand: the document to print and whether it passed.
struct Outcome {
  Json doc;
  bool ok = true;
};

std::string read_input(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return arg;
  std::ostringstream ss;
  if (arg == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(arg);
  if (!in) throw InputError("cannot open input file '" + arg + "'");
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t require_seed(const RunConfig& cfg, const std::string& why) {
  if (!cfg.seed) throw InputError("--seed is required for " + why);
  return *cfg.seed;
}

const char* mode_name(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

// ---------------------------------------------------------------------------

Outcome run_weights(const RunConfig& cfg, const Json& in) {
  PeriodicDeformation<Rational> d;
  if (cfg.mode == Mode::Exact) {
    d = json::deformation<Rational>(in);
  } else {
    // float amplitudes are taken at their exact binary value
    for (const auto& m : json::deformation<double>(in).modes) {
      d.modes.push_back({Vec2q(exact_from_double(m.amplitude(0)), exact_from_double(m.amplitude(1))),
                         m.frequency, m.phase});
    }
  }
  Json out;
  if (cfg.mc) {
    const std::uint64_t seed = require_seed(cfg, "Monte-Carlo weights");
    out = json::encode_weights(mc_weights(d, *cfg.mc, seed, cfg.workers));
    out["method"] = "monte-carlo";
    out["samples"] = *cfg.mc;
    out["seed"] = seed;
  } else {
    const auto w = exact_weights(d);
    if (cfg.mode == Mode::Exact) {
      out = json::encode_weights(w);
    } else {
      SignPatternMeasure<double> wd{w.n, {}};
      for (const auto& x : w.weights) wd.weights.push_back(to_double(x));
      out = json::encode_weights(wd);
    }
    out["method"] = "exact";
  }
  out["mode"] = mode_name(cfg.mode);
  bool with_amplitudes = true;
  for (std::size_t i = 0; i < in["modes"].size(); ++i) with_amplitudes &= in["modes"][i].contains("a");
  if (with_amplitudes) {
    Json support = Json::object();
    const auto points = support_points(d);
    for (SignPattern eps = 0; eps < points.size(); ++eps) {
      support[pattern_to_string(eps, d.size())] = json::encode_mat2(points[eps]);
    }
    out["support"] = support;
  }
  return {out, true};
}

template <class S>
Outcome check_tree(const Json& in) {
  MeasureForest<S> f;
  if (in.contains("forest")) {
    f = json::forest<S>(in["forest"], "/forest");
  } else {
    f = single_tree_forest(json::tree<S>(json::member(in, "tree", ""), "/tree"));
  }
  TreeReport r = validate_forest(f);
  if (!in.contains("forest") && r.violation) r.violation->path.erase(0, 3);  // drop "#0/"
  Json out{{"report", json::encode_report(r)}};
  if (!r.valid) return {out, false};
  const auto m = flatten(f).canonical();
  out["barycenter"] = json::encode_mat2(barycenter(m));
  out["flattened"] = json::encode_measure(m);
  std::optional<Mat2<S>> declared;
  if (in.contains("barycenter")) declared = json::mat2<S>(in["barycenter"], "/barycenter");
  const auto res = pc_constraints_check(m, declared);
  out["moment_residual"] = Json{{"first", json::encode(res.first_moment)},
                                {"det", json::encode(res.det_moment)}};
  return {out, res.zero()};
}

template <class S>
Json encode_hits(const std::vector<SurfaceHit<S>>& hits) {
  Json out = Json::array();
  for (const auto& h : hits) {
    out.push_back(Json{{"point", json::encode_mat2(h.point)},
                       {"t", json::encode(h.t)},
                       {"u", json::encode(h.u)},
                       {"sigma", json::encode(h.sigma)}});
  }
  return out;
}

template <class S>
Outcome hull_square(const Json& in) {
  const Json& sj = json::member(in, "square", "");
  if (!sj.is_array() || sj.size() != 4) throw InputError("/square: expected four matrices");
  std::array<Mat2<S>, 4> x;
  for (std::size_t i = 0; i < 4; ++i) x[i] = json::mat2<S>(sj[i], "/square/" + std::to_string(i));
  const auto sq = RankOneSquare<S>::make(x[0], x[1], x[2], x[3]);
  const SquareCase kind = classify(sq);
  Json out{{"case", to_string(kind)}, {"d13", json::encode(sq.d13)}, {"d24", json::encode(sq.d24)}};
  if (kind != SquareCase::OppositeSign) return {out, true};

  const auto patch = RuledSurfacePatch<S>::make(sq);
  // a planar square has no quadric through it; the patch is the square itself
  std::optional<Hyperboloid<S>> hyp;
  if (!detail::affinely_dependent(sq.X)) {
    hyp = hyperboloid_center(sq.X);
    out["hyperboloid"] = Json{{"center", json::encode_mat2(hyp->center)}, {"level", json::encode(hyp->level)}};
  } else {
    out["hyperboloid"] = nullptr;
  }
  if (in.contains("t")) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < in["t"].size(); ++i) {
      const S t = json::scalar<S>(in["t"][i], "/t/" + std::to_string(i));
      const S s = pairing(sq, t);
      rows.push_back(Json{{"t", json::encode(t)},
                          {"s", json::encode(s)},
                          {"residual", json::encode(det<S>(patch.edge_a(t) - patch.edge_b(t)))}});
    }
    out["pairing"] = rows;
  }
  if (in.contains("ray")) {
    const Json& r = in["ray"];
    const auto origin = json::mat2<S>(json::member(r, "origin", "/ray"), "/ray/origin");
    const auto dir = json::mat2<S>(json::member(r, "direction", "/ray"), "/ray/direction");
    if (!hyp) throw InputError("/ray: the square is planar, no surface to intersect");
    try {
      out["hits"] = encode_hits(ray_surface_intersections(patch, *hyp, origin, dir));
    } catch (const LineInSurface&) {
      out["hits"] = "line lies in the surface";
    }
  }
  return {out, true};
}

Outcome hull_membership(const RunConfig& cfg, const Json& in) {
  const Json& pj = json::member(in, "points", "");
  if (!pj.is_array() || pj.empty()) throw InputError("/points: expected a nonempty array");
  auto exact_mat = [&](const Json& j, const std::string& where) {
    return cfg.mode == Mode::Exact ? json::mat2<Rational>(j, where)
                                   : exact_from_double(json::mat2<double>(j, where));
  };
  std::vector<Mat2q> k;
  for (std::size_t i = 0; i < pj.size(); ++i) k.push_back(exact_mat(pj[i], "/points/" + std::to_string(i)));
  const Mat2q x = exact_mat(json::member(in, "query", ""), "/query");
  const auto w = pc_membership(k, x);
  Json out{{"member", w.has_value()}};
  if (w) {
    Json weights = Json::array();
    for (const auto& v : *w) weights.push_back(json::encode(v));
    out["weights"] = weights;
  }
  return {out, true};
}

Outcome run_hull(const RunConfig& cfg, const Json& in) {
  if (in.contains("points")) return hull_membership(cfg, in);
  return cfg.mode == Mode::Exact ? hull_square<Rational>(in) : hull_square<double>(in);
}

Frame exact_frame(const RunConfig& cfg, const Json& in) {
  if (cfg.mode == Mode::Exact) return json::frame<Rational>(in);
  // float input is converted exactly so every later predicate is exact
  const auto fd = json::frame<double>(in);
  return build_frame<Rational>(exact_from_double(fd.C[0]), exact_from_double(fd.C[1]),
                               exact_from_double(fd.C[2]));
}

Outcome run_frame(const RunConfig& cfg, const Json& in) {
  if (cfg.mode == Mode::Exact) return {json::encode_frame(json::frame<Rational>(in)), true};
  const auto f = json::frame<double>(in);
  Json out{{"raw", Json{{"a", f.raw_a}, {"b", f.raw_b}, {"c", f.raw_c}}},
           {"normalization", Json{{"axis_sign", f.axis_sign}, {"det_flip", f.det_flip}}},
           {"normalized", Json{{"a", f.a}, {"b", f.b}, {"c", f.c}}},
           {"degenerate", f.degenerate},
           {"classes_swapped", f.classes_swapped()}};
  return {out, true};
}

Outcome run_laminate(const RunConfig& cfg, const Json& in) {
  const Frame f = exact_frame(cfg, in);
  const Rational target =
      in.contains("target") ? json::scalar<Rational>(in["target"], "/target") : Rational(1, 3);
  WitnessOptions opt;
  opt.grid = cfg.grid;
  opt.max_grid = std::max(cfg.grid, 4 * cfg.grid);
  return {json::encode_certificate(symmetric_laminate(f, target, opt)), true};
}

Outcome run_verify(const RunConfig& cfg, const Json& in) {
  const auto functions = battery(require_seed(cfg, "the random battery in verify"), cfg.battery);
  SuiteReport report;
  if (in.contains("schema_version")) {
    const LaminateCertificate cert = json::certificate(in);
    report = verify_certificate(cert, functions, symmetric_measure(cert.frame, cert.alpha));
  } else {
    WitnessOptions opt;
    opt.grid = cfg.grid;
    opt.max_grid = std::max(cfg.grid, 4 * cfg.grid);
    report = main_theorem_suite(exact_frame(cfg, in), functions, opt);
  }
  Json out = json::encode_suite(report);
  out["seed"] = *cfg.seed;
  out["battery_size"] = cfg.battery;
  return {out, report.passed()};
}

Outcome dispatch(const RunConfig& cfg) {
  const Json in = json::parse(read_input(cfg.input));
  if (!in.is_object()) throw InputError("/: expected a JSON object");
  if (cfg.subcommand == "weights") return run_weights(cfg, in);
  if (cfg.subcommand == "check-tree") {
    return cfg.mode == Mode::Exact ? check_tree<Rational>(in) : check_tree<double>(in);
  }
  if (cfg.subcommand == "hull") return run_hull(cfg, in);
  if (cfg.subcommand == "frame") return run_frame(cfg, in);
  if (cfg.subcommand == "laminate") return run_laminate(cfg, in);
  return run_verify(cfg, in);
}

void write_output(const RunConfig& cfg, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw InputError("cannot write '" + cfg.out + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric laminates on rank-one cubes"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string mode = "exact";

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"weights", "sign-pattern weights of a periodic sawtooth deformation"},
      {"check-tree", "validate a splitting tree or forest"},
      {"hull", "classify a rank-one square, or test polyconvex-hull membership"},
      {"frame", "cube coordinates and sign normalisation of C1, C2, C3"},
      {"laminate", "symmetric laminate certificate for a target ratio"},
      {"verify", "check a certificate or frame against the function battery"},
  };
  for (const auto& [name, help] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", cfg.input, "JSON file, '-' for stdin, or inline JSON")->required();
    sub->add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--seed", cfg.seed, "seed for randomized paths");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    if (name == "weights") {
      sub->add_option("--mc", cfg.mc, "Monte-Carlo sample count instead of exact weights");
      sub->add_option("--workers", cfg.workers, "threads for Monte-Carlo (0 = all cores)");
    }
    if (name == "laminate" || name == "verify") {
      sub->add_option("--grid", cfg.grid, "witness direction search resolution")
          ->check(CLI::Range(4, 1 << 16));
    }
    if (name == "verify") {
      sub->add_option("--battery", cfg.battery, "number of test functions")->check(CLI::Range(4, 1000));
    }
    sub->callback([&cfg, name] { cfg.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.mode = mode == "float" ? Mode::Float : Mode::Exact;

  try {
    const Outcome o = dispatch(cfg);
    write_output(cfg, o.doc);
    if (!o.ok) {
      std::cerr << "verification failed\n";
      return 1;
    }
    return 0;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return 1;
  }
}
