#include "commands.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/modular.hpp"
#include "cohmatch/svg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <utility>

namespace cohmatch::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string out_dir = ".";
  int field = 2;
  int precision = 17;
  bool lenient = false;
  int threads = 0;
};

struct RegionArgs {
  Real a_min = kDefaultAMin;
  Real b_margin = 1.0;
};

void add_common(CLI::App& cmd, Common& c) {
  cmd.add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  cmd.add_option("--field", c.field, "Prime characteristic of the coefficient field")
      ->capture_default_str();
  cmd.add_option("--precision", c.precision, "Significant digits in CSV output")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  cmd.add_flag("--lenient", c.lenient, "Add missing faces instead of rejecting the input");
  cmd.add_option("--threads", c.threads, "Worker threads (overrides COHMATCH_THREADS)")
      ->check(CLI::PositiveNumber);
}

void add_region(CLI::App& cmd, RegionArgs& r) {
  cmd.add_option("--a-min", r.a_min, "Region keeps a in [a_min, 1 - a_min]")
      ->check(CLI::Range(1e-12, 0.5))
      ->capture_default_str();
  cmd.add_option("--b-margin", r.b_margin, "Region keeps |b| <= K + margin")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

FaceClosure closure(const Common& c) { return c.lenient ? FaceClosure::Lenient : FaceClosure::Strict; }

void write_file(const Common& c, const std::string& name, const std::string& content) {
  fs::create_directories(c.out_dir);
  const fs::path path = fs::path(c.out_dir) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  os << content;
}

void write_json(const Common& c, const std::string& name, const Json& j) {
  write_file(c, name, j.dump(2) + "\n");
}

ParameterPoint point_of(const std::pair<Real, Real>& ab) {
  return make_parameter_point(ab.first, ab.second);
}

/// Second input over the same complex as the first.
Bifiltration same_complex(const BifilteredComplex& first, const std::string& path, FaceClosure mode) {
  BifilteredComplex other = read_complex(path, mode);
  if (!(other.complex == first.complex))
    throw Error(ErrorKind::InvalidArgument, path + ": complex differs from the first input");
  return other.f;
}

std::vector<int> all_degrees(const SimplicialComplex& complex) {
  std::vector<int> out;
  for (int d = 0; d <= complex.dimension(); ++d) out.push_back(d);
  return out;
}

}  // namespace

Json check_report(const fixtures::Sample& sample, const CheckOptions& options) {
  const auto& fns = sample.functions;
  if (fns.size() < 2) throw Error(ErrorKind::InvalidArgument, "check needs at least two functions");
  Real bound = 0.0;
  for (const auto& fn : fns) bound = std::max(bound, b_bound(fn));

  CdmatchConfig config;
  config.region = default_region(bound, options.a_min, options.b_margin);
  config.resolution = options.resolution;
  config.word_length = options.word_length;
  config.enumeration_limit = options.enumeration_limit;
  config.field = options.field;
  BranchAndBound bb;
  bb.region = config.region;
  bb.tol = options.dmatch_tol;
  bb.max_evaluations = options.dmatch_max_evaluations;
  bb.field = options.field;

  bool passed = true;
  Json pairs = Json::array();
  std::vector<SingularPair> singular;
  std::optional<ParameterPoint> basepoint;
  Real gap = kInfinity;
  for (std::size_t i = 0; i < fns.size(); ++i)
    for (std::size_t j = i + 1; j < fns.size(); ++j) {
      const StabilityReport stab = stability_check(sample.complex, fns[i], fns[j], config);
      const ComparisonReport cmp = compare_distances(sample.complex, fns[i], fns[j], config, bb);
      passed = passed && stab.passed && cmp.holds;
      if (!basepoint) basepoint = cmp.cdmatch.basepoint;
      gap = std::min(gap, cmp.cdmatch.gap);
      singular.insert(singular.end(), cmp.cdmatch.singular.begin(), cmp.cdmatch.singular.end());
      pairs.push_back({{"first", i},
                       {"second", j},
                       {"stability", stability_json(stab)},
                       {"comparison", comparison_json(cmp)}});
    }

  TransportConfig transport;
  transport.gap = gap;
  transport.field = options.field;
  const auto disks = exclusion_disks(singular, config);
  const auto checks =
      transport_law_checks(sample.complex, fns, *basepoint, law_check_paths(config.region, *basepoint, disks),
                           disks, all_degrees(sample.complex), transport);
  Json laws = Json::array();
  std::size_t failed = 0;
  std::size_t skipped = 0;
  for (const auto& c : checks) {
    if (c.skipped) ++skipped;
    else if (!c.holds) ++failed;
    laws.push_back({{"law", c.law},
                    {"degree", c.degree},
                    {"path", c.path},
                    {"holds", c.holds},
                    {"skipped", c.skipped}});
  }
  passed = passed && failed == 0;

  return Json{{"fixture", sample.name},
              {"functions", fns.size()},
              {"region", to_json(config.region)},
              {"resolution", options.resolution},
              {"word_length", options.word_length},
              {"basepoint", to_json(*basepoint)},
              {"gap", json_real(gap)},
              {"pairs", std::move(pairs)},
              {"transport_laws",
               {{"checks", std::move(laws)}, {"failed", failed}, {"skipped", skipped}}},
              {"passed", passed}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matching distances between bifiltrations of a simplicial complex", "cohmatch"};
  app.require_subcommand(1);
  Common common;
  RegionArgs region_args;
  int degree = -1;
  int resolution = 32;

  // diagram
  std::string input;
  std::pair<Real, Real> at{0.5, 0.0};
  bool raw = false;
  auto* diagram = app.add_subcommand("diagram", "Persistence diagram of one slice");
  diagram->add_option("input", input, "Bifiltered complex")->required();
  diagram->add_option("--a", at.first, "Slope parameter, 0 < a < 1")->capture_default_str();
  diagram->add_option("--b", at.second, "Offset parameter")->capture_default_str();
  diagram->add_flag("--raw", raw, "Unnormalized slice");
  add_common(*diagram, common);

  // singular
  Real threshold = kInfinity;
  auto* singular = app.add_subcommand("singular", "Separation map and singular pairs");
  singular->add_option("input", input, "Bifiltered complex")->required();
  singular->add_option("--degree", degree, "Homological degree")->required();
  singular->add_option("--resolution", resolution, "Grid nodes per axis")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  singular->add_option("--threshold", threshold, "Refine grid minima below this separation");
  add_region(*singular, region_args);
  add_common(*singular, common);

  // vineyard
  std::pair<Real, Real> from{0.25, 0.0};
  std::pair<Real, Real> to{0.75, 0.0};
  Real max_step = 0.125;
  Real gap = kInfinity;
  auto* vineyard = app.add_subcommand("vineyard", "Tracks of the cornerpoints along a segment");
  vineyard->add_option("input", input, "Bifiltered complex")->required();
  vineyard->add_option("--from", from, "Start (a b)")->capture_default_str();
  vineyard->add_option("--to", to, "End (a b)")->capture_default_str();
  vineyard->add_option("--degree", degree, "Homological degree")->required();
  vineyard->add_option("--max-step", max_step, "Largest step in path parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  vineyard->add_option("--gap", gap, "Near-diagonal gap k (default: estimated)");
  add_region(*vineyard, region_args);
  add_common(*vineyard, common);

  // monodromy
  std::pair<Real, Real> center{0.5, 0.0};
  Real radius = 0.05;
  int turns = 1;
  auto* monodromy = app.add_subcommand("monodromy", "Permutation of the cornerpoints around a loop");
  monodromy->add_option("input", input, "Bifiltered complex")->required();
  monodromy->add_option("--center", center, "Loop center (a b)")->required();
  monodromy->add_option("--radius", radius, "Loop radius")->check(CLI::PositiveNumber)->capture_default_str();
  monodromy->add_option("--degree", degree, "Homological degree")->required();
  monodromy->add_option("--turns", turns, "Times around the loop")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  monodromy->add_option("--gap", gap, "Near-diagonal gap k (default: estimated)");
  add_region(*monodromy, region_args);
  add_common(*monodromy, common);

  // dmatch
  std::vector<std::string> inputs;
  Real tol = 1e-2;
  std::size_t max_evaluations = 20000;
  auto* dmatch = app.add_subcommand("dmatch", "Matching distance by branch and bound");
  dmatch->add_option("inputs", inputs, "Two bifiltered complexes")->required()->expected(2);
  dmatch->add_option("--degree", degree, "Homological degree (default: all)");
  dmatch->add_option("--tol", tol, "Bracket width to stop at")->check(CLI::PositiveNumber)->capture_default_str();
  dmatch->add_option("--max-evaluations", max_evaluations, "Evaluation budget")->capture_default_str();
  dmatch->add_option("--resolution", resolution, "Initial grid nodes per axis")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  add_region(*dmatch, region_args);
  add_common(*dmatch, common);

  // cdmatch
  int word_length = 2;
  int enumeration_limit = 6;
  std::optional<std::pair<Real, Real>> basepoint;
  std::vector<int> degrees;
  auto* cdmatch = app.add_subcommand("cdmatch", "Coherent matching distance estimate");
  cdmatch->add_option("inputs", inputs, "Two bifiltered complexes")->required()->expected(2);
  cdmatch->add_option("--degrees", degrees, "Degrees to evaluate (default: all)");
  cdmatch->add_option("--resolution", resolution, "Path endpoints per axis")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  cdmatch->add_option("--word-length", word_length, "Longest loop word")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cdmatch->add_option("--enumeration-limit", enumeration_limit,
                      "Proper points per side above which matchings are sampled")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cdmatch->add_option("--basepoint", basepoint, "Basepoint (a b)");
  add_region(*cdmatch, region_args);
  add_common(*cdmatch, common);

  // check
  std::string fixture;
  std::uint64_t seed = 1;
  Real amplitude = 0.05;
  CheckOptions check_options;
  auto* check = app.add_subcommand("check", "Stability, D <= CD and transport law checks");
  check->add_option("inputs", inputs, "Two or three bifiltered complexes")->expected(2, 3);
  check->add_option("--fixture", fixture, "Generated fixture instead of inputs")
      ->check(CLI::IsMember(fixtures::names()));
  check->add_option("--seed", seed, "Fixture seed")->capture_default_str();
  check->add_option("--amplitude", amplitude, "Fixture perturbation amplitude")->capture_default_str();
  check->add_option("--resolution", check_options.resolution, "Path endpoints per axis")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  check->add_option("--word-length", check_options.word_length, "Longest loop word")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_region(*check, region_args);
  add_common(*check, common);

  // gen-fixture
  std::string name;
  auto* gen = app.add_subcommand("gen-fixture", "Write a generated fixture as input files");
  gen->add_option("name", name, "Fixture name")->required()->check(CLI::IsMember(fixtures::names()));
  gen->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen->add_option("--amplitude", amplitude, "Perturbation amplitude")->capture_default_str();
  add_common(*gen, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << Json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    if (common.threads > 0) ::setenv("COHMATCH_THREADS", std::to_string(common.threads).c_str(), 1);
    if (!modular::is_prime(common.field))
      throw Error(ErrorKind::InvalidArgument, "field characteristic must be prime");
    const FaceClosure mode = closure(common);
    const int prec = common.precision;

    if (*diagram) {
      const BifilteredComplex in = read_complex(input, mode);
      const ParameterPoint p = point_of(at);
      const PersistenceDiagram d = slice_diagram(in.complex, in.f, p, !raw, common.field);
      write_file(common, "diagram.csv", diagram_csv(d, prec));
      Json j = diagram_json(d);
      j["parameter"] = to_json(p);
      j["normalized"] = !raw;
      write_json(common, "diagram.json", j);
      write_file(common, "diagram.svg", diagram_svg(d, "a = " + format_real(p.a, 6) +
                                                           ", b = " + format_real(p.b, 6)));
      out << diagram_csv(d, prec);
      return 0;
    }

    if (*singular) {
      const BifilteredComplex in = read_complex(input, mode);
      SingularSearch search;
      search.region = default_region(b_bound(in.f), region_args.a_min, region_args.b_margin);
      search.resolution = resolution;
      search.degree = degree;
      search.field = common.field;
      if (std::isfinite(threshold)) {
        search.threshold = threshold;
      } else {
        const GapEstimate g =
            near_diagonal_gap_estimate(in.complex, in.f, search.region, resolution, common.field);
        search.threshold = g.k / 2;
      }
      const SingularSet s = detect_singular_pairs(in.complex, in.f, search);
      const Eigen::MatrixXd grid =
          separation_grid(in.complex, in.f, search.region, resolution, degree, common.field);
      std::vector<ParameterPoint> markers;
      for (const auto& pair : s.pairs) markers.push_back(pair.center);
      write_file(common, "separation.csv", separation_csv(search.region, grid, prec));
      Json j = singular_json(s);
      j["region"] = to_json(search.region);
      j["threshold"] = json_real(search.threshold);
      write_json(common, "singular.json", j);
      write_file(common, "separation.svg",
                 heatmap_svg(search.region, grid, markers, "separation, degree " + std::to_string(degree)));
      out << j.dump(2) << '\n';
      return 0;
    }

    if (*vineyard || *monodromy) {
      const BifilteredComplex in = read_complex(input, mode);
      TransportConfig config;
      config.field = common.field;
      config.max_step = max_step;
      config.gap = gap;
      if (!std::isfinite(gap)) {
        const ParameterRegion region =
            default_region(b_bound(in.f), region_args.a_min, region_args.b_margin);
        config.gap = near_diagonal_gap_estimate(in.complex, in.f, region, 32, common.field).k;
      }
      if (*vineyard) {
        config.record = true;
        const auto path = ParameterPath::straight(point_of(from), point_of(to));
        const auto tracks = transport_all(in.complex, in.f, path, degree, config);
        Json list = Json::array();
        for (std::size_t k = 0; k < tracks.size(); ++k) {
          write_file(common, "track_" + std::to_string(k) + ".csv", track_csv(tracks[k], prec));
          list.push_back(track_json(tracks[k]));
        }
        const Json j{{"from", to_json(path.start())},
                     {"to", to_json(path.end())},
                     {"degree", degree},
                     {"gap", json_real(config.gap)},
                     {"tracks", std::move(list)}};
        write_json(common, "vineyard.json", j);
        write_file(common, "vineyard.svg", vineyard_svg(tracks, "degree " + std::to_string(degree)));
        out << j.dump(2) << '\n';
        return 0;
      }
      const auto lp =
          loop_permutation(in.complex, in.f, point_of(center), radius, degree, config, turns);
      Json points = Json::array();
      for (const auto& x : lp.points) points.push_back({json_real(x.x()), json_real(x.y())});
      const Json j{{"center", to_json(point_of(center))},
                   {"radius", radius},
                   {"turns", turns},
                   {"degree", degree},
                   {"basepoint", to_json(lp.basepoint)},
                   {"points", std::move(points)},
                   {"permutation", lp.permutation},
                   {"cycles", cycle_notation(lp.permutation)},
                   {"identity", is_identity(lp.permutation)},
                   {"segments", lp.segments},
                   {"stable", lp.stable}};
      write_json(common, "monodromy.json", j);
      out << j.dump(2) << '\n';
      return 0;
    }

    if (*dmatch || *cdmatch) {
      const BifilteredComplex in = read_complex(inputs[0], mode);
      const Bifiltration g = same_complex(in, inputs[1], mode);
      const ParameterRegion region =
          default_region(b_bound(in.f, g), region_args.a_min, region_args.b_margin);
      if (*dmatch) {
        BranchAndBound bb;
        bb.region = region;
        bb.resolution = resolution;
        bb.tol = tol;
        bb.max_evaluations = max_evaluations;
        bb.field = common.field;
        const DistanceEstimate e = estimate_dmatch(in.complex, in.f, g, bb, degree);
        Json j = estimate_json(e);
        j["region"] = to_json(region);
        j["degree"] = degree < 0 ? Json("all") : Json(degree);
        write_json(common, "dmatch.json", j);
        out << j.dump(2) << '\n';
        return 0;
      }
      CdmatchConfig config;
      config.region = region;
      config.resolution = resolution;
      config.word_length = word_length;
      config.enumeration_limit = enumeration_limit;
      config.degrees = degrees;
      config.field = common.field;
      if (basepoint) config.basepoint = point_of(*basepoint);
      const CdmatchResult r = estimate_cdmatch(in.complex, in.f, g, config);
      Json j = cdmatch_json(r);
      j["region"] = to_json(region);
      write_json(common, "cdmatch.json", j);
      for (const auto& d : r.degrees)
        write_file(common, "sigma_degree" + std::to_string(d.degree) + ".csv",
                   sigma_table_csv(d, prec));
      out << cdmatch_json(r, false).dump(2) << '\n';
      return 0;
    }

    if (*check) {
      fixtures::Sample sample;
      if (!fixture.empty()) {
        if (!inputs.empty()) throw Error(ErrorKind::InvalidArgument, "give inputs or --fixture, not both");
        sample = fixtures::make(fixture, seed, amplitude);
      } else {
        if (inputs.size() < 2) throw Error(ErrorKind::InvalidArgument, "check needs two or three inputs");
        const BifilteredComplex in = read_complex(inputs[0], mode);
        sample.name = inputs[0];
        sample.complex = in.complex;
        sample.functions.push_back(in.f);
        for (std::size_t k = 1; k < inputs.size(); ++k)
          sample.functions.push_back(same_complex(in, inputs[k], mode));
      }
      check_options.a_min = region_args.a_min;
      check_options.b_margin = region_args.b_margin;
      check_options.field = common.field;
      Json j = check_report(sample, check_options);
      if (!fixture.empty()) j["seed"] = seed;
      write_json(common, "check.json", j);
      const bool passed = j["passed"].get<bool>();
      out << (passed ? "check passed" : "check FAILED") << '\n';
      return passed ? 0 : 1;
    }

    if (*gen) {
      const fixtures::Sample s = fixtures::make(name, seed, amplitude);
      const char* labels[] = {"f", "g", "h"};
      for (std::size_t k = 0; k < s.functions.size(); ++k) {
        const std::string file = name + "_" + labels[k] + ".txt";
        write_file(common, file, serialize_complex(s.complex, s.functions[k]));
        out << (fs::path(common.out_dir) / file).string() << '\n';
      }
      return 0;
    }
  } catch (const Error& e) {
    err << Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace cohmatch::cli
