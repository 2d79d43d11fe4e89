#include "cohmatch/io.hpp"

#include "cohmatch/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cohmatch {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& value) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

BifilteredComplex parse_complex(std::istream& in, FaceClosure mode) {
  std::vector<std::array<Real, 2>> values;
  std::vector<Simplex> simplices;
  std::vector<std::size_t> simplex_lines;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    const auto tok = tokens(text);
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() != 3) parse_error(line, "vertex needs exactly two values: v <f1> <f2>");
      std::array<Real, 2> v{};
      for (int k = 0; k < 2; ++k)
        if (!parse_number(tok[static_cast<std::size_t>(k) + 1], v[static_cast<std::size_t>(k)]) ||
            !std::isfinite(v[static_cast<std::size_t>(k)]))
          parse_error(line, "invalid vertex value '" + std::string(tok[static_cast<std::size_t>(k) + 1]) + "'");
      values.push_back(v);
    } else if (tok[0] == "s") {
      if (tok.size() < 2) parse_error(line, "simplex needs at least one vertex index");
      Simplex s;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        long idx = 0;
        if (!parse_number(tok[k], idx) || idx < 0)
          parse_error(line, "invalid vertex index '" + std::string(tok[k]) + "'");
        if (!s.empty() && idx <= s.back())
          parse_error(line, "simplex vertices must be strictly increasing");
        s.push_back(static_cast<int>(idx));
      }
      simplices.push_back(std::move(s));
      simplex_lines.push_back(line);
    } else {
      parse_error(line, "unknown record '" + std::string(tok[0]) + "' (expected v or s)");
    }
  }
  for (std::size_t k = 0; k < simplices.size(); ++k)
    if (static_cast<std::size_t>(simplices[k].back()) >= values.size())
      parse_error(simplex_lines[k], "vertex index " + std::to_string(simplices[k].back()) +
                                        " is not declared");
  if (values.empty()) throw Error(ErrorKind::EmptyComplex, "input declares no vertices");

  std::vector<Simplex> higher;
  for (auto& s : simplices)
    if (s.size() > 1) higher.push_back(std::move(s));
  VertexPairs pairs(static_cast<Eigen::Index>(values.size()), 2);
  for (std::size_t k = 0; k < values.size(); ++k) {
    pairs(static_cast<Eigen::Index>(k), 0) = values[k][0];
    pairs(static_cast<Eigen::Index>(k), 1) = values[k][1];
  }
  return {build_complex(values.size(), std::move(higher), mode), Bifiltration(std::move(pairs))};
}

BifilteredComplex parse_complex(const std::string& text, FaceClosure mode) {
  std::istringstream in(text);
  return parse_complex(in, mode);
}

BifilteredComplex read_complex(const std::string& path, FaceClosure mode) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return parse_complex(in, mode);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string format_real(Real x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

std::string serialize_complex(const SimplicialComplex& complex, const Bifiltration& f,
                              int precision) {
  if (f.size() != complex.num_vertices())
    throw Error(ErrorKind::InvalidArgument, "bifiltration does not match the complex");
  std::ostringstream os;
  for (std::size_t v = 0; v < f.size(); ++v)
    os << "v " << format_real(f.values()(static_cast<Eigen::Index>(v), 0), precision) << ' '
       << format_real(f.values()(static_cast<Eigen::Index>(v), 1), precision) << '\n';
  for (std::size_t id = complex.num_vertices(); id < complex.size(); ++id) {
    os << 's';
    for (int v : complex.simplex(id)) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

Json json_real(Real x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

Json to_json(const ParameterPoint& p) { return Json{{"a", p.a}, {"b", p.b}}; }

Json to_json(const ParameterRegion& r) {
  return Json{{"a_lo", r.a_lo}, {"a_hi", r.a_hi}, {"b_lo", r.b_lo}, {"b_hi", r.b_hi}};
}

std::string diagram_csv(const PersistenceDiagram& d, int precision) {
  std::ostringstream os;
  os << "degree,birth,death,multiplicity\n";
  for (const auto& c : d.points())
    os << c.degree << ',' << format_real(c.birth, precision) << ','
       << format_real(c.death, precision) << ',' << c.multiplicity << '\n';
  return os.str();
}

Json diagram_json(const PersistenceDiagram& d) {
  Json points = Json::array();
  for (const auto& c : d.points())
    points.push_back({{"degree", c.degree},
                      {"birth", json_real(c.birth)},
                      {"death", json_real(c.death)},
                      {"multiplicity", c.multiplicity}});
  return Json{{"max_degree", d.max_degree()}, {"points", std::move(points)}};
}

Json matching_json(const Matching& m) {
  auto slot = [&](const MatchSlot& s, const std::vector<PlanePoint>& pts) -> Json {
    if (s.diagonal) return "diagonal";
    const PlanePoint& x = pts[static_cast<std::size_t>(s.index)];
    return Json::array({json_real(x.x()), json_real(x.y())});
  };
  Json pairs = Json::array();
  for (const auto& pair : m.pairs)
    pairs.push_back({{"left", slot(pair.first, m.left)},
                     {"right", slot(pair.second, m.right)},
                     {"cost", json_real(m.pair_cost(pair))}});
  Json essential = Json::array();
  for (const auto& [i, j] : m.essential_pairs) {
    const Real u = m.left_essential[static_cast<std::size_t>(i)];
    const Real v = m.right_essential[static_cast<std::size_t>(j)];
    essential.push_back({{"left", json_real(u)}, {"right", json_real(v)}, {"cost", std::abs(u - v)}});
  }
  return Json{{"degree", m.degree},
              {"pairs", std::move(pairs)},
              {"essential", std::move(essential)},
              {"cost", json_real(cost(m))}};
}

std::string track_csv(const CornerpointTrack& t, int precision) {
  std::ostringstream os;
  os << "tau,a,b,birth,death,on_diagonal\n";
  for (const auto& s : t.samples)
    os << format_real(s.tau, precision) << ',' << format_real(s.parameter.a, precision) << ','
       << format_real(s.parameter.b, precision) << ',' << format_real(s.position.x(), precision)
       << ',' << format_real(s.position.y(), precision) << ',' << (s.on_diagonal ? 1 : 0) << '\n';
  return os.str();
}

Json track_json(const CornerpointTrack& t) {
  Json intervals = Json::array();
  for (const auto& [from, to] : t.diagonal_intervals) intervals.push_back({from, to});
  return Json{{"start", {json_real(t.start.birth), json_real(t.start.death)}},
              {"degree", t.start.degree},
              {"end", {json_real(t.end_position.x()), json_real(t.end_position.y())}},
              {"ends_on_diagonal", t.end.on_diagonal},
              {"samples", t.samples.size()},
              {"diagonal_intervals", std::move(intervals)}};
}

std::string separation_csv(const ParameterRegion& region, const Eigen::MatrixXd& grid,
                           int precision) {
  std::ostringstream os;
  os << "a,b,separation\n";
  const int n = static_cast<int>(grid.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ParameterPoint p = grid_node(region, n, i, j);
      os << format_real(p.a, precision) << ',' << format_real(p.b, precision) << ','
         << format_real(grid(i, j), precision) << '\n';
    }
  return os.str();
}

Json singular_json(const std::vector<SingularPair>& pairs) {
  Json out = Json::array();
  for (const auto& s : pairs)
    out.push_back({{"function", s.which},
                   {"degree", s.degree},
                   {"center", to_json(s.center)},
                   {"radius", s.radius},
                   {"separation", json_real(s.separation)}});
  return out;
}

Json singular_json(const SingularSet& s) {
  return Json{{"pairs", singular_json(s.pairs)}, {"warnings", s.warnings}};
}

Json estimate_json(const DistanceEstimate& e) {
  return Json{{"lower", json_real(e.lower)},
              {"upper", e.upper_known ? json_real(e.upper) : Json("unknown")},
              {"converged", e.converged},
              {"witness", to_json(e.witness)},
              {"evaluations", e.evaluations},
              {"depth", e.depth}};
}

Json cdmatch_json(const CdmatchResult& r, bool with_tables) {
  Json degrees = Json::array();
  for (const auto& d : r.degrees) {
    Json deg{{"degree", d.degree},
             {"min_sup", json_real(d.min_sup)},
             {"enumeration_exact", d.enumeration_exact},
             {"matchings", d.rows.size()},
             {"words", d.words},
             {"skipped_words", d.skipped_words},
             {"paths", d.paths},
             {"skipped_paths", d.skipped_paths}};
    if (d.best >= 0) {
      const SigmaRow& row = d.rows[static_cast<std::size_t>(d.best)];
      deg["best"] = {{"index", d.best},
                     {"matching", matching_json(row.sigma)},
                     {"sup_cost", json_real(row.sup_cost)},
                     {"word", row.word},
                     {"endpoint", to_json(row.endpoint)}};
    }
    if (with_tables) {
      Json rows = Json::array();
      for (std::size_t k = 0; k < d.rows.size(); ++k)
        rows.push_back({{"index", k},
                        {"matching", matching_json(d.rows[k].sigma)},
                        {"sup_cost", json_real(d.rows[k].sup_cost)},
                        {"word", d.rows[k].word},
                        {"endpoint", to_json(d.rows[k].endpoint)}});
      deg["sigma"] = std::move(rows);
    }
    degrees.push_back(std::move(deg));
  }
  return Json{{"estimate", estimate_json(r.estimate)},
              {"gamma_infinity", estimate_json(r.gamma)},
              {"gamma_degrees", r.gamma_degrees},
              {"basepoint", to_json(r.basepoint)},
              {"gap", json_real(r.gap)},
              {"singular", singular_json(r.singular)},
              {"degrees", std::move(degrees)},
              {"warnings", r.warnings}};
}

std::string sigma_table_csv(const CdmatchDegree& d, int precision) {
  std::ostringstream os;
  os << "sigma,word,sup_cost\n";
  for (std::size_t k = 0; k < d.word_sup.size(); ++k)
    for (std::size_t w = 0; w < d.word_sup[k].size() && w < d.words.size(); ++w)
      os << k << ',' << d.words[w] << ',' << format_real(d.word_sup[k][w], precision) << '\n';
  return os.str();
}

Json stability_json(const StabilityReport& r) {
  return Json{{"sup_norm", json_real(r.sup_norm)},
              {"cd_lower", json_real(r.cd_lower)},
              {"bound_holds", r.bound_holds},
              {"contraction_checks", r.contraction_checks},
              {"contraction_failures", r.contraction_failures},
              {"passed", r.passed}};
}

Json comparison_json(const ComparisonReport& r) {
  return Json{{"dmatch", estimate_json(r.dmatch)},
              {"cdmatch", estimate_json(r.cdmatch.estimate)},
              {"slack", json_real(r.slack)},
              {"margin", json_real(r.margin)},
              {"holds", r.holds}};
}

}  // namespace cohmatch
