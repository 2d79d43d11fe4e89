#include "cohmatch/coherent.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

namespace cohmatch {

namespace {

struct Cell {
  ParameterRegion box;
  ParameterPoint center;
  Real value = 0.0;
  Real upper = 0.0;
  std::size_t id = 0;
  int depth = 0;
};

struct CellOrder {
  bool operator()(const Cell& x, const Cell& y) const {
    return std::tie(x.upper, y.id) < std::tie(y.upper, x.id);
  }
};

ParameterPoint center_of(const ParameterRegion& r) {
  return {0.5 * (r.a_lo + r.a_hi), 0.5 * (r.b_lo + r.b_hi)};
}

}  // namespace

DistanceEstimate maximize(
    const std::function<Real(const ParameterPoint&)>& value,
    const std::function<Real(const ParameterPoint&, const ParameterRegion&)>& slack, Real cap,
    const BranchAndBound& config) {
  validate_region(config.region);
  if (config.resolution < 2) throw Error(ErrorKind::InvalidArgument, "resolution must be >= 2");
  const int n = config.resolution - 1;
  std::vector<Cell> cells;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ParameterPoint lo = grid_node(config.region, config.resolution, i, j);
      const ParameterPoint hi = grid_node(config.region, config.resolution, i + 1, j + 1);
      Cell c;
      c.box = {lo.a, hi.a, lo.b, hi.b};
      c.center = center_of(c.box);
      c.id = cells.size();
      cells.push_back(c);
    }

  auto evaluate = [&](std::vector<Cell>& batch) {
    const auto results = parallel_map(batch.size(), [&](std::size_t k) {
      const Cell& c = batch[k];
      const Real v = value(c.center);
      return std::make_pair(v, std::min(v + slack(c.center, c.box), cap));
    });
    for (std::size_t k = 0; k < batch.size(); ++k) {
      batch[k].value = results[k].first;
      batch[k].upper = std::max(results[k].first, results[k].second);
    }
  };

  DistanceEstimate out;
  out.lower = -kInfinity;
  std::priority_queue<Cell, std::vector<Cell>, CellOrder> queue;
  auto absorb = [&](const std::vector<Cell>& batch) {
    for (const auto& c : batch) {
      if (c.value > out.lower) {
        out.lower = c.value;
        out.witness = c.center;
      }
      out.depth = std::max(out.depth, c.depth);
      queue.push(c);
    }
    out.evaluations += batch.size();
  };
  evaluate(cells);
  absorb(cells);
  std::size_t next_id = cells.size();

  while (true) {
    const Cell top = queue.top();
    if (top.upper - out.lower <= config.tol) {
      out.converged = true;
      break;
    }
    if (out.evaluations + 4 > config.max_evaluations) break;
    queue.pop();
    const Real am = 0.5 * (top.box.a_lo + top.box.a_hi), bm = 0.5 * (top.box.b_lo + top.box.b_hi);
    std::vector<Cell> children(4);
    const ParameterRegion boxes[4] = {{top.box.a_lo, am, top.box.b_lo, bm},
                                      {top.box.a_lo, am, bm, top.box.b_hi},
                                      {am, top.box.a_hi, top.box.b_lo, bm},
                                      {am, top.box.a_hi, bm, top.box.b_hi}};
    for (int k = 0; k < 4; ++k) {
      children[static_cast<std::size_t>(k)].box = boxes[k];
      children[static_cast<std::size_t>(k)].center = center_of(boxes[k]);
      children[static_cast<std::size_t>(k)].id = next_id++;
      children[static_cast<std::size_t>(k)].depth = top.depth + 1;
    }
    evaluate(children);
    absorb(children);
  }
  out.upper = std::max(out.lower, queue.top().upper);
  out.upper_known = std::isfinite(out.upper);
  return out;
}

Real slice_bottleneck(const SimplicialComplex& complex, const Bifiltration& f,
                      const Bifiltration& g, const ParameterPoint& p, int degree, int field) {
  const PersistenceDiagram df = slice_diagram(complex, f, p, true, field);
  const PersistenceDiagram dg = slice_diagram(complex, g, p, true, field);
  if (degree >= 0) return bottleneck(df, dg, degree).distance;
  Real d = 0.0;
  for (int k = 0; k <= complex.dimension(); ++k) d = std::max(d, bottleneck(df, dg, k).distance);
  return d;
}

namespace {

std::function<Real(const ParameterPoint&, const ParameterRegion&)> pair_drift(
    const Bifiltration& f, const Bifiltration& g) {
  return [&f, &g](const ParameterPoint& p, const ParameterRegion& cell) {
    return drift_bound(f, p, cell) + drift_bound(g, p, cell);
  };
}

}  // namespace

DistanceEstimate estimate_dmatch(const SimplicialComplex& complex, const Bifiltration& f,
                                 const Bifiltration& g, const BranchAndBound& config, int degree) {
  return maximize(
      [&](const ParameterPoint& p) {
        return slice_bottleneck(complex, f, g, p, degree, config.field);
      },
      pair_drift(f, g), sup_distance(f, g), config);
}

std::vector<int> essential_degrees(const SimplicialComplex& complex, int field) {
  const SphereCheck check = validate_sphere_assumption(complex, field);
  if (check.passed) return {0, check.dimension};
  std::vector<int> all;
  for (int d = 0; d <= complex.dimension(); ++d) all.push_back(d);
  return all;
}

Real essential_gap(const SimplicialComplex& complex, const Bifiltration& f, const Bifiltration& g,
                   const ParameterPoint& p, const std::vector<int>& degrees, int field,
                   bool strict) {
  const PersistenceDiagram df = slice_diagram(complex, f, p, true, field);
  const PersistenceDiagram dg = slice_diagram(complex, g, p, true, field);
  Real out = 0.0;
  for (int d : degrees) {
    auto uf = df.essential_births(d), ug = dg.essential_births(d);
    if (uf.size() != ug.size()) {
      if (strict)
        throw Error(ErrorKind::EssentialCountMismatch,
                    "different numbers of points at infinity in degree " + std::to_string(d));
      return kInfinity;
    }
    if (strict && uf.size() != 1)
      throw Error(ErrorKind::EssentialCountMismatch,
                  "expected exactly one point at infinity in degree " + std::to_string(d));
    std::sort(uf.begin(), uf.end());
    std::sort(ug.begin(), ug.end());
    for (std::size_t k = 0; k < uf.size(); ++k) out = std::max(out, std::abs(uf[k] - ug[k]));
  }
  return out;
}

DistanceEstimate gamma_infinity(const SimplicialComplex& complex, const Bifiltration& f,
                                const Bifiltration& g, const BranchAndBound& config,
                                const std::vector<int>& degrees, bool strict) {
  return maximize(
      [&](const ParameterPoint& p) {
        return essential_gap(complex, f, g, p, degrees, config.field, strict);
      },
      pair_drift(f, g), sup_distance(f, g), config);
}

std::vector<ExclusionDisk> exclusion_disks(const std::vector<SingularPair>& singular,
                                           const CdmatchConfig& config) {
  std::vector<ExclusionDisk> out;
  for (const auto& s : singular)
    out.push_back({s.center, std::max(s.radius, config.exclusion_radius)});
  return out;
}

std::vector<LoopGenerator> loop_generators(const ParameterPoint& basepoint,
                                           const std::vector<SingularPair>& singular,
                                           const CdmatchConfig& config) {
  const auto disks = exclusion_disks(singular, config);
  std::vector<LoopGenerator> out;
  std::map<std::string, int> counters;
  for (std::size_t k = 0; k < singular.size(); ++k) {
    Real radius = config.loop_radius;
    for (std::size_t l = 0; l < singular.size(); ++l) {
      const Real d = parameter_distance(singular[k].center, singular[l].center);
      if (l != k && d > 0) radius = std::min(radius, 0.45 * d);
    }
    const ParameterPoint c = singular[k].center;
    radius = std::min(radius, 0.9 * std::min(c.a, 1.0 - c.a));
    radius = std::max(radius, 2.0 * disks[k].radius);
    std::ostringstream name;
    name << singular[k].which << ++counters[singular[k].which];
    out.push_back({name.str(), lasso(basepoint, disks[k], radius, true, disks)});
  }
  return out;
}

std::vector<std::vector<int>> reduced_words(int generators, int max_length) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> frontier{{}};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : frontier)
      for (int letter = 0; letter < 2 * generators; ++letter) {
        if (!w.empty() && (w.back() ^ 1) == letter) continue;
        auto v = w;
        v.push_back(letter);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

ParameterPath word_path(const ParameterPoint& basepoint, const std::vector<LoopGenerator>& gens,
                        const std::vector<int>& word) {
  ParameterPath path = ParameterPath::constant(basepoint);
  for (int letter : word) {
    const ParameterPath& loop = gens[static_cast<std::size_t>(letter / 2)].path;
    path = path.then(letter % 2 == 0 ? loop : loop.reversed());
  }
  return path;
}

std::string word_name(const std::vector<LoopGenerator>& gens, const std::vector<int>& word) {
  if (word.empty()) return "e";
  std::string out;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k) out += '*';
    out += gens[static_cast<std::size_t>(word[k] / 2)].name;
    if (word[k] % 2) out += "^-1";
  }
  return out;
}

ParameterPath witness_path(const ParameterPoint& basepoint, const std::vector<LoopGenerator>& gens,
                           const std::vector<int>& word, const ParameterPoint& endpoint,
                           const std::vector<ExclusionDisk>& disks) {
  return word_path(basepoint, gens, word).then(route(basepoint, endpoint, disks));
}

namespace {

struct LogPair {
  bool ok = false;
  StrandLog f;
  StrandLog g;
};

// One side of a family of matchings: objects for the matched points of that
// side (live) and for the points of the other side matched to the diagonal
// (resting at their projection). Replays are cached by that choice.
class SideReplays {
 public:
  SideReplays(const StrandLog& log, const std::vector<PlanePoint>& other, Real window)
      : log_(log), other_(other), window_(window) {}

  struct Result {
    std::vector<TrackState> live;     // by own point index
    std::vector<TrackState> resting;  // by other-side point index
    std::vector<PlanePoint> untracked;
  };

  const Result& get(const std::string& key) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const std::size_t n = log_.start_points.size();
    std::vector<TrackState> items;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < n; ++i)
      if (key[i] == 1) {
        items.push_back(TrackState::live(static_cast<int>(i)));
        owner.push_back(i);
      }
    for (std::size_t j = 0; j < other_.size(); ++j)
      if (key[n + j] == 1) {
        const Real m = (other_[j].x() + other_[j].y()) / 2;
        items.push_back(TrackState::resting({m, m}));
        owner.push_back(n + j);
      }
    const auto end = replay(log_, items, window_);
    Result r;
    r.live.resize(n);
    r.resting.resize(other_.size());
    std::vector<char> held(log_.end_points.size(), 0);
    for (std::size_t k = 0; k < end.size(); ++k) {
      if (owner[k] < n)
        r.live[owner[k]] = end[k];
      else
        r.resting[owner[k] - n] = end[k];
      if (!end[k].on_diagonal) held[static_cast<std::size_t>(log_.end_index(end[k].strand))] = 1;
    }
    for (std::size_t k = 0; k < held.size(); ++k)
      if (!held[k]) r.untracked.push_back(log_.end_points[k]);
    return cache_.emplace(key, std::move(r)).first->second;
  }

 private:
  const StrandLog& log_;
  const std::vector<PlanePoint>& other_;
  Real window_;
  std::map<std::string, Result> cache_;
};

// cost(T_c(sigma)) for every sigma, with c the path behind the two logs.
// Equal to transported_cost(transport_matching(...).result).
std::vector<Real> transported_costs(const LogPair& logs, const std::vector<Matching>& S,
                                    Real window) {
  const auto& left = logs.f.start_points;
  const auto& right = logs.g.start_points;
  SideReplays fside(logs.f, right, window), gside(logs.g, left, window);
  std::map<std::pair<std::string, std::string>, Real> untracked;
  std::vector<Real> out;
  out.reserve(S.size());
  for (const auto& sigma : S) {
    std::string fkey(left.size() + right.size(), 0), gkey(right.size() + left.size(), 0);
    for (const auto& [l, r] : sigma.pairs) {
      if (!l.diagonal && !r.diagonal) {
        fkey[static_cast<std::size_t>(l.index)] = 1;
        gkey[static_cast<std::size_t>(r.index)] = 1;
      } else if (!l.diagonal) {
        fkey[static_cast<std::size_t>(l.index)] = 1;
        gkey[right.size() + static_cast<std::size_t>(l.index)] = 1;
      } else if (!r.diagonal) {
        gkey[static_cast<std::size_t>(r.index)] = 1;
        fkey[left.size() + static_cast<std::size_t>(r.index)] = 1;
      }
    }
    const auto& fr = fside.get(fkey);
    const auto& gr = gside.get(gkey);
    Real c = 0.0;
    for (const auto& [l, r] : sigma.pairs) {
      if (l.diagonal && r.diagonal) continue;
      const TrackState& x = l.diagonal ? fr.resting[static_cast<std::size_t>(r.index)]
                                       : fr.live[static_cast<std::size_t>(l.index)];
      const TrackState& y = r.diagonal ? gr.resting[static_cast<std::size_t>(l.index)]
                                       : gr.live[static_cast<std::size_t>(r.index)];
      if (!x.on_diagonal && !y.on_diagonal)
        c = std::max(c, proper_distance(x.position, y.position));
      else if (!x.on_diagonal)
        c = std::max(c, diagonal_distance(x.position));
      else if (!y.on_diagonal)
        c = std::max(c, diagonal_distance(y.position));
    }
    auto [it, fresh] = untracked.try_emplace({fkey, gkey}, 0.0);
    if (fresh) it->second = bottleneck(fr.untracked, gr.untracked, sigma.degree).distance;
    out.push_back(std::max(c, it->second));
  }
  return out;
}

bool is_singular_basepoint(const SimplicialComplex& complex, const Bifiltration& f,
                           const Bifiltration& g, const ParameterPoint& p,
                           const std::vector<int>& degrees, const std::vector<ExclusionDisk>& disks,
                           int field) {
  for (const auto& d : disks)
    if (parameter_distance(d.center, p) <= 1.5 * d.radius) return true;
  for (int deg : degrees)
    if (slice_separation(complex, f, p, deg, field) == 0.0 ||
        slice_separation(complex, g, p, deg, field) == 0.0)
      return true;
  return false;
}

}  // namespace

CdmatchResult estimate_cdmatch(const SimplicialComplex& complex, const Bifiltration& f,
                               const Bifiltration& g, CdmatchConfig config) {
  validate_region(config.region);
  if (config.resolution < 2 || config.word_length < 0 || config.enumeration_limit < 0)
    throw Error(ErrorKind::InvalidArgument, "invalid estimator configuration");
  if (config.degrees.empty())
    for (int d = 0; d <= complex.dimension(); ++d) config.degrees.push_back(d);

  CdmatchResult result;
  const GapEstimate gf =
      near_diagonal_gap_estimate(complex, f, config.region, config.singular_resolution, config.field);
  const GapEstimate gg =
      near_diagonal_gap_estimate(complex, g, config.region, config.singular_resolution, config.field);
  result.gap = std::min(gf.k, gg.k);
  if (gf.warning) result.warnings.push_back("f: " + gf.message);
  if (gg.warning) result.warnings.push_back("g: " + gg.message);
  if (!std::isfinite(config.transport.gap) && result.gap > 0) config.transport.gap = result.gap;
  config.transport.field = config.field;
  config.transport.record = false;

  // Singular pairs of both functions in every evaluated degree.
  for (int d : config.degrees) {
    SingularSearch search;
    search.region = config.region;
    search.resolution = config.singular_resolution;
    search.threshold = result.gap / 2;
    search.localization_radius = config.localization_radius;
    search.degree = d;
    search.field = config.field;
    for (const auto& [fn, label] : {std::pair{&f, "f"}, std::pair{&g, "g"}}) {
      SingularSet s = detect_singular_pairs(complex, *fn, search, label);
      result.singular.insert(result.singular.end(), s.pairs.begin(), s.pairs.end());
      result.warnings.insert(result.warnings.end(), s.warnings.begin(), s.warnings.end());
    }
  }

  // Basepoint.
  const auto all_disks = exclusion_disks(result.singular, config);
  if (config.basepoint) {
    if (!config.region.contains(*config.basepoint))
      throw Error(ErrorKind::InvalidArgument, "basepoint outside the parameter region");
    if (is_singular_basepoint(complex, f, g, *config.basepoint, config.degrees, all_disks,
                              config.field))
      throw Error(ErrorKind::BasepointSingular, "basepoint is (near) a singular pair");
    result.basepoint = *config.basepoint;
  } else {
    ParameterPoint p{0.5, std::clamp(0.0, config.region.b_lo, config.region.b_hi)};
    for (int k = 1; is_singular_basepoint(complex, f, g, p, config.degrees, all_disks, config.field);
         ++k) {
      if (k > 200) throw Error(ErrorKind::BasepointSingular, "no regular basepoint found");
      const Real r = 0.01 * k;
      p = {std::clamp(0.5 + r * std::cos(k), config.region.a_lo, config.region.a_hi),
           std::clamp(r * std::sin(k) * 10.0, config.region.b_lo, config.region.b_hi)};
    }
    result.basepoint = p;
  }
  const ParameterPoint base = result.basepoint;

  BranchAndBound bb;
  bb.region = config.region;
  bb.resolution = config.singular_resolution;
  bb.tol = config.gamma_tol;
  bb.max_evaluations = config.gamma_max_evaluations;
  bb.field = config.field;
  result.gamma_degrees = essential_degrees(complex, config.field);
  result.gamma = gamma_infinity(complex, f, g, bb, result.gamma_degrees);

  std::vector<ParameterPoint> endpoints;
  for (int i = 0; i < config.resolution; ++i)
    for (int j = 0; j < config.resolution; ++j)
      endpoints.push_back(grid_node(config.region, config.resolution, i, j));

  Real best_value = -kInfinity;
  for (int d : config.degrees) {
    CdmatchDegree deg;
    deg.degree = d;
    const auto df = slice_diagram(complex, f, base, true, config.field).proper_points(d);
    const auto dg = slice_diagram(complex, g, base, true, config.field).proper_points(d);
    std::vector<Matching> S;
    try {
      S = enumerate_matchings(df, dg, d, config.enumeration_limit);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::LimitExceeded) throw;
      S = heuristic_matchings(df, dg, d);
      deg.enumeration_exact = false;
      result.warnings.push_back("degree " + std::to_string(d) +
                                ": matching enumeration limit exceeded; the min over matchings "
                                "is an upper bound on the min");
    }
    for (const auto& s : S) deg.rows.push_back({s, -kInfinity, "", base});

    std::vector<SingularPair> singular_d;
    for (const auto& s : result.singular)
      if (s.degree == d) singular_d.push_back(s);
    const auto disks = exclusion_disks(singular_d, config);
    const auto gens = loop_generators(base, singular_d, config);
    const auto words = reduced_words(static_cast<int>(gens.size()), config.word_length);
    const Real window = reemergence_window(config.transport);

    auto trace = [&](const ParameterPath& path) {
      LogPair logs;
      try {
        logs.f = trace_path(complex, f, path, d, config.transport);
        logs.g = trace_path(complex, g, path, d, config.transport);
        logs.ok = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StepUnderflow) throw;
      }
      return logs;
    };
    const auto plain = parallel_map(endpoints.size(), [&](std::size_t k) {
      return trace(route(base, endpoints[k], disks));
    });

    for (const auto& w : words) {
      const std::string name = word_name(gens, w);
      deg.words.push_back(name);
      LogPair looped;
      if (!w.empty()) {
        looped = trace(word_path(base, gens, w));
        if (!looped.ok) {
          deg.paths += endpoints.size();
          deg.skipped_paths += endpoints.size();
          deg.skipped_words.push_back(name);
          deg.word_sup.resize(S.size());
          for (auto& row : deg.word_sup) row.push_back(0.0);
          result.warnings.push_back("degree " + std::to_string(d) + ": loop word " + name +
                                    " hits a collision; skipped");
          continue;
        }
      }
      const auto costs = parallel_map(endpoints.size(), [&](std::size_t k) {
        if (!plain[k].ok) return std::vector<Real>{};
        if (w.empty()) return transported_costs(plain[k], S, window);
        LogPair whole{true, concat(looped.f, plain[k].f), concat(looped.g, plain[k].g)};
        return transported_costs(whole, S, window);
      });
      deg.word_sup.resize(S.size());
      for (auto& row : deg.word_sup) row.push_back(0.0);
      for (std::size_t k = 0; k < endpoints.size(); ++k) {
        ++deg.paths;
        if (!plain[k].ok) {
          ++deg.skipped_paths;
          continue;
        }
        for (std::size_t i = 0; i < S.size(); ++i)
          deg.word_sup[i].back() = std::max(deg.word_sup[i].back(), costs[k][i]);
        for (std::size_t i = 0; i < S.size(); ++i)
          if (costs[k][i] > deg.rows[i].sup_cost) {
            deg.rows[i].sup_cost = costs[k][i];
            deg.rows[i].word = name;
            deg.rows[i].endpoint = endpoints[k];
          }
      }
    }
    if (deg.skipped_paths > 0)
      result.warnings.push_back("degree " + std::to_string(d) + ": " +
                                std::to_string(deg.skipped_paths) +
                                " paths met a collision and were skipped");

    deg.min_sup = kInfinity;
    for (std::size_t k = 0; k < deg.rows.size(); ++k) {
      if (deg.rows[k].sup_cost < 0) deg.rows[k].sup_cost = 0.0;
      if (deg.rows[k].sup_cost < deg.min_sup) {
        deg.min_sup = deg.rows[k].sup_cost;
        deg.best = static_cast<int>(k);
      }
    }
    if (deg.rows.empty()) deg.min_sup = 0.0;
    if (deg.min_sup > best_value) {
      best_value = deg.min_sup;
      result.estimate.witness = deg.best >= 0 ? deg.rows[static_cast<std::size_t>(deg.best)].endpoint
                                              : base;
    }
    result.degrees.push_back(std::move(deg));
  }

  result.estimate.lower = std::max(best_value, result.gamma.lower);
  if (result.gamma.lower > best_value) result.estimate.witness = result.gamma.witness;
  result.estimate.upper = kInfinity;
  result.estimate.upper_known = false;
  result.estimate.evaluations = result.gamma.evaluations;
  for (const auto& deg : result.degrees) result.estimate.evaluations += deg.paths;
  return result;
}

StabilityReport stability_check(const SimplicialComplex& complex, const Bifiltration& f,
                                const Bifiltration& g, const CdmatchConfig& config, Real tol) {
  StabilityReport r;
  r.sup_norm = sup_distance(f, g);
  r.cd_lower = estimate_cdmatch(complex, f, g, config).estimate.lower;
  r.bound_holds = r.cd_lower <= r.sup_norm + tol;
  for (int i = 0; i < config.resolution; ++i)
    for (int j = 0; j < config.resolution; ++j) {
      const ParameterPoint p = grid_node(config.region, config.resolution, i, j);
      for (std::size_t v = 0; v < f.size(); ++v) {
        ++r.contraction_checks;
        if (!contraction_holds_exactly(f, g, v, p)) ++r.contraction_failures;
      }
    }
  r.passed = r.bound_holds && r.contraction_failures == 0;
  return r;
}

ComparisonReport compare_distances(const SimplicialComplex& complex, const Bifiltration& f,
                                   const Bifiltration& g, const CdmatchConfig& config,
                                   const BranchAndBound& dmatch_config) {
  ComparisonReport r;
  r.dmatch = estimate_dmatch(complex, f, g, dmatch_config);
  r.cdmatch = estimate_cdmatch(complex, f, g, config);
  const Real ha = 0.5 * config.region.a_extent() / (config.resolution - 1);
  const Real hb = 0.5 * config.region.b_extent() / (config.resolution - 1);
  Real drift = 0.0;
  for (int i = 0; i < config.resolution; ++i)
    for (int j = 0; j < config.resolution; ++j) {
      const ParameterPoint p = grid_node(config.region, config.resolution, i, j);
      const ParameterRegion cell{std::max(config.region.a_lo, p.a - ha),
                                 std::min(config.region.a_hi, p.a + ha),
                                 std::max(config.region.b_lo, p.b - hb),
                                 std::min(config.region.b_hi, p.b + hb)};
      drift = std::max(drift, drift_bound(f, p, cell) + drift_bound(g, p, cell));
    }
  const Real gamma_width = r.cdmatch.gamma.upper_known
                               ? r.cdmatch.gamma.upper - r.cdmatch.gamma.lower
                               : 0.0;
  r.slack = drift + gamma_width;
  r.holds = r.dmatch.lower <= r.cdmatch.estimate.lower + r.slack;
  r.margin = r.cdmatch.estimate.lower - r.dmatch.upper;
  return r;
}

std::vector<LawCheck> transport_law_checks(const SimplicialComplex& complex,
                                           const std::vector<Bifiltration>& functions,
                                           const ParameterPoint& basepoint,
                                           const std::vector<ParameterPath>& paths,
                                           const std::vector<ExclusionDisk>& disks,
                                           const std::vector<int>& degrees,
                                           const TransportConfig& config) {
  if (functions.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "transport laws need at least two functions");
  const Bifiltration& f = functions[0];
  const Bifiltration& g = functions[1];
  std::vector<LawCheck> out;
  for (int d : degrees) {
    auto points = [&](const Bifiltration& fn) {
      return slice_diagram(complex, fn, basepoint, true, config.field).proper_points(d);
    };
    const Matching sigma = bottleneck(points(f), points(g), d).matching;
    auto run = [&](const std::string& law, std::size_t path, auto&& body) {
      LawCheck c{law, d, path, false, false};
      try {
        c.holds = body();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StepUnderflow) throw;
        c.skipped = true;
      }
      out.push_back(c);
    };
    run("constant", 0, [&] {
      return same_pairs(
          transport_matching(complex, f, g, sigma, ParameterPath::constant(basepoint), config).result,
          sigma);
    });
    for (std::size_t k = 0; k < paths.size(); ++k) {
      const ParameterPath& c = paths[k];
      run("round-trip", k, [&] {
        return same_pairs(
            transport_matching(complex, f, g, sigma, c.then(c.reversed()), config).result, sigma);
      });
      run("composition", k, [&] {
        const ParameterPath next = route(c.end(), paths[(k + 1) % paths.size()].end(), disks);
        const TransportedMatching first = transport_matching(complex, f, g, sigma, c, config);
        return same_pairs(transport_matching(complex, f, g, sigma, c.then(next), config).result,
                          continue_transport(complex, f, g, first, next, config).result);
      });
      if (functions.size() >= 3) {
        const Bifiltration& h = functions[2];
        run("functorial", k, [&] {
          const Matching tau = bottleneck(points(g), points(h), d).matching;
          const Matching lhs =
              transport_matching(complex, f, h, compose(sigma, tau), c, config).result;
          const Matching rhs =
              compose(transport_matching(complex, f, g, sigma, c, config).result,
                      transport_matching(complex, g, h, tau, c, config).result);
          return same_pairs(lhs, rhs);
        });
      }
    }
  }
  return out;
}

std::vector<ParameterPath> law_check_paths(const ParameterRegion& region,
                                           const ParameterPoint& basepoint,
                                           const std::vector<ExclusionDisk>& disks) {
  auto at = [&](Real sa, Real sb) {
    return ParameterPoint{region.a_lo + sa * region.a_extent(), region.b_lo + sb * region.b_extent()};
  };
  std::vector<ParameterPath> paths;
  for (const ParameterPoint& q : {at(0.25, 0.25), at(0.75, 0.75), at(0.3, 0.95), at(0.7, 0.05),
                                  at(0.05, 0.6), at(0.95, 0.4)})
    paths.push_back(route(basepoint, q, disks));
  return paths;
}

}  // namespace cohmatch
