#include "cohmatch/transport.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

namespace cohmatch {

ParameterPath::ParameterPath(std::vector<ParameterPoint> waypoints)
    : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw Error(ErrorKind::InvalidArgument, "path needs a waypoint");
}

ParameterPath ParameterPath::constant(const ParameterPoint& p) { return ParameterPath({p}); }

ParameterPath ParameterPath::straight(const ParameterPoint& p, const ParameterPoint& q) {
  return ParameterPath({p, q});
}

ParameterPath ParameterPath::circle(const ParameterPoint& center, Real radius, Real start_angle,
                                    int segments, bool counterclockwise, int turns) {
  if (segments < 3 || turns < 1 || !(radius > 0))
    throw Error(ErrorKind::InvalidArgument, "circle needs radius > 0, >= 3 segments, >= 1 turn");
  const Real sign = counterclockwise ? 1.0 : -1.0;
  std::vector<ParameterPoint> ring;
  for (int k = 0; k < segments; ++k) {
    const Real angle = start_angle + sign * 2.0 * std::numbers::pi * k / segments;
    ring.push_back({center.a + radius * std::cos(angle), center.b + radius * std::sin(angle)});
  }
  std::vector<ParameterPoint> w;
  for (int t = 0; t < turns; ++t) w.insert(w.end(), ring.begin(), ring.end());
  w.push_back(ring.front());
  return ParameterPath(std::move(w));
}

ParameterPath ParameterPath::then(const ParameterPath& next) const {
  if (!(end() == next.start()))
    throw Error(ErrorKind::InvalidArgument, "paths do not meet: cannot concatenate");
  std::vector<ParameterPoint> w = waypoints_;
  w.insert(w.end(), next.waypoints_.begin() + 1, next.waypoints_.end());
  return ParameterPath(std::move(w));
}

ParameterPath ParameterPath::reversed() const {
  return ParameterPath(std::vector<ParameterPoint>(waypoints_.rbegin(), waypoints_.rend()));
}

Real ParameterPath::length() const {
  Real total = 0.0;
  for (std::size_t k = 0; k + 1 < waypoints_.size(); ++k)
    total += parameter_distance(waypoints_[k], waypoints_[k + 1]);
  return total;
}

ParameterPoint interpolate(const ParameterPoint& p, const ParameterPoint& q, Real s) {
  if (s == 0.0) return p;
  if (s == 1.0) return q;
  return {p.a + s * (q.a - p.a), p.b + s * (q.b - p.b)};
}

namespace {

constexpr Real kDetourFactor = 1.5;
constexpr Real kDetectFactor = 1.25;

void route_into(const ParameterPoint& p, const ParameterPoint& q,
                const std::vector<ExclusionDisk>& disks, int depth,
                std::vector<ParameterPoint>& out) {
  const Real da = q.a - p.a, db = q.b - p.b;
  const Real len2 = da * da + db * db;
  // First disk crossed by the segment, by entry parameter.
  Real best_t = kInfinity;
  const ExclusionDisk* hit = nullptr;
  Real t_in = 0, t_out = 0;
  if (depth < 16 && len2 > 0) {
    for (const auto& d : disks) {
      const Real fa = p.a - d.center.a, fb = p.b - d.center.b;
      const Real t_closest = std::clamp(-(fa * da + fb * db) / len2, 0.0, 1.0);
      const Real ca = fa + t_closest * da, cb = fb + t_closest * db;
      if (std::hypot(ca, cb) >= kDetectFactor * d.radius) continue;
      const Real big = kDetourFactor * d.radius;
      const Real bq = 2 * (fa * da + fb * db), cq = fa * fa + fb * fb - big * big;
      const Real disc = bq * bq - 4 * len2 * cq;
      if (disc <= 0) continue;
      const Real t1 = (-bq - std::sqrt(disc)) / (2 * len2);
      const Real t2 = (-bq + std::sqrt(disc)) / (2 * len2);
      if (t1 <= 0 || t2 >= 1) continue;  // an endpoint lies inside the detour circle
      if (t1 < best_t) {
        best_t = t1;
        hit = &d;
        t_in = t1;
        t_out = t2;
      }
    }
  }
  if (!hit) {
    out.push_back(q);
    return;
  }
  const ParameterPoint e1{p.a + t_in * da, p.b + t_in * db};
  const ParameterPoint e2{p.a + t_out * da, p.b + t_out * db};
  route_into(p, e1, disks, depth + 1, out);
  const Real big = kDetourFactor * hit->radius;
  const Real th1 = std::atan2(e1.b - hit->center.b, e1.a - hit->center.a);
  const Real th2 = std::atan2(e2.b - hit->center.b, e2.a - hit->center.a);
  Real delta = std::remainder(th2 - th1, 2 * std::numbers::pi);
  if (delta <= -std::numbers::pi + 1e-12) delta = std::numbers::pi;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / (std::numbers::pi / 6))));
  std::vector<ParameterPoint> arc;
  for (int k = 1; k < n; ++k) {
    const Real th = th1 + delta * k / n;
    arc.push_back({hit->center.a + big * std::cos(th), hit->center.b + big * std::sin(th)});
  }
  ParameterPoint from = e1;
  for (const auto& v : arc) {
    route_into(from, v, disks, depth + 1, out);
    from = v;
  }
  route_into(from, e2, disks, depth + 1, out);
  route_into(e2, q, disks, depth + 1, out);
}

}  // namespace

ParameterPath route(const ParameterPoint& p, const ParameterPoint& q,
                    const std::vector<ExclusionDisk>& disks) {
  std::vector<ParameterPoint> w{p};
  if (!(p == q)) route_into(p, q, disks, 0, w);
  return ParameterPath(std::move(w));
}

ParameterPath lasso(const ParameterPoint& base, const ExclusionDisk& disk, Real loop_radius,
                    bool counterclockwise, const std::vector<ExclusionDisk>& obstacles,
                    int segments) {
  const Real angle = (base == disk.center)
                         ? 0.0
                         : std::atan2(base.b - disk.center.b, base.a - disk.center.a);
  const ParameterPath loop =
      ParameterPath::circle(disk.center, loop_radius, angle, segments, counterclockwise);
  std::vector<ExclusionDisk> others;
  for (const auto& d : obstacles)
    if (!(d.center == disk.center)) others.push_back(d);
  const ParameterPath tail = route(base, loop.start(), others);
  return tail.then(loop).then(tail.reversed());
}

StrandLog StrandLog::at(std::vector<PlanePoint> points, int degree) {
  StrandLog log;
  log.degree = degree;
  log.start_points = points;
  log.end_points = std::move(points);
  log.strand_count = static_cast<int>(log.end_points.size());
  for (int k = 0; k < log.strand_count; ++k) log.end_strands.push_back(k);
  return log;
}

int StrandLog::end_index(int strand) const {
  for (int k = 0; k < static_cast<int>(end_strands.size()); ++k)
    if (end_strands[static_cast<std::size_t>(k)] == strand) return k;
  return -1;
}

namespace {

struct Slice {
  ScalarField phi;
  std::vector<PlanePoint> points;
  Real separation = kInfinity;
};

Slice make_slice(const SimplicialComplex& complex, const FieldFamily& family, Real s, int degree,
                 int field) {
  Slice out;
  out.phi = family(s);
  out.points = reduce(complex, out.phi, field).proper_points(degree);
  out.separation = separation(out.points);
  return out;
}

Real drift(const ScalarField& x, const ScalarField& y) {
  const Real d = sup_norm_difference(x, y);
  const Real scale = std::max(x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff());
  return d * (1 + 1e-12) + 1e-14 * (1 + scale);
}

// Index of the point of `pts` nearest to x within `radius` (sup-norm); -1 if none.
int nearest_within(const std::vector<PlanePoint>& pts, const PlanePoint& x, Real radius) {
  int best = -1;
  Real best_d = kInfinity;
  for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
    const Real d = proper_distance(pts[static_cast<std::size_t>(k)], x);
    if (d <= radius && d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

PlanePoint diagonal_projection(const PlanePoint& x) {
  const Real m = (x.x() + x.y()) / 2;
  return {m, m};
}

// Diagonal projection of the last live position of a point that vanishes
// between lo and hi.
PlanePoint refine_death(const SimplicialComplex& complex, const FieldFamily& family, int degree,
                        int field, Real lo, Real hi, ScalarField phi_lo, PlanePoint x) {
  for (int it = 0; it < 30 && hi - lo > 1e-12; ++it) {
    const Real mid = (lo + hi) / 2;
    Slice m = make_slice(complex, family, mid, degree, field);
    const int k = nearest_within(m.points, x, drift(phi_lo, m.phi));
    if (k >= 0) {
      lo = mid;
      x = m.points[static_cast<std::size_t>(k)];
      phi_lo = std::move(m.phi);
    } else {
      hi = mid;
    }
  }
  return diagonal_projection(x);
}

StrandFrame frame_of(const StrandLog& log, Real tau, const ParameterPoint& p) {
  StrandFrame fr;
  fr.tau = tau;
  fr.parameter = p;
  for (std::size_t k = 0; k < log.end_points.size(); ++k)
    fr.live.emplace_back(log.end_strands[k], log.end_points[k]);
  return fr;
}

}  // namespace

void extend(const SimplicialComplex& complex, const FieldFamily& family, StrandLog& log,
            const TransportConfig& config,
            const std::function<std::pair<Real, ParameterPoint>(Real)>& frame_at) {
  if (!(config.max_step > 0) || !(config.min_step > 0))
    throw Error(ErrorKind::InvalidArgument, "step sizes must be positive");
  const int degree = log.degree;
  const Real window = config.gap / 2;
  Slice cur = make_slice(complex, family, 0.0, degree, config.field);
  if (cur.points != log.end_points)
    throw Error(ErrorKind::StartPointNotInDiagram,
                "tracked points do not match the diagram at the start of the family");
  if (frame_at && log.frames.empty()) {
    const auto [tau, p] = frame_at(0.0);
    log.frames.push_back(frame_of(log, tau, p));
  }

  Real s = 0.0, h = config.max_step;
  while (s < 1.0) {
    const Real s1 = h >= 1.0 - s ? 1.0 : s + h;
    Slice nxt = make_slice(complex, family, s1, degree, config.field);
    const Real delta = drift(cur.phi, nxt.phi);
    // The gap only limits steps during which a point can meet the diagonal.
    auto clear_of_diagonal = [&](const std::vector<PlanePoint>& pts) {
      return std::all_of(pts.begin(), pts.end(),
                         [&](const PlanePoint& x) { return diagonal_distance(x) > 2 * delta; });
    };
    bool ok = 2 * delta < std::min(cur.separation, nxt.separation) &&
              (2 * delta < window || (clear_of_diagonal(cur.points) && clear_of_diagonal(nxt.points)));

    // target[i]: continuation of point i in nxt, or -1 when it dies.
    std::vector<int> target(cur.points.size(), -1);
    for (std::size_t i = 0; ok && i < cur.points.size(); ++i) {
      const int k = nearest_within(nxt.points, cur.points[i], delta);
      if (k >= 0)
        target[i] = k;
      else if (diagonal_distance(cur.points[i]) > delta)
        ok = false;
    }
    if (!ok) {
      h /= 2;
      if (h < config.min_step) {
        std::ostringstream os;
        os << "step size underflow at s = " << s << ": diagram points collide";
        throw Error(ErrorKind::StepUnderflow, os.str());
      }
      continue;
    }

    const int step = log.steps + 1;
    std::vector<int> strands(nxt.points.size(), -1);
    for (std::size_t i = 0; i < cur.points.size(); ++i) {
      const int strand = log.end_strands[i];
      if (target[i] >= 0) {
        strands[static_cast<std::size_t>(target[i])] = strand;
      } else {
        log.events.push_back({step, strand, false,
                              refine_death(complex, family, degree, config.field, s, s1, cur.phi,
                                           cur.points[i])});
      }
    }
    for (std::size_t k = 0; k < nxt.points.size(); ++k) {
      if (strands[k] >= 0) continue;
      strands[k] = log.strand_count++;
      log.events.push_back({step, strands[k], true, nxt.points[k]});
    }

    log.steps = step;
    log.end_points = nxt.points;
    log.end_strands = std::move(strands);
    cur = std::move(nxt);
    s = s1;
    h = std::min(config.max_step, 2 * h);
    if (frame_at) {
      const auto [tau, p] = frame_at(s);
      log.frames.push_back(frame_of(log, tau, p));
    }
  }
}

void extend_along(const SimplicialComplex& complex, const Bifiltration& f,
                  const ParameterPath& path, StrandLog& log, const TransportConfig& config) {
  const auto& w = path.waypoints();
  const std::size_t n = path.segment_count();
  if (config.record && log.frames.empty())
    log.frames.push_back(frame_of(log, 0.0, path.start()));
  for (std::size_t k = 0; k < n; ++k) {
    const ParameterPoint p = w[k], q = w[k + 1];
    if (p == q) continue;
    const FieldFamily family = [&](Real s) { return slice_function(f, interpolate(p, q, s)); };
    std::function<std::pair<Real, ParameterPoint>(Real)> frame_at;
    if (config.record) {
      frame_at = [&](Real s) {
        return std::make_pair((static_cast<Real>(k) + s) / static_cast<Real>(n),
                              interpolate(p, q, s));
      };
    }
    extend(complex, family, log, config, frame_at);
  }
}

StrandLog trace_path(const SimplicialComplex& complex, const Bifiltration& f,
                     const ParameterPath& path, int degree, const TransportConfig& config) {
  StrandLog log = StrandLog::at(
      slice_diagram(complex, f, path.start(), true, config.field).proper_points(degree), degree);
  extend_along(complex, f, path, log, config);
  return log;
}

StrandLog concat(const StrandLog& first, const StrandLog& second) {
  if (first.degree != second.degree)
    throw Error(ErrorKind::DegreeMismatch, "strand logs of different degrees");
  if (first.end_points != second.start_points)
    throw Error(ErrorKind::InvalidArgument, "strand logs do not meet: cannot concatenate");
  const int n = static_cast<int>(second.start_points.size());
  auto map = [&](int strand) {
    return strand < n ? first.end_strands[static_cast<std::size_t>(strand)]
                      : first.strand_count + strand - n;
  };
  StrandLog out = first;
  out.end_points = second.end_points;
  out.end_strands.clear();
  for (int strand : second.end_strands) out.end_strands.push_back(map(strand));
  out.strand_count = first.strand_count + second.strand_count - n;
  out.steps = first.steps + second.steps;
  for (StrandEvent e : second.events) {
    e.step += first.steps;
    e.strand = map(e.strand);
    out.events.push_back(e);
  }
  for (std::size_t k = first.frames.empty() ? 0 : 1; k < second.frames.size(); ++k) {
    StrandFrame fr = second.frames[k];
    for (auto& [strand, x] : fr.live) strand = map(strand);
    out.frames.push_back(std::move(fr));
  }
  return out;
}

std::vector<TrackState> replay(
    const StrandLog& log, std::vector<TrackState> items, Real window,
    const std::function<void(int, const std::vector<TrackState>&)>& on_step) {
  auto place = [&](int step) {
    if (step >= static_cast<int>(log.frames.size())) return;
    const auto& live = log.frames[static_cast<std::size_t>(step)].live;
    for (auto& st : items) {
      if (st.on_diagonal) continue;
      for (const auto& [strand, x] : live)
        if (strand == st.strand) st.position = x;
    }
  };
  for (auto& st : items)
    if (!st.on_diagonal) {
      if (st.strand < 0 || st.strand >= static_cast<int>(log.start_points.size()))
        throw Error(ErrorKind::InvalidArgument, "object follows no start point");
      st.position = log.start_points[static_cast<std::size_t>(st.strand)];
    }
  if (on_step) on_step(0, items);

  std::size_t e = 0;
  for (int step = 1; step <= log.steps; ++step) {
    std::vector<std::size_t> resting;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (items[i].on_diagonal) resting.push_back(i);
    std::vector<const StrandEvent*> births;
    for (; e < log.events.size() && log.events[e].step == step; ++e) {
      const StrandEvent& ev = log.events[e];
      if (ev.birth) {
        births.push_back(&ev);
        continue;
      }
      for (auto& st : items)
        if (!st.on_diagonal && st.strand == ev.strand) {
          st.on_diagonal = true;
          st.strand = -1;
          st.position = ev.position;
        }
    }
    if (!resting.empty() && !births.empty()) {
      // Nearest first; ties by resting position, then object order.
      std::vector<std::tuple<Real, Real, std::size_t, std::size_t>> offers;
      for (std::size_t b = 0; b < births.size(); ++b)
        for (std::size_t i : resting) {
          const Real d = proper_distance(items[i].position, births[b]->position);
          if (d <= window) offers.emplace_back(d, items[i].position.x(), i, b);
        }
      std::sort(offers.begin(), offers.end());
      std::vector<char> taken(births.size(), 0);
      for (const auto& [d, x, i, b] : offers) {
        TrackState& st = items[i];
        if (!st.on_diagonal || taken[b]) continue;
        st.on_diagonal = false;
        st.strand = births[b]->strand;
        st.position = births[b]->position;
        taken[b] = 1;
      }
    }
    place(step);
    if (on_step) on_step(step, items);
  }
  for (auto& st : items)
    if (!st.on_diagonal) {
      const int k = log.end_index(st.strand);
      if (k >= 0) st.position = log.end_points[static_cast<std::size_t>(k)];
    }
  return items;
}

namespace {

int locate(const std::vector<PlanePoint>& pts, const PlanePoint& x) {
  for (int k = 0; k < static_cast<int>(pts.size()); ++k)
    if (pts[static_cast<std::size_t>(k)] == x) return k;
  const int k = nearest_within(pts, x, 1e-9 * (1 + x.cwiseAbs().maxCoeff()));
  if (k < 0) throw Error(ErrorKind::StartPointNotInDiagram, "cornerpoint is not in the diagram");
  return k;
}

std::vector<std::pair<Real, Real>> diagonal_intervals(const std::vector<TrackSample>& samples) {
  std::vector<std::pair<Real, Real>> out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!samples[k].on_diagonal) continue;
    const Real from = k > 0 ? samples[k - 1].tau : samples[k].tau;
    if (!out.empty() && k > 0 && samples[k - 1].on_diagonal)
      out.back().second = samples[k].tau;
    else
      out.emplace_back(from, samples[k].tau);
  }
  return out;
}

std::vector<CornerpointTrack> tracks_of(const StrandLog& log, std::vector<int> starts,
                                        const TransportConfig& config) {
  std::vector<TrackState> items;
  for (int i : starts) items.push_back(TrackState::live(i));
  std::vector<CornerpointTrack> tracks(items.size());
  const auto end = replay(log, items, reemergence_window(config),
                          [&](int step, const std::vector<TrackState>& states) {
                            if (step >= static_cast<int>(log.frames.size())) return;
                            const StrandFrame& fr = log.frames[static_cast<std::size_t>(step)];
                            for (std::size_t i = 0; i < states.size(); ++i)
                              tracks[i].samples.push_back({fr.tau, fr.parameter,
                                                           states[i].position,
                                                           states[i].on_diagonal});
                          });
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const PlanePoint& x = log.start_points[static_cast<std::size_t>(starts[i])];
    tracks[i].start = Cornerpoint{x.x(), x.y(), log.degree};
    tracks[i].end = end[i];
    tracks[i].end_position = end[i].position;
    tracks[i].diagonal_intervals = diagonal_intervals(tracks[i].samples);
  }
  return tracks;
}

}  // namespace

CornerpointTrack transport_point(const SimplicialComplex& complex, const Bifiltration& f,
                                 const Cornerpoint& x, const ParameterPath& path,
                                 TransportConfig config) {
  if (x.at_infinity())
    throw Error(ErrorKind::StartPointNotInDiagram, "only proper cornerpoints are transported");
  config.record = true;
  const auto start =
      slice_diagram(complex, f, path.start(), true, config.field).proper_points(x.degree);
  const int i = locate(start, x.point());
  const StrandLog log = trace_path(complex, f, path, x.degree, config);
  CornerpointTrack t = tracks_of(log, {i}, config).front();
  t.start = x;
  return t;
}

std::vector<CornerpointTrack> transport_all(const SimplicialComplex& complex,
                                            const Bifiltration& f, const ParameterPath& path,
                                            int degree, TransportConfig config) {
  config.record = true;
  const StrandLog log = trace_path(complex, f, path, degree, config);
  std::vector<int> starts(log.start_points.size());
  for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = static_cast<int>(i);
  return tracks_of(log, std::move(starts), config);
}

MatchingItems items_of(const Matching& sigma) {
  MatchingItems out;
  for (const auto& [l, r] : sigma.pairs) {
    if (l.diagonal && r.diagonal) continue;
    out.f.push_back(l.diagonal ? TrackState::resting(
                                     diagonal_projection(sigma.right[static_cast<std::size_t>(r.index)]))
                               : TrackState::live(l.index));
    out.g.push_back(r.diagonal ? TrackState::resting(
                                     diagonal_projection(sigma.left[static_cast<std::size_t>(l.index)]))
                               : TrackState::live(r.index));
  }
  return out;
}

Matching matching_from_items(const StrandLog& f_log, const std::vector<TrackState>& f_items,
                             const StrandLog& g_log, const std::vector<TrackState>& g_items) {
  if (f_items.size() != g_items.size())
    throw Error(ErrorKind::InvalidArgument, "objects of the two sides do not pair up");
  Matching m;
  m.degree = f_log.degree;
  m.left = f_log.end_points;
  m.right = g_log.end_points;
  std::vector<char> left_used(m.left.size(), 0), right_used(m.right.size(), 0);
  auto slot = [](const StrandLog& log, const TrackState& st, std::vector<char>& used) {
    if (st.on_diagonal) return MatchSlot::diag(st.tag);
    const int k = log.end_index(st.strand);
    if (k < 0 || used[static_cast<std::size_t>(k)])
      throw Error(ErrorKind::InvalidArgument, "objects share an end point");
    used[static_cast<std::size_t>(k)] = 1;
    return MatchSlot::point(k);
  };
  for (std::size_t k = 0; k < f_items.size(); ++k) {
    const MatchSlot l = slot(f_log, f_items[k], left_used);
    const MatchSlot r = slot(g_log, g_items[k], right_used);
    if (!(l.diagonal && r.diagonal)) m.pairs.emplace_back(l, r);
  }
  for (int k = 0; k < static_cast<int>(m.left.size()); ++k)
    if (!left_used[static_cast<std::size_t>(k)])
      m.pairs.emplace_back(MatchSlot::point(k), MatchSlot::diag(kUntracked));
  for (int k = 0; k < static_cast<int>(m.right.size()); ++k)
    if (!right_used[static_cast<std::size_t>(k)])
      m.pairs.emplace_back(MatchSlot::diag(kUntracked), MatchSlot::point(k));
  return canonical(std::move(m));
}

Real transported_cost(const Matching& m) {
  Real c = 0.0;
  std::vector<PlanePoint> free_left, free_right;
  for (const auto& pair : m.pairs) {
    const auto& [l, r] = pair;
    if (r.diagonal && r.index == kUntracked && !l.diagonal)
      free_left.push_back(m.left[static_cast<std::size_t>(l.index)]);
    else if (l.diagonal && l.index == kUntracked && !r.diagonal)
      free_right.push_back(m.right[static_cast<std::size_t>(r.index)]);
    else
      c = std::max(c, m.pair_cost(pair));
  }
  return std::max(c, bottleneck(free_left, free_right, m.degree).distance);
}

TransportedMatching transport_matching(const SimplicialComplex& complex, const Bifiltration& f,
                                       const Bifiltration& g, const Matching& sigma,
                                       const ParameterPath& path, const TransportConfig& config) {
  validate(sigma);
  TransportedMatching t;
  t.source = sigma;
  t.f = StrandLog::at(
      slice_diagram(complex, f, path.start(), true, config.field).proper_points(sigma.degree),
      sigma.degree);
  t.g = StrandLog::at(
      slice_diagram(complex, g, path.start(), true, config.field).proper_points(sigma.degree),
      sigma.degree);
  if (t.f.start_points != sigma.left || t.g.start_points != sigma.right)
    throw Error(ErrorKind::StartPointNotInDiagram,
                "matching is not between the diagrams at the start of the path");
  t.start = items_of(sigma);
  extend_along(complex, f, path, t.f, config);
  extend_along(complex, g, path, t.g, config);
  const Real window = reemergence_window(config);
  t.end = {replay(t.f, t.start.f, window), replay(t.g, t.start.g, window)};
  t.result = matching_from_items(t.f, t.end.f, t.g, t.end.g);
  t.cost = transported_cost(t.result);
  return t;
}

TransportedMatching continue_transport(const SimplicialComplex& complex, const Bifiltration& f,
                                       const Bifiltration& g, TransportedMatching previous,
                                       const ParameterPath& path, const TransportConfig& config) {
  auto restart = [](const StrandLog& log, std::vector<TrackState> items) {
    for (auto& st : items)
      if (!st.on_diagonal) st.strand = log.end_index(st.strand);
    return items;
  };
  TransportedMatching t;
  t.source = previous.result;
  t.f = StrandLog::at(previous.f.end_points, previous.f.degree);
  t.g = StrandLog::at(previous.g.end_points, previous.g.degree);
  t.start = {restart(previous.f, std::move(previous.end.f)),
             restart(previous.g, std::move(previous.end.g))};
  extend_along(complex, f, path, t.f, config);
  extend_along(complex, g, path, t.g, config);
  const Real window = reemergence_window(config);
  t.end = {replay(t.f, t.start.f, window), replay(t.g, t.start.g, window)};
  t.result = matching_from_items(t.f, t.end.f, t.g, t.end.g);
  t.cost = transported_cost(t.result);
  return t;
}

StrandLog trace_homotopy(const SimplicialComplex& complex, const ScalarField& phi,
                         const ScalarField& psi, int degree, const TransportConfig& config) {
  if (phi.size() != psi.size())
    throw Error(ErrorKind::InvalidArgument, "scalar fields have different sizes");
  StrandLog log = StrandLog::at(reduce(complex, phi, config.field).proper_points(degree), degree);
  const FieldFamily family = [&](Real s) -> ScalarField {
    if (s == 0.0) return phi;
    if (s == 1.0) return psi;
    return (1 - s) * phi + s * psi;
  };
  extend(complex, family, log, config);
  return log;
}

std::pair<TrackState, PlanePoint> transport_across_homotopy(const SimplicialComplex& complex,
                                                            const ScalarField& phi,
                                                            const ScalarField& psi,
                                                            const Cornerpoint& x,
                                                            const TransportConfig& config) {
  if (x.at_infinity())
    throw Error(ErrorKind::StartPointNotInDiagram, "only proper cornerpoints are transported");
  const auto start = reduce(complex, phi, config.field).proper_points(x.degree);
  const int i = locate(start, x.point());
  const StrandLog log = trace_homotopy(complex, phi, psi, x.degree, config);
  const TrackState end =
      replay(log, {TrackState::live(i)}, reemergence_window(config)).front();
  return {end, end.position};
}

Matching homotopy_matching(const SimplicialComplex& complex, const ScalarField& phi,
                           const ScalarField& psi, int degree, const TransportConfig& config) {
  const StrandLog g = trace_homotopy(complex, phi, psi, degree, config);
  const StrandLog f = StrandLog::at(g.start_points, degree);
  std::vector<TrackState> items;
  for (int i = 0; i < static_cast<int>(g.start_points.size()); ++i)
    items.push_back(TrackState::live(i));
  Matching m =
      matching_from_items(f, items, g, replay(g, items, reemergence_window(config)));
  // Diagonal slots carry no meaning outside the homotopy.
  for (auto& [l, r] : m.pairs) {
    if (l.diagonal) l.index = -1;
    if (r.diagonal) r.index = -1;
  }
  return m;
}

bool is_identity(const std::vector<int>& permutation) {
  for (int i = 0; i < static_cast<int>(permutation.size()); ++i)
    if (permutation[static_cast<std::size_t>(i)] != i) return false;
  return true;
}

std::string cycle_notation(const std::vector<int>& permutation) {
  std::ostringstream os;
  std::vector<char> seen(permutation.size(), 0);
  bool any = false;
  for (int i = 0; i < static_cast<int>(permutation.size()); ++i) {
    if (seen[static_cast<std::size_t>(i)] || permutation[static_cast<std::size_t>(i)] == i) continue;
    any = true;
    os << '(' << i + 1;
    seen[static_cast<std::size_t>(i)] = 1;
    int j = permutation[static_cast<std::size_t>(i)];
    while (j >= 0 && j != i && !seen[static_cast<std::size_t>(j)]) {
      os << ' ' << j + 1;
      seen[static_cast<std::size_t>(j)] = 1;
      j = permutation[static_cast<std::size_t>(j)];
    }
    if (j < 0) os << " -";
    os << ')';
  }
  return any ? os.str() : "()";
}

LoopPermutation loop_permutation(const SimplicialComplex& complex, const Bifiltration& f,
                                 const ParameterPoint& center, Real radius, int degree,
                                 const TransportConfig& config, int turns, int min_segments,
                                 int max_segments) {
  LoopPermutation out;
  out.basepoint = {center.a + radius, center.b};
  std::vector<std::vector<int>> history;
  for (int n = min_segments; n <= max_segments; n *= 2) {
    const ParameterPath loop = ParameterPath::circle(center, radius, 0.0, n, true, turns);
    const StrandLog log = trace_path(complex, f, loop, degree, config);
    std::vector<TrackState> items;
    for (int i = 0; i < static_cast<int>(log.start_points.size()); ++i)
      items.push_back(TrackState::live(i));
    std::vector<int> perm;
    for (const auto& st : replay(log, items, reemergence_window(config)))
      perm.push_back(st.on_diagonal ? -1 : log.end_index(st.strand));
    out.points = log.end_points;
    out.segments = n;
    history.push_back(std::move(perm));
    const std::size_t h = history.size();
    if (h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3]) {
      out.stable = true;
      break;
    }
  }
  out.permutation = history.back();
  return out;
}

}  // namespace cohmatch
