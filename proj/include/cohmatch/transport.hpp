#pragma once

#include "cohmatch/complex.hpp"
#include "cohmatch/matching.hpp"
#include "cohmatch/parameters.hpp"
#include "cohmatch/persistence.hpp"
#include "cohmatch/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cohmatch {

/// Polyline c(0) ... c(1) in parameter space. Each segment is traversed
/// with its own step control, so a concatenation transports exactly like
/// its pieces run one after the other.
class ParameterPath {
 public:
  ParameterPath() = default;
  explicit ParameterPath(std::vector<ParameterPoint> waypoints);

  static ParameterPath constant(const ParameterPoint& p);
  static ParameterPath straight(const ParameterPoint& p, const ParameterPoint& q);
  /// Closed polygon with `segments` vertices on the circle, starting and
  /// ending at angle `start_angle`, traversed `turns` times.
  static ParameterPath circle(const ParameterPoint& center, Real radius, Real start_angle,
                              int segments, bool counterclockwise = true, int turns = 1);

  const std::vector<ParameterPoint>& waypoints() const { return waypoints_; }
  std::size_t segment_count() const { return waypoints_.empty() ? 0 : waypoints_.size() - 1; }
  const ParameterPoint& start() const { return waypoints_.front(); }
  const ParameterPoint& end() const { return waypoints_.back(); }

  /// This path followed by `next`; throws InvalidArgument unless next starts
  /// where this one ends.
  ParameterPath then(const ParameterPath& next) const;
  ParameterPath reversed() const;
  Real length() const;

  friend bool operator==(const ParameterPath&, const ParameterPath&) = default;

 private:
  std::vector<ParameterPoint> waypoints_;
};

/// Point p + s (q - p), returning the endpoints exactly at s = 0 and s = 1.
ParameterPoint interpolate(const ParameterPoint& p, const ParameterPoint& q, Real s);

struct ExclusionDisk {
  ParameterPoint center;
  Real radius = 0.0;
};

/// Straight path from p to q, detouring along a polygonal arc of radius
/// 1.5 r around every disk the segment would cross.
ParameterPath route(const ParameterPoint& p, const ParameterPoint& q,
                    const std::vector<ExclusionDisk>& disks);

/// Loop based at `base`: a routed tail to the circle of `loop_radius` around
/// the disk center, one turn around it, and the tail back.
ParameterPath lasso(const ParameterPoint& base, const ExclusionDisk& disk, Real loop_radius,
                    bool counterclockwise, const std::vector<ExclusionDisk>& obstacles,
                    int segments = 24);

struct TransportConfig {
  /// Estimated near-diagonal gap k; steps and diagonal re-emergence use k / 2.
  Real gap = kInfinity;
  Real max_step = 0.125;
  Real min_step = 1e-9;
  int field = 2;
  /// Keep per-step samples of every track.
  bool record = false;
};

/// Point-level continuation of one degree of a diagram family. Strand j < n
/// starts at start point j; later strands are points born along the way.
/// Every step records which strands died (at the diagonal projection of
/// their last live position) and which were born (at their first position).
struct StrandEvent {
  int step = 0;
  int strand = 0;
  bool birth = false;
  PlanePoint position{0, 0};
};

/// Positions of the live strands after a step (step 0 is the start).
struct StrandFrame {
  Real tau = 0.0;
  ParameterPoint parameter;
  std::vector<std::pair<int, PlanePoint>> live;
};

struct StrandLog {
  int degree = 0;
  std::vector<PlanePoint> start_points;
  std::vector<PlanePoint> end_points;
  /// Strand carried by each end point.
  std::vector<int> end_strands;
  int strand_count = 0;
  int steps = 0;
  std::vector<StrandEvent> events;
  std::vector<StrandFrame> frames;

  /// Log of the constant family at `points`.
  static StrandLog at(std::vector<PlanePoint> points, int degree);
  /// End point carrying `strand`, or -1.
  int end_index(int strand) const;
};

/// One-parameter family of scalar fields on the vertices, s in [0, 1].
using FieldFamily = std::function<ScalarField(Real)>;

/// Extends `log` from s = 0 to s = 1 through the family, whose diagram at 0
/// must be log.end_points. A step s -> s' with vertex drift delta is
/// accepted when 2 delta < min(sep(s), sep(s'), gap / 2), where the gap term
/// is dropped if every point of both diagrams is farther than 2 delta from
/// the diagonal (no point can be born or die in such a step); every point then
/// has at most one point within delta at s', which continues it. A point
/// with no such candidate dies if it lies within delta of the diagonal
/// (otherwise the step is halved); its death position is refined by
/// bisection. Points with no predecessor within delta are births.
/// `frame_at` maps s to (tau, parameter) for recorded frames.
/// Throws StepUnderflow.
void extend(const SimplicialComplex& complex, const FieldFamily& family, StrandLog& log,
            const TransportConfig& config,
            const std::function<std::pair<Real, ParameterPoint>(Real)>& frame_at = {});

/// Extends the log along every segment of the path through slices of f.
void extend_along(const SimplicialComplex& complex, const Bifiltration& f,
                  const ParameterPath& path, StrandLog& log, const TransportConfig& config);

/// Strands of Dgm(f*) in `degree` along the path.
StrandLog trace_path(const SimplicialComplex& complex, const Bifiltration& f,
                     const ParameterPath& path, int degree, const TransportConfig& config);

/// `first` followed by `second`, whose start points must be first's end
/// points. Equal to tracing the concatenated family in one go.
StrandLog concat(const StrandLog& first, const StrandLog& second);

/// A transported object: following a strand, or resting on the diagonal at
/// `position`. `tag` names the object across transports (the start point it
/// came from, or a negative value when it started on the diagonal).
struct TrackState {
  bool on_diagonal = false;
  int strand = -1;
  PlanePoint position{0, 0};
  int tag = -1;

  static TrackState live(int start_point) { return {false, start_point, {0, 0}, start_point}; }
  static TrackState resting(const PlanePoint& position, int tag = -3) {
    return {true, -1, position, tag};
  }

  friend bool operator==(const TrackState&, const TrackState&) = default;
};

/// Runs objects through the events of a log. A strand's death leaves its
/// objects resting at the death position. Objects that were resting before
/// a step claim the points born in it within `window` of their position,
/// nearest pairs first (ties by resting position, then object order); this is how a point that met
/// the diagonal moves on into the open half-plane. `on_step` sees the states
/// after every step.
std::vector<TrackState> replay(
    const StrandLog& log, std::vector<TrackState> items, Real window,
    const std::function<void(int, const std::vector<TrackState>&)>& on_step = {});

/// Re-emergence window used by replay: half the configured gap.
inline Real reemergence_window(const TransportConfig& config) { return config.gap / 2; }

struct TrackSample {
  Real tau = 0.0;
  ParameterPoint parameter;
  PlanePoint position{0, 0};
  bool on_diagonal = false;
};

struct CornerpointTrack {
  Cornerpoint start;
  std::vector<TrackSample> samples;
  TrackState end;
  /// End point of the track, or its diagonal position.
  PlanePoint end_position{0, 0};
  /// Maximal tau intervals spent on the diagonal, at sample resolution.
  std::vector<std::pair<Real, Real>> diagonal_intervals;
};

/// Track of one proper cornerpoint of Dgm(f*_{c(0)}). Throws
/// StartPointNotInDiagram, StepUnderflow.
CornerpointTrack transport_point(const SimplicialComplex& complex, const Bifiltration& f,
                                 const Cornerpoint& x, const ParameterPath& path,
                                 TransportConfig config);

/// Tracks of every proper point of Dgm(f*_{c(0)}) in `degree`, transported
/// together (they compete for re-emergence).
std::vector<CornerpointTrack> transport_all(const SimplicialComplex& complex,
                                            const Bifiltration& f, const ParameterPath& path,
                                            int degree, TransportConfig config);

/// Diagonal tag for points born along the path that no object claims.
inline constexpr int kUntracked = -2;

/// Objects for the two sides of every pair of sigma: a matched point is
/// followed from its start point; a diagonal slot becomes an object resting
/// at the diagonal projection of its partner.
struct MatchingItems {
  std::vector<TrackState> f;
  std::vector<TrackState> g;
};
MatchingItems items_of(const Matching& sigma);

/// Matching read off the end states: pair k of the source gives the pair of
/// the current positions of its two objects (resting objects give diagonal
/// slots carrying their tag); points no object holds are matched to a
/// diagonal slot tagged kUntracked.
Matching matching_from_items(const StrandLog& f_log, const std::vector<TrackState>& f_items,
                             const StrandLog& g_log, const std::vector<TrackState>& g_items);

/// Cost of a transported matching. Pairs of objects count as matched; the
/// untracked points of both sides, which continue diagonal pairs of the
/// source, are paired among themselves by an optimal bottleneck matching.
Real transported_cost(const Matching& m);

/// A matching at c(0) carried along a path for the pair (f, g). Object k of
/// `start.f` and of `start.g` form pair k; `end` holds their final states.
struct TransportedMatching {
  Matching source;
  Matching result;
  StrandLog f;
  StrandLog g;
  MatchingItems start;
  MatchingItems end;
  Real cost = 0.0;
};

TransportedMatching transport_matching(const SimplicialComplex& complex, const Bifiltration& f,
                                       const Bifiltration& g, const Matching& sigma,
                                       const ParameterPath& path, const TransportConfig& config);

/// Transports the state reached by `previous` (objects on their points or
/// resting on the diagonal, untracked points left free) along a path
/// starting at its endpoint. Its result equals transporting the source of
/// `previous` along the concatenated path.
TransportedMatching continue_transport(const SimplicialComplex& complex, const Bifiltration& f,
                                       const Bifiltration& g, TransportedMatching previous,
                                       const ParameterPath& path, const TransportConfig& config);

/// Strands of Dgm(phi) in `degree` through the homotopy (1 - s) phi + s psi.
StrandLog trace_homotopy(const SimplicialComplex& complex, const ScalarField& phi,
                         const ScalarField& psi, int degree, const TransportConfig& config);

/// End state of x under the homotopy; the end point is
/// log.end_points[log.end_index(state.strand)] unless on_diagonal.
/// Throws StartPointNotInDiagram, StepUnderflow.
std::pair<TrackState, PlanePoint> transport_across_homotopy(const SimplicialComplex& complex,
                                                            const ScalarField& phi,
                                                            const ScalarField& psi,
                                                            const Cornerpoint& x,
                                                            const TransportConfig& config);

/// Matching Dgm(phi) -> Dgm(psi) in `degree` induced by the homotopy; every
/// diagonal slot is untagged.
Matching homotopy_matching(const SimplicialComplex& complex, const ScalarField& phi,
                           const ScalarField& psi, int degree, const TransportConfig& config);

struct LoopPermutation {
  /// permutation[i] = index of the point reached from point i, or -1 if it
  /// ends on the diagonal.
  std::vector<int> permutation;
  std::vector<PlanePoint> points;
  int segments = 0;
  bool stable = false;
  ParameterPoint basepoint;
};

/// Transports the proper points of Dgm(f*) at the basepoint (angle 0 on the
/// circle) around the circle, doubling the polygon from `min_segments` until
/// the permutation is unchanged over two consecutive doublings.
LoopPermutation loop_permutation(const SimplicialComplex& complex, const Bifiltration& f,
                                 const ParameterPoint& center, Real radius, int degree,
                                 const TransportConfig& config, int turns = 1,
                                 int min_segments = 64, int max_segments = 4096);

/// Cycle notation with 1-based labels, fixed points omitted; "()" for the
/// identity. Entries of -1 are written as "(k -)".
std::string cycle_notation(const std::vector<int>& permutation);

bool is_identity(const std::vector<int>& permutation);

}  // namespace cohmatch
