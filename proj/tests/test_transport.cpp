#include "support.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/fixtures.hpp"
#include "cohmatch/transport.hpp"

#include <doctest.h>

using namespace cohmatch;

namespace {

TransportConfig config_for(const SimplicialComplex& k, const Bifiltration& f) {
  TransportConfig config;
  config.gap = near_diagonal_gap_estimate(k, f, default_region(b_bound(f)), 32).k;
  return config;
}

Cornerpoint proper(const PlanePoint& x, int degree) { return {x.x(), x.y(), degree, 1}; }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("paths") {
  const ParameterPath c = ParameterPath::straight({0.2, 0.0}, {0.6, 0.3});
  CHECK(c.length() == doctest::Approx(0.5));
  CHECK(c.reversed().start() == c.end());
  CHECK(c.then(c.reversed()).segment_count() == 2);
  CHECK_THROWS(c.then(c));
  const ParameterPath loop = ParameterPath::circle({0.5, 0.0}, 0.1, 0.0, 16);
  CHECK(loop.start() == loop.end());
  CHECK(loop.segment_count() == 16);
  CHECK(interpolate({0.1, 0.2}, {0.3, 0.7}, 1.0) == ParameterPoint{0.3, 0.7});
}

TEST_CASE("routing keeps away from exclusion disks") {
  const ExclusionDisk disk{{0.5, 0.0}, 0.05};
  const ParameterPath r = route({0.2, 0.0}, {0.8, 0.0}, {disk});
  CHECK(r.start() == ParameterPoint{0.2, 0.0});
  CHECK(r.end() == ParameterPoint{0.8, 0.0});
  for (const auto& w : r.waypoints()) CHECK(parameter_distance(w, disk.center) >= disk.radius);
  // Every segment misses the disk: sample densely.
  for (std::size_t s = 0; s + 1 < r.waypoints().size(); ++s)
    for (int i = 0; i <= 100; ++i) {
      const auto q = interpolate(r.waypoints()[s], r.waypoints()[s + 1], i / 100.0);
      CHECK(parameter_distance(q, disk.center) > disk.radius);
    }
}

TEST_CASE("constant path and round trip") {
  std::mt19937_64 rng(51);
  const auto k = fixtures::octahedron();
  const auto f = fixtures::random_bifiltration(6, rng);
  const auto config = config_for(k, f);
  const ParameterPoint p{0.5, 0.0};
  const auto pts = slice_diagram(k, f, p).proper_points(1);
  REQUIRE_FALSE(pts.empty());
  const auto still = transport_point(k, f, proper(pts[0], 1), ParameterPath::constant(p), config);
  CHECK(still.end_position == pts[0]);
  const ParameterPath c = ParameterPath::straight(p, {0.3, 0.4});
  const auto back = transport_point(k, f, proper(pts[0], 1), c.then(c.reversed()), config);
  CHECK_FALSE(back.end.on_diagonal);
  CHECK(back.end_position == pts[0]);
}

TEST_CASE("start point must be in the diagram") {
  const auto k = fixtures::octahedron();
  std::mt19937_64 rng(52);
  const auto f = fixtures::random_bifiltration(6, rng);
  CHECK(kind_of([&] {
          transport_point(k, f, {5.0, 6.0, 0, 1}, ParameterPath::constant({0.5, 0.0}), {});
        }) == ErrorKind::StartPointNotInDiagram);
}

TEST_CASE("tracks agree with fine-step tracking on the crossing fixture") {
  const auto c = fixtures::crossing_fixture();
  const auto config = config_for(c.complex, c.f);
  for (const auto& [p, q] : {std::pair{ParameterPoint{0.3, 0.3}, ParameterPoint{0.7, 0.3}},
                             std::pair{ParameterPoint{0.3, 0.0}, ParameterPoint{0.7, 0.0}},
                             std::pair{ParameterPoint{0.2, 0.15}, ParameterPoint{0.45, 0.6}}}) {
    const auto tracks = transport_all(c.complex, c.f, ParameterPath::straight(p, q), 0, config);
    const auto starts = slice_diagram(c.complex, c.f, p).proper_points(0);
    REQUIRE(tracks.size() == starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const auto oracle = testing::fine_step_track(c.complex, c.f, 0, starts[i], p, q, 10000);
      REQUIRE(oracle.has_value() == !tracks[i].end.on_diagonal);
      if (oracle) CHECK(tracks[i].end_position == *oracle);
    }
  }
}

TEST_CASE("property: tracks agree with fine-step tracking on random octahedra") {
  std::mt19937_64 rng(53);
  const auto k = fixtures::octahedron();
  int compared = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = fixtures::random_bifiltration(6, rng);
    const auto config = config_for(k, f);
    const ParameterPoint p{testing::uniform(rng, 0.2, 0.8), testing::uniform(rng, -0.5, 0.5)};
    const ParameterPoint q{testing::uniform(rng, 0.2, 0.8), testing::uniform(rng, -0.5, 0.5)};
    for (int d = 0; d <= 1; ++d) {
      std::vector<CornerpointTrack> tracks;
      try {
        tracks = transport_all(k, f, ParameterPath::straight(p, q), d, config);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepUnderflow);
        continue;
      }
      const auto starts = slice_diagram(k, f, p).proper_points(d);
      for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto oracle = testing::fine_step_track(k, f, d, starts[i], p, q, 10000);
        // The oracle has no re-emergence: compare tracks that never touch the diagonal.
        if (!oracle || !tracks[i].diagonal_intervals.empty()) continue;
        CHECK(tracks[i].end_position == *oracle);
        ++compared;
      }
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("step halving leaves endpoints unchanged") {
  std::mt19937_64 rng(54);
  const auto k = fixtures::octahedron();
  const auto f = fixtures::random_bifiltration(6, rng);
  auto config = config_for(k, f);
  const ParameterPath c = ParameterPath::straight({0.2, -0.4}, {0.8, 0.6});
  for (int d = 0; d <= 1; ++d) {
    const auto coarse = transport_all(k, f, c, d, config);
    config.max_step /= 2;
    const auto fine = transport_all(k, f, c, d, config);
    config.max_step *= 2;
    REQUIRE(coarse.size() == fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      CHECK(coarse[i].end.on_diagonal == fine[i].end.on_diagonal);
      CHECK((coarse[i].end_position - fine[i].end_position).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("concatenated logs equal one trace") {
  std::mt19937_64 rng(55);
  const auto k = fixtures::octahedron();
  const auto f = fixtures::random_bifiltration(6, rng);
  const auto config = config_for(k, f);
  const ParameterPath c1 = ParameterPath::straight({0.5, 0.0}, {0.3, 0.5});
  const ParameterPath c2 = ParameterPath::straight({0.3, 0.5}, {0.7, -0.2});
  for (int d = 0; d <= 1; ++d) {
    const StrandLog whole = trace_path(k, f, c1.then(c2), d, config);
    const StrandLog joined = concat(trace_path(k, f, c1, d, config), trace_path(k, f, c2, d, config));
    CHECK(whole.end_points == joined.end_points);
    CHECK(whole.end_strands == joined.end_strands);
    CHECK(whole.strand_count == joined.strand_count);
  }
}

TEST_CASE("paths through a collision underflow") {
  const auto c = fixtures::crossing_fixture();
  const auto config = config_for(c.complex, c.f);
  CHECK(kind_of([&] {
          transport_all(c.complex, c.f, ParameterPath::straight({0.3, 0.15}, {0.7, 0.15}), 0, config);
        }) == ErrorKind::StepUnderflow);
}

TEST_CASE("homotopy transport") {
  std::mt19937_64 rng(56);
  const auto k = fixtures::icosahedron();
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField phi = slice_function(fixtures::random_bifiltration(12, rng), {0.5, 0.0});
    const auto d = reduce(k, phi);
    TransportConfig config;
    config.gap = 1e-3;
    for (int n = 0; n <= 1; ++n)
      for (const auto& x : d.proper_points(n)) {
        const Cornerpoint cx = proper(x, n);
        const auto same = transport_across_homotopy(k, phi, phi, cx, config);
        CHECK_FALSE(same.first.on_diagonal);
        CHECK(same.second == x);
        const ScalarField shifted = phi.array() + 0.375;
        const auto moved = transport_across_homotopy(k, phi, shifted, cx, config);
        CHECK((moved.second - (x.array() + 0.375).matrix()).cwiseAbs().maxCoeff() <= 1e-12);
        ScalarField psi = phi;
        for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) += testing::uniform(rng, -0.05, 0.05);
        const Real eps = (phi - psi).cwiseAbs().maxCoeff();
        try {
          const auto near = transport_across_homotopy(k, phi, psi, cx, config);
          const Real moved_by = near.first.on_diagonal ? diagonal_distance(x)
                                                       : (near.second - x).cwiseAbs().maxCoeff();
          CHECK(moved_by <= eps + 1e-12);
        } catch (const Error& e) {
          CHECK(e.kind() == ErrorKind::StepUnderflow);
        }
      }
  }
}

TEST_CASE("matching transport") {
  std::mt19937_64 rng(57);
  const auto k = fixtures::octahedron();
  const auto f = fixtures::random_bifiltration(6, rng);
  const auto g = fixtures::perturbed(f, 0.05, rng);
  TransportConfig config = config_for(k, f);
  config.gap = std::min(config.gap, config_for(k, g).gap);
  const ParameterPoint p{0.5, 0.0};
  for (int d = 0; d <= 1; ++d) {
    const auto fp = slice_diagram(k, f, p).proper_points(d);
    const auto gp = slice_diagram(k, g, p).proper_points(d);
    const Matching sigma = bottleneck(fp, gp, d).matching;
    CHECK(same_pairs(transport_matching(k, f, g, sigma, ParameterPath::constant(p), config).result, sigma));

    const Matching id = identity_matching(fp, d);
    const ParameterPath c = ParameterPath::straight(p, {0.2, 0.7});
    const auto self = transport_matching(k, f, f, id, c, config);
    const auto fq = slice_diagram(k, f, c.end()).proper_points(d);
    CHECK(same_pairs(self.result, identity_matching(fq, d)));
    CHECK(self.cost == 0.0);

    // Homotopy matching at p transported anywhere stays within the sup norm.
    const Matching h = homotopy_matching(k, slice_function(f, p), slice_function(g, p), d, config);
    const Real bound = sup_distance(f, g);
    for (const ParameterPoint q : {ParameterPoint{0.2, 0.7}, ParameterPoint{0.8, -0.9},
                                   ParameterPoint{0.05, 0.1}, ParameterPoint{0.95, 1.5}}) {
      const auto t = transport_matching(k, f, g, h, ParameterPath::straight(p, q), config);
      CHECK(t.cost <= bound + 1e-12);
    }
  }
}

TEST_CASE("loop permutations on the crossing fixture") {
  const auto c = fixtures::crossing_fixture();
  const auto config = config_for(c.complex, c.f);
  const auto once = loop_permutation(c.complex, c.f, c.crossing, 0.05, 0, config);
  CHECK(cycle_notation(once.permutation) == "(1 2)");
  CHECK(once.stable);
  CHECK(is_identity(loop_permutation(c.complex, c.f, c.crossing, 0.05, 0, config, 2).permutation));
  CHECK(is_identity(loop_permutation(c.complex, c.f, {0.3, -1.0}, 0.1, 0, config).permutation));
  const auto flat = fixtures::flat_crossing_fixture();
  CHECK(is_identity(
      loop_permutation(flat.complex, flat.f, flat.crossing, 0.05, 0, config_for(flat.complex, flat.f))
          .permutation));
}

TEST_CASE("transport depends on the side of the collision a path passes") {
  const auto c = fixtures::crossing_fixture();
  const auto config = config_for(c.complex, c.f);
  const ParameterPoint p{0.3, 0.15};
  const ParameterPoint q{0.7, 0.15};
  auto ends = [&](const std::vector<ParameterPoint>& via) {
    std::vector<ParameterPoint> w{p};
    w.insert(w.end(), via.begin(), via.end());
    w.push_back(q);
    std::vector<PlanePoint> out;
    for (const auto& t : transport_all(c.complex, c.f, ParameterPath(w), 0, config))
      out.push_back(t.end_position);
    return out;
  };
  const auto above = ends({{0.4, 0.35}, {0.6, 0.35}});
  const auto above_too = ends({{0.5, 0.5}});
  const auto below = ends({{0.5, -0.2}});
  CHECK(above == above_too);
  CHECK(above != below);
  std::vector<PlanePoint> swapped = below;
  std::swap(swapped[0], swapped[1]);
  CHECK(above == swapped);
}

TEST_CASE("cycle notation") {
  CHECK(cycle_notation({0, 1, 2}) == "()");
  CHECK(cycle_notation({1, 0, 2}) == "(1 2)");
  CHECK(cycle_notation({1, 2, 0}) == "(1 2 3)");
  CHECK(cycle_notation({-1, 1}) == "(1 -)");
  CHECK(is_identity({0, 1}));
  CHECK_FALSE(is_identity({1, 0}));
}
