#include "support.hpp"

#include "cohmatch/fixtures.hpp"

#include <doctest.h>

using namespace cohmatch;

TEST_CASE("line points") {
  CHECK(line_point(ParameterPoint{0.5, 0.0}, 2.0) == PlanePoint(1.0, 1.0));
  CHECK(line_point(ParameterPoint{0.5, 1.0}, 0.0) == PlanePoint(1.0, -1.0));
  CHECK(line_point(ParameterPoint{0.3, -0.7}, 0.0) == PlanePoint(-0.7, 0.7));
}

TEST_CASE("slice values") {
  CHECK(slice_value(3.0, 0.0, 0.5, 1.0, true) == 2.0);
  CHECK(slice_value(1.0, 1.0, 0.25, 0.0, true) == 1.0);
  CHECK(slice_value(3.0, 0.0, 0.5, 1.0, false) == 4.0);
  std::mt19937_64 rng(31);
  const auto f = fixtures::random_bifiltration(6, rng);
  const ScalarField s = slice_function(f, {0.5, 0.0});
  for (Eigen::Index i = 0; i < s.size(); ++i)
    CHECK(s(i) == std::max(f.values()(i, 0), f.values()(i, 1)));
}

TEST_CASE("parameter points reject the boundary of the a interval") {
  CHECK_THROWS(make_parameter_point(0.0, 0.0));
  CHECK_THROWS(make_parameter_point(1.0, 0.0));
  CHECK_THROWS(make_parameter_point(0.5, kInfinity));
  CHECK(make_parameter_point(0.25, -3.0) == ParameterPoint{0.25, -3.0});
}

TEST_CASE("constant bifiltration at the diagonal line") {
  VertexPairs v = VertexPairs::Zero(6, 2);
  v.col(0).setConstant(0.3);
  v.col(1).setConstant(-0.2);
  const auto d = slice_diagram(fixtures::octahedron(), Bifiltration(v), {0.5, 0.0});
  CHECK(d.essential_births(0) == std::vector<Real>{0.3});
  CHECK(d.proper_count(0) == 0);
}

TEST_CASE("octahedron at a = 1/2, b = 0 is the diagram of max(f1, f2)") {
  std::mt19937_64 rng(32);
  const auto f = fixtures::random_bifiltration(6, rng);
  const ScalarField m = f.values().rowwise().maxCoeff();
  CHECK(slice_diagram(fixtures::octahedron(), f, {0.5, 0.0}) == reduce(fixtures::octahedron(), m));
}

TEST_CASE("property: normalized diagram is the rescaled raw diagram") {
  std::mt19937_64 rng(33);
  const auto k = fixtures::icosahedron();
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = fixtures::random_bifiltration(k.num_vertices(), rng);
    const ParameterPoint p{testing::uniform(rng, 0.01, 0.99), testing::uniform(rng, -2, 2)};
    const Real scale = std::min(p.a, 1 - p.a);
    CHECK(slice_diagram(k, f, p, true) ==
          slice_diagram(k, f, p, false).mapped([&](Real t) { return scale * t; }));
  }
}

TEST_CASE("b bound") {
  VertexPairs v(2, 2);
  v << -1, 0.5, 0.25, 1;
  CHECK(b_bound(Bifiltration(v), Bifiltration(v)) == 1.0);
  CHECK(b_bound(Bifiltration(VertexPairs::Zero(3, 2))) == 0.0);
}

TEST_CASE("property: far b slices are rescaled component diagrams") {
  std::mt19937_64 rng(34);
  const auto k = fixtures::octahedron();
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = fixtures::random_bifiltration(6, rng);
    const Real b = b_bound(f) + 1;
    const Real a = testing::uniform(rng, 0.01, 0.99);
    const Real scale = std::min(a, 1 - a);
    const ScalarField f1 = f.values().col(0);
    const ScalarField f2 = f.values().col(1);
    CHECK(slice_diagram(k, f, {a, b}) ==
          reduce(k, f2).mapped([&](Real t) { return scale * ((t + b) / (1 - a)); }));
    CHECK(slice_diagram(k, f, {a, -b}) ==
          reduce(k, f1).mapped([&](Real t) { return scale * ((t - -b) / a); }));
  }
}

TEST_CASE("property: sublevel sets along a line match the slice sublevel sets") {
  // Dyadic data keeps every operation exact.
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const Real a = testing::uniform_int(rng, 1, 3) * 0.25;
    const Real b = testing::uniform_int(rng, -8, 8) * 0.125;
    const Real t = testing::uniform_int(rng, -16, 16) * 0.125;
    const Real f1 = testing::uniform_int(rng, -8, 8) * 0.125;
    const Real f2 = testing::uniform_int(rng, -8, 8) * 0.125;
    const PlanePoint uv = line_point(a, b, t);
    CHECK((f1 <= uv.x() && f2 <= uv.y()) == (slice_value(f1, f2, a, b, false) <= t));
  }
}

TEST_CASE("property: per-vertex contraction holds exactly") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = fixtures::random_bifiltration(4, rng);
    const auto g = fixtures::perturbed(f, testing::uniform(rng, 0.0, 0.5), rng);
    const ParameterPoint p{testing::uniform(rng, 1e-3, 1 - 1e-3), testing::uniform(rng, -3, 3)};
    for (std::size_t v = 0; v < 4; ++v) CHECK(contraction_holds_exactly(f, g, v, p));
  }
}

TEST_CASE("property: drift bound and enclosure contain sampled values") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = fixtures::random_bifiltration(5, rng);
    const Real a0 = testing::uniform(rng, 0.01, 0.9);
    const Real b0 = testing::uniform(rng, -2, 2);
    const ParameterRegion cell{a0, a0 + testing::uniform(rng, 1e-4, 0.09), b0,
                               b0 + testing::uniform(rng, 1e-4, 0.5)};
    const ParameterPoint p{cell.a_lo, cell.b_lo};
    const Real drift = drift_bound(f, p, cell);
    const auto box = slice_enclosure(f, cell);
    const ScalarField at_p = slice_function(f, p);
    for (int s = 0; s < 20; ++s) {
      const ParameterPoint q{testing::uniform(rng, cell.a_lo, cell.a_hi),
                             testing::uniform(rng, cell.b_lo, cell.b_hi)};
      const ScalarField at_q = slice_function(f, q);
      CHECK((at_p - at_q).cwiseAbs().maxCoeff() <= drift);
      CHECK((at_q.array() >= box.lo.array()).all());
      CHECK((at_q.array() <= box.hi.array()).all());
    }
  }
}

TEST_CASE("separation") {
  CHECK(separation({}) == kInfinity);
  CHECK(separation({PlanePoint(0, 1)}) == kInfinity);
  CHECK(separation({PlanePoint(0, 1), PlanePoint(0.5, 1.25), PlanePoint(3, 4)}) == 0.5);
  CHECK(separation({PlanePoint(0, 1), PlanePoint(0, 1)}) == 0.0);
}

TEST_CASE("property: refining a nested grid never raises the minimum separation") {
  std::mt19937_64 rng(38);
  const auto k = fixtures::octahedron();
  for (int trial = 0; trial < 4; ++trial) {
    const auto f = fixtures::random_bifiltration(6, rng);
    const auto region = default_region(b_bound(f));
    for (int d = 0; d <= 1; ++d) {
      const Real coarse = separation_grid(k, f, region, 9, d).minCoeff();
      const Real fine = separation_grid(k, f, region, 17, d).minCoeff();
      CHECK(fine <= coarse);
    }
  }
}

TEST_CASE("singular pairs") {
  SUBCASE("equal components give none") {
    std::mt19937_64 rng(39);
    VertexPairs v(6, 2);
    for (int i = 0; i < 6; ++i) v(i, 0) = v(i, 1) = testing::uniform(rng, -1, 1);
    const Bifiltration f(v);
    for (int d = 0; d <= 2; ++d) {
      SingularSearch search;
      search.region = default_region(b_bound(f));
      search.degree = d;
      search.threshold = near_diagonal_gap_estimate(fixtures::octahedron(), f, search.region, 32).k / 2;
      CHECK(detect_singular_pairs(fixtures::octahedron(), f, search).pairs.empty());
    }
  }
  SUBCASE("empty proper diagrams give none") {
    SingularSearch search;
    search.region = default_region(1.0);
    CHECK(detect_singular_pairs(fixtures::octahedron(), Bifiltration(VertexPairs::Zero(6, 2)), search)
              .pairs.empty());
  }
  SUBCASE("the crossing fixture has one pair at its crossing point") {
    const auto c = fixtures::crossing_fixture();
    SingularSearch search;
    search.region = default_region(b_bound(c.f));
    search.degree = 0;
    search.threshold = near_diagonal_gap_estimate(c.complex, c.f, search.region, 32).k / 2;
    const auto s = detect_singular_pairs(c.complex, c.f, search);
    REQUIRE(s.pairs.size() == 1);
    CHECK(parameter_distance(s.pairs[0].center, c.crossing) <= search.localization_radius);
    CHECK(s.pairs[0].which == "f");
    // The two points really collide there.
    const auto pts = slice_diagram(c.complex, c.f, c.crossing).proper_points(0);
    CHECK(separation(pts) < 1e-12);
  }
}
