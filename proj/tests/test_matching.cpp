#include "support.hpp"

#include "cohmatch/error.hpp"

#include <doctest.h>

using namespace cohmatch;

namespace {

Real pair_max(const Matching& m) {
  Real out = 0.0;
  for (const auto& pair : m.pairs) {
    const auto& [l, r] = pair;
    Real d = 0.0;
    if (!l.diagonal && !r.diagonal)
      d = (m.left[static_cast<std::size_t>(l.index)] - m.right[static_cast<std::size_t>(r.index)])
              .cwiseAbs()
              .maxCoeff();
    else if (!l.diagonal)
      d = diagonal_distance(m.left[static_cast<std::size_t>(l.index)]);
    else if (!r.diagonal)
      d = diagonal_distance(m.right[static_cast<std::size_t>(r.index)]);
    out = std::max(out, d);
  }
  return out;
}

}  // namespace

TEST_CASE("point distances") {
  CHECK(point_distance(Cornerpoint{0, 2, 0}, std::nullopt) == 1.0);
  CHECK(point_distance(Cornerpoint{0, 4, 1}, Cornerpoint{1, 5, 1}) == 1.0);
  CHECK(point_distance(Cornerpoint{2, kInfinity, 0}, Cornerpoint{2, kInfinity, 0}) == 0.0);
  CHECK(point_distance(Cornerpoint{2, kInfinity, 0}, Cornerpoint{3.5, kInfinity, 0}) == 1.5);
  CHECK(point_distance(Cornerpoint{2, kInfinity, 0}, std::nullopt) == kInfinity);
  CHECK(point_distance(Cornerpoint{2, kInfinity, 0}, Cornerpoint{0, 1, 0}) == kInfinity);
  CHECK(point_distance(std::nullopt, std::nullopt) == 0.0);
  CHECK_THROWS_AS(point_distance(Cornerpoint{0, 1, 0}, Cornerpoint{0, 1, 1}), Error);
}

TEST_CASE("costs") {
  const std::vector<PlanePoint> pts{{0, 1}, {0.5, 3}};
  CHECK(cost(identity_matching(pts)) == 0.0);
  const auto to_diag = bottleneck({PlanePoint(0, 2)}, {});
  CHECK(to_diag.distance == 1.0);
  CHECK(cost(to_diag.matching) == 1.0);
  CHECK(cost(Matching{}) == 0.0);
}

TEST_CASE("bottleneck basics") {
  const std::vector<PlanePoint> pts{{0, 1}, {0.25, 2}, {1, 1.5}};
  const auto same = bottleneck(pts, pts);
  CHECK(same.distance == 0.0);
  CHECK(same_pairs(same.matching, identity_matching(pts)));
}

TEST_CASE("property: bottleneck equals the brute-force minimum") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto left = testing::random_points(rng, 5);
    const auto right = testing::random_points(rng, 5);
    const auto r = bottleneck(left, right);
    CHECK(r.distance == testing::brute_force_bottleneck(left, right));
    validate(r.matching);
    CHECK(cost(r.matching) == r.distance);
    CHECK(pair_max(r.matching) == r.distance);
  }
}

TEST_CASE("property: bottleneck is a metric on diagrams") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = testing::random_points(rng, 5);
    const auto y = testing::random_points(rng, 5);
    const auto z = testing::random_points(rng, 5);
    const Real xy = bottleneck(x, y).distance;
    CHECK(bottleneck(x, x).distance == 0.0);
    CHECK(xy == bottleneck(y, x).distance);
    CHECK(bottleneck(x, z).distance <= xy + bottleneck(y, z).distance);
  }
}

TEST_CASE("enumeration counts") {
  const std::vector<PlanePoint> one{{0, 1}};
  const std::vector<PlanePoint> two{{0, 1}, {0.5, 2}};
  CHECK(enumerate_matchings(one, one).size() == 2);
  CHECK(enumerate_matchings(two, one).size() == 3);
  const auto empty = enumerate_matchings({}, {});
  REQUIRE(empty.size() == 1);
  CHECK(cost(empty[0]) == 0.0);
  std::mt19937_64 rng(43);
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m) {
      std::vector<PlanePoint> l, r;
      for (int i = 0; i < n; ++i) l.push_back({i * 1.0, i + 1.5});
      for (int j = 0; j < m; ++j) r.push_back({j * 0.5, j + 2.0});
      CHECK(static_cast<long>(enumerate_matchings(l, r).size()) == testing::count_bijections(n, m));
    }
  std::vector<PlanePoint> seven(7, PlanePoint(0, 1));
  try {
    enumerate_matchings(seven, {});
    FAIL("expected LimitExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LimitExceeded);
  }
}

TEST_CASE("property: bottleneck is the minimum over the enumeration") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const auto left = testing::random_points(rng, 4);
    const auto right = testing::random_points(rng, 4);
    const auto all = enumerate_matchings(left, right);
    Real best = kInfinity;
    for (const auto& m : all) {
      validate(m);
      CHECK(cost(m) == pair_max(m));
      best = std::min(best, cost(m));
    }
    CHECK(best == bottleneck(left, right).distance);
  }
}

TEST_CASE("property: heuristic subset contains an optimal matching") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const auto left = testing::random_points(rng, 8);
    const auto right = testing::random_points(rng, 8);
    const auto subset = heuristic_matchings(left, right);
    REQUIRE_FALSE(subset.empty());
    Real best = kInfinity;
    for (const auto& m : subset) {
      validate(m);
      best = std::min(best, cost(m));
    }
    CHECK(best == bottleneck(left, right).distance);
  }
}

TEST_CASE("points at infinity") {
  const PersistenceDiagram d1({{0, kInfinity, 0, 1}, {0, 1, 0, 1}}, 0);
  const PersistenceDiagram d2({{0.25, kInfinity, 0, 1}}, 0);
  CHECK(bottleneck(d1, d2, 0).distance == 0.5);
  const PersistenceDiagram d3({{0, kInfinity, 0, 2}}, 0);
  CHECK(bottleneck(d1, d3, 0).distance == kInfinity);
  const auto pairing = essential_pairing({0.0, 3.0, 1.0}, {1.5, 0.5, 2.5});
  CHECK(pairing.size() == 3);
}

TEST_CASE("property: composition and inverse") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testing::random_points(rng, 4);
    const auto b = testing::random_points(rng, 4);
    const auto c = testing::random_points(rng, 4);
    const Matching sigma = bottleneck(a, b).matching;
    const Matching tau = bottleneck(b, c).matching;
    const Matching both = compose(sigma, tau);
    validate(both);
    CHECK(cost(both) <= cost(sigma) + cost(tau));
    CHECK(same_pairs(inverse(inverse(sigma)), sigma));
    CHECK(same_pairs(compose(sigma, identity_matching(b)), sigma));
    CHECK(cost(compose(sigma, inverse(sigma))) <= 2 * cost(sigma));
  }
}

TEST_CASE("validation rejects a point used twice") {
  Matching m;
  m.left = {PlanePoint(0, 1)};
  m.right = {PlanePoint(0, 1)};
  m.pairs = {{MatchSlot::point(0), MatchSlot::point(0)}, {MatchSlot::point(0), MatchSlot::diag()}};
  CHECK_THROWS_AS(validate(m), Error);
}
