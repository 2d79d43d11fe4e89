#include "support.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/fixtures.hpp"

#include <doctest.h>

using namespace cohmatch;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

SimplicialComplex two_octahedra() {
  const SimplicialComplex o = fixtures::octahedron();
  std::vector<Simplex> simplices;
  for (std::size_t id = 0; id < o.size(); ++id) {
    const Simplex& s = o.simplex(id);
    if (s.size() < 2) continue;
    simplices.push_back(s);
    Simplex shifted = s;
    for (int& v : shifted) v += 6;
    simplices.push_back(shifted);
  }
  return build_complex(12, simplices);
}

}  // namespace

TEST_CASE("triangle boundary counts") {
  const auto k = build_complex(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(k.num_vertices() == 3);
  CHECK(k.count(1) == 3);
  CHECK(k.euler_characteristic() == 0);
  CHECK(k.dimension() == 1);
}

TEST_CASE("lenient mode completes faces and flags it") {
  const auto k = build_complex(3, {{0, 1, 2}}, FaceClosure::Lenient);
  CHECK(k.count(0) == 3);
  CHECK(k.count(1) == 3);
  CHECK(k.count(2) == 1);
  CHECK(k.auto_completed());
  CHECK_FALSE(build_complex(3, {{0, 1}}, FaceClosure::Lenient).auto_completed());
}

TEST_CASE("construction errors") {
  CHECK(kind_of([] { build_complex(3, {{0, 1, 2}}); }) == ErrorKind::MissingFace);
  CHECK(kind_of([] { build_complex(2, {{0, 1}, {0, 1}}); }) == ErrorKind::DuplicateSimplex);
  CHECK(kind_of([] { build_complex(0, {}); }) == ErrorKind::EmptyComplex);
  CHECK(kind_of([] { build_complex(2, {{1, 0}}); }) == ErrorKind::InvalidSimplex);
  CHECK(kind_of([] { build_complex(2, {{0, 2}}); }) == ErrorKind::InvalidSimplex);
  CHECK(kind_of([] { build_complex(2, {{0, 0}}); }) == ErrorKind::InvalidSimplex);
}

TEST_CASE("octahedron Betti numbers agree with boundary ranks") {
  const auto k = fixtures::octahedron();
  CHECK(k.count(0) == 6);
  CHECK(k.count(1) == 12);
  CHECK(k.count(2) == 8);
  CHECK(k.dimension() == 2);
  CHECK(testing::betti_by_rank(k) == std::vector<long>{1, 0, 1});
  CHECK(betti_numbers(k) == std::vector<long>{1, 0, 1});
  CHECK(betti_numbers(fixtures::icosahedron(), 3) == std::vector<long>{1, 0, 1});
}

TEST_CASE("property: Betti numbers match the rank oracle on random complexes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto k = testing::random_complex(rng);
    for (int p : {2, 3}) CHECK(betti_numbers(k, p) == testing::betti_by_rank(k, p));
  }
}

TEST_CASE("property: faces are closed and boundary of boundary vanishes") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto k = testing::random_complex(rng);
    for (std::size_t id = 0; id < k.size(); ++id) {
      const auto facets = k.facets(id);
      const Simplex& s = k.simplex(id);
      REQUIRE(facets.size() == (s.size() > 1 ? s.size() : 0));
      for (std::size_t i = 0; i < facets.size(); ++i) {
        Simplex face = s;
        face.erase(face.begin() + static_cast<long>(i));
        CHECK(k.simplex(facets[i]) == face);
      }
    }
    for (int d = 2; d <= k.dimension(); ++d) {
      const auto outer = testing::boundary_matrix(k, d, [](std::size_t) { return true; });
      const auto inner = testing::boundary_matrix(k, d - 1, [](std::size_t) { return true; });
      for (std::size_t r = 0; r < inner.size(); ++r)
        for (std::size_t c = 0; c < (outer.empty() ? 0 : outer[0].size()); ++c) {
          long sum = 0;
          for (std::size_t m = 0; m < outer.size(); ++m) sum += inner[r][m] * outer[m][c];
          CHECK(sum == 0);
        }
    }
  }
}

TEST_CASE("sphere assumption") {
  const auto oct = validate_sphere_assumption(fixtures::octahedron());
  CHECK(oct.passed);
  CHECK(oct.dimension == 2);
  CHECK(oct.warnings.empty());

  const auto two = validate_sphere_assumption(two_octahedra());
  CHECK_FALSE(two.passed);
  REQUIRE_FALSE(two.warnings.empty());
  CHECK(two.betti[0] == 2);

  const auto point = validate_sphere_assumption(build_complex(1, {}));
  CHECK_FALSE(point.passed);
  CHECK_FALSE(point.warnings.empty());

  const auto circle = validate_sphere_assumption(build_complex(3, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK_FALSE(circle.passed);
}

TEST_CASE("near-diagonal gap estimate") {
  const ParameterRegion region = default_region(1.0);
  SUBCASE("constant bifiltration has no proper points") {
    VertexPairs v = VertexPairs::Constant(6, 2, 0.25);
    const auto g = near_diagonal_gap_estimate(fixtures::octahedron(), Bifiltration(v), region, 8);
    CHECK(g.k == kInfinity);
    CHECK_FALSE(g.warning);
  }
  SUBCASE("generic octahedron values give a positive gap") {
    std::mt19937_64 rng(3);
    const auto f = fixtures::random_bifiltration(6, rng);
    const auto g = near_diagonal_gap_estimate(fixtures::octahedron(), f, region, 32);
    CHECK(g.k > 0.0);
  }
  SUBCASE("coincident cornerpoints give zero and a warning") {
    // Path m s m s m: the two saddles and the two outer minima share values.
    const auto k = build_complex(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    VertexPairs v(5, 2);
    v << 0, 0, 1, 1, 0, 0, 1, 1, 0, 0;
    const auto g = near_diagonal_gap_estimate(k, Bifiltration(v), region, 8);
    CHECK(g.k == 0.0);
    CHECK(g.warning);
  }
}

TEST_CASE("sup distance") {
  VertexPairs a(2, 2), b(2, 2);
  a << 0, 0, 1, 1;
  b << 0.5, 0, 1, -1;
  CHECK(sup_distance(Bifiltration(a), Bifiltration(b)) == 2.0);
}
