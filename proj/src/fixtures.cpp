#include "cohmatch/fixtures.hpp"

#include "cohmatch/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace cohmatch::fixtures {

SimplicialComplex octahedron() {
  std::vector<Simplex> s;
  for (int i = 1; i <= 4; ++i) {
    const int j = i % 4 + 1;
    s.push_back({0, i});
    s.push_back({i, 5});
    s.push_back({std::min(i, j), std::max(i, j)});
    s.push_back({0, std::min(i, j), std::max(i, j)});
    s.push_back({std::min(i, j), std::max(i, j), 5});
  }
  return build_complex(6, s);
}

ScalarField octahedron_height() {
  ScalarField h(6);
  h << -1, 0, 0, 0, 0, 1;
  return h;
}

SimplicialComplex icosahedron() {
  const Real phi = std::numbers::phi;
  std::vector<std::array<Real, 3>> v;
  for (Real s1 : {-1.0, 1.0})
    for (Real s2 : {-1.0, 1.0}) {
      v.push_back({0, s1, s2 * phi});
      v.push_back({s1, s2 * phi, 0});
      v.push_back({s2 * phi, 0, s1});
    }
  auto adjacent = [&](std::size_t i, std::size_t j) {
    Real d2 = 0;
    for (int k = 0; k < 3; ++k) d2 += (v[i][k] - v[j][k]) * (v[i][k] - v[j][k]);
    return std::abs(d2 - 4.0) < 1e-9;
  };
  std::vector<Simplex> s;
  const int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!adjacent(i, j)) continue;
      s.push_back({i, j});
      for (int k = j + 1; k < n; ++k)
        if (adjacent(i, k) && adjacent(j, k)) s.push_back({i, j, k});
    }
  return build_complex(12, s);
}

SimplicialComplex bipyramid(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "bipyramid needs a cycle of length >= 3");
  std::vector<Simplex> s;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const int lo = std::min(i, j), hi = std::max(i, j);
    s.push_back({lo, hi});
    for (int apex : {n, n + 1}) {
      s.push_back({i, apex});
      s.push_back({lo, hi, apex});
    }
  }
  return build_complex(static_cast<std::size_t>(n + 2), s);
}

Bifiltration random_bifiltration(std::size_t vertices, std::mt19937_64& rng, Real lo, Real hi) {
  std::uniform_real_distribution<Real> u(lo, hi);
  VertexPairs values(static_cast<Eigen::Index>(vertices), 2);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    values(i, 0) = u(rng);
    values(i, 1) = u(rng);
  }
  return Bifiltration(values);
}

Bifiltration perturbed(const Bifiltration& f, Real amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<Real> u(-amplitude, amplitude);
  VertexPairs values = f.values();
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    values(i, 0) += u(rng);
    values(i, 1) += u(rng);
  }
  return Bifiltration(values);
}

namespace {

// Equator order m1 s1 m2 s2 m3 h1 (vertices 0..5), apexes 6 and 7.
VertexPairs crossing_values(Real m2_shift) {
  VertexPairs values(8, 2);
  values << -1.0, -1.0,   // m1
      3.1, 0.0,           // s1
      1.2 + m2_shift, -2.0,  // m2
      0.0, 2.8,           // s2
      -2.0, 0.9,          // m3
      6.0, 6.0,           // h1
      8.0, 8.0,           // apex
      10.0, 10.0;         // apex
  return values;
}

// Where f*(m2) = f*(m3) and f*(s1) = f*(s2), taking the first branch at m2
// and s1 and the second at m3 and s2.
ParameterPoint crossing_of(const VertexPairs& v) {
  const Real m2 = v(2, 0), s1 = v(1, 0), m3 = v(4, 1), s2 = v(3, 1);
  const Real a = (m2 - s1) / (m2 + m3 - s1 - s2);
  return {a, m2 - a * (m2 + m3)};
}

}  // namespace

Crossing crossing_fixture(Real m2_shift) {
  const VertexPairs v = crossing_values(m2_shift);
  return {bipyramid(6), Bifiltration(v), crossing_of(v)};
}

Crossing flat_crossing_fixture() {
  const VertexPairs base = crossing_values(0.0);
  // The cycle reads m2 s1 m1 s2 m3 h1: both merges go through the global minimum.
  VertexPairs v = base;
  v.row(0) = base.row(2);
  v.row(2) = base.row(0);
  return {bipyramid(6), Bifiltration(v), crossing_of(base)};
}

Sample make(const std::string& name, std::uint64_t seed, Real amplitude) {
  std::mt19937_64 rng(seed);
  Sample out;
  out.name = name;
  if (name == "octahedron" || name == "icosahedron") {
    out.complex = name == "octahedron" ? octahedron() : icosahedron();
    out.functions.push_back(random_bifiltration(out.complex.num_vertices(), rng));
  } else if (name == "perturbation" || name == "trio") {
    out.complex = octahedron();
    const Bifiltration f = random_bifiltration(out.complex.num_vertices(), rng);
    out.functions.push_back(f);
    out.functions.push_back(perturbed(f, amplitude, rng));
    if (name == "trio") out.functions.push_back(perturbed(f, amplitude, rng));
  } else if (name == "crossing") {
    auto c = crossing_fixture();
    out.complex = c.complex;
    out.functions.push_back(c.f);
  } else if (name == "monodromy-pair") {
    auto c = crossing_fixture();
    out.complex = c.complex;
    out.functions.push_back(c.f);
    out.functions.push_back(crossing_fixture(0.3).f);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown fixture: " + name);
  }
  return out;
}

std::vector<std::string> names() {
  return {"octahedron", "icosahedron", "perturbation", "trio", "crossing", "monodromy-pair"};
}

}  // namespace cohmatch::fixtures
