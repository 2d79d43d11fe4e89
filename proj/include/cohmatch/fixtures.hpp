#pragma once

#include "cohmatch/complex.hpp"
#include "cohmatch/parameters.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cohmatch::fixtures {

/// Boundary of the octahedron with vertices ordered (0,0,-1), (1,0,0),
/// (0,1,0), (-1,0,0), (0,-1,0), (0,0,1).
SimplicialComplex octahedron();
/// Height of that embedding: (-1, 0, 0, 0, 0, 1).
ScalarField octahedron_height();

/// Boundary of the icosahedron (12 vertices, 20 triangles).
SimplicialComplex icosahedron();

/// Suspension of a cycle of `n` vertices: a sphere with apexes n and n + 1.
SimplicialComplex bipyramid(int n);

/// Independent uniform values in [lo, hi] for both components.
Bifiltration random_bifiltration(std::size_t vertices, std::mt19937_64& rng, Real lo = -1.0,
                                 Real hi = 1.0);

/// f + eta with eta uniform in [-amplitude, amplitude] per vertex and component.
Bifiltration perturbed(const Bifiltration& f, Real amplitude, std::mt19937_64& rng);

/// Bipyramid over the cycle m1 s1 m2 s2 m3 h1 whose normalized degree-0
/// diagram has two cornerpoints that collide at crossing_point() and are
/// exchanged by a loop around it.
struct Crossing {
  SimplicialComplex complex;
  Bifiltration f;
  ParameterPoint crossing;
};
Crossing crossing_fixture(Real m2_shift = 0.0);

/// Same values on a tree-like equator (m1 joined to both saddles), where the
/// collision exists but no loop exchanges the points.
Crossing flat_crossing_fixture();

struct Sample {
  std::string name;
  SimplicialComplex complex;
  std::vector<Bifiltration> functions;
};

/// Named fixtures for the CLI generator: "octahedron", "icosahedron",
/// "perturbation" (f, g), "trio" (f, g, h), "crossing", "monodromy-pair".
Sample make(const std::string& name, std::uint64_t seed, Real amplitude = 0.05);

std::vector<std::string> names();

}  // namespace cohmatch::fixtures
