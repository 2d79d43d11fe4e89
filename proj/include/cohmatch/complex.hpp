#pragma once

#include "cohmatch/parameters.hpp"
#include "cohmatch/types.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cohmatch {

/// Sorted, distinct vertex indices.
using Simplex = std::vector<int>;

enum class FaceClosure {
  Strict,   ///< missing faces are an error
  Lenient,  ///< missing faces are added and the complex is flagged
};

/// Finite abstract simplicial complex. Simplex ids are ordered by dimension,
/// then lexicographically; vertex v has id v.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t size() const { return simplices_.size(); }
  int dimension() const { return static_cast<int>(by_dimension_.size()) - 1; }

  const Simplex& simplex(std::size_t id) const { return simplices_[id]; }
  int simplex_dimension(std::size_t id) const {
    return static_cast<int>(simplices_[id].size()) - 1;
  }

  /// Codimension-1 faces; entry i omits vertex i of the simplex, so its
  /// boundary coefficient is (-1)^i.
  std::span<const std::size_t> facets(std::size_t id) const { return facets_[id]; }

  std::span<const std::size_t> ids_of_dimension(int d) const;
  std::size_t count(int d) const { return ids_of_dimension(d).size(); }

  std::optional<std::size_t> find(const Simplex& s) const;

  long euler_characteristic() const;

  /// True when lenient construction had to add faces.
  bool auto_completed() const { return auto_completed_; }

  friend bool operator==(const SimplicialComplex& x, const SimplicialComplex& y) {
    return x.num_vertices_ == y.num_vertices_ && x.simplices_ == y.simplices_;
  }

 private:
  friend SimplicialComplex build_complex(std::size_t, std::vector<Simplex>, FaceClosure);

  std::size_t num_vertices_ = 0;
  std::vector<Simplex> simplices_;
  std::vector<std::vector<std::size_t>> facets_;
  std::vector<std::vector<std::size_t>> by_dimension_;
  std::map<Simplex, std::size_t> index_;
  bool auto_completed_ = false;
};

/// Builds a complex over `num_vertices` vertices from simplices of any
/// dimension (vertices are implicit). Throws InvalidSimplex, MissingFace
/// (strict mode), DuplicateSimplex or EmptyComplex.
SimplicialComplex build_complex(std::size_t num_vertices, std::vector<Simplex> simplices,
                                FaceClosure mode = FaceClosure::Strict);

/// Two filtering functions per vertex: the map f = (f1, f2).
class Bifiltration {
 public:
  Bifiltration() = default;
  explicit Bifiltration(VertexPairs values);

  const VertexPairs& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  auto f1() const { return values_.col(0); }
  auto f2() const { return values_.col(1); }

  friend bool operator==(const Bifiltration& x, const Bifiltration& y) {
    return x.values_.rows() == y.values_.rows() && x.values_ == y.values_;
  }

 private:
  VertexPairs values_;
};

/// max over vertices of max(|f1 - g1|, |f2 - g2|).
Real sup_distance(const Bifiltration& f, const Bifiltration& g);

/// Betti numbers over Z/p in degrees 0..dimension, from boundary-matrix ranks.
std::vector<long> betti_numbers(const SimplicialComplex& complex, int field = 2);

struct SphereCheck {
  bool passed = false;
  int dimension = -1;
  std::vector<long> betti;
  std::vector<std::string> warnings;
};

/// Necessary condition for M ~ S^m: b0 = bm = 1, all other Betti numbers 0,
/// and m >= 2. Never throws; failures are reported as warnings.
SphereCheck validate_sphere_assumption(const SimplicialComplex& complex, int field = 2);

struct GapEstimate {
  /// Largest k consistent with the near-diagonal separation assumption on the
  /// sampled diagrams; +infinity when no sampled diagram has two proper points.
  Real k = kInfinity;
  ParameterPoint witness;
  int witness_degree = -1;
  bool warning = false;
  std::string message;
};

/// Samples Dgm(f*_{a,b}) on a resolution x resolution grid of `region`.
/// For each pair X1, X2 of proper points in the same degree, the pair
/// violates the assumption for every k above max(d(X1, diag), d(X2, diag),
/// |X1 - X2|) (Euclidean); the estimate is the minimum of that quantity.
/// Coincident points give 0 and a warning. Throws EmptyRegion.
GapEstimate near_diagonal_gap_estimate(const SimplicialComplex& complex, const Bifiltration& f,
                                       const ParameterRegion& region, int resolution,
                                       int field = 2);

}  // namespace cohmatch
