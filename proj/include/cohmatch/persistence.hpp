#pragma once

#include "cohmatch/complex.hpp"
#include "cohmatch/types.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace cohmatch {

/// A point of a persistence diagram. Proper points have birth < death;
/// points at infinity have death = +infinity.
struct Cornerpoint {
  Real birth = 0.0;
  Real death = kInfinity;
  int degree = 0;
  int multiplicity = 1;

  bool at_infinity() const { return std::isinf(death); }
  PlanePoint point() const { return {birth, death}; }

  friend bool operator==(const Cornerpoint&, const Cornerpoint&) = default;
};

/// Per-degree multiset of cornerpoints, stored aggregated by coordinates and
/// sorted by (degree, birth, death). The diagonal is implicit.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  PersistenceDiagram(std::vector<Cornerpoint> points, int max_degree);

  const std::vector<Cornerpoint>& points() const { return points_; }
  int max_degree() const { return max_degree_; }

  /// Proper points of `degree`, one entry per unit of multiplicity, sorted.
  std::vector<PlanePoint> proper_points(int degree) const;
  /// Births of the points at infinity of `degree`, expanded and sorted.
  std::vector<Real> essential_births(int degree) const;

  std::size_t proper_count(int degree) const;
  std::size_t essential_count(int degree) const;

  /// Applies an increasing map to every finite coordinate, dropping points
  /// that land on the diagonal.
  template <typename Fn>
  PersistenceDiagram mapped(Fn&& fn) const {
    std::vector<Cornerpoint> out;
    for (auto p : points_) {
      p.birth = fn(p.birth);
      if (!p.at_infinity()) {
        p.death = fn(p.death);
        if (!(p.birth < p.death)) continue;
      }
      out.push_back(p);
    }
    return PersistenceDiagram(std::move(out), max_degree_);
  }

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

 private:
  std::vector<Cornerpoint> points_;
  int max_degree_ = 0;
};

/// Value of each simplex under the lower-star extension (max over vertices).
std::vector<Real> lower_star_values(const SimplicialComplex& complex, const ScalarField& phi);

/// Persistence diagram of the lower-star filtration of `phi` over Z/field,
/// by column reduction with clearing. Simplices are ordered by
/// (value, dimension, id); zero-persistence pairs are dropped.
PersistenceDiagram reduce(const SimplicialComplex& complex, const ScalarField& phi, int field = 2);

/// Persistent Betti number: rank of H_n(M_u) -> H_n(M_v), u < v (v may be
/// +infinity), by explicit elimination on cycle and boundary spaces.
/// Throws InvalidWindow if u >= v.
long pbn_oracle(const SimplicialComplex& complex, const ScalarField& phi, int degree, Real u,
                Real v, int field = 2);

/// Multiplicity of (u, v) via the four-term PBN formula, with an epsilon
/// below a quarter of the smallest gap among the critical values, u and v.
/// v = +infinity gives the multiplicity of the point at infinity.
/// Throws InvalidWindow unless u < v.
long multiplicity_oracle(const SimplicialComplex& complex, const ScalarField& phi, int degree,
                         Real u, Real v, int field = 2);

/// Diagram assembled from multiplicity_oracle over all pairs of critical
/// values. Slow; for cross-checking reduce() on small complexes.
PersistenceDiagram oracle_diagram(const SimplicialComplex& complex, const ScalarField& phi,
                                  int field = 2);

}  // namespace cohmatch
