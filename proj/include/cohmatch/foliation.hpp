#pragma once

#include "cohmatch/complex.hpp"
#include "cohmatch/parameters.hpp"
#include "cohmatch/persistence.hpp"
#include "cohmatch/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <string>
#include <vector>

namespace cohmatch {

/// Point t * (a, 1 - a) + (b, -b) of the admissible line r_{a,b}.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> line_point(Scalar a, Scalar b, Scalar t) {
  return {t * a + b, t * (Scalar(1) - a) - b};
}

inline PlanePoint line_point(const ParameterPoint& p, Real t) { return line_point(p.a, p.b, t); }

/// max{(f1 - b) / a, (f2 + b) / (1 - a)}, multiplied by min{a, 1 - a} when
/// normalized. The normalized value is always computed as that product of
/// the unnormalized value, so both variants round consistently.
template <typename Scalar>
Scalar slice_value(const Scalar& f1, const Scalar& f2, const Scalar& a, const Scalar& b,
                   bool normalized) {
  const Scalar one(1);
  const Scalar first = (f1 - b) / a;
  const Scalar second = (f2 + b) / (one - a);
  const Scalar raw = first < second ? second : first;
  if (!normalized) return raw;
  const Scalar scale = a < one - a ? a : one - a;
  return scale * raw;
}

/// Per-vertex slice values of an n x 2 matrix of (f1, f2) pairs.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> slice_values(
    const Eigen::MatrixBase<Derived>& pairs, const typename Derived::Scalar& a,
    const typename Derived::Scalar& b, bool normalized) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(pairs.rows());
  for (Eigen::Index i = 0; i < pairs.rows(); ++i)
    out(i) = slice_value<Scalar>(pairs(i, 0), pairs(i, 1), a, b, normalized);
  return out;
}

/// f_{a,b} (or f*_{a,b} when normalized) at every vertex.
ScalarField slice_function(const Bifiltration& f, const ParameterPoint& p, bool normalized = true);

PersistenceDiagram slice_diagram(const SimplicialComplex& complex, const Bifiltration& f,
                                 const ParameterPoint& p, bool normalized = true, int field = 2);

/// K = max over vertices of max(|f1|, |f2|, |g1|, |g2|).
Real b_bound(const Bifiltration& f, const Bifiltration& g);
Real b_bound(const Bifiltration& f);

/// Max-vertex |phi - psi|.
Real sup_norm_difference(const ScalarField& phi, const ScalarField& psi);

/// |f*_p - g*_p| <= max(|f1 - g1|, |f2 - g2|) at one vertex, decided in
/// exact rational arithmetic on the stored values.
bool contraction_holds_exactly(const Bifiltration& f, const Bifiltration& g, std::size_t vertex,
                               const ParameterPoint& p);

/// Interval enclosure [lo, hi] of f*_{a,b} at every vertex over a closed cell
/// of parameter space, padded outward for rounding.
struct ValueEnclosure {
  ScalarField lo;
  ScalarField hi;
};

ValueEnclosure slice_enclosure(const Bifiltration& f, const ParameterRegion& cell);

/// Upper bound on max-vertex |f*_p - f*_q| over all q in `cell`.
Real drift_bound(const Bifiltration& f, const ParameterPoint& p, const ParameterRegion& cell);

/// Minimum pairwise sup-norm distance among the points; +infinity for fewer
/// than two points. Repeated points give 0.
Real separation(const std::vector<PlanePoint>& points);

/// separation() of the proper points of Dgm(f*_p) in `degree`.
Real slice_separation(const SimplicialComplex& complex, const Bifiltration& f,
                      const ParameterPoint& p, int degree, int field = 2);

/// Separation on a resolution x resolution grid of the region; entry (i, j)
/// belongs to grid_node(region, resolution, i, j).
Eigen::MatrixXd separation_grid(const SimplicialComplex& complex, const Bifiltration& f,
                                const ParameterRegion& region, int resolution, int degree,
                                int field = 2);

struct SingularPair {
  ParameterPoint center;
  Real radius = 0.0;
  std::string which;  ///< label of the function ("f" or "g")
  int degree = 0;
  Real separation = 0.0;
};

struct SingularSet {
  std::vector<SingularPair> pairs;
  std::vector<std::string> warnings;
};

struct SingularSearch {
  ParameterRegion region;
  int resolution = 32;
  /// Grid local minima below this separation are refined, as are those
  /// within twice the drift over the surrounding grid cell.
  Real threshold = kInfinity;
  /// Refinement stops once the search box half-diagonal is below this.
  Real localization_radius = 1e-3;
  int degree = 0;
  int field = 2;
};

/// Locates parameter pairs where two proper cornerpoints of Dgm(f*) collide.
/// Grid local minima of the separation below the threshold (or low enough
/// that the neighbouring cell may contain a collision) are refined by
/// recursive bisection; a candidate is kept when its separation does not
/// exceed twice the certified drift over the final box (so a collision
/// inside the box cannot be excluded). Throws RegionUnbounded / EmptyRegion.
SingularSet detect_singular_pairs(const SimplicialComplex& complex, const Bifiltration& f,
                                  const SingularSearch& search, const std::string& label = "f");

}  // namespace cohmatch
