#pragma once

#include "cohmatch/types.hpp"

#include <cstddef>
#include <vector>

namespace cohmatch {

/// Parameters (a, b) of an admissible line, with 0 < a < 1.
struct ParameterPoint {
  Real a = 0.5;
  Real b = 0.0;

  friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;
};

/// Throws InvalidArgument unless 0 < a < 1 and both coordinates are finite.
ParameterPoint make_parameter_point(Real a, Real b);

bool is_admissible(const ParameterPoint& p);

Real parameter_distance(const ParameterPoint& p, const ParameterPoint& q);

/// Axis-aligned rectangle [a_lo, a_hi] x [b_lo, b_hi] of parameter space.
struct ParameterRegion {
  Real a_lo = 1e-3;
  Real a_hi = 1.0 - 1e-3;
  Real b_lo = -1.0;
  Real b_hi = 1.0;

  bool contains(const ParameterPoint& p) const {
    return p.a >= a_lo && p.a <= a_hi && p.b >= b_lo && p.b <= b_hi;
  }
  Real a_extent() const { return a_hi - a_lo; }
  Real b_extent() const { return b_hi - b_lo; }

  friend bool operator==(const ParameterRegion&, const ParameterRegion&) = default;
};

inline constexpr Real kDefaultAMin = 1e-3;

/// a in [a_min, 1 - a_min], |b| <= bound + margin.
ParameterRegion default_region(Real bound, Real a_min = kDefaultAMin, Real margin = 1.0);

/// Throws EmptyRegion / RegionUnbounded / InvalidArgument for unusable regions.
void validate_region(const ParameterRegion& region);

/// Node (i, j) of a resolution x resolution grid including the boundary:
/// i indexes a, j indexes b.
ParameterPoint grid_node(const ParameterRegion& region, int resolution, int i, int j);

}  // namespace cohmatch
