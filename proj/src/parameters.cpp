#include "cohmatch/parameters.hpp"

#include "cohmatch/error.hpp"

#include <cmath>
#include <sstream>

namespace cohmatch {

bool is_admissible(const ParameterPoint& p) {
  return std::isfinite(p.a) && std::isfinite(p.b) && p.a > 0.0 && p.a < 1.0;
}

ParameterPoint make_parameter_point(Real a, Real b) {
  ParameterPoint p{a, b};
  if (!is_admissible(p)) {
    std::ostringstream os;
    os << "parameter point (" << a << ", " << b << ") requires 0 < a < 1 and finite b";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return p;
}

Real parameter_distance(const ParameterPoint& p, const ParameterPoint& q) {
  return std::hypot(p.a - q.a, p.b - q.b);
}

ParameterRegion default_region(Real bound, Real a_min, Real margin) {
  return ParameterRegion{a_min, 1.0 - a_min, -(bound + margin), bound + margin};
}

void validate_region(const ParameterRegion& region) {
  if (!std::isfinite(region.a_lo) || !std::isfinite(region.a_hi) ||
      !std::isfinite(region.b_lo) || !std::isfinite(region.b_hi))
    throw Error(ErrorKind::RegionUnbounded, "parameter region must be bounded");
  if (!(region.a_lo < region.a_hi) || !(region.b_lo < region.b_hi))
    throw Error(ErrorKind::EmptyRegion, "parameter region is empty");
  if (region.a_lo <= 0.0 || region.a_hi >= 1.0)
    throw Error(ErrorKind::InvalidArgument, "parameter region must satisfy 0 < a_lo < a_hi < 1");
}

ParameterPoint grid_node(const ParameterRegion& region, int resolution, int i, int j) {
  if (resolution < 2) return {0.5 * (region.a_lo + region.a_hi), 0.5 * (region.b_lo + region.b_hi)};
  const Real s = static_cast<Real>(i) / static_cast<Real>(resolution - 1);
  const Real t = static_cast<Real>(j) / static_cast<Real>(resolution - 1);
  return {region.a_lo + s * region.a_extent(), region.b_lo + t * region.b_extent()};
}

}  // namespace cohmatch
