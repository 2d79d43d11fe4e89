#pragma once

#include <Eigen/Core>

#include <limits>

namespace cohmatch {

using Real = double;

/// A point of the (birth, death) plane. Death may be +infinity.
using PlanePoint = Eigen::Matrix<Real, 2, 1>;

/// Per-vertex real values of a scalar function on a complex.
using ScalarField = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Per-vertex value pairs (f1, f2), one row per vertex.
using VertexPairs = Eigen::Matrix<Real, Eigen::Dynamic, 2>;

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();

}  // namespace cohmatch
