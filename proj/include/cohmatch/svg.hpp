#pragma once

#include "cohmatch/parameters.hpp"
#include "cohmatch/persistence.hpp"
#include "cohmatch/transport.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace cohmatch {

/// Scatter of the cornerpoints, one colour per degree; points at infinity
/// are drawn on a line above the finite ones.
std::string diagram_svg(const PersistenceDiagram& d, const std::string& title = "");

/// Birth and death of every track against tau; diagonal stretches dashed.
std::string vineyard_svg(const std::vector<CornerpointTrack>& tracks,
                         const std::string& title = "");

/// Separation grid as a heat map (darker is smaller), infinite cells blank,
/// with optional markers.
std::string heatmap_svg(const ParameterRegion& region, const Eigen::MatrixXd& grid,
                        const std::vector<ParameterPoint>& markers = {},
                        const std::string& title = "");

}  // namespace cohmatch
