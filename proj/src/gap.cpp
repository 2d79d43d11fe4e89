#include "cohmatch/complex.hpp"
#include "cohmatch/error.hpp"
#include "cohmatch/foliation.hpp"
#include "cohmatch/parallel.hpp"

#include <cmath>
#include <sstream>

namespace cohmatch {

namespace {

struct NodeGap {
  Real k = kInfinity;
  int degree = -1;
};

NodeGap node_gap(const PersistenceDiagram& dgm) {
  NodeGap best;
  for (int d = 0; d <= dgm.max_degree(); ++d) {
    const auto pts = dgm.proper_points(d);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Real di = (pts[i].y() - pts[i].x()) / std::sqrt(2.0);
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const Real dj = (pts[j].y() - pts[j].x()) / std::sqrt(2.0);
        const Real separation = (pts[i] - pts[j]).norm();
        if (separation == 0.0) return {0.0, d};
        const Real v = std::max({di, dj, separation});
        if (v < best.k) best = {v, d};
      }
    }
  }
  return best;
}

}  // namespace

GapEstimate near_diagonal_gap_estimate(const SimplicialComplex& complex, const Bifiltration& f,
                                       const ParameterRegion& region, int resolution, int field) {
  validate_region(region);
  if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2");
  const auto n = static_cast<std::size_t>(resolution);
  const auto gaps = parallel_map(n * n, [&](std::size_t k) {
    const ParameterPoint p = grid_node(region, resolution, static_cast<int>(k / n),
                                       static_cast<int>(k % n));
    return node_gap(slice_diagram(complex, f, p, true, field));
  });
  GapEstimate out;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (gaps[k].k < out.k) {
      out.k = gaps[k].k;
      out.witness_degree = gaps[k].degree;
      out.witness = grid_node(region, resolution, static_cast<int>(k / n), static_cast<int>(k % n));
    }
  }
  if (out.k == 0.0) {
    std::ostringstream os;
    os << "coincident cornerpoints in degree " << out.witness_degree << " at (a, b) = ("
       << out.witness.a << ", " << out.witness.b << "); the near-diagonal gap assumption may fail";
    out.warning = true;
    out.message = os.str();
  }
  return out;
}

}  // namespace cohmatch
