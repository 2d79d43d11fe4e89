#include "cohmatch/foliation.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/parallel.hpp"

#include <Eigen/LU>

#include <array>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace cohmatch {

ScalarField slice_function(const Bifiltration& f, const ParameterPoint& p, bool normalized) {
  if (!is_admissible(p))
    throw Error(ErrorKind::InvalidArgument, "slice parameter must satisfy 0 < a < 1");
  return slice_values(f.values(), p.a, p.b, normalized);
}

PersistenceDiagram slice_diagram(const SimplicialComplex& complex, const Bifiltration& f,
                                 const ParameterPoint& p, bool normalized, int field) {
  return reduce(complex, slice_function(f, p, normalized), field);
}

Real b_bound(const Bifiltration& f) {
  return f.size() == 0 ? 0.0 : f.values().cwiseAbs().maxCoeff();
}

Real b_bound(const Bifiltration& f, const Bifiltration& g) {
  return std::max(b_bound(f), b_bound(g));
}

Real sup_norm_difference(const ScalarField& phi, const ScalarField& psi) {
  if (phi.size() != psi.size())
    throw Error(ErrorKind::InvalidArgument, "scalar fields have different sizes");
  return phi.size() == 0 ? 0.0 : (phi - psi).cwiseAbs().maxCoeff();
}

namespace {

using Array = Eigen::Array<Real, Eigen::Dynamic, 1>;

struct Interval {
  Array lo, hi;
};

// Enclosure of r * w over r in [r0, r1], w in [w0, w1] (elementwise w).
Interval product(Real r0, Real r1, const Array& w0, const Array& w1) {
  const Array p00 = r0 * w0, p01 = r0 * w1, p10 = r1 * w0, p11 = r1 * w1;
  return {p00.min(p01).min(p10).min(p11), p00.max(p01).max(p10).max(p11)};
}

// a in [a0, a1] entirely on one side of 1/2.
Interval half_enclosure(const Bifiltration& f, Real a0, Real a1, Real b0, Real b1) {
  const Array x1 = f.f1().array();
  const Array x2 = f.f2().array();
  if (a1 <= 0.5) {
    // f* = max(f1 - b, a / (1 - a) * (f2 + b))
    const Interval second = product(a0 / (1.0 - a0), a1 / (1.0 - a1), x2 + b0, x2 + b1);
    return {(x1 - b1).max(second.lo), (x1 - b0).max(second.hi)};
  }
  // f* = max((1 - a) / a * (f1 - b), f2 + b)
  const Interval first = product((1.0 - a1) / a1, (1.0 - a0) / a0, x1 - b1, x1 - b0);
  return {first.lo.max(x2 + b0), first.hi.max(x2 + b1)};
}

}  // namespace

ValueEnclosure slice_enclosure(const Bifiltration& f, const ParameterRegion& cell) {
  Interval box;
  if (cell.a_hi <= 0.5 || cell.a_lo >= 0.5) {
    box = half_enclosure(f, cell.a_lo, cell.a_hi, cell.b_lo, cell.b_hi);
  } else {
    const Interval left = half_enclosure(f, cell.a_lo, 0.5, cell.b_lo, cell.b_hi);
    const Interval right = half_enclosure(f, 0.5, cell.a_hi, cell.b_lo, cell.b_hi);
    box = {left.lo.min(right.lo), left.hi.max(right.hi)};
  }
  constexpr Real kPad = 1e-12;
  ValueEnclosure out;
  out.lo = (box.lo - kPad * (1.0 + box.lo.abs())).matrix();
  out.hi = (box.hi + kPad * (1.0 + box.hi.abs())).matrix();
  return out;
}

Real drift_bound(const Bifiltration& f, const ParameterPoint& p, const ParameterRegion& cell) {
  if (f.size() == 0) return 0.0;
  const ValueEnclosure e = slice_enclosure(f, cell);
  const ScalarField v = slice_function(f, p, true);
  return std::max((e.hi - v).maxCoeff(), (v - e.lo).maxCoeff());
}

Real separation(const std::vector<PlanePoint>& points) {
  Real best = kInfinity;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, (points[i] - points[j]).cwiseAbs().maxCoeff());
  return best;
}

Real slice_separation(const SimplicialComplex& complex, const Bifiltration& f,
                      const ParameterPoint& p, int degree, int field) {
  return separation(slice_diagram(complex, f, p, true, field).proper_points(degree));
}

Eigen::MatrixXd separation_grid(const SimplicialComplex& complex, const Bifiltration& f,
                                const ParameterRegion& region, int resolution, int degree,
                                int field) {
  validate_region(region);
  if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2");
  const auto n = static_cast<std::size_t>(resolution);
  const auto values = parallel_map(n * n, [&](std::size_t k) {
    const int i = static_cast<int>(k / n), j = static_cast<int>(k % n);
    return slice_separation(complex, f, grid_node(region, resolution, i, j), degree, field);
  });
  Eigen::MatrixXd grid(resolution, resolution);
  for (std::size_t k = 0; k < values.size(); ++k)
    grid(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = values[k];
  return grid;
}

namespace {

ParameterRegion clipped_box(const ParameterPoint& c, Real ha, Real hb, const ParameterRegion& r) {
  return {std::max(r.a_lo, c.a - ha), std::min(r.a_hi, c.a + ha), std::max(r.b_lo, c.b - hb),
          std::min(r.b_hi, c.b + hb)};
}

struct Refined {
  ParameterPoint center;
  Real separation = kInfinity;
  Real drift = 0.0;
};

std::vector<PlanePoint> proper_at(const SimplicialComplex& complex, const Bifiltration& f,
                                  const ParameterPoint& p, int degree, int field) {
  return slice_diagram(complex, f, p, true, field).proper_points(degree);
}

// Difference of the closest pair of points and its indices.
struct ClosestPair {
  int i = -1, j = -1;
  PlanePoint difference{0, 0};
};

ClosestPair closest_pair(const std::vector<PlanePoint>& pts) {
  ClosestPair out;
  Real best = kInfinity;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(pts.size()); ++j) {
      const PlanePoint d = pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)];
      if (d.cwiseAbs().maxCoeff() < best) {
        best = d.cwiseAbs().maxCoeff();
        out = {i, j, d};
      }
    }
  return out;
}

int nearest(const std::vector<PlanePoint>& pts, const PlanePoint& x, int skip) {
  int best = -1;
  Real best_d = kInfinity;
  for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
    const Real d = (pts[static_cast<std::size_t>(k)] - x).cwiseAbs().maxCoeff();
    if (k != skip && d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

// Newton step on the difference of the closest pair, which is affine in
// (a, b) away from changes of the vertex order. Empty if it cannot be formed.
std::optional<ParameterPoint> newton_step(const SimplicialComplex& complex, const Bifiltration& f,
                                          const SingularSearch& s, const ParameterPoint& c,
                                          Real ha, Real hb) {
  const auto pts = proper_at(complex, f, c, s.degree, s.field);
  const ClosestPair cp = closest_pair(pts);
  if (cp.i < 0 || cp.difference.isZero()) return std::nullopt;
  const PlanePoint x = pts[static_cast<std::size_t>(cp.i)], y = pts[static_cast<std::size_t>(cp.j)];
  Eigen::Matrix2d jac;
  const std::array<ParameterPoint, 2> dirs{ParameterPoint{1e-3 * ha, 0.0},
                                           ParameterPoint{0.0, 1e-3 * hb}};
  for (int k = 0; k < 2; ++k) {
    const Real h = k == 0 ? dirs[0].a : dirs[1].b;
    ParameterPoint q{c.a + dirs[static_cast<std::size_t>(k)].a, c.b + dirs[static_cast<std::size_t>(k)].b};
    if (!s.region.contains(q)) return std::nullopt;
    const auto moved = proper_at(complex, f, q, s.degree, s.field);
    const int xi = nearest(moved, x, -1);
    const int yi = nearest(moved, y, xi);
    if (xi < 0 || yi < 0) return std::nullopt;
    jac.col(k) = (moved[static_cast<std::size_t>(xi)] - moved[static_cast<std::size_t>(yi)] -
                  cp.difference) /
                 h;
  }
  if (std::abs(jac.determinant()) < 1e-300) return std::nullopt;
  const Eigen::Vector2d step = jac.partialPivLu().solve(-cp.difference);
  if (!step.allFinite()) return std::nullopt;
  const ParameterPoint q{std::clamp(c.a + step(0), s.region.a_lo, s.region.a_hi),
                         std::clamp(c.b + step(1), s.region.b_lo, s.region.b_hi)};
  if (!is_admissible(q)) return std::nullopt;
  return q;
}

Refined refine(const SimplicialComplex& complex, const Bifiltration& f, const SingularSearch& s,
               ParameterPoint center, Real separation_at_center) {
  const Real cell_a = s.region.a_extent() / (s.resolution - 1);
  const Real cell_b = s.region.b_extent() / (s.resolution - 1);
  Real ha = cell_a, hb = cell_b;
  Refined best{center, separation_at_center, 0.0};
  constexpr int kSub = 5;
  // Pattern search: recentre on the best node, shrink the box when the
  // centre is already best.
  for (int iter = 0; iter < 400 && std::hypot(ha, hb) > s.localization_radius; ++iter) {
    if (best.separation > 0.0) {
      if (const auto q = newton_step(complex, f, s, best.center, ha, hb)) {
        const Real sep = slice_separation(complex, f, *q, s.degree, s.field);
        if (sep < best.separation) {
          best = {*q, sep, 0.0};
          continue;
        }
      }
    }
    const ParameterRegion box = clipped_box(best.center, ha, hb, s.region);
    bool moved = false;
    for (int i = 0; i < kSub; ++i) {
      for (int j = 0; j < kSub; ++j) {
        const ParameterPoint q = grid_node(box, kSub, i, j);
        const Real sep = slice_separation(complex, f, q, s.degree, s.field);
        if (sep < best.separation) {
          best = {q, sep, 0.0};
          moved = true;
        }
      }
    }
    if (!moved || best.separation == 0.0) {
      ha *= 0.5;
      hb *= 0.5;
    }
  }
  best.drift = drift_bound(f, best.center, clipped_box(best.center, ha, hb, s.region));
  return best;
}

}  // namespace

SingularSet detect_singular_pairs(const SimplicialComplex& complex, const Bifiltration& f,
                                  const SingularSearch& search, const std::string& label) {
  validate_region(search.region);
  if (!(search.localization_radius > 0.0))
    throw Error(ErrorKind::InvalidArgument, "localization radius must be positive");
  const Eigen::MatrixXd grid =
      separation_grid(complex, f, search.region, search.resolution, search.degree, search.field);
  const int n = search.resolution;

  std::vector<std::pair<int, int>> candidates;
  int zero_nodes = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Real v = grid(i, j);
      if (v == 0.0) ++zero_nodes;
      if (!std::isfinite(v)) continue;
      if (!(v < search.threshold)) {
        // Above the threshold, but the cell around the node may still hold a zero.
        const ParameterPoint p = grid_node(search.region, n, i, j);
        const ParameterRegion cell = clipped_box(p, search.region.a_extent() / (n - 1),
                                                 search.region.b_extent() / (n - 1), search.region);
        if (!(v <= 2.0 * drift_bound(f, p, cell))) continue;
      }
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1 && is_min; ++dj) {
          const int ii = i + di, jj = j + dj;
          if ((di || dj) && ii >= 0 && jj >= 0 && ii < n && jj < n && grid(ii, jj) < v)
            is_min = false;
        }
      if (is_min) candidates.emplace_back(i, j);
    }
  }

  const auto refined = parallel_map(candidates.size(), [&](std::size_t k) {
    const auto [i, j] = candidates[k];
    return refine(complex, f, search, grid_node(search.region, n, i, j), grid(i, j));
  });

  std::vector<Refined> kept;
  for (const auto& r : refined)
    if (r.separation <= 2.0 * r.drift) kept.push_back(r);
  std::stable_sort(kept.begin(), kept.end(), [](const Refined& x, const Refined& y) {
    return x.separation < y.separation;
  });

  SingularSet out;
  const Real radius = search.localization_radius;
  for (const auto& r : kept) {
    bool duplicate = false;
    for (const auto& sp : out.pairs)
      if (parameter_distance(sp.center, r.center) <= 2.0 * radius) duplicate = true;
    if (duplicate) continue;
    out.pairs.push_back({r.center, radius, label, search.degree, r.separation});
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const SingularPair& x, const SingularPair& y) {
    return std::tie(x.center.a, x.center.b) < std::tie(y.center.a, y.center.b);
  });

  if (zero_nodes > 1) {
    std::ostringstream os;
    os << label << ": separation vanishes at " << zero_nodes
       << " grid nodes; singular pairs may not be isolated";
    out.warnings.push_back(os.str());
  }
  if (out.pairs.size() > static_cast<std::size_t>(n)) {
    out.warnings.push_back(label + ": many singular candidates; the function may not be normal");
  }
  return out;
}

}  // namespace cohmatch
