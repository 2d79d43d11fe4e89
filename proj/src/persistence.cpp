#include "cohmatch/persistence.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/modular.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <utility>

namespace cohmatch {

PersistenceDiagram::PersistenceDiagram(std::vector<Cornerpoint> points, int max_degree)
    : max_degree_(max_degree) {
  std::sort(points.begin(), points.end(), [](const Cornerpoint& x, const Cornerpoint& y) {
    return std::tie(x.degree, x.birth, x.death) < std::tie(y.degree, y.birth, y.death);
  });
  for (const auto& p : points) {
    if (p.multiplicity <= 0) continue;
    if (!points_.empty() && points_.back().degree == p.degree && points_.back().birth == p.birth &&
        points_.back().death == p.death) {
      points_.back().multiplicity += p.multiplicity;
    } else {
      points_.push_back(p);
    }
    max_degree_ = std::max(max_degree_, p.degree);
  }
}

std::vector<PlanePoint> PersistenceDiagram::proper_points(int degree) const {
  std::vector<PlanePoint> out;
  for (const auto& p : points_) {
    if (p.degree != degree || p.at_infinity()) continue;
    for (int k = 0; k < p.multiplicity; ++k) out.emplace_back(p.birth, p.death);
  }
  return out;
}

std::vector<Real> PersistenceDiagram::essential_births(int degree) const {
  std::vector<Real> out;
  for (const auto& p : points_) {
    if (p.degree != degree || !p.at_infinity()) continue;
    for (int k = 0; k < p.multiplicity; ++k) out.push_back(p.birth);
  }
  return out;
}

std::size_t PersistenceDiagram::proper_count(int degree) const {
  std::size_t n = 0;
  for (const auto& p : points_)
    if (p.degree == degree && !p.at_infinity()) n += static_cast<std::size_t>(p.multiplicity);
  return n;
}

std::size_t PersistenceDiagram::essential_count(int degree) const {
  std::size_t n = 0;
  for (const auto& p : points_)
    if (p.degree == degree && p.at_infinity()) n += static_cast<std::size_t>(p.multiplicity);
  return n;
}

std::vector<Real> lower_star_values(const SimplicialComplex& complex, const ScalarField& phi) {
  if (static_cast<std::size_t>(phi.size()) != complex.num_vertices())
    throw Error(ErrorKind::InvalidArgument, "scalar field size does not match vertex count");
  std::vector<Real> values(complex.size());
  for (std::size_t id = 0; id < complex.size(); ++id) {
    Real m = -kInfinity;
    for (int v : complex.simplex(id)) m = std::max(m, phi(v));
    values[id] = m;
  }
  return values;
}

namespace {

struct Entry {
  std::size_t row;
  std::int64_t coef;
};
using Column = std::vector<Entry>;

// target += factor * source, both sorted by row.
void add_scaled(Column& target, const Column& source, std::int64_t factor, std::int64_t p) {
  Column merged;
  merged.reserve(target.size() + source.size());
  std::size_t i = 0, j = 0;
  while (i < target.size() || j < source.size()) {
    if (j == source.size() || (i < target.size() && target[i].row < source[j].row)) {
      merged.push_back(target[i++]);
    } else if (i == target.size() || source[j].row < target[i].row) {
      merged.push_back({source[j].row, factor * source[j].coef % p});
      ++j;
    } else {
      const std::int64_t c = (target[i].coef + factor * source[j].coef) % p;
      if (c != 0) merged.push_back({target[i].row, c});
      ++i;
      ++j;
    }
  }
  target = std::move(merged);
}

void check_field(int field) {
  if (!modular::is_prime(field) || field > 46337)
    throw Error(ErrorKind::InvalidArgument, "field characteristic must be a prime below 46337");
}

}  // namespace

PersistenceDiagram reduce(const SimplicialComplex& complex, const ScalarField& phi, int field) {
  check_field(field);
  const auto values = lower_star_values(complex, phi);
  const std::size_t n = complex.size();
  const std::int64_t p = field;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const int dx = complex.simplex_dimension(x), dy = complex.simplex_dimension(y);
    return std::tie(values[x], dx, x) < std::tie(values[y], dy, y);
  });
  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;

  // Columns indexed by filtration position.
  std::vector<Column> columns(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto facets = complex.facets(order[k]);
    Column& col = columns[k];
    for (std::size_t i = 0; i < facets.size(); ++i)
      col.push_back({position[facets[i]], modular::reduce(i % 2 == 0 ? 1 : -1, p)});
    std::sort(col.begin(), col.end(), [](const Entry& x, const Entry& y) { return x.row < y.row; });
  }

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pivot_column(n, kNone);  // low row -> column
  std::vector<bool> cleared(n, false);
  std::vector<bool> is_low(n, false);

  for (int d = complex.dimension(); d >= 1; --d) {
    for (std::size_t k = 0; k < n; ++k) {
      if (complex.simplex_dimension(order[k]) != d || cleared[k]) continue;
      Column& col = columns[k];
      while (!col.empty()) {
        const std::size_t low = col.back().row;
        const std::size_t other = pivot_column[low];
        if (other == kNone) break;
        const Column& src = columns[other];
        const std::int64_t factor =
            modular::reduce(-col.back().coef * modular::inverse(src.back().coef, p) % p, p);
        add_scaled(col, src, factor, p);
      }
      if (!col.empty()) {
        const std::size_t low = col.back().row;
        pivot_column[low] = k;
        is_low[low] = true;
        cleared[low] = true;
        columns[low].clear();
      }
    }
  }

  std::vector<Cornerpoint> points;
  for (std::size_t row = 0; row < n; ++row) {
    const int deg = complex.simplex_dimension(order[row]);
    if (is_low[row]) {
      const Real birth = values[order[row]];
      const Real death = values[order[pivot_column[row]]];
      if (birth < death) points.push_back({birth, death, deg, 1});
    } else if (columns[row].empty() && !cleared[row]) {
      points.push_back({values[order[row]], kInfinity, deg, 1});
    }
  }
  return PersistenceDiagram(std::move(points), std::max(complex.dimension(), 0));
}

namespace {

// Columns: chains of `degree`-simplices listed in `ids`, in coordinates of all
// degree-simplices.
modular::Matrix cycle_basis(const SimplicialComplex& complex, int degree,
                            const std::vector<std::size_t>& ids, std::int64_t p) {
  const auto all = complex.ids_of_dimension(degree);
  const auto rows = static_cast<Eigen::Index>(all.size());
  const std::size_t offset = all.empty() ? 0 : all.front();
  if (ids.empty()) return modular::Matrix::Zero(rows, 0);

  modular::Matrix kernel;
  if (degree == 0) {
    kernel = modular::Matrix::Identity(static_cast<Eigen::Index>(ids.size()),
                                       static_cast<Eigen::Index>(ids.size()));
  } else {
    const auto faces = complex.ids_of_dimension(degree - 1);
    const std::size_t face_offset = faces.front();
    modular::Matrix boundary = modular::Matrix::Zero(static_cast<Eigen::Index>(faces.size()),
                                                     static_cast<Eigen::Index>(ids.size()));
    for (std::size_t c = 0; c < ids.size(); ++c) {
      const auto facets = complex.facets(ids[c]);
      for (std::size_t i = 0; i < facets.size(); ++i)
        boundary(static_cast<Eigen::Index>(facets[i] - face_offset), static_cast<Eigen::Index>(c)) =
            modular::reduce(i % 2 == 0 ? 1 : -1, p);
    }
    kernel = modular::nullspace(boundary, p);
  }

  modular::Matrix embedded = modular::Matrix::Zero(rows, kernel.cols());
  for (std::size_t r = 0; r < ids.size(); ++r)
    embedded.row(static_cast<Eigen::Index>(ids[r] - offset)) = kernel.row(static_cast<Eigen::Index>(r));
  return embedded;
}

modular::Matrix boundary_columns(const SimplicialComplex& complex, int degree,
                                 const std::vector<std::size_t>& ids, std::int64_t p) {
  const auto all = complex.ids_of_dimension(degree - 1);
  const std::size_t offset = all.empty() ? 0 : all.front();
  modular::Matrix m = modular::Matrix::Zero(static_cast<Eigen::Index>(all.size()),
                                            static_cast<Eigen::Index>(ids.size()));
  for (std::size_t c = 0; c < ids.size(); ++c) {
    const auto facets = complex.facets(ids[c]);
    for (std::size_t i = 0; i < facets.size(); ++i)
      m(static_cast<Eigen::Index>(facets[i] - offset), static_cast<Eigen::Index>(c)) =
          modular::reduce(i % 2 == 0 ? 1 : -1, p);
  }
  return m;
}

std::vector<std::size_t> sublevel_ids(const SimplicialComplex& complex,
                                      const std::vector<Real>& values, int degree, Real level) {
  std::vector<std::size_t> ids;
  for (auto id : complex.ids_of_dimension(degree))
    if (values[id] <= level) ids.push_back(id);
  return ids;
}

long pbn_from_values(const SimplicialComplex& complex, const std::vector<Real>& values, int degree,
                     Real u, Real v, std::int64_t p) {
  if (degree < 0 || degree > complex.dimension()) return 0;
  const modular::Matrix cycles =
      cycle_basis(complex, degree, sublevel_ids(complex, values, degree, u), p);
  if (cycles.cols() == 0) return 0;
  const modular::Matrix boundaries =
      boundary_columns(complex, degree + 1, sublevel_ids(complex, values, degree + 1, v), p);
  modular::Matrix stacked(cycles.rows(), cycles.cols() + boundaries.cols());
  stacked << cycles, boundaries;
  return static_cast<long>(modular::rank(stacked, p) - modular::rank(boundaries, p));
}

// Smallest positive gap among the distinct finite values in `xs`.
Real smallest_gap(std::vector<Real> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  Real gap = kInfinity;
  for (std::size_t i = 1; i < xs.size(); ++i) gap = std::min(gap, xs[i] - xs[i - 1]);
  return std::isfinite(gap) ? gap : 1.0;
}

std::vector<Real> critical_values(const ScalarField& phi) {
  std::vector<Real> xs(phi.data(), phi.data() + phi.size());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

long multiplicity_from_values(const SimplicialComplex& complex, const std::vector<Real>& values,
                              const std::vector<Real>& critical, int degree, Real u, Real v,
                              std::int64_t p) {
  std::vector<Real> xs = critical;
  xs.push_back(u);
  if (std::isfinite(v)) xs.push_back(v);
  const Real eps = smallest_gap(std::move(xs)) / 4.0;
  auto beta = [&](Real x, Real y) { return pbn_from_values(complex, values, degree, x, y, p); };
  if (!std::isfinite(v)) return beta(u + eps, kInfinity) - beta(u - eps, kInfinity);
  return beta(u + eps, v - eps) - beta(u - eps, v - eps) - beta(u + eps, v + eps) +
         beta(u - eps, v + eps);
}

}  // namespace

long pbn_oracle(const SimplicialComplex& complex, const ScalarField& phi, int degree, Real u,
                Real v, int field) {
  check_field(field);
  if (!(u < v)) throw Error(ErrorKind::InvalidWindow, "persistent Betti number requires u < v");
  return pbn_from_values(complex, lower_star_values(complex, phi), degree, u, v, field);
}

long multiplicity_oracle(const SimplicialComplex& complex, const ScalarField& phi, int degree,
                         Real u, Real v, int field) {
  check_field(field);
  if (!std::isfinite(u) || !(u < v))
    throw Error(ErrorKind::InvalidWindow, "multiplicity requires finite u < v");
  return multiplicity_from_values(complex, lower_star_values(complex, phi), critical_values(phi),
                                  degree, u, v, field);
}

PersistenceDiagram oracle_diagram(const SimplicialComplex& complex, const ScalarField& phi,
                                  int field) {
  check_field(field);
  const auto values = lower_star_values(complex, phi);
  const auto critical = critical_values(phi);
  std::vector<Cornerpoint> points;
  for (int degree = 0; degree <= complex.dimension(); ++degree) {
    for (std::size_t i = 0; i < critical.size(); ++i) {
      const Real u = critical[i];
      for (std::size_t j = i + 1; j < critical.size(); ++j) {
        const long mu =
            multiplicity_from_values(complex, values, critical, degree, u, critical[j], field);
        if (mu > 0) points.push_back({u, critical[j], degree, static_cast<int>(mu)});
      }
      const long mu_inf =
          multiplicity_from_values(complex, values, critical, degree, u, kInfinity, field);
      if (mu_inf > 0) points.push_back({u, kInfinity, degree, static_cast<int>(mu_inf)});
    }
  }
  return PersistenceDiagram(std::move(points), std::max(complex.dimension(), 0));
}

}  // namespace cohmatch
