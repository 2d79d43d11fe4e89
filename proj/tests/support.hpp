#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.
// None of the oracles call the library routine they are used to check.

#include "cohmatch/complex.hpp"
#include "cohmatch/foliation.hpp"
#include "cohmatch/matching.hpp"
#include "cohmatch/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <vector>

namespace testing {

using namespace cohmatch;

inline Real uniform(std::mt19937_64& rng, Real lo, Real hi) {
  return std::uniform_real_distribution<Real>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random face-closed complex with at most `max_simplices` simplices (vertices
/// included): random maximal simplices of dimension <= 3 over 3..8 vertices,
/// each kept only if its closure still fits.
inline SimplicialComplex random_complex(std::mt19937_64& rng, std::size_t max_simplices = 60) {
  const int n = uniform_int(rng, 3, 8);
  std::set<Simplex> closure;
  auto add_closure = [&](const Simplex& s, std::set<Simplex>& into) {
    const int k = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      Simplex face;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) face.push_back(s[static_cast<std::size_t>(i)]);
      into.insert(face);
    }
  };
  for (int v = 0; v < n; ++v) closure.insert({v});
  const int attempts = uniform_int(rng, 1, 12);
  for (int t = 0; t < attempts; ++t) {
    const int dim = uniform_int(rng, 1, 3);
    std::vector<int> verts(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) verts[static_cast<std::size_t>(v)] = v;
    std::shuffle(verts.begin(), verts.end(), rng);
    Simplex s(verts.begin(), verts.begin() + std::min(dim + 1, n));
    std::sort(s.begin(), s.end());
    std::set<Simplex> trial = closure;
    add_closure(s, trial);
    if (trial.size() <= max_simplices) closure = std::move(trial);
  }
  std::vector<Simplex> simplices;
  for (const auto& s : closure)
    if (s.size() > 1) simplices.push_back(s);
  return build_complex(static_cast<std::size_t>(n), simplices);
}

/// Vertex values; half of the time drawn from a coarse grid so ties occur.
inline ScalarField random_field(std::mt19937_64& rng, std::size_t n) {
  const bool coarse = uniform_int(rng, 0, 1) == 0;
  ScalarField phi(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    phi(i) = coarse ? uniform_int(rng, 0, 4) * 0.5 : uniform(rng, -1.0, 1.0);
  return phi;
}

/// Up to `max_points` proper points with coordinates on a coarse grid half
/// of the time (ties and equal distances), otherwise continuous.
inline std::vector<PlanePoint> random_points(std::mt19937_64& rng, int max_points) {
  const int n = uniform_int(rng, 0, max_points);
  const bool coarse = uniform_int(rng, 0, 1) == 0;
  std::vector<PlanePoint> out;
  for (int i = 0; i < n; ++i) {
    Real u = coarse ? uniform_int(rng, 0, 6) * 0.25 : uniform(rng, 0.0, 2.0);
    Real len = coarse ? uniform_int(rng, 1, 6) * 0.25 : uniform(rng, 1e-3, 1.5);
    out.push_back({u, u + len});
  }
  return out;
}

/// Minimum over every augmented bijection of the maximum pair cost, by
/// direct recursion: left point i goes to an unused right point or to the
/// diagonal; unused right points go to the diagonal.
inline Real brute_force_bottleneck(const std::vector<PlanePoint>& left,
                                   const std::vector<PlanePoint>& right) {
  std::vector<bool> used(right.size(), false);
  Real best = std::numeric_limits<Real>::infinity();
  std::function<void(std::size_t, Real)> go = [&](std::size_t i, Real acc) {
    if (acc >= best) return;
    if (i == left.size()) {
      for (std::size_t j = 0; j < right.size(); ++j)
        if (!used[j]) acc = std::max(acc, (right[j].y() - right[j].x()) / 2);
      best = std::min(best, acc);
      return;
    }
    go(i + 1, std::max(acc, (left[i].y() - left[i].x()) / 2));
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      const Real d = std::max(std::abs(left[i].x() - right[j].x()), std::abs(left[i].y() - right[j].y()));
      go(i + 1, std::max(acc, d));
      used[j] = false;
    }
  };
  go(0, 0.0);
  return best;
}

/// Number of augmented bijections between n and m points by listing them.
inline long count_bijections(int n, int m) {
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  long count = 0;
  std::function<void(int)> go = [&](int i) {
    if (i == n) {
      ++count;
      return;
    }
    go(i + 1);
    for (int j = 0; j < m; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      go(i + 1);
      used[static_cast<std::size_t>(j)] = false;
    }
  };
  go(0);
  return count;
}

/// Rank over Z/p of a dense integer matrix by Gaussian elimination.
inline long rank_mod(std::vector<std::vector<long>> m, long p) {
  auto mod = [p](long x) { return ((x % p) + p) % p; };
  auto inv = [&](long x) {
    for (long y = 1; y < p; ++y)
      if (mod(x * y) == 1) return y;
    return 0L;
  };
  long rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && mod(m[pivot][c]) == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    const long s = inv(mod(m[r][c]));
    for (auto& x : m[r]) x = mod(x * s);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || mod(m[i][c]) == 0) continue;
      const long factor = mod(m[i][c]);
      for (std::size_t k = 0; k < cols; ++k) m[i][k] = mod(m[i][k] - factor * m[r][k]);
    }
    ++r;
    ++rank;
  }
  return rank;
}

/// Boundary matrix from dimension d to d - 1 over the simplices accepted by
/// `keep`, with coefficients (-1)^i computed from vertex lists.
inline std::vector<std::vector<long>> boundary_matrix(const SimplicialComplex& k, int d,
                                                      const std::function<bool(std::size_t)>& keep) {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t id = 0; id < k.size(); ++id) {
    if (!keep(id)) continue;
    if (k.simplex_dimension(id) == d - 1) rows.push_back(id);
    if (k.simplex_dimension(id) == d) cols.push_back(id);
  }
  std::vector<std::vector<long>> m(rows.size(), std::vector<long>(cols.size(), 0));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Simplex& s = k.simplex(cols[c]);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face = s;
      face.erase(face.begin() + static_cast<long>(i));
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (k.simplex(rows[r]) == face) m[r][c] = (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

/// Betti numbers of the subcomplex accepted by `keep`, from boundary ranks.
inline std::vector<long> betti_by_rank(const SimplicialComplex& k, long p,
                                       const std::function<bool(std::size_t)>& keep) {
  const int top = k.dimension();
  std::vector<long> ranks(static_cast<std::size_t>(top) + 2, 0);
  std::vector<long> counts(static_cast<std::size_t>(top) + 1, 0);
  for (std::size_t id = 0; id < k.size(); ++id)
    if (keep(id)) ++counts[static_cast<std::size_t>(k.simplex_dimension(id))];
  for (int d = 1; d <= top; ++d) {
    const auto m = boundary_matrix(k, d, keep);
    ranks[static_cast<std::size_t>(d)] = m.empty() ? 0 : rank_mod(m, p);
  }
  std::vector<long> betti;
  for (int d = 0; d <= top; ++d)
    betti.push_back(counts[static_cast<std::size_t>(d)] - ranks[static_cast<std::size_t>(d)] -
                    ranks[static_cast<std::size_t>(d) + 1]);
  return betti;
}

inline std::vector<long> betti_by_rank(const SimplicialComplex& k, long p = 2) {
  return betti_by_rank(k, p, [](std::size_t) { return true; });
}

/// rank(H_n(K_u) -> H_n(K_v)) = dim Z_n(K_u) - dim(Z_n(K_u) cap B_n(K_v)),
/// the intersection dimension being rank B + dim Z - rank [B; Z].
inline long persistent_betti(const SimplicialComplex& k, const ScalarField& phi, int n, Real u,
                             Real v, long p = 2) {
  auto value = [&](std::size_t id) {
    Real m = -std::numeric_limits<Real>::infinity();
    for (int x : k.simplex(id)) m = std::max(m, phi(x));
    return m;
  };
  std::vector<std::size_t> chains;  // n-simplices of K_v, indexing chain coordinates
  for (std::size_t id = 0; id < k.size(); ++id)
    if (k.simplex_dimension(id) == n && value(id) <= v) chains.push_back(id);
  if (chains.empty()) return 0;
  auto coordinate = [&](std::size_t id) {
    return static_cast<std::size_t>(std::find(chains.begin(), chains.end(), id) - chains.begin());
  };
  // Cycles of K_u: null space of the boundary restricted to n-simplices of K_u.
  std::vector<std::size_t> low;
  for (std::size_t id : chains)
    if (value(id) <= u) low.push_back(id);
  auto mod = [p](long x) { return ((x % p) + p) % p; };
  // Boundary of K_u n-chains as columns over (n-1)-simplices.
  std::vector<std::size_t> faces;
  for (std::size_t id = 0; id < k.size(); ++id)
    if (k.simplex_dimension(id) == n - 1 && value(id) <= u) faces.push_back(id);
  std::vector<std::vector<long>> d(faces.size(), std::vector<long>(low.size(), 0));
  for (std::size_t c = 0; c < low.size(); ++c) {
    const Simplex& s = k.simplex(low[c]);
    if (n == 0) break;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face = s;
      face.erase(face.begin() + static_cast<long>(i));
      for (std::size_t r = 0; r < faces.size(); ++r)
        if (k.simplex(faces[r]) == face) d[r][c] = (i % 2 == 0) ? 1 : -1;
    }
  }
  // Null space basis by reduced row echelon form.
  std::vector<std::vector<long>> cycles;
  {
    auto m = d;
    const std::size_t cols = low.size();
    std::vector<int> pivot_col;
    std::size_t r = 0;
    auto inv = [&](long x) {
      for (long y = 1; y < p; ++y)
        if (mod(x * y) == 1) return y;
      return 0L;
    };
    std::vector<int> pivot_of(cols, -1);
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
      std::size_t piv = r;
      while (piv < m.size() && mod(m[piv][c]) == 0) ++piv;
      if (piv == m.size()) continue;
      std::swap(m[piv], m[r]);
      const long s = inv(mod(m[r][c]));
      for (auto& x : m[r]) x = mod(x * s);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == r || mod(m[i][c]) == 0) continue;
        const long f = mod(m[i][c]);
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = mod(m[i][j] - f * m[r][j]);
      }
      pivot_of[c] = static_cast<int>(r);
      ++r;
    }
    for (std::size_t free = 0; free < cols; ++free) {
      if (pivot_of[free] >= 0) continue;
      std::vector<long> z(chains.size(), 0);
      z[coordinate(low[free])] = 1;
      for (std::size_t c = 0; c < cols; ++c)
        if (pivot_of[c] >= 0)
          z[coordinate(low[c])] = mod(-m[static_cast<std::size_t>(pivot_of[c])][free]);
      cycles.push_back(z);
    }
  }
  if (cycles.empty()) return 0;
  // Boundaries of K_v: images of (n+1)-simplices of K_v.
  std::vector<std::vector<long>> bounds;
  for (std::size_t id = 0; id < k.size(); ++id) {
    if (k.simplex_dimension(id) != n + 1 || value(id) > v) continue;
    std::vector<long> b(chains.size(), 0);
    const Simplex& s = k.simplex(id);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face = s;
      face.erase(face.begin() + static_cast<long>(i));
      for (std::size_t c = 0; c < chains.size(); ++c)
        if (k.simplex(chains[c]) == face) b[c] = (i % 2 == 0) ? 1 : -1;
    }
    bounds.push_back(b);
  }
  auto rank_rows = [&](const std::vector<std::vector<long>>& rows) {
    return rows.empty() ? 0L : rank_mod(rows, p);
  };
  std::vector<std::vector<long>> both = bounds;
  both.insert(both.end(), cycles.begin(), cycles.end());
  const long z = static_cast<long>(cycles.size());
  const long intersection = rank_rows(bounds) + z - rank_rows(both);
  return z - intersection;
}

/// Fine-step tracking of one proper point of Dgm(f*) from p to q in `steps`
/// uniform steps: at every step the point moves to the nearest proper point
/// of the next diagram (sup-norm); it dies if the diagonal is nearer. Returns
/// the end point, or nullopt on death.
inline std::optional<PlanePoint> fine_step_track(const SimplicialComplex& k, const Bifiltration& f,
                                                 int degree, const PlanePoint& start,
                                                 const ParameterPoint& p, const ParameterPoint& q,
                                                 int steps) {
  PlanePoint x = start;
  for (int s = 1; s <= steps; ++s) {
    const Real t = static_cast<Real>(s) / steps;
    const ParameterPoint r{p.a + t * (q.a - p.a), p.b + t * (q.b - p.b)};
    const auto points = slice_diagram(k, f, s == steps ? q : r).proper_points(degree);
    Real best = (x.y() - x.x()) / 2;
    std::optional<PlanePoint> next;
    for (const auto& y : points) {
      const Real d = (x - y).cwiseAbs().maxCoeff();
      if (d < best) {
        best = d;
        next = y;
      }
    }
    if (!next) return std::nullopt;
    x = *next;
  }
  return x;
}

}  // namespace testing
