#pragma once

// Dense linear algebra over a prime field Z/p, used by the homology oracles.
// Matrices hold representatives in [0, p).

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace cohmatch::modular {

using Matrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

bool is_prime(int p);

inline std::int64_t reduce(std::int64_t x, std::int64_t p) {
  x %= p;
  return x < 0 ? x + p : x;
}

/// Multiplicative inverse modulo a prime via Fermat's little theorem.
std::int64_t inverse(std::int64_t x, std::int64_t p);

/// Row-reduces `m` in place to reduced row echelon form; returns the pivot
/// columns in order.
std::vector<Eigen::Index> row_reduce(Matrix& m, std::int64_t p);

/// Rank of `m` over Z/p.
Eigen::Index rank(Matrix m, std::int64_t p);

/// Basis of the kernel of `m` over Z/p, one basis vector per column.
Matrix nullspace(const Matrix& m, std::int64_t p);

}  // namespace cohmatch::modular
