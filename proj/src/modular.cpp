#include "cohmatch/modular.hpp"

namespace cohmatch::modular {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::int64_t inverse(std::int64_t x, std::int64_t p) {
  std::int64_t result = 1;
  std::int64_t base = reduce(x, p);
  std::int64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

std::vector<Eigen::Index> row_reduce(Matrix& m, std::int64_t p) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index found = -1;
    for (Eigen::Index r = row; r < m.rows(); ++r) {
      if (m(r, col) != 0) {
        found = r;
        break;
      }
    }
    if (found < 0) continue;
    m.row(row).swap(m.row(found));
    const std::int64_t inv = inverse(m(row, col), p);
    for (Eigen::Index c = col; c < m.cols(); ++c) m(row, c) = m(row, c) * inv % p;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const std::int64_t factor = m(r, col);
      for (Eigen::Index c = col; c < m.cols(); ++c)
        m(r, c) = reduce(m(r, c) - factor * m(row, c), p);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Eigen::Index rank(Matrix m, std::int64_t p) {
  return static_cast<Eigen::Index>(row_reduce(m, p).size());
}

Matrix nullspace(const Matrix& m, std::int64_t p) {
  Matrix reduced = m;
  const auto pivots = row_reduce(reduced, p);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (auto c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;

  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);

  Matrix basis = Matrix::Zero(m.cols(), static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const Eigen::Index fc = free_cols[k];
    const auto col = static_cast<Eigen::Index>(k);
    basis(fc, col) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      basis(pivots[r], col) = reduce(-reduced(static_cast<Eigen::Index>(r), fc), p);
  }
  return basis;
}

}  // namespace cohmatch::modular
