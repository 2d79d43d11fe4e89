#include "cohmatch/complex.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/modular.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace cohmatch {

namespace {

std::string describe(const Simplex& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
  os << '}';
  return os.str();
}

Simplex without(const Simplex& s, std::size_t skip) {
  Simplex face;
  face.reserve(s.size() - 1);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != skip) face.push_back(s[i]);
  return face;
}

bool dimension_then_lex(const Simplex& x, const Simplex& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return x < y;
}

}  // namespace

std::span<const std::size_t> SimplicialComplex::ids_of_dimension(int d) const {
  if (d < 0 || d >= static_cast<int>(by_dimension_.size())) return {};
  return by_dimension_[static_cast<std::size_t>(d)];
}

std::optional<std::size_t> SimplicialComplex::find(const Simplex& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

long SimplicialComplex::euler_characteristic() const {
  long chi = 0;
  for (int d = 0; d <= dimension(); ++d)
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(count(d));
  return chi;
}

SimplicialComplex build_complex(std::size_t num_vertices, std::vector<Simplex> simplices,
                                FaceClosure mode) {
  if (num_vertices == 0) throw Error(ErrorKind::EmptyComplex, "complex has no vertices");

  std::set<Simplex> present;
  for (std::size_t v = 0; v < num_vertices; ++v) present.insert(Simplex{static_cast<int>(v)});

  std::set<Simplex> listed;
  for (const auto& s : simplices) {
    if (s.empty()) throw Error(ErrorKind::InvalidSimplex, "empty simplex");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || static_cast<std::size_t>(s[i]) >= num_vertices)
        throw Error(ErrorKind::InvalidSimplex,
                    "simplex " + describe(s) + " references an undeclared vertex");
      if (i > 0 && s[i - 1] >= s[i])
        throw Error(ErrorKind::InvalidSimplex,
                    "simplex " + describe(s) + " must list distinct vertices in increasing order");
    }
    if (!listed.insert(s).second)
      throw Error(ErrorKind::DuplicateSimplex, "simplex " + describe(s) + " listed twice");
    present.insert(s);
  }

  SimplicialComplex out;
  // Check closure top-down so lenient mode can complete recursively.
  std::vector<Simplex> pending(present.begin(), present.end());
  while (!pending.empty()) {
    Simplex s = std::move(pending.back());
    pending.pop_back();
    if (s.size() < 2) continue;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face = without(s, i);
      if (present.count(face)) continue;
      if (mode == FaceClosure::Strict)
        throw Error(ErrorKind::MissingFace,
                    "face " + describe(face) + " of " + describe(s) + " is missing");
      present.insert(face);
      pending.push_back(std::move(face));
      out.auto_completed_ = true;
    }
  }

  out.num_vertices_ = num_vertices;
  out.simplices_.assign(present.begin(), present.end());
  std::sort(out.simplices_.begin(), out.simplices_.end(), dimension_then_lex);

  for (std::size_t id = 0; id < out.simplices_.size(); ++id) {
    const auto& s = out.simplices_[id];
    out.index_.emplace(s, id);
    const std::size_t d = s.size() - 1;
    if (out.by_dimension_.size() <= d) out.by_dimension_.resize(d + 1);
    out.by_dimension_[d].push_back(id);
  }
  out.facets_.resize(out.simplices_.size());
  for (std::size_t id = 0; id < out.simplices_.size(); ++id) {
    const auto& s = out.simplices_[id];
    if (s.size() < 2) continue;
    for (std::size_t i = 0; i < s.size(); ++i) out.facets_[id].push_back(out.index_.at(without(s, i)));
  }
  return out;
}

Bifiltration::Bifiltration(VertexPairs values) : values_(std::move(values)) {
  if (!values_.allFinite())
    throw Error(ErrorKind::InvalidArgument, "bifiltration values must be finite");
}

Real sup_distance(const Bifiltration& f, const Bifiltration& g) {
  if (f.size() != g.size())
    throw Error(ErrorKind::InvalidArgument, "bifiltrations have different vertex counts");
  if (f.size() == 0) return 0.0;
  return (f.values() - g.values()).cwiseAbs().maxCoeff();
}

namespace {

modular::Matrix boundary_matrix(const SimplicialComplex& complex, int d, std::int64_t p) {
  const auto rows = complex.ids_of_dimension(d - 1);
  const auto cols = complex.ids_of_dimension(d);
  modular::Matrix m = modular::Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                                            static_cast<Eigen::Index>(cols.size()));
  if (d <= 0) return m;
  const std::size_t row_offset = rows.empty() ? 0 : rows.front();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto facets = complex.facets(cols[c]);
    for (std::size_t i = 0; i < facets.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(facets[i] - row_offset);
      m(r, static_cast<Eigen::Index>(c)) = modular::reduce(i % 2 == 0 ? 1 : -1, p);
    }
  }
  return m;
}

}  // namespace

std::vector<long> betti_numbers(const SimplicialComplex& complex, int field) {
  if (!modular::is_prime(field))
    throw Error(ErrorKind::InvalidArgument, "field characteristic must be prime");
  const int top = complex.dimension();
  std::vector<long> ranks(static_cast<std::size_t>(top) + 2, 0);
  for (int d = 1; d <= top; ++d)
    ranks[static_cast<std::size_t>(d)] =
        static_cast<long>(modular::rank(boundary_matrix(complex, d, field), field));
  std::vector<long> betti;
  for (int d = 0; d <= top; ++d) {
    const long cycles = static_cast<long>(complex.count(d)) - ranks[static_cast<std::size_t>(d)];
    betti.push_back(cycles - ranks[static_cast<std::size_t>(d) + 1]);
  }
  return betti;
}

SphereCheck validate_sphere_assumption(const SimplicialComplex& complex, int field) {
  SphereCheck check;
  check.dimension = complex.dimension();
  check.betti = betti_numbers(complex, field);
  const int m = check.dimension;
  if (m < 2) {
    check.warnings.push_back("dimension m = " + std::to_string(m) + " < 2");
  }
  for (int d = 0; d <= m; ++d) {
    const long expected = (d == 0 || d == m) ? 1 : 0;
    const long got = check.betti[static_cast<std::size_t>(d)];
    if (got != expected) {
      std::ostringstream os;
      os << "betti_" << d << " = " << got << " (a sphere has " << expected << ")";
      check.warnings.push_back(os.str());
    }
  }
  check.passed = check.warnings.empty();
  return check;
}

}  // namespace cohmatch
