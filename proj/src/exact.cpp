#include "cohmatch/error.hpp"
#include "cohmatch/foliation.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace cohmatch {

bool contraction_holds_exactly(const Bifiltration& f, const Bifiltration& g, std::size_t vertex,
                               const ParameterPoint& p) {
  using Q = boost::multiprecision::cpp_rational;
  if (vertex >= f.size() || vertex >= g.size())
    throw Error(ErrorKind::InvalidArgument, "vertex index out of range");
  const auto i = static_cast<Eigen::Index>(vertex);
  const Q a(p.a), b(p.b);
  const Q f1(f.values()(i, 0)), f2(f.values()(i, 1));
  const Q g1(g.values()(i, 0)), g2(g.values()(i, 1));
  const Q lhs = abs(slice_value<Q>(f1, f2, a, b, true) - slice_value<Q>(g1, g2, a, b, true));
  const Q rhs = std::max(Q(abs(f1 - g1)), Q(abs(f2 - g2)));
  return lhs <= rhs;
}

}  // namespace cohmatch
