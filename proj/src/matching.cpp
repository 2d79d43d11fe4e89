#include "cohmatch/matching.hpp"

#include "cohmatch/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace cohmatch {

Real point_distance(const std::optional<Cornerpoint>& x, const std::optional<Cornerpoint>& y) {
  if (x && y && x->degree != y->degree)
    throw Error(ErrorKind::DegreeMismatch, "cornerpoints of different degrees");
  if (!x && !y) return 0.0;
  if (!x || !y) {
    const Cornerpoint& p = x ? *x : *y;
    return p.at_infinity() ? kInfinity : diagonal_distance(p.point());
  }
  if (x->at_infinity() != y->at_infinity()) return kInfinity;
  if (x->at_infinity()) return std::abs(x->birth - y->birth);
  return proper_distance(x->point(), y->point());
}

Real Matching::pair_cost(const std::pair<MatchSlot, MatchSlot>& pair) const {
  const auto& [l, r] = pair;
  if (l.diagonal && r.diagonal) return 0.0;
  if (l.diagonal) return diagonal_distance(right[static_cast<std::size_t>(r.index)]);
  if (r.diagonal) return diagonal_distance(left[static_cast<std::size_t>(l.index)]);
  return proper_distance(left[static_cast<std::size_t>(l.index)],
                         right[static_cast<std::size_t>(r.index)]);
}

MatchSlot Matching::partner_of_left(int i) const {
  for (const auto& [l, r] : pairs)
    if (!l.diagonal && l.index == i) return r;
  throw Error(ErrorKind::InvalidArgument, "left point is not matched");
}

MatchSlot Matching::partner_of_right(int j) const {
  for (const auto& [l, r] : pairs)
    if (!r.diagonal && r.index == j) return l;
  throw Error(ErrorKind::InvalidArgument, "right point is not matched");
}

Real cost(const Matching& m) {
  Real c = 0.0;
  for (const auto& pair : m.pairs) c = std::max(c, m.pair_cost(pair));
  for (const auto& [i, j] : m.essential_pairs)
    c = std::max(c, std::abs(m.left_essential[static_cast<std::size_t>(i)] -
                             m.right_essential[static_cast<std::size_t>(j)]));
  return c;
}

void validate(const Matching& m) {
  std::vector<int> left_seen(m.left.size(), 0), right_seen(m.right.size(), 0);
  auto mark = [](std::vector<int>& seen, const MatchSlot& s) {
    if (s.diagonal) return;
    if (s.index < 0 || static_cast<std::size_t>(s.index) >= seen.size())
      throw Error(ErrorKind::InvalidArgument, "matching refers to a missing point");
    ++seen[static_cast<std::size_t>(s.index)];
  };
  for (const auto& [l, r] : m.pairs) {
    if (l.diagonal && r.diagonal)
      throw Error(ErrorKind::InvalidArgument, "matching pairs the diagonal with itself");
    mark(left_seen, l);
    mark(right_seen, r);
  }
  auto all_once = [](const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [](int c) { return c == 1; });
  };
  if (!all_once(left_seen) || !all_once(right_seen))
    throw Error(ErrorKind::InvalidArgument, "matching is not a bijection on proper points");
  std::vector<int> le(m.left_essential.size(), 0), re(m.right_essential.size(), 0);
  for (const auto& [i, j] : m.essential_pairs) {
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= le.size() ||
        static_cast<std::size_t>(j) >= re.size())
      throw Error(ErrorKind::InvalidArgument, "matching refers to a missing point at infinity");
    ++le[static_cast<std::size_t>(i)];
    ++re[static_cast<std::size_t>(j)];
  }
  if (std::any_of(le.begin(), le.end(), [](int c) { return c > 1; }) ||
      std::any_of(re.begin(), re.end(), [](int c) { return c > 1; }))
    throw Error(ErrorKind::InvalidArgument, "points at infinity matched twice");
}

namespace {

auto slot_key(const MatchSlot& s) { return std::make_tuple(s.diagonal, s.index); }

bool pair_less(const std::pair<MatchSlot, MatchSlot>& x, const std::pair<MatchSlot, MatchSlot>& y) {
  return std::make_tuple(slot_key(x.first), slot_key(x.second)) <
         std::make_tuple(slot_key(y.first), slot_key(y.second));
}

// Pairs as comparable tuples with diagonal tags erased; points by coordinates.
std::vector<std::tuple<int, Real, Real, int, Real, Real>> untagged(const Matching& m) {
  std::vector<std::tuple<int, Real, Real, int, Real, Real>> out;
  for (const auto& [l, r] : m.pairs) {
    const PlanePoint a = l.diagonal ? PlanePoint(0, 0) : m.left[static_cast<std::size_t>(l.index)];
    const PlanePoint b =
        r.diagonal ? PlanePoint(0, 0) : m.right[static_cast<std::size_t>(r.index)];
    out.emplace_back(l.diagonal, a.x(), a.y(), r.diagonal, b.x(), b.y());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Matching canonical(Matching m) {
  std::sort(m.pairs.begin(), m.pairs.end(), pair_less);
  std::sort(m.essential_pairs.begin(), m.essential_pairs.end());
  return m;
}

bool same_pairs(const Matching& x, const Matching& y) {
  if (x.degree != y.degree || x.left != y.left || x.right != y.right ||
      x.left_essential != y.left_essential || x.right_essential != y.right_essential)
    return false;
  auto ex = x.essential_pairs, ey = y.essential_pairs;
  std::sort(ex.begin(), ex.end());
  std::sort(ey.begin(), ey.end());
  return ex == ey && untagged(x) == untagged(y);
}

Matching identity_matching(const std::vector<PlanePoint>& points, int degree) {
  Matching m;
  m.degree = degree;
  m.left = m.right = points;
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    m.pairs.emplace_back(MatchSlot::point(i), MatchSlot::point(i));
  return m;
}

std::vector<std::pair<int, int>> essential_pairing(const std::vector<Real>& left,
                                                   const std::vector<Real>& right) {
  std::vector<std::pair<int, int>> out;
  if (left.size() != right.size()) return out;
  std::vector<int> li(left.size()), ri(right.size());
  std::iota(li.begin(), li.end(), 0);
  std::iota(ri.begin(), ri.end(), 0);
  std::stable_sort(li.begin(), li.end(), [&](int a, int b) { return left[a] < left[b]; });
  std::stable_sort(ri.begin(), ri.end(), [&](int a, int b) { return right[a] < right[b]; });
  for (std::size_t k = 0; k < li.size(); ++k) out.emplace_back(li[k], ri[k]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Feasibility of an augmented bijection with all pair costs <= eps, given
// that left point i is already fixed to right point fixed[i] (-1 free,
// m = diagonal) for the first `fixed_count` left points.
class Feasibility {
 public:
  Feasibility(const std::vector<PlanePoint>& left, const std::vector<PlanePoint>& right)
      : left_(left), right_(right) {}

  bool operator()(Real eps, const std::vector<int>& fixed) const {
    const int n = static_cast<int>(left_.size()), m = static_cast<int>(right_.size());
    std::vector<char> right_used(static_cast<std::size_t>(m), 0);
    std::vector<int> free_left;
    for (int i = 0; i < n; ++i) {
      const int t = i < static_cast<int>(fixed.size()) ? fixed[static_cast<std::size_t>(i)] : -1;
      if (t < 0) {
        free_left.push_back(i);
      } else if (t < m) {
        right_used[static_cast<std::size_t>(t)] = 1;
      }
    }
    std::vector<int> free_right;
    for (int j = 0; j < m; ++j)
      if (!right_used[static_cast<std::size_t>(j)]) free_right.push_back(j);
    const int a = static_cast<int>(free_left.size()), b = static_cast<int>(free_right.size());
    // Left nodes: free left points (0..a-1), then diagonal copies for the free
    // right points (a..a+b-1). Right nodes: free right points (0..b-1), then
    // diagonal copies for the free left points (b..b+a-1).
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(a + b));
    for (int x = 0; x < a; ++x) {
      const PlanePoint& p = left_[static_cast<std::size_t>(free_left[static_cast<std::size_t>(x)])];
      for (int y = 0; y < b; ++y)
        if (proper_distance(p, right_[static_cast<std::size_t>(free_right[static_cast<std::size_t>(y)])]) <= eps)
          adj[static_cast<std::size_t>(x)].push_back(y);
      if (diagonal_distance(p) <= eps) adj[static_cast<std::size_t>(x)].push_back(b + x);
    }
    for (int y = 0; y < b; ++y) {
      auto& row = adj[static_cast<std::size_t>(a + y)];
      if (diagonal_distance(right_[static_cast<std::size_t>(free_right[static_cast<std::size_t>(y)])]) <= eps)
        row.push_back(y);
      for (int x = 0; x < a; ++x) row.push_back(b + x);
    }
    return perfect(adj, a + b);
  }

 private:
  static bool perfect(const std::vector<std::vector<int>>& adj, int size) {
    std::vector<int> owner(static_cast<std::size_t>(size), -1);
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int u) {
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = 1;
        if (owner[static_cast<std::size_t>(v)] < 0 || augment(owner[static_cast<std::size_t>(v)])) {
          owner[static_cast<std::size_t>(v)] = u;
          return true;
        }
      }
      return false;
    };
    for (int u = 0; u < size; ++u) {
      seen.assign(static_cast<std::size_t>(size), 0);
      if (!augment(u)) return false;
    }
    return true;
  }

  const std::vector<PlanePoint>& left_;
  const std::vector<PlanePoint>& right_;
};

Matching from_assignment(const std::vector<PlanePoint>& left, const std::vector<PlanePoint>& right,
                         const std::vector<int>& target, int degree) {
  Matching out;
  out.degree = degree;
  out.left = left;
  out.right = right;
  const int m = static_cast<int>(right.size());
  std::vector<char> used(right.size(), 0);
  for (int i = 0; i < static_cast<int>(left.size()); ++i) {
    const int t = target[static_cast<std::size_t>(i)];
    if (t < m) {
      out.pairs.emplace_back(MatchSlot::point(i), MatchSlot::point(t));
      used[static_cast<std::size_t>(t)] = 1;
    } else {
      out.pairs.emplace_back(MatchSlot::point(i), MatchSlot::diag());
    }
  }
  for (int j = 0; j < m; ++j)
    if (!used[static_cast<std::size_t>(j)]) out.pairs.emplace_back(MatchSlot::diag(), MatchSlot::point(j));
  return out;
}

}  // namespace

BottleneckResult bottleneck(const std::vector<PlanePoint>& left,
                            const std::vector<PlanePoint>& right, int degree) {
  const int n = static_cast<int>(left.size()), m = static_cast<int>(right.size());
  std::vector<Real> candidates{0.0};
  for (const auto& p : left) candidates.push_back(diagonal_distance(p));
  for (const auto& q : right) candidates.push_back(diagonal_distance(q));
  for (const auto& p : left)
    for (const auto& q : right) candidates.push_back(proper_distance(p, q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const Feasibility feasible(left, right);
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid], {}))
      hi = mid;
    else
      lo = mid + 1;
  }
  const Real eps = candidates[lo];

  std::vector<int> target;
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int t = 0; t <= m && !placed; ++t) {
      if (t < m && used[static_cast<std::size_t>(t)]) continue;
      const Real c = t < m ? proper_distance(left[static_cast<std::size_t>(i)],
                                             right[static_cast<std::size_t>(t)])
                           : diagonal_distance(left[static_cast<std::size_t>(i)]);
      if (c > eps) continue;
      target.push_back(t);
      if (feasible(eps, target)) {
        placed = true;
        if (t < m) used[static_cast<std::size_t>(t)] = 1;
      } else {
        target.pop_back();
      }
    }
    if (!placed) throw Error(ErrorKind::InvalidArgument, "bottleneck feasibility is inconsistent");
  }
  return {eps, from_assignment(left, right, target, degree)};
}

BottleneckResult bottleneck(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                            int degree) {
  BottleneckResult r = bottleneck(d1.proper_points(degree), d2.proper_points(degree), degree);
  r.matching.left_essential = d1.essential_births(degree);
  r.matching.right_essential = d2.essential_births(degree);
  if (r.matching.left_essential.size() != r.matching.right_essential.size()) {
    r.distance = kInfinity;
    return r;
  }
  r.matching.essential_pairs =
      essential_pairing(r.matching.left_essential, r.matching.right_essential);
  r.distance = std::max(r.distance, cost(r.matching));
  return r;
}

std::vector<Matching> enumerate_matchings(const std::vector<PlanePoint>& left,
                                          const std::vector<PlanePoint>& right, int degree,
                                          int limit) {
  if (static_cast<int>(left.size()) > limit || static_cast<int>(right.size()) > limit)
    throw Error(ErrorKind::LimitExceeded, "too many proper points to enumerate matchings");
  const int n = static_cast<int>(left.size()), m = static_cast<int>(right.size());
  std::vector<Matching> out;
  std::vector<int> target(static_cast<std::size_t>(n));
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  std::function<void(int)> recurse = [&](int i) {
    if (i == n) {
      out.push_back(from_assignment(left, right, target, degree));
      return;
    }
    for (int t = 0; t <= m; ++t) {
      if (t < m && used[static_cast<std::size_t>(t)]) continue;
      target[static_cast<std::size_t>(i)] = t;
      if (t < m) used[static_cast<std::size_t>(t)] = 1;
      recurse(i + 1);
      if (t < m) used[static_cast<std::size_t>(t)] = 0;
    }
  };
  recurse(0);
  return out;
}

std::vector<Matching> enumerate_matchings(const PersistenceDiagram& d1,
                                          const PersistenceDiagram& d2, int degree, int limit) {
  auto out = enumerate_matchings(d1.proper_points(degree), d2.proper_points(degree), degree, limit);
  const auto le = d1.essential_births(degree), re = d2.essential_births(degree);
  const auto ep = essential_pairing(le, re);
  for (auto& m : out) {
    m.left_essential = le;
    m.right_essential = re;
    m.essential_pairs = ep;
  }
  return out;
}

std::vector<Matching> heuristic_matchings(const std::vector<PlanePoint>& left,
                                          const std::vector<PlanePoint>& right, int degree) {
  const int n = static_cast<int>(left.size()), m = static_cast<int>(right.size());
  const Matching best = bottleneck(left, right, degree).matching;
  // Assignment form: target[i] in 0..m-1 or m for the diagonal.
  std::vector<int> base(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const MatchSlot s = best.partner_of_left(i);
    base[static_cast<std::size_t>(i)] = s.diagonal ? m : s.index;
  }
  std::set<std::vector<int>> seen{base};
  std::vector<std::vector<int>> order{base};
  auto add = [&](const std::vector<int>& t) {
    if (seen.insert(t).second) order.push_back(t);
  };
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      auto t = base;
      std::swap(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(k)]);
      add(t);
    }
    if (base[static_cast<std::size_t>(i)] < m) {
      auto t = base;
      t[static_cast<std::size_t>(i)] = m;
      add(t);
    }
  }
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (int t : base)
    if (t < m) used[static_cast<std::size_t>(t)] = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (used[static_cast<std::size_t>(j)]) {
        continue;
      }
      auto t = base;
      // Move left point i onto the free right point j (merging or re-pairing).
      t[static_cast<std::size_t>(i)] = j;
      add(t);
    }
  }
  std::vector<Matching> out;
  for (const auto& t : order) out.push_back(from_assignment(left, right, t, degree));
  return out;
}

Matching compose(const Matching& sigma, const Matching& tau) {
  if (sigma.right != tau.left || sigma.degree != tau.degree)
    throw Error(ErrorKind::InvalidArgument, "matchings do not compose: middle diagrams differ");
  Matching out;
  out.degree = sigma.degree;
  out.left = sigma.left;
  out.right = tau.right;
  out.left_essential = sigma.left_essential;
  out.right_essential = tau.right_essential;

  std::map<int, MatchSlot> tau_from_point, tau_from_tag;
  std::vector<std::pair<MatchSlot, MatchSlot>> tau_untagged;
  for (const auto& [l, r] : tau.pairs) {
    if (!l.diagonal)
      tau_from_point[l.index] = r;
    else if (l.index >= 0)
      tau_from_tag[l.index] = r;
    else
      tau_untagged.emplace_back(l, r);
  }
  std::set<int> used_tags;
  for (const auto& [l, r] : sigma.pairs) {
    MatchSlot t = MatchSlot::diag();
    if (!r.diagonal) {
      t = tau_from_point.at(r.index);
    } else if (r.index >= 0) {
      if (auto it = tau_from_tag.find(r.index); it != tau_from_tag.end()) {
        t = it->second;
        used_tags.insert(r.index);
      }
    }
    if (!(l.diagonal && t.diagonal)) out.pairs.emplace_back(l, t);
  }
  for (const auto& [tag, r] : tau_from_tag)
    if (!used_tags.count(tag) && !r.diagonal) out.pairs.emplace_back(MatchSlot::diag(), r);
  for (const auto& [l, r] : tau_untagged)
    if (!r.diagonal) out.pairs.emplace_back(MatchSlot::diag(), r);

  std::map<int, int> tau_ess(tau.essential_pairs.begin(), tau.essential_pairs.end());
  for (const auto& [i, j] : sigma.essential_pairs)
    if (auto it = tau_ess.find(j); it != tau_ess.end()) out.essential_pairs.emplace_back(i, it->second);
  return canonical(std::move(out));
}

Matching inverse(const Matching& m) {
  Matching out;
  out.degree = m.degree;
  out.left = m.right;
  out.right = m.left;
  out.left_essential = m.right_essential;
  out.right_essential = m.left_essential;
  for (const auto& [l, r] : m.pairs) out.pairs.emplace_back(r, l);
  for (const auto& [i, j] : m.essential_pairs) out.essential_pairs.emplace_back(j, i);
  return out;
}

}  // namespace cohmatch
