#pragma once

#include "cohmatch/persistence.hpp"
#include "cohmatch/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace cohmatch {

/// Sup-norm distance between two cornerpoints of the same degree, where
/// nullopt stands for the diagonal: d(X, diag) = (v - u) / 2, diag to diag 0,
/// two points at infinity |u1 - u2|, a point at infinity against anything
/// else +infinity. Throws DegreeMismatch.
Real point_distance(const std::optional<Cornerpoint>& x, const std::optional<Cornerpoint>& y);

/// Same conventions on plain proper points.
inline Real proper_distance(const PlanePoint& x, const PlanePoint& y) {
  return (x - y).cwiseAbs().maxCoeff();
}
inline Real diagonal_distance(const PlanePoint& x) { return (x.y() - x.x()) / 2; }

/// One side of a matched pair: a proper point (index into the side's point
/// list) or the diagonal. A diagonal slot may carry a tag naming the tracked
/// point that currently rests on the diagonal; compose() links through tags.
struct MatchSlot {
  bool diagonal = false;
  int index = -1;

  static MatchSlot point(int i) { return {false, i}; }
  static MatchSlot diag(int tag = -1) { return {true, tag}; }

  friend bool operator==(const MatchSlot&, const MatchSlot&) = default;
};

/// Augmented bijection between the proper points of two diagrams in one
/// degree, plus the pairing of their points at infinity (by birth index).
/// Every proper point of either side appears in exactly one pair.
struct Matching {
  int degree = 0;
  std::vector<PlanePoint> left;
  std::vector<PlanePoint> right;
  std::vector<Real> left_essential;
  std::vector<Real> right_essential;
  std::vector<std::pair<MatchSlot, MatchSlot>> pairs;
  std::vector<std::pair<int, int>> essential_pairs;

  Real pair_cost(const std::pair<MatchSlot, MatchSlot>& pair) const;
  /// Partner of left point i (a point or the diagonal).
  MatchSlot partner_of_left(int i) const;
  MatchSlot partner_of_right(int j) const;
};

/// Max over proper and essential pairs of the pair distance; 0 when empty.
Real cost(const Matching& m);

/// Throws InvalidArgument unless every proper point appears exactly once on
/// its side and essential pairs form a bijection.
void validate(const Matching& m);

/// Canonical form: pairs sorted by (left slot, right slot), diagonal tags kept.
Matching canonical(Matching m);

/// Equality of the point sets and of the pairs, ignoring diagonal tags.
bool same_pairs(const Matching& x, const Matching& y);

/// Each proper point of `points` matched to itself.
Matching identity_matching(const std::vector<PlanePoint>& points, int degree = 0);

/// Points at infinity are paired in sorted order of birth; a count mismatch
/// leaves them unpaired (the caller reports +infinity).
std::vector<std::pair<int, int>> essential_pairing(const std::vector<Real>& left,
                                                   const std::vector<Real>& right);

struct BottleneckResult {
  Real distance = 0.0;
  Matching matching;
};

/// Bottleneck distance on proper points, by binary search over candidate
/// distances with a bipartite feasibility test. The returned matching is the
/// lexicographically smallest optimal one (left points in order, each taking
/// the lowest-index right point, the diagonal last).
BottleneckResult bottleneck(const std::vector<PlanePoint>& left,
                            const std::vector<PlanePoint>& right, int degree = 0);

/// Bottleneck distance in one degree including points at infinity; +infinity
/// when their counts differ.
BottleneckResult bottleneck(const PersistenceDiagram& d1, const PersistenceDiagram& d2,
                            int degree);

/// Every augmented bijection of the proper points (sum over k of
/// C(n,k) C(m,k) k! of them), in a fixed recursive order. Points at infinity
/// carry the sorted pairing. Throws LimitExceeded if either side has more
/// than `limit` proper points.
std::vector<Matching> enumerate_matchings(const PersistenceDiagram& d1,
                                          const PersistenceDiagram& d2, int degree, int limit = 6);
std::vector<Matching> enumerate_matchings(const std::vector<PlanePoint>& left,
                                          const std::vector<PlanePoint>& right, int degree = 0,
                                          int limit = 6);

/// Optimal bottleneck matching plus its single-swap neighbourhood: exchanged
/// partners, a split of one pair into two diagonal pairs, and a merge of two
/// diagonal pairs. Used when enumeration exceeds its limit.
std::vector<Matching> heuristic_matchings(const std::vector<PlanePoint>& left,
                                          const std::vector<PlanePoint>& right, int degree = 0);

/// tau o sigma for sigma: A -> B and tau: B -> C. Pairs meeting at a point of
/// B, or at diagonal slots with the same non-negative tag, are joined.
Matching compose(const Matching& sigma, const Matching& tau);

/// Swaps the two sides.
Matching inverse(const Matching& m);

}  // namespace cohmatch
