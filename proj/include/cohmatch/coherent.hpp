#pragma once

#include "cohmatch/complex.hpp"
#include "cohmatch/foliation.hpp"
#include "cohmatch/matching.hpp"
#include "cohmatch/parameters.hpp"
#include "cohmatch/transport.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cohmatch {

/// Certified-lower / upper estimate of a supremum over parameter space.
/// Upper is +infinity when unknown.
struct DistanceEstimate {
  Real lower = 0.0;
  Real upper = kInfinity;
  bool upper_known = false;
  /// Upper - lower reached the tolerance within the budget.
  bool converged = false;
  ParameterPoint witness;
  std::size_t evaluations = 0;
  int depth = 0;
};

struct BranchAndBound {
  ParameterRegion region;
  /// Initial grid: (resolution - 1)^2 cells.
  int resolution = 32;
  Real tol = 1e-2;
  std::size_t max_evaluations = 20000;
  int field = 2;
};

/// Maximizes `value` over the region. A cell evaluated at its center p has
/// upper bound min(value(p) + slack(p, cell), cap); the cell with the largest
/// upper bound is split in four until upper - lower <= tol or the budget is
/// spent. Ties are broken by creation order, so results are deterministic.
DistanceEstimate maximize(const std::function<Real(const ParameterPoint&)>& value,
                          const std::function<Real(const ParameterPoint&, const ParameterRegion&)>& slack,
                          Real cap, const BranchAndBound& config);

/// Bottleneck distance between the normalized slice diagrams at p in one
/// degree (points at infinity included), or the max over all degrees for
/// degree < 0.
Real slice_bottleneck(const SimplicialComplex& complex, const Bifiltration& f,
                      const Bifiltration& g, const ParameterPoint& p, int degree, int field = 2);

/// D_match over the region by branch and bound on slice_bottleneck, with the
/// slack of a cell equal to the drift of f* plus the drift of g* over it,
/// capped by ||f - g||_inf.
DistanceEstimate estimate_dmatch(const SimplicialComplex& complex, const Bifiltration& f,
                                 const Bifiltration& g, const BranchAndBound& config,
                                 int degree = -1);

/// Degrees whose points at infinity enter gamma_infinity: {0, m} when the
/// sphere check passes, otherwise every degree (points paired in sorted order).
std::vector<int> essential_degrees(const SimplicialComplex& complex, int field = 2);

/// max over `degrees` of the distance between the points at infinity of
/// Dgm(f*_p) and Dgm(g*_p), paired in sorted order of birth; +infinity on a
/// count mismatch unless strict (then EssentialCountMismatch).
Real essential_gap(const SimplicialComplex& complex, const Bifiltration& f, const Bifiltration& g,
                   const ParameterPoint& p, const std::vector<int>& degrees, int field = 2,
                   bool strict = false);

DistanceEstimate gamma_infinity(const SimplicialComplex& complex, const Bifiltration& f,
                                const Bifiltration& g, const BranchAndBound& config,
                                const std::vector<int>& degrees, bool strict = false);

struct CdmatchConfig {
  ParameterRegion region;
  /// Path endpoints: resolution x resolution grid nodes of the region.
  int resolution = 32;
  /// Maximum length of reduced words in the loop generators.
  int word_length = 2;
  /// Above this many proper points per side, S is the heuristic subset.
  int enumeration_limit = 6;
  std::optional<ParameterPoint> basepoint;
  /// Singular search grid and localization.
  int singular_resolution = 32;
  Real localization_radius = 1e-3;
  /// Radius of the disks paths avoid around singular pairs.
  Real exclusion_radius = 5e-3;
  /// Preferred radius of the loops of the generators.
  Real loop_radius = 0.05;
  TransportConfig transport;
  /// Degrees to evaluate; empty means 0..dimension.
  std::vector<int> degrees;
  /// Branch and bound settings for gamma_infinity.
  Real gamma_tol = 1e-2;
  std::size_t gamma_max_evaluations = 20000;
  int field = 2;
};

struct SigmaRow {
  Matching sigma;
  Real sup_cost = 0.0;
  std::string word;
  ParameterPoint endpoint;
};

struct CdmatchDegree {
  int degree = 0;
  std::vector<SigmaRow> rows;
  Real min_sup = 0.0;
  int best = -1;
  /// False when S is the heuristic subset (the min is then an upper bound
  /// on the min over all matchings).
  bool enumeration_exact = true;
  std::vector<std::string> words;
  /// word_sup[sigma][w]: sup of the cost over the endpoints for word w
  /// (0 for skipped words).
  std::vector<std::vector<Real>> word_sup;
  std::vector<std::string> skipped_words;
  std::size_t paths = 0;
  std::size_t skipped_paths = 0;
};

struct CdmatchResult {
  DistanceEstimate estimate;
  DistanceEstimate gamma;
  std::vector<int> gamma_degrees;
  std::vector<CdmatchDegree> degrees;
  std::vector<SingularPair> singular;
  ParameterPoint basepoint;
  Real gap = kInfinity;
  std::vector<std::string> warnings;
};

/// Generators of the loops around singular pairs, as lassos from the basepoint.
struct LoopGenerator {
  std::string name;
  ParameterPath path;
};

std::vector<LoopGenerator> loop_generators(const ParameterPoint& basepoint,
                                           const std::vector<SingularPair>& singular,
                                           const CdmatchConfig& config);

/// Reduced words of length <= max_length over the generators and their
/// inverses (index 2k is generator k, 2k + 1 its inverse), shortest first.
std::vector<std::vector<int>> reduced_words(int generators, int max_length);

/// Path of a word: the concatenation of its lassos.
ParameterPath word_path(const ParameterPoint& basepoint, const std::vector<LoopGenerator>& gens,
                        const std::vector<int>& word);
std::string word_name(const std::vector<LoopGenerator>& gens, const std::vector<int>& word);

/// Full path for a reported (word, endpoint) pair: the word followed by the
/// routed straight run to the endpoint.
ParameterPath witness_path(const ParameterPoint& basepoint, const std::vector<LoopGenerator>& gens,
                           const std::vector<int>& word, const ParameterPoint& endpoint,
                           const std::vector<ExclusionDisk>& disks);

std::vector<ExclusionDisk> exclusion_disks(const std::vector<SingularPair>& singular,
                                           const CdmatchConfig& config);

/// CD_match estimate: max over degrees of min over sigma in S of the sup over
/// the approximated path set of cost(T_c(sigma)), then max with the lower
/// bound on gamma_infinity. Throws BasepointSingular for an explicit singular
/// basepoint.
CdmatchResult estimate_cdmatch(const SimplicialComplex& complex, const Bifiltration& f,
                               const Bifiltration& g, CdmatchConfig config);

struct StabilityReport {
  Real sup_norm = 0.0;
  Real cd_lower = 0.0;
  bool bound_holds = false;
  std::size_t contraction_checks = 0;
  std::size_t contraction_failures = 0;
  bool passed = false;
};

/// Runs estimate_cdmatch(f, g) and checks it against ||f - g||_inf + tol,
/// plus the exact per-vertex contraction at every grid node.
StabilityReport stability_check(const SimplicialComplex& complex, const Bifiltration& f,
                                const Bifiltration& g, const CdmatchConfig& config,
                                Real tol = 1e-9);

struct ComparisonReport {
  DistanceEstimate dmatch;
  CdmatchResult cdmatch;
  Real slack = 0.0;
  bool holds = false;
  /// CD estimate minus the D_match upper bound (positive means CD is
  /// strictly larger at grid scale).
  Real margin = 0.0;
};

/// D_match lower <= CD_match estimate + slack, where the slack is the largest
/// combined drift over the half-cells around the CD path endpoints plus the
/// gamma_infinity bracket width.
ComparisonReport compare_distances(const SimplicialComplex& complex, const Bifiltration& f,
                                   const Bifiltration& g, const CdmatchConfig& config,
                                   const BranchAndBound& dmatch_config);

struct LawCheck {
  std::string law;
  int degree = 0;
  std::size_t path = 0;
  bool holds = false;
  /// A path met a collision; the law was not evaluated.
  bool skipped = false;
};

/// Exact endpoint-matching checks of the transport laws for the optimal
/// matching sigma: Dgm(f) -> Dgm(g) at the basepoint (and tau: Dgm(g) ->
/// Dgm(h) with a third function), along paths starting at the basepoint:
///   constant     T_const(sigma) = sigma
///   round-trip   T_{c * c^-1}(sigma) = sigma
///   composition  T_{c * c'}(sigma) = T_{c'}(T_c(sigma)), c' running from the
///                end of c to the end of the next path; the outer transport
///                starts from the state reached along c
///   functorial   T^{(f,h)}_c(tau o sigma) = T^{(g,h)}_c(tau) o T^{(f,g)}_c(sigma)
std::vector<LawCheck> transport_law_checks(const SimplicialComplex& complex,
                                           const std::vector<Bifiltration>& functions,
                                           const ParameterPoint& basepoint,
                                           const std::vector<ParameterPath>& paths,
                                           const std::vector<ExclusionDisk>& disks,
                                           const std::vector<int>& degrees,
                                           const TransportConfig& config);

/// Routed straight paths from the basepoint to six fixed points spread over
/// the region (both halves of a, low and high b, near both a boundaries).
std::vector<ParameterPath> law_check_paths(const ParameterRegion& region,
                                           const ParameterPoint& basepoint,
                                           const std::vector<ExclusionDisk>& disks);

}  // namespace cohmatch
