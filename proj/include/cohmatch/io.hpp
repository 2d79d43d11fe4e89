#pragma once

#include "cohmatch/coherent.hpp"
#include "cohmatch/complex.hpp"
#include "cohmatch/foliation.hpp"
#include "cohmatch/matching.hpp"
#include "cohmatch/persistence.hpp"
#include "cohmatch/transport.hpp"

#include <json.hpp>

#include <istream>
#include <string>
#include <vector>

namespace cohmatch {

using Json = nlohmann::ordered_json;

struct BifilteredComplex {
  SimplicialComplex complex;
  Bifiltration f;
};

/// Reads the text format:
///
///     # comment
///     v <f1> <f2>        vertex with its two values, in index order
///     s <i0> <i1> ...    simplex by sorted vertex indices
///
/// Vertices are implicit simplices. Throws ParseError naming the line, or
/// the complex construction errors (MissingFace in strict mode, ...).
BifilteredComplex parse_complex(std::istream& in, FaceClosure mode = FaceClosure::Strict);
BifilteredComplex parse_complex(const std::string& text, FaceClosure mode = FaceClosure::Strict);
BifilteredComplex read_complex(const std::string& path, FaceClosure mode = FaceClosure::Strict);

/// Inverse of parse_complex: every vertex, then every simplex of dimension >= 1.
std::string serialize_complex(const SimplicialComplex& complex, const Bifiltration& f,
                              int precision = 17);

/// %.{precision}g in the C locale; "inf" / "-inf" / "nan" otherwise.
std::string format_real(Real x, int precision = 17);

/// Number, or the strings "inf" / "-inf" for infinities.
Json json_real(Real x);
Json to_json(const ParameterPoint& p);
Json to_json(const ParameterRegion& r);

/// `degree,birth,death,multiplicity`, death "inf" at infinity.
std::string diagram_csv(const PersistenceDiagram& d, int precision = 17);
Json diagram_json(const PersistenceDiagram& d);

/// Pairs with coordinates (or "diagonal") and per-pair cost.
Json matching_json(const Matching& m);

/// `tau,a,b,birth,death,on_diagonal`; on the diagonal birth = death is the
/// resting position.
std::string track_csv(const CornerpointTrack& t, int precision = 17);
Json track_json(const CornerpointTrack& t);

/// `a,b,separation` for every node of a separation grid (i over a, j over b).
std::string separation_csv(const ParameterRegion& region, const Eigen::MatrixXd& grid,
                           int precision = 17);
Json singular_json(const SingularSet& s);
Json singular_json(const std::vector<SingularPair>& pairs);

Json estimate_json(const DistanceEstimate& e);
/// Full estimator report; `with_tables` adds every sigma with its sup cost.
Json cdmatch_json(const CdmatchResult& r, bool with_tables = true);
/// `sigma,word,sup_cost` rows for one degree, sigma given by its index.
std::string sigma_table_csv(const CdmatchDegree& d, int precision = 17);

Json stability_json(const StabilityReport& r);
Json comparison_json(const ComparisonReport& r);

}  // namespace cohmatch
