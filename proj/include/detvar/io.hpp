#pragma once

// JSON formats. Complex scalars are [re, im].
//   DensityMatrix    {"m", "n", "matrix": [[z, ...], ...]}
//   Ensemble         {"m", "n", "weights": [...], "vectors": [[z, ...], ...]}
//                    optionally with "matrix" naming the state it should realize
//   ProductEnsemble  {"m", "n", "weights": [...], "factorsA": [[z...]...], "factorsB": [[z...]...]}
//   PureState        {"m", "n", "amplitudes": [z, ...]}
//   ProjectivePoint  {"coords": [z, ...]}
//   MultiPoly        {"vars", "degree", "terms": [{"exps": [...], "coef": z}, ...]}

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <variant>

#include "detvar/symbolic.hpp"

namespace detvar {

using Json = nlohmann::json;

Json to_json(Complex z);
Complex complex_from_json(const Json& j);

Json to_json(const DensityMatrix& rho);
Json to_json(const Ensemble& e);
Json to_json(const ProductEnsemble& pe);
Json to_json(const PureState& v);
Json to_json(const ProjectivePoint& p);
Json to_json(const MultiPoly& p);

DensityMatrix density_from_json(const Json& j);
Ensemble ensemble_from_json(const Json& j);
ProductEnsemble product_ensemble_from_json(const Json& j);
PureState pure_state_from_json(const Json& j);
/// Accepts {"coords": [...]} or a bare coordinate array.
ProjectivePoint point_from_json(const Json& j);
MultiPoly multipoly_from_json(const Json& j);

Json to_json(const MembershipResult& r);
Json to_json(const SchmidtReport& r);
Json to_json(const CovarianceReport& r);
Json to_json(const StructureReport& r);
Json to_json(const FactorizationResult& r);
Json to_json(const LinearityReport& r);

/// Any of the state formats, distinguished by their keys.
struct StateFile {
  std::variant<DensityMatrix, Ensemble, ProductEnsemble, PureState> state;
  /// For ensembles that also carry "matrix": the state they claim to realize.
  std::optional<DensityMatrix> claimed;
};

StateFile state_from_json(const Json& j);
Json read_json_file(const std::string& path);
StateFile read_state_file(const std::string& path);

DensityMatrix as_density(const StateFile& f);
/// Ensembles pass through; a density matrix is realized by its eigen-ensemble.
Ensemble as_ensemble(const StateFile& f, const RankPolicy& policy = {});
/// Throws NotPure for a density matrix of rank > 1 or a multi-term ensemble.
PureState as_pure(const StateFile& f, const RankPolicy& policy = {});

}  // namespace detvar
