#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

#include "grassgeo/graph.hpp"
#include "grassgeo/operators.hpp"
#include "grassgeo/wigner.hpp"

namespace grassgeo {

using Json = nlohmann::json;

/// Canonical layouts used by every file the CLI reads or writes. Matrices
/// are {"rows", "cols", "re", "im"} with row-major flattening; subspaces
/// are {"n", "k", "frame"} and get re-orthonormalized on load (rejecting
/// rank-deficient frames).

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j, double rank_rel = 1e-8);

Json graph_to_json(const GrassmannGraphView& g);

Json apartment_to_json(const OrthogonalApartment& a);

Json operator_to_json(const SemilinearOperator& op);
SemilinearOperator operator_from_json(const Json& j);

Json pairing_table_to_json(const std::vector<std::pair<Subspace, Subspace>>& table);
std::vector<std::pair<Subspace, Subspace>> pairing_table_from_json(const Json& j,
                                                                   double rank_rel = 1e-8);

Json report_to_json(const PreservationReport& rep);
Json reconstruction_to_json(const ReconstructionResult& res);

} // namespace grassgeo
