#pragma once

#include <json.hpp>

#include "rigidity/elliptic.hpp"
#include "rigidity/flow.hpp"
#include "rigidity/identities.hpp"
#include "rigidity/params.hpp"
#include "rigidity/report.hpp"
#include "rigidity/spectral.hpp"

namespace rigidity {

using Json = nlohmann::ordered_json;

/// Non-finite numbers become null.
Json number(double x);

Json to_json(const ParamSet& params);
Json to_json(const DerivedConstants& dc);
Json to_json(const CdcCertificate& cert);
Json to_json(const IdentityReport& report);
Json to_json(const std::vector<IdentityReport>& reports);
Json to_json(const RefinementStudy& study);
Json to_json(const SolveResult& result);
Json to_json(const ScanReport& report);
Json to_json(const Lambda1Result& result);
Json to_json(const LambdaStarReport& report);
/// Per-sample scalars and run statistics; fields are left to the snapshots.
Json to_json(const FlowTrace& trace);

}  // namespace rigidity
