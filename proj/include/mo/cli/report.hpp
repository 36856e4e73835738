#pragma once

#include "mo/certificates.hpp"
#include "mo/cli/config.hpp"

namespace mo::cli {

json grid_to_json(const GridPtr& g);
// Reuses `known` when ids and weights agree, so results stay on the config grid.
GridPtr grid_from_json(const json& j, const GridPtr& known, const std::string& path);

json to_json(const VerificationRecord& r);
json to_json(const NonsquareWitness& w);
json to_json(const FailureCertificate& c);
json to_json(const ClassificationReport& r);

VerificationRecord verification_from_json(const json& j, const std::string& path);
NonsquareWitness nonsquare_from_json(const json& j, const GridPtr& known, const std::string& path);
FailureCertificate certificate_from_json(const json& j, const GridPtr& known, const std::string& path);

}  // namespace mo::cli
