#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "regulus/counting.hpp"
#include "regulus/removal.hpp"

namespace regulus {

using Json = nlohmann::ordered_json;

// System: {"labels": [...], "sizes": [...], "d": n, "H_d": [[labels], ...]}.
// Labels may be strings or integers; integers are stored as their decimal text.
Json system_to_json(const HypergraphSystem& sys);
HypergraphSystem system_from_json(const Json& j, std::uint64_t cell_cap = cell_cap_from_env());

// Set: {"base": [labels], "points": [[coords in the listed label order], ...]}.
Json set_to_json(const HypergraphSystem& sys, const CylinderSet& set);
CylinderSet set_from_json(const HypergraphSystem& sys, const Json& j);

struct Instance {
  HypergraphSystem system;
  EdgeSets sets;
};

// Instance: {"system": {...}, "sets": [one set per edge of H_d]}.
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j, std::uint64_t cell_cap = cell_cap_from_env());

Json algebra_to_json(const HypergraphSystem& sys, const FactorAlgebra& alg);
Json audit_record_to_json(const HypergraphSystem& sys, const AuditRecord& rec);
Json audit_report_to_json(const HypergraphSystem& sys, const AuditReport& rep);
Json decomposition_to_json(const HypergraphSystem& sys, const RegularityDecomposition& dec);
Json removal_report_to_json(const HypergraphSystem& sys, const RemovalReport& rep);
Json profile_to_json(const HypergraphSystem& sys, const AtomProfile& profile,
                     const CountingResult& count);

Json error_to_json(const std::string& kind, const std::string& message);

Json read_json_file(const std::string& path);

}  // namespace regulus
