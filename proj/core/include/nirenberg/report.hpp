#pragma once

#include <string>

#include <json.hpp>

#include "nirenberg/bubbles.hpp"
#include "nirenberg/flow.hpp"
#include "nirenberg/functional.hpp"
#include "nirenberg/infinity.hpp"

namespace nirenberg {

using Json = nlohmann::ordered_json;

/// Formats a double with 17 significant digits (round-trip exact), so
/// reports are diffable across runs.
std::string format17(double v);

Json to_json(const ProblemParams& params);
Json to_json(const ConstantsTable& table);
Json to_json(const CriticalPointRecord& record);
Json to_json(const CriticalPointResult& result);
Json to_json(const InfinityPoint& point);
Json to_json(const CriterionReport& report);
Json to_json(const H1Result& h1);
Json to_json(const ExpansionReport& report);
Json to_json(const FlowEvent& event);

/// One CSV row per trajectory sample: s, per-bubble center coordinates and
/// lambda, the regime tag, and the reduced energy. Header is stable.
void write_trajectory_csv(const std::string& path, const ProblemParams& params,
                          const FlowResult& result);

/// Minimal structural validation of an emitted report against the shipped
/// schema subset: required keys with the expected JSON types.
bool validate_report(const Json& report, std::string* error = nullptr);

}  // namespace nirenberg
