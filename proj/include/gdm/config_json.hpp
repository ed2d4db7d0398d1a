#pragma once

#include <nlohmann/json.hpp>

#include "gdm/flow.hpp"

namespace gdm {

// Combined partition + schedule document:
// {d, k, assignment, t_start, t_end, strategy, params}.
nlohmann::json grouping_to_json(const GroupPartition& partition, const GroupSchedule& schedule);
void grouping_from_json(const nlohmann::json& j, GroupPartition& partition,
                        GroupSchedule& schedule);

// Bases serialize as their construction recipe {kind, height, width, sigma}
// and are rebuilt on load.
nlohmann::json basis_to_json(const OrthoBasis& basis);
OrthoBasis basis_from_json(const nlohmann::json& j);

nlohmann::json flow_config_to_json(const FlowConfig& cfg);
FlowConfig flow_config_from_json(const nlohmann::json& j);

}  // namespace gdm
