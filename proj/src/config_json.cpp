#include "gdm/config_json.hpp"

#include <stdexcept>

namespace gdm {

nlohmann::json grouping_to_json(const GroupPartition& partition, const GroupSchedule& schedule) {
    nlohmann::json j;
    j["d"] = partition.d;
    j["k"] = partition.k;
    j["assignment"] = partition.assignment;
    j["t_start"] = schedule.t_start;
    j["t_end"] = schedule.t_end;
    j["strategy"] = strategy_name(partition.strategy);
    nlohmann::json params;
    if (partition.params.groups > 0) params["groups"] = partition.params.groups;
    if (partition.params.grid_h > 0) params["grid_h"] = partition.params.grid_h;
    if (partition.params.grid_w > 0) params["grid_w"] = partition.params.grid_w;
    if (partition.params.levels > 0) params["levels"] = partition.params.levels;
    if (!partition.params.cutoffs.empty()) params["cutoffs"] = partition.params.cutoffs;
    if (!partition.params.order.empty()) params["order"] = partition.params.order;
    j["params"] = params;
    return j;
}

void grouping_from_json(const nlohmann::json& j, GroupPartition& partition,
                        GroupSchedule& schedule) {
    partition.d = j.at("d").get<int>();
    partition.k = j.at("k").get<int>();
    partition.assignment = j.at("assignment").get<std::vector<int>>();
    partition.strategy = strategy_from_name(j.value("strategy", "explicit"));
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    partition.params.groups = params.value("groups", 0);
    partition.params.grid_h = params.value("grid_h", 0);
    partition.params.grid_w = params.value("grid_w", 0);
    partition.params.levels = params.value("levels", 0);
    partition.params.cutoffs = params.value("cutoffs", std::vector<int>{});
    partition.params.order = params.value("order", std::vector<int>{});
    partition.validate();

    schedule.t_start = j.at("t_start").get<std::vector<double>>();
    schedule.t_end = j.at("t_end").get<std::vector<double>>();
    schedule.validate();
    if (schedule.k() != partition.k)
        throw std::invalid_argument("grouping json: schedule and partition disagree on k");
}

nlohmann::json basis_to_json(const OrthoBasis& basis) {
    nlohmann::json j;
    j["kind"] = basis_kind_name(basis.kind());
    j["height"] = basis.height();
    j["width"] = basis.width();
    j["sigma"] = basis.sigma();
    return j;
}

OrthoBasis basis_from_json(const nlohmann::json& j) {
    const BasisKind kind = basis_kind_from_name(j.at("kind").get<std::string>());
    const int height = j.at("height").get<int>();
    const int width = j.at("width").get<int>();
    switch (kind) {
        case BasisKind::identity: return OrthoBasis::identity(height * width);
        case BasisKind::dct2: return OrthoBasis::dct2(height, width);
        case BasisKind::blur: return OrthoBasis::blur(height, width, j.at("sigma").get<double>());
    }
    throw std::invalid_argument("basis json: unknown kind");
}

nlohmann::json flow_config_to_json(const FlowConfig& cfg) {
    nlohmann::json j;
    j["grouping"] = grouping_to_json(cfg.partition, cfg.schedule);
    j["basis"] = basis_to_json(cfg.basis);
    j["mask_inactive_inputs"] = cfg.mask_inactive_inputs;
    j["solver_steps"] = cfg.solver_steps;
    return j;
}

FlowConfig flow_config_from_json(const nlohmann::json& j) {
    FlowConfig cfg;
    grouping_from_json(j.at("grouping"), cfg.partition, cfg.schedule);
    cfg.basis = basis_from_json(j.at("basis"));
    cfg.mask_inactive_inputs = j.value("mask_inactive_inputs", false);
    cfg.solver_steps = j.value("solver_steps", cfg.partition.k);
    cfg.validate();
    return cfg;
}

}  // namespace gdm
