#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gdm {

// How coordinates are divided into generation groups. Group indices are
// stored so that the group with the largest index owns the latest time
// interval and is therefore generated first when the ODE is integrated
// backward from t=1; strategy constructors below list their sets in
// generation order and assign indices accordingly.
enum class Strategy {
    explicit_assignment,
    rows_bottom_top,
    rows_top_bottom,
    cols_right_left,
    blocks,
    cdm,
    cdm_inverse,
    per_element_raster,
    frequency_bands,
    custom_order,
};

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct PartitionParams {
    int groups = 0;             // rows_* / cols_*: number of bands
    int grid_h = 0;             // blocks / custom_order: block grid
    int grid_w = 0;
    int levels = 0;             // cdm / cdm_inverse
    std::vector<int> cutoffs;   // frequency_bands: increasing, last == d
    std::vector<int> order;     // custom_order: block ids in generation order
};

struct GroupPartition {
    int d = 0;
    int k = 0;
    std::vector<int> assignment;  // length d, values in [0, k)
    Strategy strategy = Strategy::explicit_assignment;
    PartitionParams params;

    // Throws std::invalid_argument on empty groups, bad sizes, or
    // out-of-range assignments.
    void validate() const;

    std::vector<int> group_members(int group) const;
};

struct GroupSchedule {
    std::vector<double> t_start;  // in [0, 1)
    std::vector<double> t_end;    // in (0, 1]

    int k() const { return static_cast<int>(t_start.size()); }

    // Intervals must be proper, pairwise disjoint, and tile [0, 1].
    void validate() const;

    // True when t coincides exactly with any interval endpoint.
    bool is_breakpoint(double t) const;
};

// Diagonal of the interpolation coefficient matrix (or its derivative)
// at a fixed time.
struct ScheduleDiag {
    Eigen::VectorXd values;
    double t = 0.0;
};

// Per-group interpolation coefficient: 1 before the group's interval, a
// linear ramp down to 0 inside it, 0 after.
double group_alpha_at(const GroupSchedule& schedule, int group, double t);

// Slope of the ramp (negative constant) strictly inside the group's
// interval, 0 outside. `midpoint_convention` resolves evaluation exactly at
// an interval endpoint by treating intervals as half-open (t_start, t_end];
// without it breakpoints are an error.
double group_alpha_prime_at(const GroupSchedule& schedule, int group, double t,
                            bool midpoint_convention = false);

ScheduleDiag alpha_at(const GroupPartition& partition, const GroupSchedule& schedule, double t);
ScheduleDiag alpha_prime_at(const GroupPartition& partition, const GroupSchedule& schedule,
                            double t, bool midpoint_convention = false);

// Shared ramp value of every group at t, indexed by group; this is the
// compact schedule encoding the vector-field network is conditioned on.
Eigen::VectorXd group_alphas_at(const GroupSchedule& schedule, double t);

GroupPartition make_partition(Strategy strategy, int height, int width,
                              const PartitionParams& params = {});

// Uniform split of [0, 1] into k consecutive intervals.
GroupSchedule make_uniform_schedule(int k);

// Consecutive intervals between 0, boundaries..., 1.
GroupSchedule make_schedule(const std::vector<double>& boundaries);

// Relabels groups so that order[p] is generated p-th (ids refer to the input
// partition). Keeps the index sets, changes only the generation order.
GroupPartition with_generation_order(const GroupPartition& partition,
                                     const std::vector<int>& order);

}  // namespace gdm
