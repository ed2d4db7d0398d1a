#include "gdm/grouping.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gdm {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Contiguous near-equal split of n items into k bands; band b covers
// [floor(b*n/k), floor((b+1)*n/k)).
int band_of(int index, int n, int k) {
    for (int b = 0; b < k; ++b) {
        const int hi = static_cast<int>((static_cast<long long>(b + 1) * n) / k);
        if (index < hi) return b;
    }
    return k - 1;
}

GroupPartition from_generation_positions(int d, int k, const std::vector<int>& position,
                                         Strategy strategy, const PartitionParams& params) {
    GroupPartition p;
    p.d = d;
    p.k = k;
    p.assignment.resize(d);
    for (int i = 0; i < d; ++i) p.assignment[i] = k - 1 - position[i];
    p.strategy = strategy;
    p.params = params;
    p.validate();
    return p;
}

std::vector<int> cdm_stage_of(int height, int width, int levels) {
    std::vector<int> stage(static_cast<size_t>(height) * width, -1);
    for (int l = 0; l < levels; ++l) {
        const int step = 1 << (levels - 1 - l);
        for (int r = 0; r < height; r += step)
            for (int c = 0; c < width; c += step) {
                const size_t idx = static_cast<size_t>(r) * width + c;
                if (stage[idx] < 0) stage[idx] = l;
            }
    }
    return stage;
}

}  // namespace

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::explicit_assignment: return "explicit";
        case Strategy::rows_bottom_top: return "rows_bottom_top";
        case Strategy::rows_top_bottom: return "rows_top_bottom";
        case Strategy::cols_right_left: return "cols_right_left";
        case Strategy::blocks: return "blocks";
        case Strategy::cdm: return "cdm";
        case Strategy::cdm_inverse: return "cdm_inverse";
        case Strategy::per_element_raster: return "per_element_raster";
        case Strategy::frequency_bands: return "frequency_bands";
        case Strategy::custom_order: return "custom_order";
    }
    return "explicit";
}

Strategy strategy_from_name(const std::string& name) {
    for (Strategy s : {Strategy::explicit_assignment, Strategy::rows_bottom_top,
                       Strategy::rows_top_bottom, Strategy::cols_right_left, Strategy::blocks,
                       Strategy::cdm, Strategy::cdm_inverse, Strategy::per_element_raster,
                       Strategy::frequency_bands, Strategy::custom_order}) {
        if (strategy_name(s) == name) return s;
    }
    throw std::invalid_argument("unknown partition strategy: " + name);
}

void GroupPartition::validate() const {
    require(d >= 1, "partition: d must be positive");
    require(k >= 1 && k <= d, "partition: k must be in [1, d]");
    require(static_cast<int>(assignment.size()) == d, "partition: assignment length != d");
    std::vector<int> count(k, 0);
    for (int g : assignment) {
        require(g >= 0 && g < k, "partition: group index out of range");
        ++count[g];
    }
    for (int g = 0; g < k; ++g) require(count[g] > 0, "partition: empty group " + std::to_string(g));
}

std::vector<int> GroupPartition::group_members(int group) const {
    require(group >= 0 && group < k, "partition: group id out of range");
    std::vector<int> members;
    for (int i = 0; i < d; ++i)
        if (assignment[i] == group) members.push_back(i);
    return members;
}

void GroupSchedule::validate() const {
    const int n = k();
    require(n >= 1, "schedule: needs at least one group");
    require(static_cast<int>(t_end.size()) == n, "schedule: t_start/t_end length mismatch");
    for (int j = 0; j < n; ++j) {
        require(t_start[j] >= 0.0 && t_start[j] < 1.0, "schedule: t_start out of [0,1)");
        require(t_end[j] > 0.0 && t_end[j] <= 1.0, "schedule: t_end out of (0,1]");
        require(t_start[j] < t_end[j], "schedule: interval " + std::to_string(j) + " is empty");
    }
    // Sorted by start, intervals must abut exactly and tile [0, 1].
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return t_start[a] < t_start[b]; });
    require(t_start[idx.front()] == 0.0, "schedule: coverage must start at 0");
    for (int j = 0; j + 1 < n; ++j)
        require(t_end[idx[j]] == t_start[idx[j + 1]],
                "schedule: intervals overlap or leave dead time");
    require(t_end[idx.back()] == 1.0, "schedule: coverage must end at 1");
}

bool GroupSchedule::is_breakpoint(double t) const {
    for (int j = 0; j < k(); ++j)
        if (t == t_start[j] || t == t_end[j]) return true;
    return false;
}

double group_alpha_at(const GroupSchedule& schedule, int group, double t) {
    const double a = schedule.t_start[group];
    const double b = schedule.t_end[group];
    if (t <= a) return 1.0;
    if (t > b) return 0.0;
    return (t - b) / (a - b);
}

double group_alpha_prime_at(const GroupSchedule& schedule, int group, double t,
                            bool midpoint_convention) {
    if (!midpoint_convention && schedule.is_breakpoint(t))
        throw std::invalid_argument(
            "alpha_prime: t lies exactly on an interval boundary; integrate with "
            "sub-step midpoints or pass the midpoint-convention flag");
    const double a = schedule.t_start[group];
    const double b = schedule.t_end[group];
    // Half-open membership (a, b] keeps the piecewise-constant derivative
    // single-valued at shared boundaries.
    if (t > a && t <= b) return 1.0 / (a - b);
    return 0.0;
}

namespace {

void check_eval_args(const GroupPartition& partition, const GroupSchedule& schedule, double t) {
    if (partition.k != schedule.k())
        throw std::invalid_argument("alpha: partition and schedule disagree on k");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("alpha: t outside [0,1]");
}

}  // namespace

ScheduleDiag alpha_at(const GroupPartition& partition, const GroupSchedule& schedule, double t) {
    check_eval_args(partition, schedule, t);
    Eigen::VectorXd per_group(partition.k);
    for (int g = 0; g < partition.k; ++g) per_group(g) = group_alpha_at(schedule, g, t);
    ScheduleDiag diag;
    diag.t = t;
    diag.values.resize(partition.d);
    for (int i = 0; i < partition.d; ++i) diag.values(i) = per_group(partition.assignment[i]);
    return diag;
}

ScheduleDiag alpha_prime_at(const GroupPartition& partition, const GroupSchedule& schedule,
                            double t, bool midpoint_convention) {
    check_eval_args(partition, schedule, t);
    Eigen::VectorXd per_group(partition.k);
    for (int g = 0; g < partition.k; ++g)
        per_group(g) = group_alpha_prime_at(schedule, g, t, midpoint_convention);
    ScheduleDiag diag;
    diag.t = t;
    diag.values.resize(partition.d);
    for (int i = 0; i < partition.d; ++i) diag.values(i) = per_group(partition.assignment[i]);
    return diag;
}

Eigen::VectorXd group_alphas_at(const GroupSchedule& schedule, double t) {
    Eigen::VectorXd alphas(schedule.k());
    for (int g = 0; g < schedule.k(); ++g) alphas(g) = group_alpha_at(schedule, g, t);
    return alphas;
}

GroupPartition make_partition(Strategy strategy, int height, int width,
                              const PartitionParams& params) {
    require(height >= 1 && width >= 1, "make_partition: bad dimensions");
    const int d = height * width;
    std::vector<int> position(d);  // generation position of each coordinate's group

    switch (strategy) {
        case Strategy::rows_bottom_top:
        case Strategy::rows_top_bottom: {
            const int k = params.groups;
            require(k >= 1 && k <= height, "make_partition: row band count out of range");
            for (int r = 0; r < height; ++r) {
                const int band = band_of(r, height, k);  // 0 = top band
                const int pos = strategy == Strategy::rows_bottom_top ? k - 1 - band : band;
                for (int c = 0; c < width; ++c) position[r * width + c] = pos;
            }
            return from_generation_positions(d, k, position, strategy, params);
        }
        case Strategy::cols_right_left: {
            const int k = params.groups;
            require(k >= 1 && k <= width, "make_partition: column band count out of range");
            for (int c = 0; c < width; ++c) {
                const int band = band_of(c, width, k);  // 0 = leftmost band
                const int pos = k - 1 - band;           // rightmost generated first
                for (int r = 0; r < height; ++r) position[r * width + c] = pos;
            }
            return from_generation_positions(d, k, position, strategy, params);
        }
        case Strategy::blocks:
        case Strategy::custom_order: {
            const int gh = params.grid_h;
            const int gw = params.grid_w;
            require(gh >= 1 && gw >= 1, "make_partition: block grid missing");
            require(height % gh == 0 && width % gw == 0,
                    "make_partition: block grid does not divide the image");
            const int k = gh * gw;
            std::vector<int> block_pos(k);  // generation position of each block
            if (strategy == Strategy::custom_order) {
                require(static_cast<int>(params.order.size()) == k,
                        "make_partition: custom order must list every block");
                std::vector<bool> seen(k, false);
                for (int p = 0; p < k; ++p) {
                    const int b = params.order[p];
                    require(b >= 0 && b < k && !seen[b],
                            "make_partition: custom order is not a permutation");
                    seen[b] = true;
                    block_pos[b] = p;
                }
            } else {
                std::iota(block_pos.begin(), block_pos.end(), 0);  // raster block order
            }
            const int bh = height / gh;
            const int bw = width / gw;
            for (int r = 0; r < height; ++r)
                for (int c = 0; c < width; ++c)
                    position[r * width + c] = block_pos[(r / bh) * gw + (c / bw)];
            return from_generation_positions(d, k, position, strategy, params);
        }
        case Strategy::cdm:
        case Strategy::cdm_inverse: {
            const int levels = params.levels;
            require(levels >= 2, "make_partition: cdm needs at least 2 levels");
            const int step = 1 << (levels - 1);
            require(height % step == 0 && width % step == 0,
                    "make_partition: dimensions not divisible by the coarse stride");
            const std::vector<int> stage = cdm_stage_of(height, width, levels);
            for (int i = 0; i < d; ++i)
                position[i] = strategy == Strategy::cdm ? stage[i] : levels - 1 - stage[i];
            return from_generation_positions(d, levels, position, strategy, params);
        }
        case Strategy::per_element_raster: {
            std::iota(position.begin(), position.end(), 0);
            return from_generation_positions(d, d, position, strategy, params);
        }
        case Strategy::frequency_bands: {
            const auto& cuts = params.cutoffs;
            require(!cuts.empty(), "make_partition: frequency cutoffs missing");
            int prev = 0;
            for (size_t j = 0; j < cuts.size(); ++j) {
                require(cuts[j] > prev, "make_partition: cutoffs must be strictly increasing");
                prev = cuts[j];
            }
            require(cuts.back() == d, "make_partition: cutoffs must end at d");
            const int k = static_cast<int>(cuts.size());
            int lo = 0;
            for (int j = 0; j < k; ++j) {
                for (int i = lo; i < cuts[j]; ++i) position[i] = j;  // lowest band first
                lo = cuts[j];
            }
            return from_generation_positions(d, k, position, strategy, params);
        }
        case Strategy::explicit_assignment:
            throw std::invalid_argument("make_partition: explicit assignments are built directly");
    }
    throw std::invalid_argument("make_partition: unknown strategy");
}

GroupSchedule make_uniform_schedule(int k) {
    require(k >= 1, "make_uniform_schedule: k must be >= 1");
    GroupSchedule s;
    s.t_start.resize(k);
    s.t_end.resize(k);
    for (int j = 0; j < k; ++j) {
        s.t_start[j] = static_cast<double>(j) / k;
        s.t_end[j] = static_cast<double>(j + 1) / k;
    }
    s.t_start[0] = 0.0;
    s.t_end[k - 1] = 1.0;
    s.validate();
    return s;
}

GroupSchedule make_schedule(const std::vector<double>& boundaries) {
    GroupSchedule s;
    double prev = 0.0;
    for (double b : boundaries) {
        require(b > prev && b < 1.0, "make_schedule: boundaries must increase inside (0,1)");
        s.t_start.push_back(prev);
        s.t_end.push_back(b);
        prev = b;
    }
    s.t_start.push_back(prev);
    s.t_end.push_back(1.0);
    s.validate();
    return s;
}

GroupPartition with_generation_order(const GroupPartition& partition,
                                     const std::vector<int>& order) {
    partition.validate();
    require(static_cast<int>(order.size()) == partition.k,
            "with_generation_order: order must list every group");
    std::vector<int> new_index(partition.k, -1);
    for (int p = 0; p < partition.k; ++p) {
        const int g = order[p];
        require(g >= 0 && g < partition.k && new_index[g] < 0,
                "with_generation_order: order is not a permutation");
        new_index[g] = partition.k - 1 - p;
    }
    GroupPartition out = partition;
    out.strategy = Strategy::explicit_assignment;
    out.params = {};
    for (int i = 0; i < partition.d; ++i) out.assignment[i] = new_index[partition.assignment[i]];
    out.validate();
    return out;
}

}  // namespace gdm
