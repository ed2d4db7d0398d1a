#include "gdm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gdm {

namespace {

std::vector<int> interval_order(const GroupSchedule& schedule) {
    std::vector<int> idx(schedule.k());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return schedule.t_start[a] < schedule.t_start[b]; });
    return idx;
}

std::vector<int> allocate_steps(const GroupSchedule& schedule, int total_steps,
                                StepAllocation allocation,
                                const std::vector<int>& explicit_steps) {
    const int k = schedule.k();
    std::vector<int> steps(k, 1);
    switch (allocation) {
        case StepAllocation::explicit_alloc: {
            if (static_cast<int>(explicit_steps.size()) != k)
                throw std::invalid_argument("grid: explicit step counts must cover every group");
            int sum = 0;
            for (int g = 0; g < k; ++g) {
                if (explicit_steps[g] < 1)
                    throw std::invalid_argument("grid: every group needs at least one step");
                sum += explicit_steps[g];
            }
            if (sum != total_steps)
                throw std::invalid_argument("grid: explicit step counts do not sum to total");
            return explicit_steps;
        }
        case StepAllocation::uniform_per_group: {
            const int base = total_steps / k;
            const int extra = total_steps % k;
            const std::vector<int> order = interval_order(schedule);
            for (int g = 0; g < k; ++g) steps[g] = base;
            for (int e = 0; e < extra; ++e) ++steps[order[e]];
            return steps;
        }
        case StepAllocation::proportional: {
            // Largest-remainder round of total * interval length, floor 1.
            std::vector<double> target(k);
            for (int g = 0; g < k; ++g)
                target[g] = total_steps * (schedule.t_end[g] - schedule.t_start[g]);
            int sum = 0;
            for (int g = 0; g < k; ++g) {
                steps[g] = std::max(1, static_cast<int>(std::floor(target[g])));
                sum += steps[g];
            }
            auto next_adjust = [&](bool add) {
                int best = -1;
                double best_gap = add ? -1.0 : 1e300;
                for (int g = 0; g < k; ++g) {
                    const double gap = target[g] - steps[g];
                    if (add ? gap > best_gap : (gap < best_gap && steps[g] > 1)) {
                        best_gap = gap;
                        best = g;
                    }
                }
                return best;
            };
            while (sum < total_steps) {
                ++steps[next_adjust(true)];
                ++sum;
            }
            while (sum > total_steps) {
                const int g = next_adjust(false);
                if (g < 0) throw std::invalid_argument("grid: cannot honor minimum one step per group");
                --steps[g];
                --sum;
            }
            return steps;
        }
    }
    throw std::invalid_argument("grid: unknown allocation");
}

}  // namespace

StepGrid make_grid(const GroupSchedule& schedule, int total_steps, StepAllocation allocation,
                   const std::vector<int>& explicit_steps) {
    schedule.validate();
    const int k = schedule.k();
    if (total_steps < k)
        throw std::invalid_argument("grid: total steps must be at least the group count");

    StepGrid grid;
    grid.per_group_steps = allocate_steps(schedule, total_steps, allocation, explicit_steps);

    for (int g : interval_order(schedule)) {
        const double a = schedule.t_start[g];
        const double b = schedule.t_end[g];
        const int n = grid.per_group_steps[g];
        if (grid.times.empty()) grid.times.push_back(a);
        for (int i = 1; i < n; ++i)
            grid.times.push_back(a + (b - a) * (static_cast<double>(i) / n));
        grid.times.push_back(b);  // boundary kept exact
    }
    return grid;
}

namespace {

enum class Direction { backward, forward };

Eigen::VectorXd integrate(const VectorFieldNet& net, const FlowConfig& cfg,
                          const Eigen::VectorXd& start_coeffs, const StepGrid& grid,
                          Direction dir, const StepObserver& observer) {
    cfg.validate();
    if (start_coeffs.size() != cfg.d())
        throw std::invalid_argument("sampler: state length != d");
    const int n = grid.total_steps();
    if (n < 1) throw std::invalid_argument("sampler: empty grid");

    Eigen::VectorXd state = start_coeffs;
    for (int s = 0; s < n; ++s) {
        double t_hi, t_lo;
        if (dir == Direction::backward) {
            t_hi = grid.times[n - s];
            t_lo = grid.times[n - s - 1];
        } else {
            t_lo = grid.times[s];
            t_hi = grid.times[s + 1];
        }
        const double t_mid = 0.5 * (t_hi + t_lo);
        const double dt = t_hi - t_lo;

        Eigen::VectorXd input_coeffs = state;
        if (cfg.mask_inactive_inputs)
            input_coeffs = active_mask(cfg, t_mid).cwiseProduct(input_coeffs);
        const Eigen::VectorXd u =
            net.forward(cfg.basis.from_freq(input_coeffs), group_alphas_at(cfg.schedule, t_mid));
        const Eigen::VectorXd u_coeffs = cfg.basis.to_freq(u);
        const Eigen::VectorXd ap = coeff_alpha_prime(cfg, t_mid, true);

        if (dir == Direction::backward)
            state -= dt * ap.cwiseProduct(u_coeffs);
        else
            state += dt * ap.cwiseProduct(u_coeffs);

        if (!state.allFinite())
            throw std::runtime_error("sampler: non-finite state at step " + std::to_string(s));
        if (observer) observer(s, t_hi, t_lo, state);
    }
    return state;
}

Eigen::MatrixXd integrate_batch(const VectorFieldNet& net, const FlowConfig& cfg,
                                const Eigen::MatrixXd& start_rows, const StepGrid& grid,
                                Direction dir) {
    cfg.validate();
    if (start_rows.cols() != cfg.d())
        throw std::invalid_argument("sampler: state width != d");
    const int n = grid.total_steps();
    const Eigen::Index rows = start_rows.rows();

    // Coefficient-space state for every trajectory.
    Eigen::MatrixXd state(rows, cfg.d());
    for (Eigen::Index r = 0; r < rows; ++r)
        state.row(r) = cfg.basis.to_freq(start_rows.row(r).transpose()).transpose();

    Eigen::MatrixXd pixel(rows, cfg.d());
    for (int s = 0; s < n; ++s) {
        const double t_hi = dir == Direction::backward ? grid.times[n - s] : grid.times[s + 1];
        const double t_lo = dir == Direction::backward ? grid.times[n - s - 1] : grid.times[s];
        const double t_mid = 0.5 * (t_hi + t_lo);
        const double dt = t_hi - t_lo;

        const Eigen::VectorXd mask =
            cfg.mask_inactive_inputs ? active_mask(cfg, t_mid) : Eigen::VectorXd();
        for (Eigen::Index r = 0; r < rows; ++r) {
            Eigen::VectorXd coeffs = state.row(r).transpose();
            if (mask.size() > 0) coeffs = mask.cwiseProduct(coeffs);
            pixel.row(r) = cfg.basis.from_freq(coeffs).transpose();
        }
        const Eigen::VectorXd cond = group_alphas_at(cfg.schedule, t_mid);
        const Eigen::MatrixXd u =
            net.forward_batch(pixel, cond.transpose().replicate(rows, 1));
        const Eigen::VectorXd ap = coeff_alpha_prime(cfg, t_mid, true);
        const double sign = dir == Direction::backward ? -1.0 : 1.0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Eigen::VectorXd u_coeffs = cfg.basis.to_freq(u.row(r).transpose());
            state.row(r) += (sign * dt) * ap.cwiseProduct(u_coeffs).transpose();
        }
        if (!state.allFinite())
            throw std::runtime_error("sampler: non-finite batch state at step " + std::to_string(s));
    }

    Eigen::MatrixXd out(rows, cfg.d());
    for (Eigen::Index r = 0; r < rows; ++r)
        out.row(r) = cfg.basis.from_freq(state.row(r).transpose()).transpose();
    return out;
}

}  // namespace

Eigen::VectorXd sample_coeffs(const VectorFieldNet& net, const FlowConfig& cfg,
                              const Eigen::VectorXd& z_coeffs, const StepGrid& grid,
                              const StepObserver& observer) {
    return integrate(net, cfg, z_coeffs, grid, Direction::backward, observer);
}

Eigen::VectorXd encode_coeffs(const VectorFieldNet& net, const FlowConfig& cfg,
                              const Eigen::VectorXd& x_coeffs, const StepGrid& grid,
                              const StepObserver& observer) {
    return integrate(net, cfg, x_coeffs, grid, Direction::forward, observer);
}

Eigen::VectorXd sample(const VectorFieldNet& net, const FlowConfig& cfg, const Eigen::VectorXd& z,
                       const StepGrid& grid, const StepObserver& observer) {
    return cfg.basis.from_freq(
        sample_coeffs(net, cfg, cfg.basis.to_freq(z), grid, observer));
}

Eigen::VectorXd encode(const VectorFieldNet& net, const FlowConfig& cfg, const Eigen::VectorXd& x,
                       const StepGrid& grid, const StepObserver& observer) {
    return cfg.basis.from_freq(
        encode_coeffs(net, cfg, cfg.basis.to_freq(x), grid, observer));
}

Eigen::MatrixXd sample_batch(const VectorFieldNet& net, const FlowConfig& cfg,
                             const Eigen::MatrixXd& z_rows, const StepGrid& grid) {
    return integrate_batch(net, cfg, z_rows, grid, Direction::backward);
}

Eigen::MatrixXd encode_batch(const VectorFieldNet& net, const FlowConfig& cfg,
                             const Eigen::MatrixXd& x_rows, const StepGrid& grid) {
    return integrate_batch(net, cfg, x_rows, grid, Direction::forward);
}

}  // namespace gdm
