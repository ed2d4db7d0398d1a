#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gdm/flow.hpp"
#include "gdm/net.hpp"

namespace gdm {

enum class StepAllocation { proportional, uniform_per_group, explicit_alloc };

// Integration grid aligned to the group intervals: every interval boundary
// is a grid point, so no Euler sub-step ever straddles a schedule
// breakpoint. times is stored ascending 0 -> 1; sampling walks it backward.
struct StepGrid {
    std::vector<double> times;
    std::vector<int> per_group_steps;  // indexed by group id

    int total_steps() const { return static_cast<int>(times.size()) - 1; }
};

StepGrid make_grid(const GroupSchedule& schedule, int total_steps,
                   StepAllocation allocation = StepAllocation::proportional,
                   const std::vector<int>& explicit_steps = {});

// Called once per Euler sub-step with the frequency-ordered coefficient
// state *after* the update; t_hi > t_lo bracket the sub-step.
using StepObserver =
    std::function<void(int step, double t_hi, double t_lo, const Eigen::VectorXd& coeffs)>;

// Integrates the generative ODE from t=1 to t=0 starting at noise z (pixel
// space). The state is carried in frequency-ordered coefficients, so
// coefficients outside their group's active interval are bit-exactly
// frozen; the network still sees pixel-space inputs.
Eigen::VectorXd sample(const VectorFieldNet& net, const FlowConfig& cfg, const Eigen::VectorXd& z,
                       const StepGrid& grid, const StepObserver& observer = nullptr);

// Forward integration 0 -> 1: maps data to its latent.
Eigen::VectorXd encode(const VectorFieldNet& net, const FlowConfig& cfg, const Eigen::VectorXd& x,
                       const StepGrid& grid, const StepObserver& observer = nullptr);

// Coefficient-space entry points (state in frequency order at both ends).
Eigen::VectorXd sample_coeffs(const VectorFieldNet& net, const FlowConfig& cfg,
                              const Eigen::VectorXd& z_coeffs, const StepGrid& grid,
                              const StepObserver& observer = nullptr);
Eigen::VectorXd encode_coeffs(const VectorFieldNet& net, const FlowConfig& cfg,
                              const Eigen::VectorXd& x_coeffs, const StepGrid& grid,
                              const StepObserver& observer = nullptr);

// Batched variants; rows are independent trajectories.
Eigen::MatrixXd sample_batch(const VectorFieldNet& net, const FlowConfig& cfg,
                             const Eigen::MatrixXd& z_rows, const StepGrid& grid);
Eigen::MatrixXd encode_batch(const VectorFieldNet& net, const FlowConfig& cfg,
                             const Eigen::MatrixXd& x_rows, const StepGrid& grid);

}  // namespace gdm
