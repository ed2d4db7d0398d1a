#pragma once

#include <Eigen/Dense>

#include "gdm/basis.hpp"
#include "gdm/grouping.hpp"

namespace gdm {

// Everything that pins down one groupwise flow model: which coordinates
// form groups (over frequency-ordered coefficients), when each group
// diffuses, in which orthogonal basis, whether not-yet-generated inputs are
// zeroed for the network, and the default solver budget.
struct FlowConfig {
    GroupPartition partition;
    GroupSchedule schedule;
    OrthoBasis basis = OrthoBasis::identity(1);
    bool mask_inactive_inputs = false;
    int solver_steps = 1;

    int d() const { return partition.d; }
    int k() const { return partition.k; }
    void validate() const;
};

struct TrainingPair {
    Eigen::VectorXd x;       // clean data, pixel space
    Eigen::VectorXd z;       // noise draw
    double t = 0.0;
    Eigen::VectorXd x_t;     // interpolated state, pixel space
    Eigen::VectorXd target;  // x - z
    Eigen::VectorXd cond;    // per-group ramp values at t
};

// Interpolates each frequency-ordered coefficient group on its own clock:
// x_t = from_freq(a(t) .* to_freq(x) + (1 - a(t)) .* to_freq(z)).
TrainingPair corrupt(const FlowConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                     double t);

// Regression target of the unweighted objective; basis-independent.
Eigen::VectorXd training_target(const FlowConfig& cfg, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& z);

// Pixel-space drift assembled from the network output: from_freq(a'(t) .*
// to_freq(u)). t must avoid interval endpoints (integrators use sub-step
// midpoints).
Eigen::VectorXd velocity(const FlowConfig& cfg, const Eigen::VectorXd& u, double t);

// Zeroes coefficients of groups that are still pure noise at time t
// (t_end < t), so the network provably cannot depend on them.
Eigen::VectorXd mask_inactive(const FlowConfig& cfg, const Eigen::VectorXd& x_t, double t);

// Coefficient-space mask as a 0/1 vector over frequency-ordered indices.
Eigen::VectorXd active_mask(const FlowConfig& cfg, double t);

// Per-coordinate ramp values over frequency-ordered coefficients.
Eigen::VectorXd coeff_alpha(const FlowConfig& cfg, double t);
Eigen::VectorXd coeff_alpha_prime(const FlowConfig& cfg, double t,
                                  bool midpoint_convention = false);

}  // namespace gdm
