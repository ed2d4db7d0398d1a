#include "gdm/flow.hpp"

#include <stdexcept>

namespace gdm {

void FlowConfig::validate() const {
    partition.validate();
    schedule.validate();
    if (partition.k != schedule.k())
        throw std::invalid_argument("flow config: partition and schedule disagree on k");
    if (partition.d != basis.d())
        throw std::invalid_argument("flow config: partition and basis disagree on d");
    if (solver_steps < partition.k)
        throw std::invalid_argument("flow config: solver_steps must be >= k");
}

namespace {

void check_length(const FlowConfig& cfg, const Eigen::VectorXd& v, const char* what) {
    if (v.size() != cfg.d())
        throw std::invalid_argument(std::string("flow: ") + what + " length != d");
}

}  // namespace

Eigen::VectorXd coeff_alpha(const FlowConfig& cfg, double t) {
    return alpha_at(cfg.partition, cfg.schedule, t).values;
}

Eigen::VectorXd coeff_alpha_prime(const FlowConfig& cfg, double t, bool midpoint_convention) {
    return alpha_prime_at(cfg.partition, cfg.schedule, t, midpoint_convention).values;
}

TrainingPair corrupt(const FlowConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                     double t) {
    check_length(cfg, x, "x");
    check_length(cfg, z, "z");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("flow: t outside [0,1]");

    TrainingPair pair;
    pair.x = x;
    pair.z = z;
    pair.t = t;
    const Eigen::VectorXd a = coeff_alpha(cfg, t);
    const Eigen::VectorXd xf = cfg.basis.to_freq(x);
    const Eigen::VectorXd zf = cfg.basis.to_freq(z);
    const Eigen::VectorXd mixed =
        a.cwiseProduct(xf) + (Eigen::VectorXd::Ones(cfg.d()) - a).cwiseProduct(zf);
    pair.x_t = cfg.basis.from_freq(mixed);
    pair.target = x - z;
    pair.cond = group_alphas_at(cfg.schedule, t);
    return pair;
}

Eigen::VectorXd training_target(const FlowConfig& cfg, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& z) {
    check_length(cfg, x, "x");
    check_length(cfg, z, "z");
    return x - z;
}

Eigen::VectorXd velocity(const FlowConfig& cfg, const Eigen::VectorXd& u, double t) {
    check_length(cfg, u, "u");
    const Eigen::VectorXd ap = coeff_alpha_prime(cfg, t);
    return cfg.basis.from_freq(ap.cwiseProduct(cfg.basis.to_freq(u)));
}

Eigen::VectorXd active_mask(const FlowConfig& cfg, double t) {
    Eigen::VectorXd group_mask(cfg.k());
    for (int g = 0; g < cfg.k(); ++g)
        group_mask(g) = cfg.schedule.t_end[g] < t ? 0.0 : 1.0;
    Eigen::VectorXd m(cfg.d());
    for (int i = 0; i < cfg.d(); ++i) m(i) = group_mask(cfg.partition.assignment[i]);
    return m;
}

Eigen::VectorXd mask_inactive(const FlowConfig& cfg, const Eigen::VectorXd& x_t, double t) {
    check_length(cfg, x_t, "x_t");
    const Eigen::VectorXd m = active_mask(cfg, t);
    return cfg.basis.from_freq(m.cwiseProduct(cfg.basis.to_freq(x_t)));
}

}  // namespace gdm
