#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gdm/data.hpp"
#include "gdm/flow.hpp"
#include "gdm/net.hpp"

namespace gdm {

enum class LrAnneal { none, linear };

struct TrainHyperparams {
    int steps = 20000;
    int batch_size = 128;
    double lr = 1e-3;
    LrAnneal lr_anneal = LrAnneal::linear;
    uint64_t seed = 0;
    int checkpoint_every = 0;            // 0 = only at the end
    std::string out_dir;                 // empty = no checkpoints / logs
    std::string loss_csv;                // empty = no CSV
};

struct TrainState {
    VectorFieldNet net;
    Eigen::VectorXd adam_m;
    Eigen::VectorXd adam_v;
    int step = 0;
    double lr = 1e-3;
    LrAnneal lr_anneal = LrAnneal::none;
    int total_steps = 0;  // anneal horizon
    int batch_size = 0;
    uint64_t rng_seed = 0;

    explicit TrainState(VectorFieldNet n) : net(std::move(n)) {
        adam_m = Eigen::VectorXd::Zero(net.param_count());
        adam_v = Eigen::VectorXd::Zero(net.param_count());
    }
};

TrainState make_train_state(VectorFieldNet net, const TrainHyperparams& hyper);

// Mean over rows of ||(x - z) - u(x_t, cond)||^2 with z ~ N(0, I) and
// t ~ U(0,1) drawn from streams keyed on (seed, step, row contents), so the
// value does not depend on row order within the batch.
double loss_batch(const TrainState& state, const FlowConfig& cfg, const Eigen::MatrixXd& batch);

// One Adam update (beta1 0.9, beta2 0.999, eps 1e-8). Throws on a non-finite
// loss without touching the state. Returns the pre-update loss.
double train_step(TrainState& state, const FlowConfig& cfg, const Eigen::MatrixXd& batch);

struct TrainResult {
    VectorFieldNet net;
    std::vector<double> losses;  // one entry per step
};

// Full loop over minibatches sampled with replacement. When several configs
// are given, each step draws one uniformly (all must share d; the network is
// conditioned on the group ramps, so one model serves every schedule).
TrainResult train(const std::vector<FlowConfig>& cfgs, const Dataset& dataset,
                  const TrainHyperparams& hyper);
TrainResult train(const FlowConfig& cfg, const Dataset& dataset, const TrainHyperparams& hyper);

}  // namespace gdm
