#include "gdm/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "gdm/checkpoint.hpp"
#include "gdm/rng.hpp"

namespace gdm {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

// Per-row draw keyed on the row's contents, so a batch permutation feeds
// every row the same (z, t) pair.
struct RowDraw {
    Eigen::VectorXd z;
    double t;
};

RowDraw draw_for_row(const TrainState& state, const FlowConfig& cfg,
                     const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    const uint64_t row_key =
        fnv1a64(row.data(), sizeof(double) * static_cast<size_t>(row.size()));
    Rng rng(mix_seed(state.rng_seed, static_cast<uint64_t>(state.step), row_key));
    RowDraw draw;
    draw.z = rng.normal_vector(static_cast<int>(row.size()));
    // Exact breakpoints carry no gradient signal and are ambiguous for the
    // ramp derivative; resample the probability-zero hits.
    do {
        draw.t = rng.uniform();
    } while (draw.t == 0.0 || cfg.schedule.is_breakpoint(draw.t));
    return draw;
}

struct BatchTensors {
    Eigen::MatrixXd inputs;   // corrupted states
    Eigen::MatrixXd cond;     // group ramps per row
    Eigen::MatrixXd targets;  // x - z
};

BatchTensors assemble_batch(const TrainState& state, const FlowConfig& cfg,
                            const Eigen::MatrixXd& batch) {
    if (batch.rows() < 1) throw std::invalid_argument("trainer: empty batch");
    if (batch.cols() != cfg.d()) throw std::invalid_argument("trainer: batch width != d");
    const Eigen::Index n = batch.rows();
    BatchTensors out;
    out.inputs.resize(n, cfg.d());
    out.cond.resize(n, cfg.k());
    out.targets.resize(n, cfg.d());
    for (Eigen::Index r = 0; r < n; ++r) {
        const RowDraw draw = draw_for_row(state, cfg, batch.row(r));
        const TrainingPair pair = corrupt(cfg, batch.row(r).transpose(), draw.z, draw.t);
        Eigen::VectorXd input = pair.x_t;
        if (cfg.mask_inactive_inputs) input = mask_inactive(cfg, input, draw.t);
        out.inputs.row(r) = input.transpose();
        out.cond.row(r) = pair.cond.transpose();
        out.targets.row(r) = pair.target.transpose();
    }
    return out;
}

double mean_squared_residual(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < prediction.rows(); ++r)
        acc += (target.row(r) - prediction.row(r)).squaredNorm();
    return acc / static_cast<double>(prediction.rows());
}

double effective_lr(const TrainState& state) {
    if (state.lr_anneal == LrAnneal::linear && state.total_steps > 0) {
        const double frac = static_cast<double>(state.step) / state.total_steps;
        return state.lr * std::max(0.0, 1.0 - frac);
    }
    return state.lr;
}

}  // namespace

TrainState make_train_state(VectorFieldNet net, const TrainHyperparams& hyper) {
    if (!(hyper.lr > 0.0)) throw std::invalid_argument("trainer: lr must be > 0");
    if (hyper.batch_size < 1) throw std::invalid_argument("trainer: batch size must be >= 1");
    if (hyper.steps < 1) throw std::invalid_argument("trainer: steps must be >= 1");
    TrainState state(std::move(net));
    state.lr = hyper.lr;
    state.lr_anneal = hyper.lr_anneal;
    state.total_steps = hyper.steps;
    state.batch_size = hyper.batch_size;
    state.rng_seed = hyper.seed;
    return state;
}

double loss_batch(const TrainState& state, const FlowConfig& cfg, const Eigen::MatrixXd& batch) {
    cfg.validate();
    const BatchTensors tensors = assemble_batch(state, cfg, batch);
    const Eigen::MatrixXd prediction = state.net.forward_batch(tensors.inputs, tensors.cond);
    return mean_squared_residual(prediction, tensors.targets);
}

double train_step(TrainState& state, const FlowConfig& cfg, const Eigen::MatrixXd& batch) {
    cfg.validate();
    const BatchTensors tensors = assemble_batch(state, cfg, batch);

    VectorFieldNet::ForwardCache cache;
    const Eigen::MatrixXd prediction = state.net.forward_batch(tensors.inputs, tensors.cond, &cache);
    const double loss = mean_squared_residual(prediction, tensors.targets);
    if (!std::isfinite(loss))
        throw std::runtime_error("trainer: non-finite loss at step " + std::to_string(state.step));

    const Eigen::MatrixXd loss_grad =
        (2.0 / static_cast<double>(batch.rows())) * (prediction - tensors.targets);
    const Eigen::VectorXd grad = state.net.backward_batch(cache, loss_grad);

    const double lr_t = effective_lr(state);
    state.step += 1;
    state.adam_m = kBeta1 * state.adam_m + (1.0 - kBeta1) * grad;
    state.adam_v = kBeta2 * state.adam_v + (1.0 - kBeta2) * grad.cwiseAbs2();
    const double m_corr = 1.0 - std::pow(kBeta1, state.step);
    const double v_corr = 1.0 - std::pow(kBeta2, state.step);
    Eigen::VectorXd update =
        (state.adam_m / m_corr).cwiseQuotient(((state.adam_v / v_corr).cwiseSqrt().array() + kEps).matrix());
    state.net.mutable_params() -= lr_t * update;
    return loss;
}

TrainResult train(const std::vector<FlowConfig>& cfgs, const Dataset& dataset,
                  const TrainHyperparams& hyper) {
    if (cfgs.empty()) throw std::invalid_argument("trainer: no flow configs given");
    for (const auto& cfg : cfgs) {
        cfg.validate();
        if (cfg.d() != dataset.d())
            throw std::invalid_argument("trainer: config and dataset disagree on d");
        if (cfg.k() != cfgs.front().k())
            throw std::invalid_argument("trainer: all configs must share the group count");
    }
    dataset.validate();

    const int per_cond = cfgs.front().k();
    const int hidden = dataset.d() <= 4 ? 128 : 256;
    VectorFieldNet net = VectorFieldNet::init({hidden, hidden, hidden}, Activation::silu,
                                              dataset.d(), per_cond, hyper.seed);
    TrainState state = make_train_state(std::move(net), hyper);

    std::ofstream csv;
    if (!hyper.loss_csv.empty()) {
        csv.open(hyper.loss_csv);
        if (!csv) throw std::runtime_error("trainer: cannot open loss log " + hyper.loss_csv);
        csv << "step,loss,lr\n";
    }
    if (!hyper.out_dir.empty()) std::filesystem::create_directories(hyper.out_dir);

    Rng batch_rng(mix_seed(hyper.seed, 0x62617463ull));
    Rng cfg_rng(mix_seed(hyper.seed, 0x6f726472ull));
    TrainResult result{state.net, {}};
    result.losses.reserve(hyper.steps);

    for (int s = 0; s < hyper.steps; ++s) {
        Eigen::MatrixXd batch(hyper.batch_size, dataset.d());
        for (int r = 0; r < hyper.batch_size; ++r)
            batch.row(r) = dataset.samples.row(
                static_cast<Eigen::Index>(batch_rng.uniform_index(dataset.n())));
        const FlowConfig& cfg =
            cfgs.size() == 1 ? cfgs.front()
                             : cfgs[cfg_rng.uniform_index(cfgs.size())];
        const double lr_now = effective_lr(state);
        const double loss = train_step(state, cfg, batch);
        result.losses.push_back(loss);
        if (csv.is_open()) csv << state.step << "," << loss << "," << lr_now << "\n";
        if (!hyper.out_dir.empty() && hyper.checkpoint_every > 0 &&
            state.step % hyper.checkpoint_every == 0)
            save_checkpoint(hyper.out_dir + "/ckpt.gdm", state.net, cfgs.front());
    }
    if (!hyper.out_dir.empty())
        save_checkpoint(hyper.out_dir + "/ckpt.gdm", state.net, cfgs.front());
    result.net = state.net;
    return result;
}

TrainResult train(const FlowConfig& cfg, const Dataset& dataset, const TrainHyperparams& hyper) {
    return train(std::vector<FlowConfig>{cfg}, dataset, hyper);
}

}  // namespace gdm
