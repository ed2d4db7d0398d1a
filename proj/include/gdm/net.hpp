#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gdm {

enum class Activation { silu, relu, tanh };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Fully-connected vector field u(x_t, cond) with a flat parameter vector and
// reverse-mode gradients written out by hand. The group ramp values enter
// through a fixed sinusoidal embedding (cond_embed_dim per group; 0 feeds
// them raw), concatenated to the state.
class VectorFieldNet {
public:
    // layer_dims runs input..output; layer_dims[0] must equal
    // data_dim + cond_dim * max(cond_embed_dim, 1) and layer_dims.back()
    // must equal data_dim.
    VectorFieldNet(std::vector<int> layer_dims, Activation activation, int data_dim, int cond_dim,
                   int cond_embed_dim = 16);

    // He-scaled hidden weights, zero output layer: the initial vector field
    // is identically zero, so an untrained sampler is the identity map.
    static VectorFieldNet init(const std::vector<int>& hidden_dims, Activation activation,
                               int data_dim, int cond_dim, uint64_t seed, int cond_embed_dim = 16);

    Eigen::VectorXd forward(const Eigen::VectorXd& x_t, const Eigen::VectorXd& cond) const;

    // Gradient of <loss_grad, forward(x_t, cond)> with respect to params.
    Eigen::VectorXd backward(const Eigen::VectorXd& x_t, const Eigen::VectorXd& cond,
                             const Eigen::VectorXd& loss_grad) const;

    // Batched paths used by the trainer; rows are samples. backward_batch
    // accumulates the parameter gradient over all rows (fixed index order).
    struct ForwardCache {
        std::vector<Eigen::MatrixXd> inputs;       // per-layer input activations
        std::vector<Eigen::MatrixXd> preacts;      // hidden pre-activations
        Eigen::MatrixXd output;
    };
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x_t, const Eigen::MatrixXd& cond,
                                  ForwardCache* cache = nullptr) const;
    Eigen::VectorXd backward_batch(const ForwardCache& cache,
                                   const Eigen::MatrixXd& loss_grad) const;

    Eigen::MatrixXd embed_cond(const Eigen::MatrixXd& cond) const;

    const std::vector<int>& layer_dims() const { return layer_dims_; }
    Activation activation() const { return activation_; }
    int data_dim() const { return data_dim_; }
    int cond_dim() const { return cond_dim_; }
    int cond_embed_dim() const { return cond_embed_dim_; }
    int num_layers() const { return static_cast<int>(layer_dims_.size()) - 1; }
    int param_count() const { return static_cast<int>(params_.size()); }

    const Eigen::VectorXd& params() const { return params_; }
    Eigen::VectorXd& mutable_params() { return params_; }

    // Flat slice [begin, end) of layer l's weights+biases within params.
    std::pair<int, int> layer_param_range(int layer) const;

    static int expected_param_count(const std::vector<int>& layer_dims);

private:
    std::vector<int> layer_dims_;
    Activation activation_ = Activation::silu;
    int data_dim_ = 0;
    int cond_dim_ = 0;
    int cond_embed_dim_ = 16;
    Eigen::VectorXd params_;
    std::vector<int> weight_offsets_;  // per layer: weight block start
    std::vector<int> bias_offsets_;    // per layer: bias block start

    Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
    Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
};

}  // namespace gdm
