#include "gdm/net.hpp"

#include <cmath>
#include <stdexcept>

#include "gdm/rng.hpp"

namespace gdm {

namespace {

double act_value(Activation a, double z) {
    switch (a) {
        case Activation::silu: return z / (1.0 + std::exp(-z));
        case Activation::relu: return z > 0.0 ? z : 0.0;
        case Activation::tanh: return std::tanh(z);
    }
    return z;
}

double act_deriv(Activation a, double z) {
    switch (a) {
        case Activation::silu: {
            const double s = 1.0 / (1.0 + std::exp(-z));
            return s * (1.0 + z * (1.0 - s));
        }
        case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
    }
    return 1.0;
}

}  // namespace

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::silu: return "silu";
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
    }
    return "silu";
}

Activation activation_from_name(const std::string& name) {
    if (name == "silu") return Activation::silu;
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation: " + name);
}

int VectorFieldNet::expected_param_count(const std::vector<int>& layer_dims) {
    int n = 0;
    for (size_t l = 0; l + 1 < layer_dims.size(); ++l)
        n += (layer_dims[l] + 1) * layer_dims[l + 1];
    return n;
}

VectorFieldNet::VectorFieldNet(std::vector<int> layer_dims, Activation activation, int data_dim,
                               int cond_dim, int cond_embed_dim)
    : layer_dims_(std::move(layer_dims)),
      activation_(activation),
      data_dim_(data_dim),
      cond_dim_(cond_dim),
      cond_embed_dim_(cond_embed_dim) {
    if (layer_dims_.size() < 2) throw std::invalid_argument("net: need at least input and output");
    for (int dim : layer_dims_)
        if (dim < 1) throw std::invalid_argument("net: layer dimensions must be positive");
    if (cond_embed_dim_ < 0 || cond_embed_dim_ % 2 != 0)
        throw std::invalid_argument("net: cond embedding size must be even (or 0 for raw)");
    const int per_cond = cond_embed_dim_ == 0 ? 1 : cond_embed_dim_;
    if (layer_dims_.front() != data_dim_ + cond_dim_ * per_cond)
        throw std::invalid_argument("net: input layer does not match data + embedded cond size");
    if (layer_dims_.back() != data_dim_)
        throw std::invalid_argument("net: output layer must match data dim");

    int offset = 0;
    for (int l = 0; l + 1 < static_cast<int>(layer_dims_.size()); ++l) {
        weight_offsets_.push_back(offset);
        offset += layer_dims_[l] * layer_dims_[l + 1];
        bias_offsets_.push_back(offset);
        offset += layer_dims_[l + 1];
    }
    params_ = Eigen::VectorXd::Zero(offset);
}

VectorFieldNet VectorFieldNet::init(const std::vector<int>& hidden_dims, Activation activation,
                                    int data_dim, int cond_dim, uint64_t seed,
                                    int cond_embed_dim) {
    const int per_cond = cond_embed_dim == 0 ? 1 : cond_embed_dim;
    std::vector<int> dims;
    dims.push_back(data_dim + cond_dim * per_cond);
    for (int h : hidden_dims) dims.push_back(h);
    dims.push_back(data_dim);

    VectorFieldNet net(dims, activation, data_dim, cond_dim, cond_embed_dim);
    Rng rng(mix_seed(seed, 0x6e657469ull));  // dedicated init stream
    const int last = net.num_layers() - 1;
    for (int l = 0; l < last; ++l) {
        const double scale = std::sqrt(2.0 / dims[l]);
        const int wbegin = net.weight_offsets_[l];
        const int wcount = dims[l] * dims[l + 1];
        for (int i = 0; i < wcount; ++i) net.params_(wbegin + i) = scale * rng.normal();
        // biases stay zero
    }
    // output layer stays zero: initial field == 0
    return net;
}

std::pair<int, int> VectorFieldNet::layer_param_range(int layer) const {
    if (layer < 0 || layer >= num_layers()) throw std::invalid_argument("net: bad layer index");
    const int begin = weight_offsets_[layer];
    const int end = bias_offsets_[layer] + layer_dims_[layer + 1];
    return {begin, end};
}

Eigen::Map<const Eigen::MatrixXd> VectorFieldNet::weight(int layer) const {
    return {params_.data() + weight_offsets_[layer], layer_dims_[layer + 1], layer_dims_[layer]};
}

Eigen::Map<const Eigen::VectorXd> VectorFieldNet::bias(int layer) const {
    return {params_.data() + bias_offsets_[layer], layer_dims_[layer + 1]};
}

Eigen::MatrixXd VectorFieldNet::embed_cond(const Eigen::MatrixXd& cond) const {
    if (cond.cols() != cond_dim_) throw std::invalid_argument("net: cond width != k");
    if (cond_embed_dim_ == 0) return cond;
    const int half = cond_embed_dim_ / 2;
    Eigen::MatrixXd out(cond.rows(), cond_dim_ * cond_embed_dim_);
    // Geometric frequency ladder from 1 to ~1000 shared by all groups.
    for (int c = 0; c < cond_dim_; ++c)
        for (int f = 0; f < half; ++f) {
            const double freq =
                half == 1 ? 1.0 : std::exp(std::log(1000.0) * f / (half - 1));
            for (int r = 0; r < cond.rows(); ++r) {
                const double a = freq * cond(r, c);
                out(r, c * cond_embed_dim_ + 2 * f) = std::sin(a);
                out(r, c * cond_embed_dim_ + 2 * f + 1) = std::cos(a);
            }
        }
    return out;
}

Eigen::MatrixXd VectorFieldNet::forward_batch(const Eigen::MatrixXd& x_t,
                                              const Eigen::MatrixXd& cond,
                                              ForwardCache* cache) const {
    if (x_t.cols() != data_dim_) throw std::invalid_argument("net: x_t width != d");
    if (x_t.rows() != cond.rows()) throw std::invalid_argument("net: batch size mismatch");
    if (!x_t.allFinite() || !cond.allFinite())
        throw std::invalid_argument("net: non-finite input");

    Eigen::MatrixXd h(x_t.rows(), layer_dims_.front());
    h.leftCols(data_dim_) = x_t;
    h.rightCols(layer_dims_.front() - data_dim_) = embed_cond(cond);

    if (cache) {
        cache->inputs.clear();
        cache->preacts.clear();
    }
    const int last = num_layers() - 1;
    for (int l = 0; l <= last; ++l) {
        if (cache) cache->inputs.push_back(h);
        Eigen::MatrixXd z = (h * weight(l).transpose()).rowwise() + bias(l).transpose();
        if (l == last) {
            if (cache) cache->output = z;
            return z;
        }
        if (cache) cache->preacts.push_back(z);
        h.resize(z.rows(), z.cols());
        for (Eigen::Index i = 0; i < z.size(); ++i) h(i) = act_value(activation_, z(i));
    }
    return h;  // unreachable
}

Eigen::VectorXd VectorFieldNet::backward_batch(const ForwardCache& cache,
                                               const Eigen::MatrixXd& loss_grad) const {
    const int last = num_layers() - 1;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params_.size());
    Eigen::MatrixXd delta = loss_grad;  // n x fan_out of the current layer
    for (int l = last; l >= 0; --l) {
        Eigen::Map<Eigen::MatrixXd> gw(grad.data() + weight_offsets_[l], layer_dims_[l + 1],
                                       layer_dims_[l]);
        Eigen::Map<Eigen::VectorXd> gb(grad.data() + bias_offsets_[l], layer_dims_[l + 1]);
        gw = delta.transpose() * cache.inputs[l];
        gb = delta.colwise().sum().transpose();
        if (l > 0) {
            Eigen::MatrixXd back = delta * weight(l);
            const Eigen::MatrixXd& z = cache.preacts[l - 1];
            delta.resize(back.rows(), back.cols());
            for (Eigen::Index i = 0; i < back.size(); ++i)
                delta(i) = back(i) * act_deriv(activation_, z(i));
        }
    }
    return grad;
}

Eigen::VectorXd VectorFieldNet::forward(const Eigen::VectorXd& x_t,
                                        const Eigen::VectorXd& cond) const {
    return forward_batch(x_t.transpose(), cond.transpose()).row(0).transpose();
}

Eigen::VectorXd VectorFieldNet::backward(const Eigen::VectorXd& x_t, const Eigen::VectorXd& cond,
                                         const Eigen::VectorXd& loss_grad) const {
    if (loss_grad.size() != data_dim_) throw std::invalid_argument("net: loss_grad length != d");
    ForwardCache cache;
    forward_batch(x_t.transpose(), cond.transpose(), &cache);
    return backward_batch(cache, loss_grad.transpose());
}

}  // namespace gdm
