#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ecgsyn/error.hpp"
#include "ecgsyn/rng.hpp"

namespace ecgsyn::nn {

/// Dense row-major matrix of doubles. All training math is 64-bit.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return data.size(); }
};

Matrix matmul(const Matrix& a, const Matrix& b);     // a (m x k) * b (k x n)
Matrix matmul_at_b(const Matrix& a, const Matrix& b); // a^T * b
Matrix matmul_a_bt(const Matrix& a, const Matrix& b); // a * b^T

/// Trainable tensor: value plus an accumulated gradient of the same shape.
struct ParamTensor {
    Matrix value;
    Matrix grad;

    explicit ParamTensor(std::size_t r = 0, std::size_t c = 0)
        : value(r, c), grad(r, c) {}
    void zero_grad() { std::fill(grad.data.begin(), grad.data.end(), 0.0); }
};

/// i.i.d. N(0, sigma^2) fill via Box-Muller on the fixed PRNG.
void init_gaussian(ParamTensor& p, Rng& rng, double sigma = 0.02);

struct LayerSpec {
    enum class Kind : std::uint8_t {
        FullyConnected = 0,
        LeakyReLU = 1,
        ReLU = 2,
        Tanh = 3,
        Sigmoid = 4,
        BatchNorm = 5,
    };
    Kind kind = Kind::FullyConnected;
    std::size_t in = 0;   // FullyConnected
    std::size_t out = 0;  // FullyConnected; features for BatchNorm
    double slope = 0.0;   // LeakyReLU
    double momentum = 0.9, epsilon = 1e-5; // BatchNorm
};

class Layer {
public:
    virtual ~Layer() = default;
    /// Batch layout: one sample per row.
    virtual Matrix forward(const Matrix& x, bool training) = 0;
    /// Accumulates parameter gradients; returns the input gradient.
    virtual Matrix backward(const Matrix& grad_out) = 0;
    virtual std::vector<ParamTensor*> params() { return {}; }
    virtual LayerSpec spec() const = 0;
    /// Non-trainable persistent state (BatchNorm running stats).
    virtual std::vector<std::vector<double>*> state() { return {}; }
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec);

class Network {
public:
    Network() = default;
    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }
    void add(const LayerSpec& spec) { layers_.push_back(make_layer(spec)); }

    Matrix forward(const Matrix& x, bool training);
    Matrix backward(const Matrix& grad_out);

    std::vector<ParamTensor*> params();
    std::vector<std::vector<double>*> state();
    std::vector<LayerSpec> specs() const;
    void zero_grad();
    void init(Rng& rng, double sigma = 0.02);
    std::size_t param_count();
    bool empty() const { return layers_.empty(); }

    static Network from_specs(const std::vector<LayerSpec>& specs);

private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

/// Bias-corrected Adam over a fixed parameter list.
class Adam {
public:
    Adam(std::vector<ParamTensor*> params, double lr, double beta1 = 0.5,
         double beta2 = 0.999, double epsilon = 1e-8);
    void step();
    std::size_t step_count() const { return t_; }

private:
    std::vector<ParamTensor*> params_;
    std::vector<std::vector<double>> m_, v_;
    double lr_, beta1_, beta2_, epsilon_;
    std::size_t t_ = 0;
};

struct LossResult {
    double value = 0.0;
    Matrix grad; // d value / d first argument
};

/// Mean binary cross-entropy; predictions are clamped 1e-7 from {0,1}.
LossResult bce_loss(const Matrix& predictions, double target);
LossResult bce_loss(const Matrix& predictions, const Matrix& targets);

/// Mean absolute difference; subgradient 0 at ties.
LossResult l1_loss(const Matrix& a, const Matrix& b);

/// Mean softmax cross-entropy over logits with log-sum-exp stabilization.
LossResult softmax_ce_loss(const Matrix& logits, const std::vector<int>& labels);

/// z = mu + exp(0.5 * logvar) * eps, eps ~ N(0,1). eps is returned so the
/// caller can route gradients: dz/dmu = 1, dz/dlogvar = 0.5 * sigma * eps.
Matrix reparameterize(const Matrix& mu, const Matrix& logvar, Rng& rng, Matrix* eps_out = nullptr);

/// KL(N(mu, sigma^2) || N(0,1)) per sample, averaged over the batch:
/// 0.5 * sum(mu^2 + sigma^2 - logvar - 1).
double kl_divergence_gaussian(const Matrix& mu, const Matrix& logvar);
/// Gradients of the batch-mean KL w.r.t. mu and logvar.
void kl_divergence_grad(const Matrix& mu, const Matrix& logvar, Matrix& dmu, Matrix& dlogvar);

} // namespace ecgsyn::nn
