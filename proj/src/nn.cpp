#include "ecgsyn/nn.hpp"

#include <algorithm>
#include <cmath>

namespace ecgsyn::nn {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw Error("ShapeMismatch", "matmul");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        double* crow = c.data.data() + i * c.cols;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            const double* brow = b.data.data() + k * b.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) throw Error("ShapeMismatch", "matmul_at_b");
    Matrix c(a.cols, b.cols);
    for (std::size_t p = 0; p < a.rows; ++p) {
        const double* arow = a.data.data() + p * a.cols;
        const double* brow = b.data.data() + p * b.cols;
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double api = arow[i];
            double* crow = c.data.data() + i * c.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += api * brow[j];
        }
    }
    return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) throw Error("ShapeMismatch", "matmul_a_bt");
    Matrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = b.data.data() + j * b.cols;
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            c.at(i, j) = acc;
        }
    }
    return c;
}

void init_gaussian(ParamTensor& p, Rng& rng, double sigma) {
    for (auto& v : p.value.data) v = sigma * rng.gaussian();
    p.zero_grad();
}

namespace {

class FullyConnected final : public Layer {
public:
    FullyConnected(std::size_t in, std::size_t out)
        : in_(in), out_(out), weight_(in, out), bias_(1, out) {
        if (in == 0 || out == 0) throw Error("BadConfig", "FC dimensions must be positive");
    }

    Matrix forward(const Matrix& x, bool) override {
        if (x.cols != in_) throw Error("ShapeMismatch", "FC input width");
        input_ = x;
        Matrix y = matmul(x, weight_.value);
        for (std::size_t i = 0; i < y.rows; ++i) {
            for (std::size_t j = 0; j < out_; ++j) y.at(i, j) += bias_.value.at(0, j);
        }
        return y;
    }

    Matrix backward(const Matrix& grad_out) override {
        if (input_.rows == 0) throw Error("MissingCache", "FC backward before forward");
        const Matrix dw = matmul_at_b(input_, grad_out);
        for (std::size_t i = 0; i < dw.size(); ++i) weight_.grad.data[i] += dw.data[i];
        for (std::size_t i = 0; i < grad_out.rows; ++i) {
            for (std::size_t j = 0; j < out_; ++j) {
                bias_.grad.at(0, j) += grad_out.at(i, j);
            }
        }
        return matmul_a_bt(grad_out, weight_.value);
    }

    std::vector<ParamTensor*> params() override { return {&weight_, &bias_}; }
    LayerSpec spec() const override {
        return {LayerSpec::Kind::FullyConnected, in_, out_, 0.0, 0.9, 1e-5};
    }

private:
    std::size_t in_, out_;
    ParamTensor weight_, bias_;
    Matrix input_;
};

class LeakyReLULayer final : public Layer {
public:
    explicit LeakyReLULayer(double slope) : slope_(slope) {
        if (!(slope > 0.0 && slope < 1.0)) throw Error("BadConfig", "LeakyReLU slope");
    }
    Matrix forward(const Matrix& x, bool) override {
        input_ = x;
        Matrix y = x;
        for (auto& v : y.data) v = v >= 0.0 ? v : slope_ * v;
        return y;
    }
    Matrix backward(const Matrix& grad_out) override {
        Matrix g = grad_out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (input_.data[i] < 0.0) g.data[i] *= slope_;
        }
        return g;
    }
    LayerSpec spec() const override {
        return {LayerSpec::Kind::LeakyReLU, 0, 0, slope_, 0.9, 1e-5};
    }

private:
    double slope_;
    Matrix input_;
};

class ReLULayer final : public Layer {
public:
    Matrix forward(const Matrix& x, bool) override {
        input_ = x;
        Matrix y = x;
        for (auto& v : y.data) v = std::max(v, 0.0);
        return y;
    }
    Matrix backward(const Matrix& grad_out) override {
        Matrix g = grad_out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (input_.data[i] < 0.0) g.data[i] = 0.0;
        }
        return g;
    }
    LayerSpec spec() const override { return {LayerSpec::Kind::ReLU, 0, 0, 0.0, 0.9, 1e-5}; }

private:
    Matrix input_;
};

class TanhLayer final : public Layer {
public:
    Matrix forward(const Matrix& x, bool) override {
        output_ = x;
        for (auto& v : output_.data) v = std::tanh(v);
        return output_;
    }
    Matrix backward(const Matrix& grad_out) override {
        Matrix g = grad_out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.data[i] *= 1.0 - output_.data[i] * output_.data[i];
        }
        return g;
    }
    LayerSpec spec() const override { return {LayerSpec::Kind::Tanh, 0, 0, 0.0, 0.9, 1e-5}; }

private:
    Matrix output_;
};

class SigmoidLayer final : public Layer {
public:
    Matrix forward(const Matrix& x, bool) override {
        output_ = x;
        for (auto& v : output_.data) v = 1.0 / (1.0 + std::exp(-v));
        return output_;
    }
    Matrix backward(const Matrix& grad_out) override {
        Matrix g = grad_out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.data[i] *= output_.data[i] * (1.0 - output_.data[i]);
        }
        return g;
    }
    LayerSpec spec() const override {
        return {LayerSpec::Kind::Sigmoid, 0, 0, 0.0, 0.9, 1e-5};
    }

private:
    Matrix output_;
};

class BatchNormLayer final : public Layer {
public:
    BatchNormLayer(std::size_t features, double momentum, double epsilon)
        : features_(features), momentum_(momentum), epsilon_(epsilon),
          gamma_(1, features), beta_(1, features), running_mean_(features, 0.0),
          running_var_(features, 1.0) {
        if (features == 0) throw Error("BadConfig", "BatchNorm features");
        if (!(epsilon > 0.0)) throw Error("BadConfig", "BatchNorm epsilon");
        std::fill(gamma_.value.data.begin(), gamma_.value.data.end(), 1.0);
    }

    Matrix forward(const Matrix& x, bool training) override {
        if (x.cols != features_) throw Error("ShapeMismatch", "BatchNorm width");
        const std::size_t m = x.rows;
        Matrix y(m, features_);
        if (training) {
            if (m < 2) throw Error("BadConfig", "BatchNorm training needs batch >= 2");
            xhat_ = Matrix(m, features_);
            inv_std_.assign(features_, 0.0);
            for (std::size_t j = 0; j < features_; ++j) {
                double mean = 0.0;
                for (std::size_t i = 0; i < m; ++i) mean += x.at(i, j);
                mean /= static_cast<double>(m);
                double var = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double d = x.at(i, j) - mean;
                    var += d * d;
                }
                var /= static_cast<double>(m); // biased, used for normalization
                const double inv = 1.0 / std::sqrt(var + epsilon_);
                inv_std_[j] = inv;
                for (std::size_t i = 0; i < m; ++i) {
                    const double h = (x.at(i, j) - mean) * inv;
                    xhat_.at(i, j) = h;
                    y.at(i, j) = gamma_.value.at(0, j) * h + beta_.value.at(0, j);
                }
                running_mean_[j] = momentum_ * running_mean_[j] + (1.0 - momentum_) * mean;
                running_var_[j] = momentum_ * running_var_[j] + (1.0 - momentum_) * var;
            }
            training_cache_ = true;
        } else {
            for (std::size_t j = 0; j < features_; ++j) {
                const double inv = 1.0 / std::sqrt(running_var_[j] + epsilon_);
                for (std::size_t i = 0; i < m; ++i) {
                    y.at(i, j) = gamma_.value.at(0, j) * (x.at(i, j) - running_mean_[j]) * inv +
                                 beta_.value.at(0, j);
                }
            }
            training_cache_ = false;
        }
        return y;
    }

    Matrix backward(const Matrix& grad_out) override {
        if (!training_cache_) throw Error("MissingCache", "BatchNorm backward needs a training forward");
        const std::size_t m = grad_out.rows;
        Matrix dx(m, features_);
        for (std::size_t j = 0; j < features_; ++j) {
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                sum_dy += grad_out.at(i, j);
                sum_dy_xhat += grad_out.at(i, j) * xhat_.at(i, j);
            }
            gamma_.grad.at(0, j) += sum_dy_xhat;
            beta_.grad.at(0, j) += sum_dy;
            const double k = gamma_.value.at(0, j) * inv_std_[j] / static_cast<double>(m);
            for (std::size_t i = 0; i < m; ++i) {
                dx.at(i, j) = k * (static_cast<double>(m) * grad_out.at(i, j) - sum_dy -
                                   xhat_.at(i, j) * sum_dy_xhat);
            }
        }
        return dx;
    }

    std::vector<ParamTensor*> params() override { return {&gamma_, &beta_}; }
    std::vector<std::vector<double>*> state() override {
        return {&running_mean_, &running_var_};
    }
    LayerSpec spec() const override {
        return {LayerSpec::Kind::BatchNorm, 0, features_, 0.0, momentum_, epsilon_};
    }

private:
    std::size_t features_;
    double momentum_, epsilon_;
    ParamTensor gamma_, beta_;
    std::vector<double> running_mean_, running_var_;
    Matrix xhat_;
    std::vector<double> inv_std_;
    bool training_cache_ = false;
};

} // namespace

std::unique_ptr<Layer> make_layer(const LayerSpec& spec) {
    switch (spec.kind) {
        case LayerSpec::Kind::FullyConnected:
            return std::make_unique<FullyConnected>(spec.in, spec.out);
        case LayerSpec::Kind::LeakyReLU:
            return std::make_unique<LeakyReLULayer>(spec.slope);
        case LayerSpec::Kind::ReLU:
            return std::make_unique<ReLULayer>();
        case LayerSpec::Kind::Tanh:
            return std::make_unique<TanhLayer>();
        case LayerSpec::Kind::Sigmoid:
            return std::make_unique<SigmoidLayer>();
        case LayerSpec::Kind::BatchNorm:
            return std::make_unique<BatchNormLayer>(spec.out, spec.momentum, spec.epsilon);
    }
    throw Error("BadConfig", "unknown layer kind");
}

Matrix Network::forward(const Matrix& x, bool training) {
    Matrix y = x;
    for (auto& layer : layers_) y = layer->forward(y, training);
    return y;
}

Matrix Network::backward(const Matrix& grad_out) {
    Matrix g = grad_out;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

std::vector<ParamTensor*> Network::params() {
    std::vector<ParamTensor*> out;
    for (auto& layer : layers_) {
        for (auto* p : layer->params()) out.push_back(p);
    }
    return out;
}

std::vector<std::vector<double>*> Network::state() {
    std::vector<std::vector<double>*> out;
    for (auto& layer : layers_) {
        for (auto* s : layer->state()) out.push_back(s);
    }
    return out;
}

std::vector<LayerSpec> Network::specs() const {
    std::vector<LayerSpec> out;
    for (const auto& layer : layers_) out.push_back(layer->spec());
    return out;
}

void Network::zero_grad() {
    for (auto* p : params()) p->zero_grad();
}

void Network::init(Rng& rng, double sigma) {
    for (auto& layer : layers_) {
        if (layer->spec().kind == LayerSpec::Kind::BatchNorm) continue; // gamma=1, beta=0
        for (auto* p : layer->params()) init_gaussian(*p, rng, sigma);
    }
}

std::size_t Network::param_count() {
    std::size_t n = 0;
    for (auto* p : params()) n += p->value.size();
    return n;
}

Network Network::from_specs(const std::vector<LayerSpec>& specs) {
    Network net;
    for (const auto& s : specs) net.add(s);
    return net;
}

Adam::Adam(std::vector<ParamTensor*> params, double lr, double beta1, double beta2,
           double epsilon)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
      epsilon_(epsilon) {
    for (auto* p : params_) {
        m_.emplace_back(p->value.size(), 0.0);
        v_.emplace_back(p->value.size(), 0.0);
    }
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        auto& value = params_[k]->value.data;
        auto& grad = params_[k]->grad.data;
        auto& m = m_[k];
        auto& v = v_[k];
        for (std::size_t i = 0; i < value.size(); ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * grad[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * grad[i] * grad[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            value[i] -= lr_ * mhat / (std::sqrt(vhat) + epsilon_);
        }
    }
}

namespace {
constexpr double kProbClamp = 1e-7;
}

LossResult bce_loss(const Matrix& predictions, double target) {
    Matrix targets(predictions.rows, predictions.cols, target);
    return bce_loss(predictions, targets);
}

LossResult bce_loss(const Matrix& predictions, const Matrix& targets) {
    if (predictions.rows != targets.rows || predictions.cols != targets.cols) {
        throw Error("ShapeMismatch", "bce_loss");
    }
    LossResult r;
    r.grad = Matrix(predictions.rows, predictions.cols);
    const double inv_n = 1.0 / static_cast<double>(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double p = std::clamp(predictions.data[i], kProbClamp, 1.0 - kProbClamp);
        const double y = targets.data[i];
        r.value += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        r.grad.data[i] = inv_n * (p - y) / (p * (1.0 - p));
    }
    r.value *= inv_n;
    return r;
}

LossResult l1_loss(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw Error("ShapeMismatch", "l1_loss");
    LossResult r;
    r.grad = Matrix(a.rows, a.cols);
    const double inv_n = 1.0 / static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        r.value += std::abs(d);
        r.grad.data[i] = d > 0.0 ? inv_n : (d < 0.0 ? -inv_n : 0.0);
    }
    r.value *= inv_n;
    return r;
}

LossResult softmax_ce_loss(const Matrix& logits, const std::vector<int>& labels) {
    if (labels.size() != logits.rows) throw Error("ShapeMismatch", "softmax_ce_loss");
    LossResult r;
    r.grad = Matrix(logits.rows, logits.cols);
    const double inv_m = 1.0 / static_cast<double>(logits.rows);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const int label = labels[i];
        if (label < 0 || static_cast<std::size_t>(label) >= logits.cols) {
            throw Error("BadLabel", "label " + std::to_string(label));
        }
        double mx = logits.at(i, 0);
        for (std::size_t j = 1; j < logits.cols; ++j) mx = std::max(mx, logits.at(i, j));
        double lse = 0.0;
        for (std::size_t j = 0; j < logits.cols; ++j) lse += std::exp(logits.at(i, j) - mx);
        lse = mx + std::log(lse);
        r.value += lse - logits.at(i, static_cast<std::size_t>(label));
        for (std::size_t j = 0; j < logits.cols; ++j) {
            const double p = std::exp(logits.at(i, j) - lse);
            r.grad.at(i, j) = inv_m * (p - (static_cast<std::size_t>(label) == j ? 1.0 : 0.0));
        }
    }
    r.value *= inv_m;
    return r;
}

Matrix reparameterize(const Matrix& mu, const Matrix& logvar, Rng& rng, Matrix* eps_out) {
    if (mu.rows != logvar.rows || mu.cols != logvar.cols) {
        throw Error("ShapeMismatch", "reparameterize");
    }
    Matrix z(mu.rows, mu.cols);
    Matrix eps(mu.rows, mu.cols);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        eps.data[i] = rng.gaussian();
        z.data[i] = mu.data[i] + std::exp(0.5 * logvar.data[i]) * eps.data[i];
    }
    if (eps_out) *eps_out = std::move(eps);
    return z;
}

double kl_divergence_gaussian(const Matrix& mu, const Matrix& logvar) {
    if (mu.rows != logvar.rows || mu.cols != logvar.cols) {
        throw Error("ShapeMismatch", "kl_divergence_gaussian");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        acc += mu.data[i] * mu.data[i] + std::exp(logvar.data[i]) - logvar.data[i] - 1.0;
    }
    return 0.5 * acc / static_cast<double>(mu.rows);
}

void kl_divergence_grad(const Matrix& mu, const Matrix& logvar, Matrix& dmu,
                        Matrix& dlogvar) {
    dmu = Matrix(mu.rows, mu.cols);
    dlogvar = Matrix(mu.rows, mu.cols);
    const double inv_m = 1.0 / static_cast<double>(mu.rows);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        dmu.data[i] = inv_m * mu.data[i];
        dlogvar.data[i] = inv_m * 0.5 * (std::exp(logvar.data[i]) - 1.0);
    }
}

} // namespace ecgsyn::nn
