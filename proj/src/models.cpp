#include "ecgsyn/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "ecgsyn/crc32.hpp"

namespace ecgsyn {

using nn::LayerSpec;
using nn::Matrix;
using nn::Network;

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Classic: return "classic";
        case ModelKind::VaeGan: return "vaegan";
        case ModelKind::WganFc: return "wgan-fc";
    }
    return "classic";
}

ModelKind model_from_name(const std::string& name) {
    if (name == "classic") return ModelKind::Classic;
    if (name == "vaegan") return ModelKind::VaeGan;
    if (name == "wgan-fc" || name == "wgan_fc") return ModelKind::WganFc;
    throw Error("BadConfig", "unknown model kind: " + name);
}

void GanConfig::validate() const {
    if (beat_length < 2 || latent_dim == 0 || epochs == 0 || batch_size == 0) {
        throw Error("BadConfig", "dimensions and counts must be positive");
    }
    if (!(lr > 0.0) || !(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
        throw Error("BadConfig", "optimizer hyperparameters out of range");
    }
    if (model_kind == ModelKind::WganFc && (!(clip_c > 0.0) || n_critic < 1)) {
        throw Error("BadConfig", "wgan-fc needs clip_c > 0 and n_critic >= 1");
    }
}

std::uint64_t GanConfig::config_hash() const {
    // FNV-1a over the textual field dump; stable across runs.
    std::string repr = model_name(model_kind) + "|" + std::to_string(beat_length) + "|" +
                       std::to_string(latent_dim) + "|" + std::to_string(epochs) + "|" +
                       std::to_string(batch_size) + "|" + std::to_string(lr) + "|" +
                       std::to_string(beta1) + "|" + std::to_string(beta2) + "|" +
                       std::to_string(seed) + "|" + std::to_string(snapshot_per_epoch) +
                       "|" + std::to_string(lambda_adv) + "|" + std::to_string(lambda_l1) +
                       "|" + std::to_string(lambda_kl) + "|" + std::to_string(clip_c) +
                       "|" + std::to_string(n_critic);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : repr) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

LayerSpec fc(std::size_t in, std::size_t out) {
    return {LayerSpec::Kind::FullyConnected, in, out, 0.0, 0.9, 1e-5};
}
LayerSpec lrelu(double slope = 0.2) {
    return {LayerSpec::Kind::LeakyReLU, 0, 0, slope, 0.9, 1e-5};
}
LayerSpec bn(std::size_t features) {
    return {LayerSpec::Kind::BatchNorm, 0, features, 0.0, 0.9, 1e-5};
}
LayerSpec tanh_layer() { return {LayerSpec::Kind::Tanh, 0, 0, 0.0, 0.9, 1e-5}; }
LayerSpec sigmoid_layer() { return {LayerSpec::Kind::Sigmoid, 0, 0, 0.0, 0.9, 1e-5}; }

Network fc_generator(std::size_t latent, std::size_t out_len) {
    Network g;
    g.add(fc(latent, 128));
    g.add(lrelu());
    g.add(fc(128, 256));
    g.add(bn(256));
    g.add(lrelu());
    g.add(fc(256, 512));
    g.add(bn(512));
    g.add(lrelu());
    g.add(fc(512, 1024));
    g.add(bn(1024));
    g.add(lrelu());
    g.add(fc(1024, out_len));
    g.add(tanh_layer());
    return g;
}

Network fc_discriminator(std::size_t in_len, bool sigmoid_out) {
    Network d;
    d.add(fc(in_len, 512));
    d.add(lrelu());
    d.add(fc(512, 256));
    d.add(lrelu());
    d.add(fc(256, 1));
    if (sigmoid_out) d.add(sigmoid_layer());
    return d;
}

} // namespace

GanNets build_model(const GanConfig& config) {
    config.validate();
    GanNets nets;
    Rng rng(config.seed);
    switch (config.model_kind) {
        case ModelKind::Classic:
        case ModelKind::WganFc:
            nets.generator = fc_generator(config.latent_dim, config.beat_length);
            nets.discriminator =
                fc_discriminator(config.beat_length, config.model_kind == ModelKind::Classic);
            nets.generator.init(rng);
            nets.discriminator.init(rng);
            break;
        case ModelKind::VaeGan: {
            const std::size_t code = config.latent_dim;
            nets.encoder_trunk.add(fc(config.beat_length, 512));
            nets.encoder_trunk.add(lrelu());
            nets.encoder_trunk.add(fc(512, 512));
            nets.encoder_trunk.add(bn(512));
            nets.encoder_trunk.add(lrelu());
            nets.mu_head.add(fc(512, code));
            nets.logvar_head.add(fc(512, code));
            // decoder doubles as the generator
            nets.generator.add(fc(code, 512));
            nets.generator.add(lrelu());
            nets.generator.add(fc(512, 512));
            nets.generator.add(bn(512));
            nets.generator.add(lrelu());
            nets.generator.add(fc(512, config.beat_length));
            nets.generator.add(tanh_layer());
            // the discriminator judges 10-dimensional latent codes
            nets.discriminator.add(fc(code, 512));
            nets.discriminator.add(lrelu());
            nets.discriminator.add(fc(512, 256));
            nets.discriminator.add(lrelu());
            nets.discriminator.add(fc(256, 1));
            nets.discriminator.add(sigmoid_layer());
            nets.encoder_trunk.init(rng);
            nets.mu_head.init(rng);
            nets.logvar_head.init(rng);
            nets.generator.init(rng);
            nets.discriminator.init(rng);
            break;
        }
    }
    return nets;
}

Checkpoint snapshot_checkpoint(const GanConfig& config, Network& generator,
                               std::uint32_t epoch) {
    Checkpoint ckpt;
    ckpt.model_kind = config.model_kind;
    ckpt.config = config;
    ckpt.epoch = epoch;
    ckpt.generator_specs = generator.specs();
    for (auto* p : generator.params()) ckpt.generator_params.push_back(p->value.data);
    for (auto* s : generator.state()) ckpt.generator_state.push_back(*s);
    return ckpt;
}

namespace {

Network restore_generator(const Checkpoint& ckpt) {
    Network g = Network::from_specs(ckpt.generator_specs);
    auto params = g.params();
    if (params.size() != ckpt.generator_params.size()) {
        throw Error("CorruptCheckpoint", "parameter table size mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i]->value.size() != ckpt.generator_params[i].size()) {
            throw Error("CorruptCheckpoint", "parameter shape mismatch");
        }
        params[i]->value.data = ckpt.generator_params[i];
    }
    auto state = g.state();
    if (state.size() != ckpt.generator_state.size()) {
        throw Error("CorruptCheckpoint", "state table size mismatch");
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i]->size() != ckpt.generator_state[i].size()) {
            throw Error("CorruptCheckpoint", "state shape mismatch");
        }
        *state[i] = ckpt.generator_state[i];
    }
    return g;
}

Matrix latent_batch(std::size_t n, std::size_t dim, Rng& rng) {
    Matrix z(n, dim);
    for (auto& v : z.data) v = rng.gaussian();
    return z;
}

Matrix rows_of(const BeatSet& set, const std::vector<std::size_t>& order,
               std::size_t begin, std::size_t end) {
    const std::size_t len = set.beat_length();
    Matrix x(end - begin, len);
    for (std::size_t i = begin; i < end; ++i) {
        std::copy(set.beats[order[i]].begin(), set.beats[order[i]].end(),
                  x.data.begin() + (i - begin) * len);
    }
    return x;
}

BeatSet to_beat_set(const Matrix& batch) {
    BeatSet set;
    set.source = Source::Generated;
    for (std::size_t i = 0; i < batch.rows; ++i) {
        Beat beat(batch.cols);
        std::copy(batch.data.begin() + i * batch.cols,
                  batch.data.begin() + (i + 1) * batch.cols, beat.begin());
        set.push_back(std::move(beat), "G");
    }
    return set;
}

void check_finite(double loss, std::size_t epoch, std::size_t batch) {
    if (!std::isfinite(loss)) {
        throw Error("NonFiniteLoss", "epoch " + std::to_string(epoch) + ", batch " +
                                         std::to_string(batch));
    }
}

constexpr std::uint64_t kSnapshotSalt = 0x9E3779B97F4A7C15ull;

struct EpochLossAccum {
    double g = 0.0, d = 0.0;
    std::size_t g_n = 0, d_n = 0;
    void add_g(double v) { g += v; ++g_n; }
    void add_d(double v) { d += v; ++d_n; }
    std::pair<double, double> mean() const {
        return {g_n ? g / static_cast<double>(g_n) : 0.0,
                d_n ? d / static_cast<double>(d_n) : 0.0};
    }
};

} // namespace

TrainRun train(const GanConfig& config, const BeatSet& dataset) {
    config.validate();
    if (dataset.count() < config.batch_size) {
        throw Error("BadConfig", "batch size exceeds dataset size");
    }
    if (dataset.beat_length() != config.beat_length) {
        throw Error("BadConfig", "dataset beat length does not match config");
    }

    GanNets nets = build_model(config);
    Rng rng(config.seed + 1); // init consumed the raw seed stream
    Rng snapshot_rng(config.seed ^ kSnapshotSalt);

    nn::Adam opt_d(nets.discriminator.params(), config.lr, config.beta1, config.beta2);
    std::vector<nn::ParamTensor*> gen_params = nets.generator.params();
    if (config.model_kind == ModelKind::VaeGan) {
        for (auto* p : nets.encoder_trunk.params()) gen_params.push_back(p);
        for (auto* p : nets.mu_head.params()) gen_params.push_back(p);
        for (auto* p : nets.logvar_head.params()) gen_params.push_back(p);
    }
    nn::Adam opt_g(gen_params, config.lr, config.beta1, config.beta2);

    const auto zero_gen_side = [&] {
        nets.generator.zero_grad();
        if (config.model_kind == ModelKind::VaeGan) {
            nets.encoder_trunk.zero_grad();
            nets.mu_head.zero_grad();
            nets.logvar_head.zero_grad();
        }
    };

    const auto clip_discriminator = [&] {
        for (auto* p : nets.discriminator.params()) {
            for (auto& w : p->value.data) w = std::clamp(w, -config.clip_c, config.clip_c);
        }
    };

    TrainRun run;
    std::vector<std::size_t> order(dataset.count());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        // Fisher-Yates shuffle from the training stream.
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const std::size_t j = i + rng.uniform_index(order.size() - i);
            std::swap(order[i], order[j]);
        }

        EpochLossAccum accum;
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin + 1 < dataset.count();
             begin += config.batch_size, ++batch_index) {
            const std::size_t end = std::min(dataset.count(), begin + config.batch_size);
            if (end - begin < 2) break; // BatchNorm needs at least two samples
            const Matrix real = rows_of(dataset, order, begin, end);
            const std::size_t m = real.rows;

            if (config.model_kind == ModelKind::Classic) {
                // Discriminator: real -> 1, fake -> 0.
                const Matrix z = latent_batch(m, config.latent_dim, rng);
                const Matrix fake = nets.generator.forward(z, true);
                nets.discriminator.zero_grad();
                auto lr_real = nn::bce_loss(nets.discriminator.forward(real, true), 1.0);
                nets.discriminator.backward(lr_real.grad);
                auto lr_fake = nn::bce_loss(nets.discriminator.forward(fake, true), 0.0);
                nets.discriminator.backward(lr_fake.grad);
                const double d_loss = lr_real.value + lr_fake.value;
                check_finite(d_loss, epoch, batch_index);
                opt_d.step();
                accum.add_d(d_loss);

                // Generator: push D(G(z)) towards 1.
                const Matrix z2 = latent_batch(m, config.latent_dim, rng);
                const Matrix fake2 = nets.generator.forward(z2, true);
                nets.discriminator.zero_grad();
                zero_gen_side();
                auto lg = nn::bce_loss(nets.discriminator.forward(fake2, true), 1.0);
                check_finite(lg.value, epoch, batch_index);
                const Matrix dfake = nets.discriminator.backward(lg.grad);
                nets.generator.backward(dfake);
                opt_g.step();
                accum.add_g(lg.value);
            } else if (config.model_kind == ModelKind::WganFc) {
                // Critic: minimize mean(D(fake)) - mean(D(real)), then clip.
                const Matrix z = latent_batch(m, config.latent_dim, rng);
                const Matrix fake = nets.generator.forward(z, true);
                nets.discriminator.zero_grad();
                const Matrix d_real = nets.discriminator.forward(real, true);
                Matrix g_real(d_real.rows, d_real.cols, -1.0 / static_cast<double>(m));
                nets.discriminator.backward(g_real);
                const Matrix d_fake = nets.discriminator.forward(fake, true);
                Matrix g_fake(d_fake.rows, d_fake.cols, 1.0 / static_cast<double>(m));
                nets.discriminator.backward(g_fake);
                double mean_real = 0.0, mean_fake = 0.0;
                for (double v : d_real.data) mean_real += v;
                for (double v : d_fake.data) mean_fake += v;
                mean_real /= static_cast<double>(m);
                mean_fake /= static_cast<double>(m);
                const double critic_loss = mean_fake - mean_real;
                check_finite(critic_loss, epoch, batch_index);
                opt_d.step();
                clip_discriminator();
                accum.add_d(critic_loss);

                if ((batch_index + 1) % static_cast<std::size_t>(config.n_critic) == 0) {
                    const Matrix z2 = latent_batch(m, config.latent_dim, rng);
                    const Matrix fake2 = nets.generator.forward(z2, true);
                    nets.discriminator.zero_grad();
                    zero_gen_side();
                    const Matrix d_fake2 = nets.discriminator.forward(fake2, true);
                    double g_loss = 0.0;
                    for (double v : d_fake2.data) g_loss -= v;
                    g_loss /= static_cast<double>(m);
                    check_finite(g_loss, epoch, batch_index);
                    Matrix gg(d_fake2.rows, d_fake2.cols, -1.0 / static_cast<double>(m));
                    const Matrix dfake2 = nets.discriminator.backward(gg);
                    nets.generator.backward(dfake2);
                    opt_g.step();
                    accum.add_g(g_loss);
                }
            } else { // VaeGan: adversary lives in the 10-d latent space
                const Matrix trunk = nets.encoder_trunk.forward(real, true);
                const Matrix mu = nets.mu_head.forward(trunk, true);
                const Matrix logvar = nets.logvar_head.forward(trunk, true);
                Matrix eps;
                const Matrix z = nn::reparameterize(mu, logvar, rng, &eps);

                // Discriminator: prior draws -> 1, posterior codes -> 0.
                const Matrix z_prior = latent_batch(m, config.latent_dim, rng);
                nets.discriminator.zero_grad();
                auto ld_prior = nn::bce_loss(nets.discriminator.forward(z_prior, true), 1.0);
                nets.discriminator.backward(ld_prior.grad);
                auto ld_post = nn::bce_loss(nets.discriminator.forward(z, true), 0.0);
                nets.discriminator.backward(ld_post.grad);
                const double d_loss = ld_prior.value + ld_post.value;
                check_finite(d_loss, epoch, batch_index);
                opt_d.step();
                accum.add_d(d_loss);

                // Encoder + decoder: lambda_adv * BCE(D(z), 1)
                //                  + lambda_l1 * L1(decoded, real)
                //                  + lambda_kl * KL(mu, logvar).
                zero_gen_side();
                const Matrix decoded = nets.generator.forward(z, true);
                auto l1 = nn::l1_loss(decoded, real);
                nets.discriminator.zero_grad();
                auto adv = nn::bce_loss(nets.discriminator.forward(z, true), 1.0);
                const double kl = nn::kl_divergence_gaussian(mu, logvar);
                const double g_loss = config.lambda_adv * adv.value +
                                      config.lambda_l1 * l1.value + config.lambda_kl * kl;
                check_finite(g_loss, epoch, batch_index);

                Matrix d_decoded = l1.grad;
                for (auto& v : d_decoded.data) v *= config.lambda_l1;
                Matrix dz = nets.generator.backward(d_decoded);
                Matrix adv_grad = adv.grad;
                for (auto& v : adv_grad.data) v *= config.lambda_adv;
                const Matrix dz_adv = nets.discriminator.backward(adv_grad);
                for (std::size_t i = 0; i < dz.size(); ++i) dz.data[i] += dz_adv.data[i];

                Matrix dkl_mu, dkl_logvar;
                nn::kl_divergence_grad(mu, logvar, dkl_mu, dkl_logvar);
                Matrix dmu = dz;
                Matrix dlogvar(mu.rows, mu.cols);
                for (std::size_t i = 0; i < mu.size(); ++i) {
                    dmu.data[i] += config.lambda_kl * dkl_mu.data[i];
                    dlogvar.data[i] =
                        dz.data[i] * 0.5 * std::exp(0.5 * logvar.data[i]) * eps.data[i] +
                        config.lambda_kl * dkl_logvar.data[i];
                }
                Matrix dtrunk = nets.mu_head.backward(dmu);
                const Matrix dtrunk2 = nets.logvar_head.backward(dlogvar);
                for (std::size_t i = 0; i < dtrunk.size(); ++i) {
                    dtrunk.data[i] += dtrunk2.data[i];
                }
                nets.encoder_trunk.backward(dtrunk);
                opt_g.step();
                accum.add_g(g_loss);
            }
        }

        run.losses.push_back(accum.mean());

        // Per-epoch snapshot from a dedicated latent stream so snapshot
        // count never perturbs training randomness.
        const Matrix zs =
            latent_batch(config.snapshot_per_epoch, config.latent_dim, snapshot_rng);
        run.snapshots.push_back(to_beat_set(nets.generator.forward(zs, false)));
    }

    run.final_checkpoint = snapshot_checkpoint(config, nets.generator,
                                               static_cast<std::uint32_t>(config.epochs));
    return run;
}

BeatSet generate(const Checkpoint& checkpoint, std::size_t n, std::uint64_t seed) {
    Network g = restore_generator(checkpoint);
    if (n == 0) {
        BeatSet empty;
        empty.source = Source::Generated;
        return empty;
    }
    Rng rng(seed);
    const Matrix z = latent_batch(n, checkpoint.config.latent_dim, rng);
    return to_beat_set(g.forward(z, false));
}

namespace {

constexpr char kCkptMagic[4] = {'E', 'C', 'G', 'K'};
constexpr std::uint32_t kCkptVersion = 1;

template <typename T>
void put(std::string& buf, T value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    buf.append(raw, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& pos, std::size_t limit) {
    if (pos + sizeof(T) > limit) throw Error("ChecksumMismatch", "truncated checkpoint");
    T value;
    std::memcpy(&value, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

void put_vector(std::string& buf, const std::vector<double>& v) {
    put<std::uint64_t>(buf, v.size());
    for (double x : v) put<double>(buf, x);
}

std::vector<double> take_vector(const std::string& buf, std::size_t& pos,
                                std::size_t limit) {
    const auto n = take<std::uint64_t>(buf, pos, limit);
    if (pos + n * sizeof(double) > limit) {
        throw Error("ChecksumMismatch", "truncated checkpoint");
    }
    std::vector<double> v(n);
    for (auto& x : v) x = take<double>(buf, pos, limit);
    return v;
}

} // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::string buf;
    buf.append(kCkptMagic, 4);
    put<std::uint32_t>(buf, kCkptVersion);
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(ckpt.model_kind));
    const GanConfig& c = ckpt.config;
    put<std::uint64_t>(buf, c.beat_length);
    put<std::uint64_t>(buf, c.latent_dim);
    put<std::uint64_t>(buf, c.epochs);
    put<std::uint64_t>(buf, c.batch_size);
    put<double>(buf, c.lr);
    put<double>(buf, c.beta1);
    put<double>(buf, c.beta2);
    put<std::uint64_t>(buf, c.seed);
    put<std::uint64_t>(buf, c.snapshot_per_epoch);
    put<double>(buf, c.lambda_adv);
    put<double>(buf, c.lambda_l1);
    put<double>(buf, c.lambda_kl);
    put<double>(buf, c.clip_c);
    put<std::int32_t>(buf, c.n_critic);
    put<std::uint32_t>(buf, ckpt.epoch);

    put<std::uint32_t>(buf, static_cast<std::uint32_t>(ckpt.generator_specs.size()));
    for (const auto& s : ckpt.generator_specs) {
        put<std::uint8_t>(buf, static_cast<std::uint8_t>(s.kind));
        put<std::uint64_t>(buf, s.in);
        put<std::uint64_t>(buf, s.out);
        put<double>(buf, s.slope);
        put<double>(buf, s.momentum);
        put<double>(buf, s.epsilon);
    }
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(ckpt.generator_params.size()));
    for (const auto& p : ckpt.generator_params) put_vector(buf, p);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(ckpt.generator_state.size()));
    for (const auto& s : ckpt.generator_state) put_vector(buf, s);

    const std::uint32_t crc =
        crc32(reinterpret_cast<const unsigned char*>(buf.data()), buf.size());
    put<std::uint32_t>(buf, crc);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("Io", "write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 4 + sizeof(std::uint32_t) * 2) {
        throw Error("ChecksumMismatch", "checkpoint too small: " + path);
    }
    if (std::memcmp(buf.data(), kCkptMagic, 4) != 0) {
        throw Error("CorruptCheckpoint", "bad magic: " + path);
    }
    const std::size_t body = buf.size() - sizeof(std::uint32_t);
    std::uint32_t stored;
    std::memcpy(&stored, buf.data() + body, sizeof(stored));
    if (stored != crc32(reinterpret_cast<const unsigned char*>(buf.data()), body)) {
        throw Error("ChecksumMismatch", path);
    }

    std::size_t pos = 4;
    const auto version = take<std::uint32_t>(buf, pos, body);
    if (version != kCkptVersion) {
        throw Error("VersionMismatch", "checkpoint version " + std::to_string(version) +
                                           ", expected " + std::to_string(kCkptVersion));
    }

    Checkpoint ckpt;
    ckpt.model_kind = static_cast<ModelKind>(take<std::uint8_t>(buf, pos, body));
    GanConfig& c = ckpt.config;
    c.model_kind = ckpt.model_kind;
    c.beat_length = take<std::uint64_t>(buf, pos, body);
    c.latent_dim = take<std::uint64_t>(buf, pos, body);
    c.epochs = take<std::uint64_t>(buf, pos, body);
    c.batch_size = take<std::uint64_t>(buf, pos, body);
    c.lr = take<double>(buf, pos, body);
    c.beta1 = take<double>(buf, pos, body);
    c.beta2 = take<double>(buf, pos, body);
    c.seed = take<std::uint64_t>(buf, pos, body);
    c.snapshot_per_epoch = take<std::uint64_t>(buf, pos, body);
    c.lambda_adv = take<double>(buf, pos, body);
    c.lambda_l1 = take<double>(buf, pos, body);
    c.lambda_kl = take<double>(buf, pos, body);
    c.clip_c = take<double>(buf, pos, body);
    c.n_critic = take<std::int32_t>(buf, pos, body);
    ckpt.epoch = take<std::uint32_t>(buf, pos, body);

    const auto n_layers = take<std::uint32_t>(buf, pos, body);
    for (std::uint32_t i = 0; i < n_layers; ++i) {
        LayerSpec s;
        s.kind = static_cast<LayerSpec::Kind>(take<std::uint8_t>(buf, pos, body));
        s.in = take<std::uint64_t>(buf, pos, body);
        s.out = take<std::uint64_t>(buf, pos, body);
        s.slope = take<double>(buf, pos, body);
        s.momentum = take<double>(buf, pos, body);
        s.epsilon = take<double>(buf, pos, body);
        ckpt.generator_specs.push_back(s);
    }
    const auto n_params = take<std::uint32_t>(buf, pos, body);
    for (std::uint32_t i = 0; i < n_params; ++i) {
        ckpt.generator_params.push_back(take_vector(buf, pos, body));
    }
    const auto n_state = take<std::uint32_t>(buf, pos, body);
    for (std::uint32_t i = 0; i < n_state; ++i) {
        ckpt.generator_state.push_back(take_vector(buf, pos, body));
    }
    return ckpt;
}

} // namespace ecgsyn
