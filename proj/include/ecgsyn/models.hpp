#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecgsyn/dataset.hpp"
#include "ecgsyn/nn.hpp"

namespace ecgsyn {

enum class ModelKind : std::uint8_t { Classic = 0, VaeGan = 1, WganFc = 2 };

std::string model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);

struct GanConfig {
    ModelKind model_kind = ModelKind::Classic;
    std::size_t beat_length = 256;
    std::size_t latent_dim = 100; // 10 for the latent-space VAE-GAN
    std::size_t epochs = 30;
    std::size_t batch_size = 9;
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    std::uint64_t seed = 0;
    std::size_t snapshot_per_epoch = 10;
    // vaegan
    double lambda_adv = 1.0;
    double lambda_l1 = 100.0;
    double lambda_kl = 1.0;
    // wgan_fc
    double clip_c = 0.01;
    int n_critic = 5;

    void validate() const;
    std::uint64_t config_hash() const;
};

/// The untrained network stack for a configuration. For classic/wgan_fc
/// only generator and discriminator are populated; vaegan also carries
/// the encoder trunk plus mu/logvar heads (generator == decoder).
struct GanNets {
    nn::Network generator;
    nn::Network discriminator;
    nn::Network encoder_trunk;
    nn::Network mu_head;
    nn::Network logvar_head;
};

GanNets build_model(const GanConfig& config);

/// Everything needed to regenerate: generator layer table + parameters +
/// running statistics, the config, and the epoch it was taken at.
struct Checkpoint {
    ModelKind model_kind = ModelKind::Classic;
    GanConfig config;
    std::vector<nn::LayerSpec> generator_specs;
    std::vector<std::vector<double>> generator_params;
    std::vector<std::vector<double>> generator_state;
    std::uint32_t epoch = 0;
};

struct TrainRun {
    std::vector<std::pair<double, double>> losses; // (generator, discriminator)
    std::vector<BeatSet> snapshots;                // one BeatSet per epoch
    Checkpoint final_checkpoint;
};

/// Trains the configured model on a normalized uniform-length BeatSet.
/// Throws NonFiniteLoss with epoch/batch context if training diverges.
TrainRun train(const GanConfig& config, const BeatSet& dataset);

Checkpoint snapshot_checkpoint(const GanConfig& config, nn::Network& generator,
                               std::uint32_t epoch);

/// n beats G(z), z ~ N(0,1)^latent; BatchNorm in inference mode.
BeatSet generate(const Checkpoint& checkpoint, std::size_t n, std::uint64_t seed);

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace ecgsyn
