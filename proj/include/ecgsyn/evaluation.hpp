#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecgsyn/metrics.hpp"
#include "ecgsyn/templates.hpp"

namespace ecgsyn {

struct Threshold {
    enum class Derivation { MeanOfMinAndAvg, ScaledMin, Manual };

    double value = 0.0;
    DistanceKind kind = DistanceKind::Dtw;
    Derivation derivation = Derivation::MeanOfMinAndAvg;
    double scale = 1.0; // ScaledMin only

    std::string derivation_name() const;
};

struct EvaluationReport {
    DistanceKind kind = DistanceKind::Dtw;
    int method = 1;
    double score = 0.0;
    std::size_t n_real = 0;
    std::size_t n_gen = 0;
    std::optional<std::string> template_origin;
    std::optional<Threshold> threshold;
    std::optional<std::size_t> acceptable_count;
    std::vector<std::size_t> acceptable_indices; // method 4
    std::optional<std::size_t> best_index;       // method 3
    std::uint64_t seed = 0;

    std::string to_json() const;
    std::string to_text() const;
};

struct EpochCurve {
    struct Point {
        std::size_t epoch = 0;
        double s2_dtw = 0.0;
        double s2_frechet = 0.0;
        double s2_euclid = 0.0;
        double generator_loss = 0.0;
        double discriminator_loss = 0.0;
    };
    std::vector<Point> points;

    std::string to_csv() const;
};

/// s1: mean cross-set distance between real and generated subsets.
EvaluationReport method1_score(const BeatSet& real_subset, const BeatSet& gen_subset,
                               DistanceKind kind, unsigned threads = 0);

/// s2: mean distance of the generated beats to the template.
EvaluationReport method2_score(const BeatSet& gen, const Template& tpl,
                               DistanceKind kind);

/// s3: the generated beat closest to the template; ties break low-index.
std::pair<Beat, EvaluationReport> method3_best(const BeatSet& gen, const Template& tpl,
                                               DistanceKind kind);

/// Default derivation: eta = (s3 + s2) / 2. The scaled form a * s3 is
/// available via scaled_threshold.
Threshold compute_threshold(double s2, double s3, DistanceKind kind);
Threshold scaled_threshold(double s3, double scale, DistanceKind kind);

/// s4: percentage of generated beats with DF(g, t) <= eta.
EvaluationReport method4_productivity(const BeatSet& gen, const Template& tpl,
                                      DistanceKind kind, const Threshold& threshold);

/// Per-epoch s2 under all three distance kinds joined with the losses.
EpochCurve epoch_curves(const std::vector<BeatSet>& snapshots, const Template& tpl,
                        const std::vector<std::pair<double, double>>& losses);

} // namespace ecgsyn
