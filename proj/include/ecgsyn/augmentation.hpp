#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ecgsyn/dataset.hpp"
#include "ecgsyn/models.hpp"
#include "ecgsyn/nn.hpp"

namespace ecgsyn {

struct ClassifierConfig {
    std::size_t hidden = 64;
    std::size_t epochs = 20;
    std::size_t batch_size = 32;
    double lr = 1e-3;
};

struct ExperimentSpec {
    std::string majority_class = "L";
    std::string minority_class = "N";
    std::size_t minority_count_imbalanced = 500;
    double test_fraction = 0.2;
    ClassifierConfig classifier;
    std::uint64_t seed = 0;
};

struct ConfusionMatrix {
    // rows = true class, cols = predicted; index 0 = majority, 1 = minority
    std::array<std::array<std::size_t, 2>, 2> counts{};

    std::size_t total() const;
    std::size_t trace() const;
};

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    bool zero_denominator = false;
};

struct ClassificationReport {
    std::vector<ClassMetrics> per_class;
    double accuracy = 0.0;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    ConfusionMatrix confusion;

    std::string to_text() const;
};

struct Scenario {
    std::string name;
    BeatSet train;
    std::vector<int> train_labels; // 0 = majority, 1 = minority
};

struct ScenarioSet {
    std::array<Scenario, 3> scenarios; // balanced, imbalanced, augmented
    BeatSet test;
    std::vector<int> test_labels;
};

/// Small dense classifier: input -> hidden (ReLU) -> 2 logits.
struct Classifier {
    nn::Network net;
    std::size_t input_length = 0;
};

struct ExperimentResult {
    std::array<ClassificationReport, 3> reports;
    double delta_macro_f1_iii_ii = 0.0; // macro-F1(iii) - macro-F1(ii)

    std::string to_json() const;
    std::string to_text() const;
};

/// Holds out one shared real-only test set, then builds the three
/// training scenarios from the remainder. Scenario iii tops scenario
/// ii's minority side up with generated beats until balanced.
ScenarioSet build_scenarios(const BeatSet& majority, const BeatSet& minority,
                            const ExperimentSpec& spec, const BeatSet& generated_pool);

Classifier train_classifier(const BeatSet& train, const std::vector<int>& labels,
                            const ClassifierConfig& config, std::uint64_t seed);

std::vector<int> predict(Classifier& model, const BeatSet& beats);

/// Precision/recall/F1 book-keeping from a filled confusion matrix.
ClassificationReport report_from_confusion(const ConfusionMatrix& confusion,
                                           const std::string& majority_label,
                                           const std::string& minority_label);

ClassificationReport evaluate_classifier(Classifier& model, const BeatSet& test,
                                         const std::vector<int>& test_labels,
                                         const std::string& majority_label,
                                         const std::string& minority_label);

ExperimentResult run_experiment(const BeatSet& majority, const BeatSet& minority,
                                const ExperimentSpec& spec, const Checkpoint& generator);

} // namespace ecgsyn
