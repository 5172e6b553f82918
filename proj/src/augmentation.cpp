#include "ecgsyn/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ecgsyn/rng.hpp"

namespace ecgsyn {

using nn::Matrix;

std::size_t ConfusionMatrix::total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

std::size_t ConfusionMatrix::trace() const { return counts[0][0] + counts[1][1]; }

std::string ClassificationReport::to_text() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "              precision    recall  f1-score   support\n";
    for (const auto& c : per_class) {
        out << std::setw(12) << c.label << "  " << std::setw(9) << c.precision << "  "
            << std::setw(8) << c.recall << "  " << std::setw(8) << c.f1 << "  "
            << std::setw(8) << c.support << '\n';
    }
    const std::size_t total = confusion.total();
    out << "    accuracy" << std::setw(33) << accuracy << "  " << std::setw(8) << total
        << '\n';
    out << "   macro avg  " << std::setw(9) << macro_precision << "  " << std::setw(8)
        << macro_recall << "  " << std::setw(8) << macro_f1 << "  " << std::setw(8)
        << total << '\n';
    out << "weighted avg  " << std::setw(9) << weighted_precision << "  " << std::setw(8)
        << weighted_recall << "  " << std::setw(8) << weighted_f1 << "  " << std::setw(8)
        << total << '\n';
    out << "confusion     [[" << confusion.counts[0][0] << ", " << confusion.counts[0][1]
        << "], [" << confusion.counts[1][0] << ", " << confusion.counts[1][1] << "]]\n";
    return out.str();
}

namespace {

nlohmann::ordered_json report_json(const ClassificationReport& r) {
    nlohmann::ordered_json j;
    for (const auto& c : r.per_class) {
        j["classes"][c.label] = {{"precision", c.precision},
                                 {"recall", c.recall},
                                 {"f1", c.f1},
                                 {"support", c.support}};
    }
    j["accuracy"] = r.accuracy;
    j["macro_avg"] = {{"precision", r.macro_precision},
                      {"recall", r.macro_recall},
                      {"f1", r.macro_f1}};
    j["weighted_avg"] = {{"precision", r.weighted_precision},
                         {"recall", r.weighted_recall},
                         {"f1", r.weighted_f1}};
    j["confusion"] = {{r.confusion.counts[0][0], r.confusion.counts[0][1]},
                      {r.confusion.counts[1][0], r.confusion.counts[1][1]}};
    return j;
}

} // namespace

std::string ExperimentResult::to_json() const {
    nlohmann::ordered_json j;
    const char* names[3] = {"balanced", "imbalanced", "augmented"};
    for (int i = 0; i < 3; ++i) j[names[i]] = report_json(reports[i]);
    j["delta_macro_f1_augmented_vs_imbalanced"] = delta_macro_f1_iii_ii;
    return j.dump(2) + "\n";
}

std::string ExperimentResult::to_text() const {
    std::ostringstream out;
    const char* names[3] = {"(i) balanced real", "(ii) imbalanced real",
                            "(iii) synthetically rebalanced"};
    for (int i = 0; i < 3; ++i) {
        out << "=== " << names[i] << " ===\n" << reports[i].to_text() << '\n';
    }
    out << std::fixed << std::setprecision(4);
    out << "macro-F1: (i) " << reports[0].macro_f1 << "  (ii) " << reports[1].macro_f1
        << "  (iii) " << reports[2].macro_f1 << '\n';
    out << "macro-F1 delta (iii) - (ii): " << delta_macro_f1_iii_ii << '\n';
    return out.str();
}

ScenarioSet build_scenarios(const BeatSet& majority, const BeatSet& minority,
                            const ExperimentSpec& spec, const BeatSet& generated_pool) {
    if (majority.empty() || minority.empty()) {
        throw Error("InsufficientData", "both classes must be present");
    }
    if (majority.beat_length() != minority.beat_length()) {
        throw Error("LengthMismatch", "class beat lengths differ");
    }

    // Hold the shared real-only test set out first, then sample the
    // training scenarios from the remainder.
    auto [maj_train_pool, maj_test] = split(majority, spec.test_fraction, spec.seed);
    auto [min_train_pool, min_test] = split(minority, spec.test_fraction, spec.seed + 1);

    const std::size_t balanced =
        std::min(maj_train_pool.count(), min_train_pool.count());
    if (spec.minority_count_imbalanced >= balanced) {
        throw Error("InsufficientData",
                    "minority_count_imbalanced must be below the balanced count");
    }

    const BeatSet maj_train = sample_subset(maj_train_pool, balanced, spec.seed + 2);
    const BeatSet min_train = sample_subset(min_train_pool, balanced, spec.seed + 3);

    ScenarioSet out;
    out.test = BeatSet{};
    out.test.source = Source::Real;
    for (std::size_t i = 0; i < maj_test.count(); ++i) {
        out.test.push_back(maj_test.beats[i], maj_test.labels[i]);
        out.test_labels.push_back(0);
    }
    for (std::size_t i = 0; i < min_test.count(); ++i) {
        out.test.push_back(min_test.beats[i], min_test.labels[i]);
        out.test_labels.push_back(1);
    }

    const auto add = [](Scenario& s, const BeatSet& set, int label, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            s.train.push_back(set.beats[i], set.labels[i]);
            s.train_labels.push_back(label);
        }
    };

    // (i) balanced real
    out.scenarios[0].name = "balanced";
    add(out.scenarios[0], maj_train, 0, maj_train.count());
    add(out.scenarios[0], min_train, 1, balanced);

    // (ii) imbalanced real: the full majority side, a sliver of minority
    out.scenarios[1].name = "imbalanced";
    add(out.scenarios[1], maj_train, 0, maj_train.count());
    add(out.scenarios[1], min_train, 1, spec.minority_count_imbalanced);

    // (iii) scenario ii plus generated minority beats until balanced
    out.scenarios[2].name = "augmented";
    add(out.scenarios[2], maj_train, 0, maj_train.count());
    add(out.scenarios[2], min_train, 1, spec.minority_count_imbalanced);
    const std::size_t needed = balanced - spec.minority_count_imbalanced;
    if (generated_pool.count() < needed) {
        throw Error("InsufficientData", "generated pool too small: need " +
                                            std::to_string(needed) + ", have " +
                                            std::to_string(generated_pool.count()));
    }
    for (std::size_t i = 0; i < needed; ++i) {
        out.scenarios[2].train.push_back(generated_pool.beats[i],
                                         spec.minority_class);
        out.scenarios[2].train_labels.push_back(1);
    }
    out.scenarios[2].train.source = Source::Augmented;
    return out;
}

Classifier train_classifier(const BeatSet& train, const std::vector<int>& labels,
                            const ClassifierConfig& config, std::uint64_t seed) {
    if (train.empty() || labels.size() != train.count()) {
        throw Error("BadConfig", "training set and labels disagree");
    }
    const bool has0 = std::find(labels.begin(), labels.end(), 0) != labels.end();
    const bool has1 = std::find(labels.begin(), labels.end(), 1) != labels.end();
    if (!has0 || !has1) throw Error("SingleClassTrainSet", "need both classes");

    Classifier model;
    model.input_length = train.beat_length();
    model.net.add({nn::LayerSpec::Kind::FullyConnected, model.input_length,
                   config.hidden, 0.0, 0.9, 1e-5});
    model.net.add({nn::LayerSpec::Kind::ReLU, 0, 0, 0.0, 0.9, 1e-5});
    model.net.add({nn::LayerSpec::Kind::FullyConnected, config.hidden, 2, 0.0, 0.9, 1e-5});

    Rng rng(seed);
    model.net.init(rng, 0.02);
    nn::Adam opt(model.net.params(), config.lr);

    std::vector<std::size_t> order(train.count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t len = train.beat_length();

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const std::size_t j = i + rng.uniform_index(order.size() - i);
            std::swap(order[i], order[j]);
        }
        for (std::size_t begin = 0; begin < train.count(); begin += config.batch_size) {
            const std::size_t end = std::min(train.count(), begin + config.batch_size);
            Matrix x(end - begin, len);
            std::vector<int> y(end - begin);
            for (std::size_t i = begin; i < end; ++i) {
                std::copy(train.beats[order[i]].begin(), train.beats[order[i]].end(),
                          x.data.begin() + (i - begin) * len);
                y[i - begin] = labels[order[i]];
            }
            model.net.zero_grad();
            const Matrix logits = model.net.forward(x, true);
            const auto loss = nn::softmax_ce_loss(logits, y);
            if (!std::isfinite(loss.value)) {
                throw Error("NonFiniteLoss", "classifier epoch " + std::to_string(epoch));
            }
            model.net.backward(loss.grad);
            opt.step();
        }
    }
    return model;
}

std::vector<int> predict(Classifier& model, const BeatSet& beats) {
    if (beats.empty()) throw Error("EmptyTestSet", "predict");
    const std::size_t len = beats.beat_length();
    Matrix x(beats.count(), len);
    for (std::size_t i = 0; i < beats.count(); ++i) {
        std::copy(beats.beats[i].begin(), beats.beats[i].end(), x.data.begin() + i * len);
    }
    const Matrix logits = model.net.forward(x, false);
    std::vector<int> out(beats.count());
    for (std::size_t i = 0; i < beats.count(); ++i) {
        out[i] = logits.at(i, 1) > logits.at(i, 0) ? 1 : 0;
    }
    return out;
}

ClassificationReport report_from_confusion(const ConfusionMatrix& confusion,
                                           const std::string& majority_label,
                                           const std::string& minority_label) {
    if (confusion.total() == 0) throw Error("EmptyTestSet", "empty confusion matrix");
    ClassificationReport r;
    r.confusion = confusion;
    const auto& cm = r.confusion.counts;
    const std::string labels[2] = {majority_label, minority_label};
    double wp = 0.0, wr = 0.0, wf = 0.0;
    std::size_t total_support = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        ClassMetrics m;
        m.label = labels[c];
        m.support = cm[c][0] + cm[c][1];
        const std::size_t tp = cm[c][c];
        const std::size_t pred_c = cm[0][c] + cm[1][c];
        if (pred_c == 0 || m.support == 0) m.zero_denominator = true;
        m.precision = pred_c ? static_cast<double>(tp) / static_cast<double>(pred_c) : 0.0;
        m.recall = m.support ? static_cast<double>(tp) / static_cast<double>(m.support) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        r.per_class.push_back(m);
        r.macro_precision += 0.5 * m.precision;
        r.macro_recall += 0.5 * m.recall;
        r.macro_f1 += 0.5 * m.f1;
        wp += m.precision * static_cast<double>(m.support);
        wr += m.recall * static_cast<double>(m.support);
        wf += m.f1 * static_cast<double>(m.support);
        total_support += m.support;
    }
    r.accuracy = static_cast<double>(r.confusion.trace()) /
                 static_cast<double>(r.confusion.total());
    r.weighted_precision = wp / static_cast<double>(total_support);
    r.weighted_recall = wr / static_cast<double>(total_support);
    r.weighted_f1 = wf / static_cast<double>(total_support);
    return r;
}

ClassificationReport evaluate_classifier(Classifier& model, const BeatSet& test,
                                         const std::vector<int>& test_labels,
                                         const std::string& majority_label,
                                         const std::string& minority_label) {
    if (test.empty()) throw Error("EmptyTestSet", "evaluate_classifier");
    if (test_labels.size() != test.count()) {
        throw Error("BadConfig", "test labels and beats disagree");
    }
    const auto predicted = predict(model, test);
    ConfusionMatrix confusion;
    for (std::size_t i = 0; i < test.count(); ++i) {
        ++confusion.counts[static_cast<std::size_t>(test_labels[i])]
                          [static_cast<std::size_t>(predicted[i])];
    }
    return report_from_confusion(confusion, majority_label, minority_label);
}

ExperimentResult run_experiment(const BeatSet& majority, const BeatSet& minority,
                                const ExperimentSpec& spec, const Checkpoint& generator) {
    const std::size_t pool_size =
        std::max<std::size_t>(majority.count() + minority.count(), 64);
    const BeatSet generated = generate(generator, pool_size, spec.seed + 100);
    const ScenarioSet scenarios = build_scenarios(majority, minority, spec, generated);

    ExperimentResult result;
    for (std::size_t i = 0; i < 3; ++i) {
        Classifier model =
            train_classifier(scenarios.scenarios[i].train, scenarios.scenarios[i].train_labels,
                             spec.classifier, spec.seed + 10 + i);
        result.reports[i] = evaluate_classifier(model, scenarios.test, scenarios.test_labels,
                                                spec.majority_class, spec.minority_class);
    }
    result.delta_macro_f1_iii_ii = result.reports[2].macro_f1 - result.reports[1].macro_f1;
    return result;
}

} // namespace ecgsyn
