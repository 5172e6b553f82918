#include "ecgsyn/evaluation.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace ecgsyn {

std::string Threshold::derivation_name() const {
    switch (derivation) {
        case Derivation::MeanOfMinAndAvg: return "mean-of-min-and-avg";
        case Derivation::ScaledMin: return "scaled-min(" + std::to_string(scale) + ")";
        case Derivation::Manual: return "manual";
    }
    return "manual";
}

std::string EvaluationReport::to_json() const {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["metric"] = distance_name(kind);
    j["score"] = score;
    j["n_real"] = n_real;
    j["n_gen"] = n_gen;
    j["seed"] = seed;
    if (template_origin) j["template_origin"] = *template_origin;
    if (best_index) j["best_index"] = *best_index;
    if (threshold) {
        j["threshold"]["value"] = threshold->value;
        j["threshold"]["metric"] = distance_name(threshold->kind);
        j["threshold"]["derivation"] = threshold->derivation_name();
    }
    if (acceptable_count) {
        j["acceptable_count"] = *acceptable_count;
        j["acceptable_indices"] = acceptable_indices;
    }
    return j.dump(2) + "\n";
}

std::string EvaluationReport::to_text() const {
    std::ostringstream out;
    out << "method          " << method << '\n';
    out << "metric          " << distance_name(kind) << '\n';
    out << "score           " << score << '\n';
    out << "n_real          " << n_real << '\n';
    out << "n_gen           " << n_gen << '\n';
    out << "seed            " << seed << '\n';
    if (template_origin) out << "template        " << *template_origin << '\n';
    if (best_index) out << "best_index      " << *best_index << '\n';
    if (threshold) {
        out << "threshold       " << threshold->value << " ("
            << threshold->derivation_name() << ")\n";
    }
    if (acceptable_count) out << "acceptable      " << *acceptable_count << '\n';
    return out.str();
}

std::string EpochCurve::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,s2_dtw,s2_frechet,s2_euclid,generator_loss,discriminator_loss\n";
    for (const auto& p : points) {
        out << p.epoch << ',' << p.s2_dtw << ',' << p.s2_frechet << ',' << p.s2_euclid
            << ',' << p.generator_loss << ',' << p.discriminator_loss << '\n';
    }
    return out.str();
}

EvaluationReport method1_score(const BeatSet& real_subset, const BeatSet& gen_subset,
                               DistanceKind kind, unsigned threads) {
    if (real_subset.empty() || gen_subset.empty()) {
        throw Error("EmptySet", "method1_score");
    }
    EvaluationReport report;
    report.method = 1;
    report.kind = kind;
    report.n_real = real_subset.count();
    report.n_gen = gen_subset.count();
    report.score = cross_mean_distance(real_subset, gen_subset, kind, threads);
    return report;
}

namespace {

std::vector<double> template_distances(const BeatSet& gen, const Template& tpl,
                                       DistanceKind kind) {
    if (gen.empty()) throw Error("EmptySet", "no generated beats");
    if (kind == DistanceKind::Euclidean && gen.beat_length() != tpl.beat.size()) {
        throw Error("LengthMismatch", "generated beats vs template");
    }
    std::vector<double> d(gen.count());
    for (std::size_t i = 0; i < gen.count(); ++i) {
        d[i] = distance(gen.beats[i], tpl.beat, kind);
    }
    return d;
}

} // namespace

EvaluationReport method2_score(const BeatSet& gen, const Template& tpl,
                               DistanceKind kind) {
    const auto d = template_distances(gen, tpl, kind);
    double acc = 0.0;
    for (double v : d) acc += v;
    EvaluationReport report;
    report.method = 2;
    report.kind = kind;
    report.n_gen = gen.count();
    report.template_origin = tpl.origin_name();
    report.score = acc / static_cast<double>(d.size());
    return report;
}

std::pair<Beat, EvaluationReport> method3_best(const BeatSet& gen, const Template& tpl,
                                               DistanceKind kind) {
    const auto d = template_distances(gen, tpl, kind);
    std::size_t best = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] < d[best]) best = i;
    }
    EvaluationReport report;
    report.method = 3;
    report.kind = kind;
    report.n_gen = gen.count();
    report.template_origin = tpl.origin_name();
    report.score = d[best];
    report.best_index = best;
    return {gen.beats[best], report};
}

Threshold compute_threshold(double s2, double s3, DistanceKind kind) {
    if (s3 < 0.0 || s2 < 0.0 || s3 > s2) {
        throw Error("InvalidInputs", "threshold needs 0 <= s3 <= s2");
    }
    Threshold t;
    t.value = 0.5 * (s3 + s2);
    t.kind = kind;
    t.derivation = Threshold::Derivation::MeanOfMinAndAvg;
    return t;
}

Threshold scaled_threshold(double s3, double scale, DistanceKind kind) {
    if (s3 < 0.0 || scale < 0.0) {
        throw Error("InvalidInputs", "scaled threshold needs s3 >= 0 and a >= 0");
    }
    Threshold t;
    t.value = scale * s3;
    t.kind = kind;
    t.derivation = Threshold::Derivation::ScaledMin;
    t.scale = scale;
    return t;
}

EvaluationReport method4_productivity(const BeatSet& gen, const Template& tpl,
                                      DistanceKind kind, const Threshold& threshold) {
    const auto d = template_distances(gen, tpl, kind);
    EvaluationReport report;
    report.method = 4;
    report.kind = kind;
    report.n_gen = gen.count();
    report.template_origin = tpl.origin_name();
    report.threshold = threshold;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] <= threshold.value) report.acceptable_indices.push_back(i);
    }
    report.acceptable_count = report.acceptable_indices.size();
    report.score = 100.0 * static_cast<double>(report.acceptable_indices.size()) /
                   static_cast<double>(gen.count());
    return report;
}

EpochCurve epoch_curves(const std::vector<BeatSet>& snapshots, const Template& tpl,
                        const std::vector<std::pair<double, double>>& losses) {
    if (snapshots.size() != losses.size()) {
        throw Error("EpochMismatch", std::to_string(snapshots.size()) +
                                         " snapshots vs " +
                                         std::to_string(losses.size()) + " loss rows");
    }
    EpochCurve curve;
    for (std::size_t e = 0; e < snapshots.size(); ++e) {
        EpochCurve::Point p;
        p.epoch = e + 1;
        p.s2_dtw = method2_score(snapshots[e], tpl, DistanceKind::Dtw).score;
        p.s2_frechet = method2_score(snapshots[e], tpl, DistanceKind::Frechet).score;
        p.s2_euclid = method2_score(snapshots[e], tpl, DistanceKind::Euclidean).score;
        p.generator_loss = losses[e].first;
        p.discriminator_loss = losses[e].second;
        curve.points.push_back(p);
    }
    return curve;
}

} // namespace ecgsyn
