// Acceptance suite: one criterion per function, each printing a single
// PASS/FAIL line. Run with no arguments for all criteria, or with a list
// of criterion numbers (1-9).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ecgsyn/augmentation.hpp"
#include "ecgsyn/dataset.hpp"
#include "ecgsyn/evaluation.hpp"
#include "ecgsyn/metrics.hpp"
#include "ecgsyn/models.hpp"
#include "ecgsyn/nn.hpp"
#include "ecgsyn/templates.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace ecgsyn;
using nn::Matrix;

namespace {

struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

// --- 1: distance oracles ------------------------------------------------

void criterion1() {
    Rng rng(1001);
    for (int trial = 0; trial < 200; ++trial) {
        Beat x(1 + rng.uniform_index(6)), y(1 + rng.uniform_index(6));
        for (auto& v : x) v = static_cast<double>(rng.uniform_index(7)) - 3.0;
        for (auto& v : y) v = static_cast<double>(rng.uniform_index(7)) - 3.0;
        const double d = dtw(x, y), db = oracles::dtw_brute(x, y);
        require(std::abs(d - db) <= 1e-12,
                "dtw mismatch at trial " + std::to_string(trial) + ": " +
                    std::to_string(d) + " vs " + std::to_string(db));
        const double f = frechet(x, y), fb = oracles::frechet_brute(x, y);
        require(std::abs(f - fb) <= 1e-12,
                "frechet mismatch at trial " + std::to_string(trial));
    }
}

// --- 2: metric properties -----------------------------------------------

void criterion2() {
    Rng rng(2002);
    for (int trial = 0; trial < 1000; ++trial) {
        const Beat x = synthetic::random_beat(256, rng);
        const Beat y = synthetic::random_beat(256, rng);
        const Beat z = synthetic::random_beat(256, rng);

        for (auto kind : {DistanceKind::Dtw, DistanceKind::Frechet, DistanceKind::Euclidean}) {
            require(distance(x, y, kind) == distance(y, x, kind),
                    "symmetry violated (" + distance_name(kind) + ") at trial " +
                        std::to_string(trial));
        }
        require(euclidean(x, z) <= euclidean(x, y) + euclidean(y, z) + 1e-9,
                "euclidean triangle inequality at trial " + std::to_string(trial));
        require(frechet(x, z) <= frechet(x, y) + frechet(y, z) + 1e-9,
                "frechet triangle inequality at trial " + std::to_string(trial));

        double l1 = 0.0, linf = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            l1 += std::abs(x[i] - y[i]);
            linf = std::max(linf, std::abs(x[i] - y[i]));
        }
        require(dtw(x, y) <= l1, "dtw diagonal bound at trial " + std::to_string(trial));
        require(frechet(x, y) <= linf,
                "frechet diagonal bound at trial " + std::to_string(trial));
    }
}

// --- 3: gradient suite ---------------------------------------------------

double loss_of(nn::Network& net, const Matrix& x, const Matrix& weights) {
    const Matrix out = net.forward(x, true);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out.data[i] * weights.data[i];
    return s;
}

void check_layer(nn::LayerSpec::Kind kind, Rng& rng, const std::string& name) {
    const std::size_t batch = 2 + rng.uniform_index(4);
    const std::size_t in = 2 + rng.uniform_index(6);
    const std::size_t out = kind == nn::LayerSpec::Kind::FullyConnected
                                ? 2 + rng.uniform_index(6)
                                : in;
    nn::LayerSpec spec;
    spec.kind = kind;
    spec.in = in;
    spec.out = kind == nn::LayerSpec::Kind::FullyConnected ? out : in;
    spec.slope = 0.2;
    nn::Network net;
    net.add(spec);
    net.init(rng, 0.5);

    Matrix x(batch, in);
    for (auto& v : x.data) v = rng.gaussian();
    // keep ReLU kinks away from the probes
    if (kind == nn::LayerSpec::Kind::ReLU || kind == nn::LayerSpec::Kind::LeakyReLU) {
        for (auto& v : x.data) {
            if (std::abs(v) < 0.05) v = v < 0 ? v - 0.1 : v + 0.1;
        }
    }
    Matrix w(batch, out);
    for (auto& v : w.data) v = rng.gaussian();

    net.zero_grad();
    const Matrix y = net.forward(x, true);
    Matrix grad_out = w;
    const Matrix grad_in = net.backward(grad_out);

    const double h = 1e-5;
    for (int probe = 0; probe < 5; ++probe) {
        const std::size_t i = rng.uniform_index(x.size());
        Matrix xp = x, xm = x;
        xp.data[i] += h;
        xm.data[i] -= h;
        const double fd = (loss_of(net, xp, w) - loss_of(net, xm, w)) / (2.0 * h);
        require(oracles::rel_error(grad_in.data[i], fd) < 1e-4,
                name + " input gradient: analytic " + std::to_string(grad_in.data[i]) +
                    " vs fd " + std::to_string(fd));
    }
    for (auto* p : net.params()) {
        for (int probe = 0; probe < 3; ++probe) {
            const std::size_t i = rng.uniform_index(p->value.size());
            const double keep = p->value.data[i];
            p->value.data[i] = keep + h;
            const double up = loss_of(net, x, w);
            p->value.data[i] = keep - h;
            const double down = loss_of(net, x, w);
            p->value.data[i] = keep;
            const double fd = (up - down) / (2.0 * h);
            require(oracles::rel_error(p->grad.data[i], fd) < 1e-4,
                    name + " param gradient mismatch");
        }
    }
}

void criterion3() {
    Rng rng(3003);
    const std::pair<nn::LayerSpec::Kind, std::string> kinds[] = {
        {nn::LayerSpec::Kind::FullyConnected, "fc"},
        {nn::LayerSpec::Kind::LeakyReLU, "leaky_relu"},
        {nn::LayerSpec::Kind::ReLU, "relu"},
        {nn::LayerSpec::Kind::Tanh, "tanh"},
        {nn::LayerSpec::Kind::Sigmoid, "sigmoid"},
        {nn::LayerSpec::Kind::BatchNorm, "batchnorm"},
    };
    for (const auto& [kind, name] : kinds) {
        for (int config = 0; config < 50; ++config) check_layer(kind, rng, name);
    }

    const double h = 1e-5;
    for (int config = 0; config < 50; ++config) {
        const std::size_t batch = 2 + rng.uniform_index(4);
        const std::size_t cols = 2 + rng.uniform_index(5);

        // bce against a scalar target
        Matrix p(batch, 1);
        for (auto& v : p.data) v = 0.05 + 0.9 * rng.uniform();
        const double target = rng.uniform() < 0.5 ? 0.0 : 1.0;
        const auto bce = nn::bce_loss(p, target);
        for (std::size_t i = 0; i < p.size(); ++i) {
            Matrix pp = p, pm = p;
            pp.data[i] += h;
            pm.data[i] -= h;
            const double fd =
                (nn::bce_loss(pp, target).value - nn::bce_loss(pm, target).value) / (2.0 * h);
            require(oracles::rel_error(bce.grad.data[i], fd) < 1e-4, "bce gradient");
        }

        // l1 away from ties
        Matrix a(batch, cols), b(batch, cols);
        for (auto& v : a.data) v = rng.gaussian();
        for (std::size_t i = 0; i < b.size(); ++i) {
            b.data[i] = a.data[i] + (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.2 + rng.uniform());
        }
        const auto l1 = nn::l1_loss(a, b);
        for (int probe = 0; probe < 4; ++probe) {
            const std::size_t i = rng.uniform_index(a.size());
            Matrix ap = a, am = a;
            ap.data[i] += h;
            am.data[i] -= h;
            const double fd = (nn::l1_loss(ap, b).value - nn::l1_loss(am, b).value) / (2.0 * h);
            require(oracles::rel_error(l1.grad.data[i], fd) < 1e-4, "l1 gradient");
        }

        // softmax cross-entropy
        Matrix logits(batch, cols);
        for (auto& v : logits.data) v = rng.gaussian();
        std::vector<int> labels(batch);
        for (auto& l : labels) l = static_cast<int>(rng.uniform_index(cols));
        const auto ce = nn::softmax_ce_loss(logits, labels);
        for (int probe = 0; probe < 4; ++probe) {
            const std::size_t i = rng.uniform_index(logits.size());
            Matrix lp = logits, lm = logits;
            lp.data[i] += h;
            lm.data[i] -= h;
            const double fd = (nn::softmax_ce_loss(lp, labels).value -
                               nn::softmax_ce_loss(lm, labels).value) /
                              (2.0 * h);
            require(oracles::rel_error(ce.grad.data[i], fd) < 1e-4, "softmax ce gradient");
        }

        // KL divergence closed-form gradients
        Matrix mu(batch, cols), logvar(batch, cols);
        for (auto& v : mu.data) v = rng.gaussian();
        for (auto& v : logvar.data) v = 0.5 * rng.gaussian();
        Matrix dmu, dlogvar;
        nn::kl_divergence_grad(mu, logvar, dmu, dlogvar);
        for (int probe = 0; probe < 3; ++probe) {
            const std::size_t i = rng.uniform_index(mu.size());
            Matrix mp = mu, mm = mu;
            mp.data[i] += h;
            mm.data[i] -= h;
            const double fd = (nn::kl_divergence_gaussian(mp, logvar) -
                               nn::kl_divergence_gaussian(mm, logvar)) /
                              (2.0 * h);
            require(oracles::rel_error(dmu.data[i], fd) < 1e-4, "kl dmu gradient");
            Matrix vp = logvar, vm = logvar;
            vp.data[i] += h;
            vm.data[i] -= h;
            const double fdv = (nn::kl_divergence_gaussian(mu, vp) -
                                nn::kl_divergence_gaussian(mu, vm)) /
                               (2.0 * h);
            require(oracles::rel_error(dlogvar.data[i], fdv) < 1e-4, "kl dlogvar gradient");
        }
    }
}

// --- 4: evaluation algebra -----------------------------------------------

void criterion4() {
    // hand-computable fixture: distances {0.5, 1.5, 2.5}, eta = 1 -> 33.33%
    {
        BeatSet gen;
        for (double d : {0.5, 1.5, 2.5}) gen.push_back(Beat(4, d / 2.0), "G");
        Template tpl;
        tpl.beat = Beat(4, 0.0);
        Threshold eta;
        eta.value = 1.0;
        eta.kind = DistanceKind::Euclidean;
        eta.derivation = Threshold::Derivation::Manual;
        const auto rep = method4_productivity(gen, tpl, DistanceKind::Euclidean, eta);
        require(std::abs(rep.score - 100.0 / 3.0) < 1e-12, "hand fixture != 33.33%");
        require(rep.acceptable_indices == std::vector<std::size_t>{0},
                "hand fixture acceptable indices");
    }

    Rng rng(4004);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(24);
        const std::size_t len = 8 + rng.uniform_index(25);
        BeatSet gen;
        gen.source = Source::Generated;
        for (std::size_t i = 0; i < n; ++i) gen.push_back(synthetic::random_beat(len, rng), "G");
        Template tpl;
        tpl.beat = synthetic::random_beat(len, rng);

        const auto kind = static_cast<DistanceKind>(rng.uniform_index(3));
        const double s2 = method2_score(gen, tpl, kind).score;
        const double s3 = method3_best(gen, tpl, kind).second.score;
        const Threshold eta = compute_threshold(s2, s3, kind);
        require(s3 <= eta.value + 1e-12 && eta.value <= s2 + 1e-12,
                "s3 <= eta <= s2 violated at trial " + std::to_string(trial));

        const auto prod = method4_productivity(gen, tpl, kind, eta);
        require(prod.score > 0.0, "default-eta productivity not positive");

        Threshold smaller = eta, larger = eta;
        smaller.value *= 0.5;
        larger.value *= 2.0;
        const double lo = method4_productivity(gen, tpl, kind, smaller).score;
        const double hi = method4_productivity(gen, tpl, kind, larger).score;
        require(lo <= prod.score && prod.score <= hi,
                "productivity not monotone in eta at trial " + std::to_string(trial));
    }
}

// --- 5: desk-scale training ----------------------------------------------

void criterion5() {
    const auto start = std::chrono::steady_clock::now();

    const BeatSet data = synthetic::ecg_like_set(500, 256, 55, "N");
    GanConfig cfg;
    cfg.model_kind = ModelKind::Classic;
    cfg.beat_length = 256;
    cfg.epochs = 30;
    cfg.batch_size = 9;
    cfg.seed = 5;
    cfg.snapshot_per_epoch = 10;

    GanNets fresh = build_model(cfg);
    const Checkpoint untrained = snapshot_checkpoint(cfg, fresh.generator, 0);
    const TrainRun run = train(cfg, data);

    for (const auto& [g, d] : run.losses) {
        require(std::isfinite(g) && std::isfinite(d), "non-finite training loss");
    }
    const BeatSet trained_gen = generate(run.final_checkpoint, 300, 77);
    for (const auto& beat : trained_gen.beats) {
        for (double v : beat) require(v >= -1.0 && v <= 1.0, "generated beat outside [-1,1]");
    }

    const Template tpl = random_template(data, 9);
    const double s2 = method2_score(trained_gen, tpl, DistanceKind::Dtw).score;
    const double s3 = method3_best(trained_gen, tpl, DistanceKind::Dtw).second.score;
    const Threshold eta = compute_threshold(s2, s3, DistanceKind::Dtw);
    const double trained_prod =
        method4_productivity(trained_gen, tpl, DistanceKind::Dtw, eta).score;

    const BeatSet untrained_gen = generate(untrained, 300, 77);
    const double untrained_prod =
        method4_productivity(untrained_gen, tpl, DistanceKind::Dtw, eta).score;

    require(trained_prod > 0.0, "trained productivity is zero");
    require(trained_prod >= 2.0 * untrained_prod,
            "trained productivity " + std::to_string(trained_prod) +
                "% < 2x untrained " + std::to_string(untrained_prod) + "%");

    const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    require(elapsed < 600, "desk-scale run took " + std::to_string(elapsed) + "s");
    std::cout << "  [detail] trained " << trained_prod << "% vs untrained "
              << untrained_prod << "% in " << elapsed << "s\n";
}

// --- 6: augmentation trend -----------------------------------------------

void criterion6() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t len = 64;

    // The two classes differ by a subtle morphology shift under heavy
    // noise, so 50 minority examples are not enough for the classifier
    // and the imbalanced scenario collapses toward the majority.
    synthetic::Morph maj_morph;
    maj_morph.center = 0.47;
    maj_morph.noise = 0.15;
    synthetic::Morph min_morph;
    min_morph.center = 0.53;
    min_morph.side_amp = 0.40;
    min_morph.noise = 0.15;

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const BeatSet majority =
            synthetic::ecg_like_set(750, len, 600 + seed, "L", 1.0, maj_morph);
        const BeatSet minority =
            synthetic::ecg_like_set(750, len, 700 + seed, "N", 1.0, min_morph);

        GanConfig gan;
        gan.model_kind = ModelKind::Classic;
        gan.beat_length = len;
        gan.epochs = 15;
        gan.batch_size = 9;
        gan.seed = seed;
        gan.snapshot_per_epoch = 1;
        const TrainRun run = train(gan, minority);

        ExperimentSpec spec;
        spec.minority_count_imbalanced = 50;
        spec.test_fraction = 0.2;
        spec.classifier.epochs = 2;
        spec.seed = seed;
        const ExperimentResult result =
            run_experiment(majority, minority, spec, run.final_checkpoint);
        const double f1_i = result.reports[0].macro_f1;
        const double f1_ii = result.reports[1].macro_f1;
        const double f1_iii = result.reports[2].macro_f1;
        std::cout << "  [detail] seed " << seed << ": macro-F1 (i)=" << f1_i
                  << " (ii)=" << f1_ii << " (iii)=" << f1_iii << "\n";
        require(f1_ii < f1_i, "seed " + std::to_string(seed) + ": (ii) !< (i)");
        require(f1_ii < f1_iii, "seed " + std::to_string(seed) + ": (ii) !< (iii)");
        require(f1_iii - f1_ii >= 0.15,
                "seed " + std::to_string(seed) + ": delta " +
                    std::to_string(f1_iii - f1_ii) + " < 0.15");
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    require(elapsed < 900, "augmentation experiment took " + std::to_string(elapsed) + "s");
}

// --- 7: determinism --------------------------------------------------------

std::string checkpoint_bytes(const Checkpoint& ckpt, const std::string& path) {
    save_checkpoint(ckpt, path);
    std::ifstream in(path, std::ios::binary);
    std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::remove(path.c_str());
    return bytes;
}

void criterion7() {
    const BeatSet data = synthetic::ecg_like_set(60, 48, 7);
    GanConfig cfg;
    cfg.model_kind = ModelKind::Classic;
    cfg.beat_length = 48;
    cfg.epochs = 2;
    cfg.seed = 12;
    cfg.snapshot_per_epoch = 3;

    const TrainRun a = train(cfg, data);
    const TrainRun b = train(cfg, data);
    require(checkpoint_bytes(a.final_checkpoint, "/tmp/ecgsyn_acc7_a.ckpt") ==
                checkpoint_bytes(b.final_checkpoint, "/tmp/ecgsyn_acc7_b.ckpt"),
            "checkpoints differ across identical reruns");

    const BeatSet gen_a = generate(a.final_checkpoint, 40, 3);
    const BeatSet gen_b = generate(b.final_checkpoint, 40, 3);
    require(gen_a.beats == gen_b.beats, "generated sets differ across reruns");

    const Template tpl = random_template(data, 1);
    const auto rep_a = method2_score(gen_a, tpl, DistanceKind::Dtw);
    const auto rep_b = method2_score(gen_b, tpl, DistanceKind::Dtw);
    require(rep_a.to_json() == rep_b.to_json(), "reports differ across reruns");

    // 100 x 100 grid, bit-equal across thread counts
    const BeatSet left = synthetic::ecg_like_set(100, 48, 70);
    const BeatSet right = synthetic::ecg_like_set(100, 48, 71);
    for (auto kind : {DistanceKind::Dtw, DistanceKind::Frechet, DistanceKind::Euclidean}) {
        const double serial = cross_mean_distance(left, right, kind, 1);
        for (unsigned threads : {2u, 3u, 5u, 8u, 16u}) {
            require(cross_mean_distance(left, right, kind, threads) == serial,
                    "cross_mean_distance varies with " + std::to_string(threads) +
                        " threads (" + distance_name(kind) + ")");
        }
    }
}

// --- 8: resampling ----------------------------------------------------------

void criterion8() {
    const Beat constant(280, 0.73);
    const Beat down = resample_beat(constant, 256);
    require(down.size() == 256, "constant resample length");
    for (double v : down) {
        require(std::abs(v - 0.73) <= 1e-9, "constant beat not preserved exactly");
    }

    // 5-cycle sinusoid against the analytic target
    Beat sine(280);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < sine.size(); ++i) {
        sine[i] = std::sin(2.0 * pi * 5.0 * static_cast<double>(i) / 280.0);
    }
    const Beat resampled = resample_beat(sine, 256);
    Beat target(256);
    for (std::size_t i = 0; i < target.size(); ++i) {
        target[i] = std::sin(2.0 * pi * 5.0 * static_cast<double>(i) / 256.0);
    }
    double sxy = 0.0, sxx = 0.0, syy = 0.0, sx = 0.0, sy = 0.0;
    const double n = 256.0;
    for (std::size_t i = 0; i < 256; ++i) {
        sx += resampled[i];
        sy += target[i];
        sxy += resampled[i] * target[i];
        sxx += resampled[i] * resampled[i];
        syy += target[i] * target[i];
    }
    const double corr = (n * sxy - sx * sy) /
                        std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    require(corr >= 0.999, "sinusoid correlation " + std::to_string(corr) + " < 0.999");
}

// --- 9: checkpoint round-trip ------------------------------------------------

void criterion9() {
    const BeatSet data = synthetic::ecg_like_set(40, 32, 90);
    for (auto kind : {ModelKind::Classic, ModelKind::VaeGan, ModelKind::WganFc}) {
        GanConfig cfg;
        cfg.model_kind = kind;
        cfg.beat_length = 32;
        cfg.latent_dim = kind == ModelKind::VaeGan ? 10 : 100;
        cfg.epochs = 1;
        cfg.seed = 42;
        cfg.snapshot_per_epoch = 1;
        const TrainRun run = train(cfg, data);

        const std::string path = "/tmp/ecgsyn_acc9_" + model_name(kind) + ".ckpt";
        const BeatSet before = generate(run.final_checkpoint, 20, 17);
        save_checkpoint(run.final_checkpoint, path);
        const Checkpoint back = load_checkpoint(path);
        std::remove(path.c_str());
        const BeatSet after = generate(back, 20, 17);
        require(before.beats == after.beats,
                model_name(kind) + ": generate differs after save/load round-trip");
    }
}

const char* kNames[9] = {
    "distance-oracle equivalence",
    "metric properties",
    "gradient suite",
    "evaluation algebra",
    "desk-scale training",
    "augmentation trend",
    "determinism",
    "resampling",
    "checkpoint round-trip",
};

} // namespace

int main(int argc, char** argv) {
    const std::function<void()> criteria[9] = {
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9,
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > 9) {
            std::cerr << "usage: acceptance [criterion numbers 1-9]\n";
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty()) {
        for (int n = 1; n <= 9; ++n) selected.push_back(n);
    }

    int failures = 0;
    for (int n : selected) {
        try {
            criteria[n - 1]();
            std::cout << "PASS criterion " << n << " (" << kNames[n - 1] << ")\n";
        } catch (const Failure& f) {
            std::cout << "FAIL criterion " << n << " (" << kNames[n - 1]
                      << "): " << f.what << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "FAIL criterion " << n << " (" << kNames[n - 1]
                      << "): unexpected exception: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
