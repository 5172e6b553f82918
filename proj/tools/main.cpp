// Command-line front end: ingest, train, generate, evaluate, experiment, plot.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecgsyn/augmentation.hpp"
#include "ecgsyn/dataset.hpp"
#include "ecgsyn/evaluation.hpp"
#include "ecgsyn/metrics.hpp"
#include "ecgsyn/models.hpp"
#include "ecgsyn/plot.hpp"
#include "ecgsyn/templates.hpp"

namespace fs = std::filesystem;
using namespace ecgsyn;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("Io", "write failed: " + path);
}

void ensure_run_dir(const std::string& dir, bool force) {
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) throw Error("Io", "not a directory: " + dir);
        if (!fs::is_empty(dir) && !force) {
            throw Error("RunDirNotEmpty", dir + " (use --force to overwrite)");
        }
    } else {
        fs::create_directories(dir);
    }
}

/// Accepts a cache directory, a .bin cache, or a beat CSV.
BeatSet load_any(const std::string& path, std::size_t csv_length) {
    if (fs::is_directory(path)) return load_cache((fs::path(path) / "beats.bin").string());
    if (path.size() > 4 && path.substr(path.size() - 4) == ".bin") return load_cache(path);
    return load_beats(path, csv_length);
}

Template resolve_template(const std::string& spec_str, const BeatSet& reference,
                          std::uint64_t seed, std::size_t expected_length) {
    if (spec_str == "sab") return sab_template(reference);
    if (spec_str == "random") return random_template(reference, seed);
    if (spec_str.rfind("file:", 0) == 0) {
        return load_template(spec_str.substr(5), expected_length);
    }
    throw Error("BadConfig", "template must be sab, random, or file:PATH");
}

std::string config_json(const GanConfig& c) {
    nlohmann::ordered_json j;
    j["model"] = model_name(c.model_kind);
    j["beat_length"] = c.beat_length;
    j["latent_dim"] = c.latent_dim;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["lr"] = c.lr;
    j["beta1"] = c.beta1;
    j["beta2"] = c.beta2;
    j["seed"] = c.seed;
    j["snapshot_per_epoch"] = c.snapshot_per_epoch;
    if (c.model_kind == ModelKind::VaeGan) {
        j["lambda_adv"] = c.lambda_adv;
        j["lambda_l1"] = c.lambda_l1;
        j["lambda_kl"] = c.lambda_kl;
    }
    if (c.model_kind == ModelKind::WganFc) {
        j["clip_c"] = c.clip_c;
        j["n_critic"] = c.n_critic;
    }
    j["config_hash"] = c.config_hash();
    return j.dump(2) + "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"ECG heartbeat synthesis and evaluation toolkit"};
    app.require_subcommand(1);

    // --- ingest -------------------------------------------------------
    std::string in_input, in_class, in_normalize = "per-beat", in_out = ".";
    std::size_t in_resample = 256, in_length = 280;
    std::uint64_t in_seed = 0;
    auto* ingest = app.add_subcommand("ingest", "Load, filter, resample and normalize beats");
    ingest->add_option("--input", in_input, "Beat CSV (label,v1,...,vL per line)")->required();
    ingest->add_option("--class", in_class, "Keep only this beat class");
    ingest->add_option("--length", in_length, "Expected input beat length")
        ->capture_default_str();
    ingest->add_option("--resample", in_resample, "Target beat length")
        ->capture_default_str();
    ingest->add_option("--normalize", in_normalize, "off | per-beat | global")
        ->capture_default_str();
    ingest->add_option("--seed", in_seed, "Seed recorded in the manifest")
        ->capture_default_str();
    ingest->add_option("--out", in_out, "Output directory")->capture_default_str();

    // --- train --------------------------------------------------------
    std::string tr_model = "classic", tr_data, tr_out;
    GanConfig tr_cfg;
    bool tr_force = false;
    bool tr_latent_set = false;
    std::size_t tr_csv_length = 256;
    auto* train_cmd = app.add_subcommand("train", "Train a generative model");
    train_cmd->add_option("--model", tr_model, "classic | vaegan | wgan-fc")
        ->capture_default_str();
    train_cmd->add_option("--data", tr_data, "Ingested cache dir, .bin, or beat CSV")
        ->required();
    train_cmd->add_option("--length", tr_csv_length, "Beat length for CSV input")
        ->capture_default_str();
    train_cmd->add_option("--epochs", tr_cfg.epochs)->capture_default_str();
    train_cmd->add_option("--batch", tr_cfg.batch_size)->capture_default_str();
    train_cmd->add_option("--lr", tr_cfg.lr)->capture_default_str();
    train_cmd
        ->add_option_function<std::size_t>(
            "--latent",
            [&](std::size_t v) {
                tr_cfg.latent_dim = v;
                tr_latent_set = true;
            },
            "Latent dimension (default 100; 10 for vaegan)")
        ->default_str("100");
    train_cmd->add_option("--snapshots", tr_cfg.snapshot_per_epoch,
                          "Snapshot beats per epoch")->capture_default_str();
    train_cmd->add_option("--seed", tr_cfg.seed)->capture_default_str();
    train_cmd->add_option("--lambda-adv", tr_cfg.lambda_adv)->capture_default_str();
    train_cmd->add_option("--lambda-l1", tr_cfg.lambda_l1)->capture_default_str();
    train_cmd->add_option("--lambda-kl", tr_cfg.lambda_kl)->capture_default_str();
    train_cmd->add_option("--clip", tr_cfg.clip_c, "wgan-fc weight clip")
        ->capture_default_str();
    train_cmd->add_option("--n-critic", tr_cfg.n_critic, "wgan-fc critic steps per generator step")
        ->capture_default_str();
    train_cmd->add_option("--out", tr_out, "Run directory")->required();
    train_cmd->add_flag("--force", tr_force, "Allow writing into a non-empty run directory");

    // --- generate -----------------------------------------------------
    std::string gn_ckpt, gn_out;
    std::size_t gn_n = 300;
    std::uint64_t gn_seed = 0;
    auto* gen_cmd = app.add_subcommand("generate", "Generate beats from a checkpoint");
    gen_cmd->add_option("--ckpt", gn_ckpt, "Checkpoint file")->required();
    gen_cmd->add_option("--n", gn_n, "Number of beats")->capture_default_str();
    gen_cmd->add_option("--seed", gn_seed)->capture_default_str();
    gen_cmd->add_option("--out", gn_out, "Output beat CSV")->required();

    // --- evaluate -----------------------------------------------------
    int ev_method = 1;
    std::string ev_metric = "dtw", ev_real, ev_gen, ev_template = "random", ev_out = "report";
    std::size_t ev_sample = 300, ev_gen_n = 300, ev_csv_length = 256;
    std::uint64_t ev_seed = 0;
    double ev_threshold = -1.0, ev_threshold_scale = -1.0;
    double ev_calib_s2 = -1.0, ev_calib_s3 = -1.0;
    unsigned ev_threads = 0;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score generated beats (methods 1-4)");
    eval_cmd->add_option("--method", ev_method, "1 | 2 | 3 | 4")->required();
    eval_cmd->add_option("--metric", ev_metric, "dtw | frechet | euclid")
        ->capture_default_str();
    eval_cmd->add_option("--real", ev_real, "Real beats (cache dir, .bin, or CSV)");
    eval_cmd->add_option("--gen", ev_gen, "Generated beats (CSV/.bin) or .ckpt")->required();
    eval_cmd->add_option("--gen-n", ev_gen_n, "Beats to generate when --gen is a checkpoint")
        ->capture_default_str();
    eval_cmd->add_option("--length", ev_csv_length, "Beat length for CSV input")
        ->capture_default_str();
    eval_cmd->add_option("--sample", ev_sample, "Method-1 subset size per side")
        ->capture_default_str();
    eval_cmd->add_option("--seed", ev_seed)->capture_default_str();
    eval_cmd->add_option("--template", ev_template, "random | sab | file:PATH")
        ->capture_default_str();
    eval_cmd->add_option("--threshold", ev_threshold, "Manual method-4 threshold");
    eval_cmd->add_option("--threshold-scale", ev_threshold_scale,
                         "Method-4 threshold = a * s3");
    eval_cmd->add_option("--calib-s2", ev_calib_s2, "External calibration s2");
    eval_cmd->add_option("--calib-s3", ev_calib_s3, "External calibration s3");
    eval_cmd->add_option("--threads", ev_threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    eval_cmd->add_option("--out", ev_out, "Report path prefix")->capture_default_str();

    // --- experiment ---------------------------------------------------
    ExperimentSpec ex_spec;
    std::string ex_data, ex_ckpt, ex_out = "experiment";
    std::size_t ex_csv_length = 256;
    auto* exp_cmd = app.add_subcommand(
        "experiment", "Three-scenario augmentation efficacy experiment");
    exp_cmd->add_option("--data", ex_data, "Two-class beats (cache dir, .bin, or CSV)")
        ->required();
    exp_cmd->add_option("--length", ex_csv_length, "Beat length for CSV input")
        ->capture_default_str();
    exp_cmd->add_option("--majority", ex_spec.majority_class)->capture_default_str();
    exp_cmd->add_option("--minority", ex_spec.minority_class)->capture_default_str();
    exp_cmd->add_option("--minority-count", ex_spec.minority_count_imbalanced)
        ->capture_default_str();
    exp_cmd->add_option("--test-fraction", ex_spec.test_fraction)->capture_default_str();
    exp_cmd->add_option("--gen-ckpt", ex_ckpt, "Minority-class generator checkpoint")
        ->required();
    exp_cmd->add_option("--classifier-hidden", ex_spec.classifier.hidden)
        ->capture_default_str();
    exp_cmd->add_option("--classifier-epochs", ex_spec.classifier.epochs)
        ->capture_default_str();
    exp_cmd->add_option("--classifier-lr", ex_spec.classifier.lr)->capture_default_str();
    exp_cmd->add_option("--seed", ex_spec.seed)->capture_default_str();
    exp_cmd->add_option("--out", ex_out, "Report path prefix")->capture_default_str();

    // --- plot ---------------------------------------------------------
    std::string pl_beats, pl_curve, pl_out = "plot", pl_annotation;
    std::size_t pl_index = 0, pl_csv_length = 256;
    auto* plot_cmd = app.add_subcommand("plot", "Emit SVG + CSV figures");
    plot_cmd->add_option("--beats", pl_beats, "Beat CSV; plots one beat");
    plot_cmd->add_option("--index", pl_index, "Beat row to plot")->capture_default_str();
    plot_cmd->add_option("--length", pl_csv_length, "Beat length for CSV input")
        ->capture_default_str();
    plot_cmd->add_option("--curve", pl_curve, "Epoch-curve CSV emitted by train");
    plot_cmd->add_option("--annotate", pl_annotation, "Annotation text for beat plots");
    plot_cmd->add_option("--out", pl_out, "Output path prefix")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (*ingest) {
        BeatSet set = load_beats(in_input, in_length);
        if (!in_class.empty()) set = filter_class(set, in_class);
        if (set.empty()) throw Error("EmptySet", "no beats left after filtering");
        if (in_resample != in_length) set = resample_set(set, in_resample);
        if (in_normalize == "per-beat") {
            set = normalize_set(set);
        } else if (in_normalize == "global") {
            double lo = set.beats[0][0], hi = lo;
            for (const auto& b : set.beats) {
                for (double v : b) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            if (hi == lo) throw Error("ConstantBeat", "global normalization degenerate");
            for (auto& b : set.beats) {
                for (auto& v : b) v = (v - lo) * 2.0 / (hi - lo) - 1.0;
            }
        } else if (in_normalize != "off") {
            throw Error("BadConfig", "--normalize must be off, per-beat, or global");
        }
        fs::create_directories(in_out);
        const auto cache = (fs::path(in_out) / "beats.bin").string();
        save_cache(set, cache);
        const auto manifest = make_manifest(set, cache, in_seed);
        save_manifest(manifest, (fs::path(in_out) / "manifest.txt").string());
        std::cout << "beats: " << set.count() << "\nlength: " << set.beat_length() << '\n';
        for (const auto& [label, count] : manifest.classes_present) {
            std::cout << "class " << label << ": " << count << '\n';
        }
        return 0;
    }

    if (*train_cmd) {
        tr_cfg.model_kind = model_from_name(tr_model);
        if (tr_cfg.model_kind == ModelKind::VaeGan && !tr_latent_set) {
            tr_cfg.latent_dim = 10;
        }
        const BeatSet data = load_any(tr_data, tr_csv_length);
        tr_cfg.beat_length = data.beat_length();
        ensure_run_dir(tr_out, tr_force);

        const TrainRun run = ecgsyn::train(tr_cfg, data);

        const fs::path out(tr_out);
        write_file((out / "config.json").string(), config_json(tr_cfg));
        {
            std::ostringstream losses;
            losses.precision(17);
            losses << "# seed=" << tr_cfg.seed << " config_hash=" << tr_cfg.config_hash()
                   << "\nepoch,generator_loss,discriminator_loss\n";
            for (std::size_t e = 0; e < run.losses.size(); ++e) {
                losses << (e + 1) << ',' << run.losses[e].first << ','
                       << run.losses[e].second << '\n';
            }
            write_file((out / "losses.csv").string(), losses.str());
        }
        fs::create_directories(out / "snapshots");
        BeatSet pooled;
        pooled.source = Source::Generated;
        for (std::size_t e = 0; e < run.snapshots.size(); ++e) {
            char name[32];
            std::snprintf(name, sizeof(name), "epoch_%02zu.csv", e + 1);
            save_beats(run.snapshots[e], (out / "snapshots" / name).string());
            for (std::size_t i = 0; i < run.snapshots[e].count(); ++i) {
                pooled.push_back(run.snapshots[e].beats[i], run.snapshots[e].labels[i]);
            }
        }
        save_beats(pooled, (out / "snapshots_pooled.csv").string());
        const Template tpl = sab_template(data);
        write_file((out / "curve.csv").string(),
                   epoch_curves(run.snapshots, tpl, run.losses).to_csv());
        save_checkpoint(run.final_checkpoint, (out / "final.ckpt").string());
        std::cout << "trained " << model_name(tr_cfg.model_kind) << " for "
                  << tr_cfg.epochs << " epochs; run directory: " << tr_out << '\n';
        return 0;
    }

    if (*gen_cmd) {
        const Checkpoint ckpt = load_checkpoint(gn_ckpt);
        const BeatSet beats = generate(ckpt, gn_n, gn_seed);
        save_beats(beats, gn_out);
        std::cout << "generated " << beats.count() << " beats -> " << gn_out << '\n';
        return 0;
    }

    if (*eval_cmd) {
        const DistanceKind kind = distance_from_name(ev_metric);

        BeatSet gen;
        if (ev_gen.size() > 5 && ev_gen.substr(ev_gen.size() - 5) == ".ckpt") {
            gen = generate(load_checkpoint(ev_gen), ev_gen_n, ev_seed);
        } else {
            gen = load_any(ev_gen, ev_csv_length);
        }

        EvaluationReport report;
        if (ev_method == 1) {
            if (ev_real.empty()) throw Error("BadConfig", "method 1 needs --real");
            BeatSet real = load_any(ev_real, ev_csv_length);
            if (ev_sample < real.count()) real = sample_subset(real, ev_sample, ev_seed);
            BeatSet gsub = gen;
            if (ev_sample < gsub.count()) gsub = sample_subset(gsub, ev_sample, ev_seed + 1);
            report = method1_score(real, gsub, kind, ev_threads);
            report.seed = ev_seed;
        } else {
            BeatSet reference = gen;
            if (!ev_real.empty()) reference = load_any(ev_real, ev_csv_length);
            const Template tpl =
                resolve_template(ev_template, reference, ev_seed, gen.beat_length());
            if (ev_method == 2) {
                report = method2_score(gen, tpl, kind);
            } else if (ev_method == 3) {
                auto [best, rep] = method3_best(gen, tpl, kind);
                report = rep;
                write_beat_svg(best, ev_out + "_best.svg",
                               distance_name(kind) + " s3=" + std::to_string(rep.score));
                write_beat_csv(best, ev_out + "_best.csv");
            } else if (ev_method == 4) {
                Threshold eta;
                if (ev_threshold >= 0.0) {
                    eta.value = ev_threshold;
                    eta.kind = kind;
                    eta.derivation = Threshold::Derivation::Manual;
                } else {
                    double s2, s3;
                    if (ev_calib_s2 >= 0.0 && ev_calib_s3 >= 0.0) {
                        s2 = ev_calib_s2;
                        s3 = ev_calib_s3;
                    } else {
                        s2 = method2_score(gen, tpl, kind).score;
                        s3 = method3_best(gen, tpl, kind).second.score;
                    }
                    eta = ev_threshold_scale >= 0.0
                              ? scaled_threshold(s3, ev_threshold_scale, kind)
                              : compute_threshold(s2, s3, kind);
                }
                report = method4_productivity(gen, tpl, kind, eta);
            } else {
                throw Error("BadConfig", "--method must be 1, 2, 3, or 4");
            }
            report.seed = ev_seed;
        }
        write_file(ev_out + ".json", report.to_json());
        write_file(ev_out + ".txt", report.to_text());
        std::cout << report.to_text();
        return 0;
    }

    if (*exp_cmd) {
        const BeatSet data = load_any(ex_data, ex_csv_length);
        const BeatSet majority = filter_class(data, ex_spec.majority_class);
        const BeatSet minority = filter_class(data, ex_spec.minority_class);
        const Checkpoint ckpt = load_checkpoint(ex_ckpt);
        const ExperimentResult result = run_experiment(majority, minority, ex_spec, ckpt);
        write_file(ex_out + ".json", result.to_json());
        write_file(ex_out + ".txt", result.to_text());
        std::cout << result.to_text();
        return 0;
    }

    if (*plot_cmd) {
        if (pl_beats.empty() == pl_curve.empty()) {
            throw Error("BadConfig", "plot needs exactly one of --beats or --curve");
        }
        if (!pl_beats.empty()) {
            const BeatSet set = load_any(pl_beats, pl_csv_length);
            if (pl_index >= set.count()) throw Error("BadConfig", "--index out of range");
            write_beat_svg(set.beats[pl_index], pl_out + ".svg", pl_annotation);
            write_beat_csv(set.beats[pl_index], pl_out + ".csv");
        } else {
            std::ifstream in(pl_curve);
            if (!in) throw Error("FileNotFound", pl_curve);
            EpochCurve curve;
            std::string line;
            bool header_seen = false;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                if (!header_seen) { header_seen = true; continue; }
                EpochCurve::Point p;
                if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf,%lf", &p.epoch,
                                &p.s2_dtw, &p.s2_frechet, &p.s2_euclid, &p.generator_loss,
                                &p.discriminator_loss) != 6) {
                    throw Error("MalformedRow", "epoch-curve CSV: " + line);
                }
                curve.points.push_back(p);
            }
            write_epoch_curve_svg(curve, pl_out + ".svg");
            write_epoch_curve_csv(curve, pl_out + ".csv");
        }
        std::cout << "wrote " << pl_out << ".svg and " << pl_out << ".csv\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error[Internal]: " << e.what() << '\n';
        return 1;
    }
}
