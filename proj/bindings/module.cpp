// Python bindings for the core operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecgsyn/augmentation.hpp"
#include "ecgsyn/dataset.hpp"
#include "ecgsyn/evaluation.hpp"
#include "ecgsyn/metrics.hpp"
#include "ecgsyn/models.hpp"
#include "ecgsyn/templates.hpp"

namespace py = pybind11;
using namespace ecgsyn;

PYBIND11_MODULE(_core, m) {
    m.doc() = "ECG heartbeat synthesis and evaluation toolkit";

    py::register_exception<Error>(m, "EcgsynError");

    py::enum_<Source>(m, "Source")
        .value("REAL", Source::Real)
        .value("GENERATED", Source::Generated)
        .value("AUGMENTED", Source::Augmented);

    py::class_<BeatSet>(m, "BeatSet")
        .def(py::init<>())
        .def_readwrite("beats", &BeatSet::beats)
        .def_readwrite("labels", &BeatSet::labels)
        .def_readwrite("source", &BeatSet::source)
        .def("count", &BeatSet::count)
        .def("beat_length", &BeatSet::beat_length)
        .def("class_label", &BeatSet::class_label)
        .def("push_back", &BeatSet::push_back)
        .def("__len__", &BeatSet::count);

    m.def("load_beats", &load_beats, py::arg("path"), py::arg("expected_length"));
    m.def("save_beats", &save_beats, py::arg("set"), py::arg("path"));
    m.def("filter_class", &filter_class);
    m.def("resample_beat", &resample_beat, py::arg("beat"), py::arg("target_length"));
    m.def(
        "normalize_beat",
        [](const Beat& beat) {
            bool constant = false;
            Beat out = normalize_beat(beat, &constant);
            return py::make_tuple(out, constant);
        },
        py::arg("beat"), "Returns (normalized_beat, was_constant)");
    m.def("sample_subset", &sample_subset, py::arg("set"), py::arg("n"), py::arg("seed"));
    m.def("split", &split, py::arg("set"), py::arg("test_fraction"), py::arg("seed"));

    py::enum_<DistanceKind>(m, "DistanceKind")
        .value("DTW", DistanceKind::Dtw)
        .value("FRECHET", DistanceKind::Frechet)
        .value("EUCLIDEAN", DistanceKind::Euclidean);

    py::class_<DtwOptions>(m, "DtwOptions").def(py::init<>());

    m.def("euclidean", &euclidean);
    m.def(
        "dtw",
        [](const Beat& x, const Beat& y, bool squared, std::optional<int> band) {
            DtwOptions opts;
            opts.local_cost = squared ? DtwOptions::LocalCost::SquaredDifference
                                      : DtwOptions::LocalCost::AbsoluteDifference;
            opts.band_radius = band;
            return dtw(x, y, opts);
        },
        py::arg("x"), py::arg("y"), py::arg("squared") = false,
        py::arg("band_radius") = std::nullopt);
    m.def("frechet", &frechet);
    m.def("cross_mean_distance", &cross_mean_distance, py::arg("a"), py::arg("b"),
          py::arg("kind"), py::arg("threads") = 0, py::arg("opts") = DtwOptions{});

    py::class_<Template>(m, "Template")
        .def_readwrite("beat", &Template::beat)
        .def_readonly("index", &Template::index)
        .def("origin_name", &Template::origin_name);
    m.def("sab_template", &sab_template);
    m.def("random_template", &random_template, py::arg("set"), py::arg("seed"));
    m.def("load_template", &load_template, py::arg("path"), py::arg("expected_length"));
    m.def("save_template", &save_template);

    py::class_<Threshold>(m, "Threshold")
        .def(py::init<>())
        .def_readwrite("value", &Threshold::value)
        .def_readwrite("kind", &Threshold::kind)
        .def("derivation_name", &Threshold::derivation_name);

    py::class_<EvaluationReport>(m, "EvaluationReport")
        .def_readonly("method", &EvaluationReport::method)
        .def_readonly("score", &EvaluationReport::score)
        .def_readonly("n_real", &EvaluationReport::n_real)
        .def_readonly("n_gen", &EvaluationReport::n_gen)
        .def_readonly("acceptable_indices", &EvaluationReport::acceptable_indices)
        .def_property_readonly("acceptable_count",
                               [](const EvaluationReport& r) {
                                   return r.acceptable_count.value_or(0);
                               })
        .def("to_json", &EvaluationReport::to_json)
        .def("to_text", &EvaluationReport::to_text);

    m.def("method1_score", &method1_score, py::arg("real_subset"), py::arg("gen_subset"),
          py::arg("kind"), py::arg("threads") = 0);
    m.def("method2_score", &method2_score);
    m.def("method3_best", &method3_best);
    m.def("compute_threshold", &compute_threshold);
    m.def("scaled_threshold", &scaled_threshold);
    m.def("method4_productivity", &method4_productivity);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("CLASSIC", ModelKind::Classic)
        .value("VAEGAN", ModelKind::VaeGan)
        .value("WGAN_FC", ModelKind::WganFc);

    py::class_<GanConfig>(m, "GanConfig")
        .def(py::init<>())
        .def_readwrite("model_kind", &GanConfig::model_kind)
        .def_readwrite("beat_length", &GanConfig::beat_length)
        .def_readwrite("latent_dim", &GanConfig::latent_dim)
        .def_readwrite("epochs", &GanConfig::epochs)
        .def_readwrite("batch_size", &GanConfig::batch_size)
        .def_readwrite("lr", &GanConfig::lr)
        .def_readwrite("beta1", &GanConfig::beta1)
        .def_readwrite("beta2", &GanConfig::beta2)
        .def_readwrite("seed", &GanConfig::seed)
        .def_readwrite("snapshot_per_epoch", &GanConfig::snapshot_per_epoch)
        .def_readwrite("lambda_adv", &GanConfig::lambda_adv)
        .def_readwrite("lambda_l1", &GanConfig::lambda_l1)
        .def_readwrite("lambda_kl", &GanConfig::lambda_kl)
        .def_readwrite("clip_c", &GanConfig::clip_c)
        .def_readwrite("n_critic", &GanConfig::n_critic);

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("epoch", &Checkpoint::epoch)
        .def_readonly("model_kind", &Checkpoint::model_kind);

    py::class_<TrainRun>(m, "TrainRun")
        .def_readonly("losses", &TrainRun::losses)
        .def_readonly("snapshots", &TrainRun::snapshots)
        .def_readonly("final_checkpoint", &TrainRun::final_checkpoint);

    m.def("train", &train, py::arg("config"), py::arg("dataset"),
          py::call_guard<py::gil_scoped_release>());
    m.def("generate", &generate, py::arg("checkpoint"), py::arg("n"), py::arg("seed"));
    m.def("save_checkpoint", &save_checkpoint);
    m.def("load_checkpoint", &load_checkpoint);

    py::class_<ClassifierConfig>(m, "ClassifierConfig")
        .def(py::init<>())
        .def_readwrite("hidden", &ClassifierConfig::hidden)
        .def_readwrite("epochs", &ClassifierConfig::epochs)
        .def_readwrite("batch_size", &ClassifierConfig::batch_size)
        .def_readwrite("lr", &ClassifierConfig::lr);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("majority_class", &ExperimentSpec::majority_class)
        .def_readwrite("minority_class", &ExperimentSpec::minority_class)
        .def_readwrite("minority_count_imbalanced",
                       &ExperimentSpec::minority_count_imbalanced)
        .def_readwrite("test_fraction", &ExperimentSpec::test_fraction)
        .def_readwrite("classifier", &ExperimentSpec::classifier)
        .def_readwrite("seed", &ExperimentSpec::seed);

    py::class_<ClassificationReport>(m, "ClassificationReport")
        .def_readonly("accuracy", &ClassificationReport::accuracy)
        .def_readonly("macro_f1", &ClassificationReport::macro_f1)
        .def_readonly("weighted_f1", &ClassificationReport::weighted_f1)
        .def("to_text", &ClassificationReport::to_text);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("reports", &ExperimentResult::reports)
        .def_readonly("delta_macro_f1_iii_ii", &ExperimentResult::delta_macro_f1_iii_ii)
        .def("to_json", &ExperimentResult::to_json)
        .def("to_text", &ExperimentResult::to_text);

    m.def("run_experiment", &run_experiment, py::arg("majority"), py::arg("minority"),
          py::arg("spec"), py::arg("generator"),
          py::call_guard<py::gil_scoped_release>());
}
