"""Smoke tests for the python bindings.

Runs against an installed `ecgsyn` package, or against a bare `_core`
module on PYTHONPATH (the ctest setup points at the build tree).
"""

import math

import pytest

try:
    import ecgsyn as m
except ImportError:
    import _core as m


def make_set(n, length, offset=0.0):
    s = m.BeatSet()
    for i in range(n):
        beat = [math.sin(2 * math.pi * (j + i + offset) / length) for j in range(length)]
        s.push_back(beat, "N")
    return s


def test_distances():
    assert m.euclidean([1.0, 2.0], [4.0, 6.0]) == pytest.approx(5.0)
    assert m.dtw([1.0, 3.0, 4.0], [1.0, 2.0, 2.0, 4.0]) == pytest.approx(2.0)
    assert m.dtw([0.0, 0.0], [2.0, 2.0], squared=True) == pytest.approx(8.0)
    assert m.frechet([1.0, 3.0, 4.0], [1.0, 2.0, 2.0, 4.0]) == pytest.approx(1.0)
    with pytest.raises(m.EcgsynError):
        m.euclidean([1.0], [1.0, 2.0])


def test_cross_mean_thread_invariance():
    a, b = make_set(8, 24), make_set(6, 24, offset=0.5)
    serial = m.cross_mean_distance(a, b, m.DistanceKind.DTW, 1)
    assert m.cross_mean_distance(a, b, m.DistanceKind.DTW, 4) == serial


def test_dataset_ops():
    s = make_set(10, 32)
    assert len(s) == 10 and s.beat_length() == 32
    down = m.resample_beat([1.0] * 280, 256)
    assert len(down) == 256
    assert max(abs(v - 1.0) for v in down) < 1e-9
    norm, const = m.normalize_beat([0.0, 1.0, 2.0])
    assert norm == [-1.0, 0.0, 1.0] and not const
    _, const = m.normalize_beat([3.0, 3.0])
    assert const
    train, test = m.split(s, 0.2, seed=1)
    assert len(train) == 8 and len(test) == 2


def test_evaluation_pipeline():
    s = make_set(12, 32)
    tpl = m.sab_template(s)
    s2 = m.method2_score(s, tpl, m.DistanceKind.DTW).score
    _, best = m.method3_best(s, tpl, m.DistanceKind.DTW)
    eta = m.compute_threshold(s2, best.score, m.DistanceKind.DTW)
    assert best.score <= eta.value <= s2
    prod = m.method4_productivity(s, tpl, m.DistanceKind.DTW, eta)
    assert 0.0 < prod.score <= 100.0
    assert '"method": 4' in prod.to_json()


def test_train_generate_roundtrip(tmp_path):
    cfg = m.GanConfig()
    cfg.model_kind = m.ModelKind.CLASSIC
    cfg.beat_length = 24
    cfg.epochs = 1
    cfg.batch_size = 9
    cfg.seed = 3
    cfg.snapshot_per_epoch = 2
    data = make_set(20, 24)
    run = m.train(cfg, data)
    assert len(run.losses) == 1
    gen = m.generate(run.final_checkpoint, 5, 7)
    assert len(gen) == 5
    assert all(-1.0 <= v <= 1.0 for beat in gen.beats for v in beat)

    path = str(tmp_path / "model.ckpt")
    m.save_checkpoint(run.final_checkpoint, path)
    back = m.load_checkpoint(path)
    assert m.generate(back, 5, 7).beats == gen.beats


def test_experiment():
    maj = make_set(60, 24)
    minority = make_set(60, 24, offset=12.0)
    for i in range(60):
        minority.beats[i] = [-v for v in minority.beats[i]]

    cfg = m.GanConfig()
    cfg.beat_length = 24
    cfg.epochs = 1
    cfg.seed = 1
    cfg.snapshot_per_epoch = 1
    run = m.train(cfg, minority)

    spec = m.ExperimentSpec()
    spec.minority_count_imbalanced = 10
    spec.classifier.epochs = 2
    spec.seed = 2
    result = m.run_experiment(maj, minority, spec, run.final_checkpoint)
    assert len(result.reports) == 3
    assert result.delta_macro_f1_iii_ii == pytest.approx(
        result.reports[2].macro_f1 - result.reports[1].macro_f1
    )
