import csv

import numpy as np
import pytest

from cohcert import (
    OptimizationConfig,
    PureState,
    drifted_projection,
    maximize_rn_over_ck,
    measurement_deviation,
    sample_gue,
    sweep_summary,
    tolerance_sweep,
    w_state,
    write_sweep_csv,
)
from conftest import rand_pure


def test_sample_gue_deterministic():
    a = sample_gue(4, 123)
    b = sample_gue(4, 123)
    assert np.array_equal(a.matrix, b.matrix)
    assert a.seed == 123
    c = sample_gue(4, 124)
    assert not np.array_equal(a.matrix, c.matrix)


def test_sample_gue_hermitian():
    for seed in range(5):
        h = sample_gue(6, seed).matrix
        assert np.abs(h - h.conj().T).max() < 1e-12
    with pytest.raises(ValueError):
        sample_gue(1, 0)


def test_gue_ensemble_mean_zero():
    d, n = 3, 2000
    acc = np.zeros((d, d), dtype=complex)
    for seed in range(n):
        acc += sample_gue(d, seed).matrix
    mean = acc / n
    # entry std is <= 1, so the mean of 2000 draws stays within ~4 sigma
    assert np.abs(mean).max() < 4 / np.sqrt(n)


def test_gue_spectrum_semicircular_support():
    d, extremes = 16, []
    for seed in range(200):
        evals = np.linalg.eigvalsh(sample_gue(d, seed).matrix)
        extremes.append(np.abs(evals).max())
    extremes = np.array(extremes)
    # coarse check of the variance convention: edge near 2 sqrt(d)
    assert extremes.max() < 2.6 * np.sqrt(d)
    assert extremes.mean() > 1.5 * np.sqrt(d)


def test_drifted_projection_identity_at_zero():
    rng = np.random.default_rng(1)
    psi = rand_pure(rng, 4)
    h = sample_gue(4, 7)
    out = drifted_projection(psi, h, 0.0)
    assert np.allclose(out.amplitudes, psi.amplitudes, atol=1e-14)


def test_drifted_projection_unitary_and_reversible():
    rng = np.random.default_rng(2)
    psi = rand_pure(rng, 5)
    h = sample_gue(5, 8)
    for tau in (0.1, 0.9, 4.0):
        out = drifted_projection(psi, h, tau)
        assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-12
        back = drifted_projection(out, h, -tau)
        assert np.abs(back.amplitudes - psi.amplitudes).max() < 1e-10


def test_measurement_deviation():
    psi = w_state(2)
    assert measurement_deviation(psi, psi) == 0.0
    e0 = PureState([1.0, 0.0])
    e1 = PureState([0.0, 1.0])
    assert measurement_deviation(e0, e1) == pytest.approx(2.0)
    theta = 0.7
    rotated = PureState(np.exp(1j * theta) * psi.amplitudes)
    assert measurement_deviation(rotated, psi) == pytest.approx(2 - 2 * np.cos(theta))
    with pytest.raises(ValueError):
        measurement_deviation(w_state(2), w_state(3))


def test_tolerance_sweep_reproducible():
    a = tolerance_sweep(3, 10, seed=5)
    b = tolerance_sweep(3, 10, seed=5)
    assert a.records == b.records
    assert a.crossings == b.crossings
    c = tolerance_sweep(3, 10, seed=6)
    assert c.records != a.records


def test_tolerance_sweep_zero_drift_anchor():
    sweep = tolerance_sweep(4, 8, seed=1)
    zero_recs = [r for r in sweep.records if r.tau == 0.0]
    assert len(zero_recs) == 8
    for r in zero_recs:
        assert r.deviation == 0.0
        assert r.r3 == sweep.drift_free_r3
    assert sweep.drift_free_r3 == pytest.approx(2.3211, abs=1e-3)


def test_tolerance_sweep_never_exceeds_class_maximum():
    sweep = tolerance_sweep(3, 30, seed=2)
    cap = maximize_rn_over_ck(3, 3, OptimizationConfig(restarts=6)).value
    assert max(r.r3 for r in sweep.records) <= cap + 1e-9


def test_small_drift_keeps_certifying_k3():
    # 3-coherence has a wide tolerance region: at small deviations the
    # ensemble mean stays above the 5/4 threshold
    sweep = tolerance_sweep(3, 50, seed=4)
    small = [m for m, c in zip(sweep.bin_mean[:3], sweep.bin_count[:3]) if c > 0]
    assert small and all(m > 1.25 for m in small)


def test_tolerance_sweep_validation():
    with pytest.raises(ValueError):
        tolerance_sweep(5, 10)
    with pytest.raises(ValueError):
        tolerance_sweep(3, 0)


def test_sweep_csv_and_summary(tmp_path):
    sweep = tolerance_sweep(3, 5, seed=9)
    path = tmp_path / "sweep.csv"
    write_sweep_csv(sweep, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["seed", "tau", "D", "r3"]
    assert len(rows) - 1 == len(sweep.records)
    summary = sweep_summary(sweep)
    assert summary["n_samples"] == 5
    assert summary["threshold"] == pytest.approx(5 / 4)
    assert summary["drift_free_r3"] == pytest.approx(1.7731, abs=1e-3)
    assert len(summary["bin_mean"]) == len(summary["bin_edges"]) - 1
