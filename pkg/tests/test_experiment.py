"""Perturbation families and the sweep runner."""

import numpy as np
import pytest

from sparsecert import build_cyclic, generate_instance, verify_theorem1
from sparsecert.constants import build_certificate
from sparsecert.experiment import (
    PERTURBATION_FAMILIES,
    perturb_instance,
    run_experiment,
    summarize,
)


@pytest.fixture(scope="module")
def instance():
    h = build_cyclic(4, 2)
    mat, codes = generate_instance(4, 4, 2, h, 7, seed=21)
    cert = build_certificate(mat, codes, h)
    return h, mat, codes, cert


@pytest.mark.parametrize("family", PERTURBATION_FAMILIES)
def test_realized_residual_matches_target(instance, family):
    _, mat, codes, cert = instance
    rng = np.random.default_rng(5)
    target = cert.eps_max_dictionary / 2
    cand, codes_bar = perturb_instance(mat, codes, family, target, rng)
    residuals = np.linalg.norm(mat @ codes.codes - cand @ codes_bar.codes, axis=0)
    assert float(np.max(residuals)) == pytest.approx(target, rel=1e-9)
    assert codes_bar.k == codes.k


def test_zero_perturbation_returns_exact_instance(instance):
    _, mat, codes, cert = instance
    rng = np.random.default_rng(6)
    cand, codes_bar = perturb_instance(mat, codes, "dict_jitter", 0.0, rng)
    report = verify_theorem1(mat, codes, cand, codes_bar, cert, 0.0)
    assert report.max_column_error == 0.0
    assert report.eq5_ok
    assert report.code_tier_active
    assert float(np.max(report.code_errors)) == 0.0


def test_run_experiment_passes_and_sorted():
    cfg = dict(m=4, n=4, k=2, hypergraph="cyclic", per_support_count=7,
               noise_grid=[1e-4, 1e-3], trials=6, family="dict_jitter", seed=0)
    records, summary = run_experiment(cfg)
    assert summary["records"] == len(records) > 0
    assert summary["pass5_rate"] == 1.0
    assert summary["pass6_rate"] in (None, 1.0)
    keys = [(r.seed, r.eps) for r in records]
    assert keys == sorted(keys)
    assert np.isfinite(summary["error_vs_eps_slope"])
    # each record carries its constant as bound5/eps; the regression slope
    # of achieved error against eps stays below it
    c1_values = [r.bound5 / r.eps for r in records]
    assert summary["error_vs_eps_slope"] <= max(c1_values)


def test_run_experiment_rejects_oversize():
    cfg = dict(m=40, n=40, k=2, hypergraph="cyclic", per_support_count=7,
               noise_grid=[1e-3], trials=1, family="dict_jitter", seed=0)
    with pytest.raises(ValueError):
        run_experiment(cfg)


def test_summarize_empty():
    summary = summarize([])
    assert summary["records"] == 0
    assert summary["error_vs_eps_slope"] is None
