import json
import math

import numpy as np
import pytest

from aqcsat.experiment import (
    ComplexityCurve,
    CurveRecord,
    ExperimentConfig,
    ExperimentError,
    clause_count,
    default_f_grid,
    run_classical_baseline,
    run_experiment,
    run_instance,
)
from aqcsat.seeding import child_seed

SMALL = ExperimentConfig(n=6, f_grid=(1.0, 4.0), instances_per_f=3, interpolation_points=6, seed=7)


def test_default_grid():
    grid = default_f_grid()
    assert len(grid) == 32 and grid[0] == 0.25 and grid[-1] == 8.0


def test_clause_count_rounds_half_up():
    assert clause_count(0.25, 8) == 2
    assert clause_count(0.3125, 8) == 3
    assert clause_count(4.25, 8) == 34
    assert clause_count(0.0625, 8) == 1


def test_child_seed_distinct_and_stable():
    seeds = {child_seed(0, fi, k) for fi in range(5) for k in range(50)}
    assert len(seeds) == 250
    assert child_seed(3, 1, 2) == child_seed(3, 1, 2)


def test_config_validation_and_dict():
    with pytest.raises(ValueError):
        ExperimentConfig(instances_per_f=0)
    with pytest.raises(ValueError):
        ExperimentConfig(f_grid=(2.0, 1.0))
    with pytest.raises(ValueError):
        ExperimentConfig(n=8, f_grid=(0.01,))
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"n": 8, "bogus": 1})
    cfg = ExperimentConfig(n=6, f_grid=[1, 2], window=[3, 40])
    back = ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert back == cfg
    assert cfg.digest() == ExperimentConfig(n=6, f_grid=(1, 2), window=(3, 40), jobs=4).digest()
    assert cfg.digest() != ExperimentConfig(n=6, f_grid=(1, 2), seed=1).digest()


def test_quick_config():
    q = ExperimentConfig().quick()
    assert q.instances_per_f == 20 and q.interpolation_points == 25 and q.n == 8


def test_run_instance_deterministic_and_reproducible_from_provenance():
    cfg = ExperimentConfig(n=6, interpolation_points=8)
    a = run_instance(6, 20, 123, cfg)
    b = run_instance(a.n, a.m, a.seed, cfg)
    assert a.to_json() == b.to_json()
    assert a.ok and len(a.q_of_s) == 8
    assert a.config_hash == cfg.digest()


def test_toy_instance_is_flagged():
    # 8 levels are too few to unfold, so every point is insufficient
    rec = run_instance(3, 4, 1, ExperimentConfig(n=3, f_grid=(1.0,), interpolation_points=4))
    assert rec.ok and rec.flagged and rec.q_max == 0.0
    assert set(rec.flag_of_s) == {"insufficient"}


def test_singleton_curve_equals_instance():
    cfg = ExperimentConfig(n=6, f_grid=(3.0,), instances_per_f=1, interpolation_points=6, seed=2)
    curve = run_experiment(cfg)
    rec = run_instance(6, 18, child_seed(2, 0, 0), cfg)
    assert len(curve) == 1
    assert curve.records[0].mean_q_max == rec.q_max
    assert curve.records[0].stderr_q_max == 0.0
    assert curve.records[0].median_dpll == rec.dpll_decisions


def test_jobs_do_not_change_results(tmp_path):
    a = run_experiment(SMALL, archive=tmp_path / "a.jsonl")
    b = run_experiment(SMALL.__class__(**{**SMALL.to_dict(), "jobs": 2}), archive=tmp_path / "b.jsonl")
    assert a == b
    assert (tmp_path / "a.jsonl").read_text() == (tmp_path / "b.jsonl").read_text()


def test_archive_provenance(tmp_path):
    run_experiment(SMALL, archive=tmp_path / "a.jsonl")
    lines = [json.loads(line) for line in (tmp_path / "a.jsonl").read_text().splitlines()]
    assert len(lines) == 6
    assert [(r["f_index"], r["instance_index"]) for r in lines] == [(i, k) for i in range(2) for k in range(3)]
    for r in lines:
        assert r["seed"] == child_seed(7, r["f_index"], r["instance_index"])
        assert r["config_hash"] == SMALL.digest()
        again = run_instance(r["n"], r["m"], r["seed"], SMALL, r["f_index"], r["instance_index"])
        assert json.loads(again.to_json()) == r


def test_curve_fields():
    curve = run_experiment(SMALL)
    assert [r.m for r in curve.records] == [6, 24]
    assert [r.f for r in curve.records] == [1.0, 4.0]
    for r in curve.records:
        assert r.count == 3 and 0 <= r.sat_fraction <= 1
        assert np.isfinite(r.mean_q_max)


def test_exclude_invalid_counts():
    cfg = ExperimentConfig(n=3, f_grid=(1.0,), instances_per_f=2, interpolation_points=3, include_invalid=False)
    curve = run_experiment(cfg)
    assert curve.records[0].count == 0 and math.isnan(curve.records[0].mean_q_max)


def test_all_failures_raise(monkeypatch):
    import aqcsat.experiment as ex

    def boom(*args, **kwargs):
        raise ArithmeticError("no convergence")

    monkeypatch.setattr(ex, "sweep", boom)
    with pytest.raises(ExperimentError):
        run_experiment(SMALL)


def test_failed_instances_are_skipped(monkeypatch):
    import aqcsat.experiment as ex

    real = ex.sweep
    calls = []

    def flaky(*args, **kwargs):
        calls.append(1)
        if len(calls) == 2:
            raise ArithmeticError("no convergence")
        return real(*args, **kwargs)

    monkeypatch.setattr(ex, "sweep", flaky)
    curve = run_experiment(SMALL)
    assert [r.count for r in curve.records] == [2, 3]


def test_csv_round_trip():
    curve = ComplexityCurve((CurveRecord(0.25, 2, 0.1 / 3, 0.01, 1.0, 1.0, 200),
                             CurveRecord(4.25, 34, 1.0 + 1e-15, float("nan"), 7.5, 0.45, 199)))
    text = curve.to_csv()
    assert text.splitlines()[0] == "f,m,mean_q_max,stderr_q_max,median_dpll,sat_fraction,count"
    back = ComplexityCurve.from_csv(text)
    assert back.to_csv() == text
    assert back.records[0] == curve.records[0]
    with pytest.raises(ValueError):
        ComplexityCurve.from_csv("a,b\n1,2\n")


def test_baseline_small():
    records = run_classical_baseline([8], [1.0, 6.0], instances=20, seed=1)
    assert [r.m for r in records] == [8, 48]
    assert records[0].sat_fraction == 1.0
    assert records[1].sat_fraction < records[0].sat_fraction
    assert records == run_classical_baseline([8], [1.0, 6.0], instances=20, seed=1)


@pytest.mark.slow
def test_n8_cost_profile_is_smooth():
    grid = [1 + 0.25 * k for k in range(29)]
    records = run_classical_baseline([8], grid, instances=200, seed=0)
    med = np.array([r.median_dpll_decisions for r in records])
    # small n blurs the transition: a finite rise, with the first maximum in a wide window
    ratio = med.max() / med.min()
    assert np.isfinite(ratio) and ratio > 1
    assert 2.5 <= grid[int(np.argmax(med))] <= 6.5
