import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from aqcsat.hamiltonian import build_system
from aqcsat.sat import generate_instance
from aqcsat.spectrum import (
    ConvergenceError,
    Spectrum,
    SweepResult,
    eigenvalues_symmetric,
    interpolation_grid,
    sweep,
    tridiagonal_eigenvalues,
    tridiagonalize,
)

from oracles import bisection_eigenvalues, subset_sums

METHODS = ["lapack", "ql"]


@pytest.mark.parametrize("method", METHODS)
def test_two_by_two(method):
    assert np.allclose(eigenvalues_symmetric([[2, 1], [1, 2]], method), [1, 3])


@pytest.mark.parametrize("method", METHODS)
def test_diagonal(method):
    v = np.array([3.0, -1.0, 7.5, 0.0, 2.0])
    assert np.array_equal(eigenvalues_symmetric(np.diag(v), method), np.sort(v))


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("seed", range(3))
def test_random_6x6_against_sturm_bisection(method, seed):
    a = np.random.default_rng(seed).normal(size=(6, 6))
    a = a + a.T
    assert np.allclose(eigenvalues_symmetric(a, method), bisection_eigenvalues(a), atol=1e-8, rtol=0)


TINY = 2.12049444e-259


@settings(max_examples=30, deadline=None)
# entries near the underflow threshold, once stalling QL and once losing accuracy
@example(np.where(np.eye(4, k=1, dtype=bool) & (np.arange(4) == 0)[:, None], 1.0, TINY))
@example(np.full((3, 3), TINY))
@example(np.full((3, 3), 1e300))
@example(np.where(np.eye(6, dtype=bool) & (np.arange(6) == 1), 805.0, 4.704548551476707e-156))
@given(arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 12)),
              elements=st.floats(-100, 100, allow_nan=False)).filter(lambda x: x.shape[0] == x.shape[1]))
def test_ql_residual_contract(a):
    a = 0.5 * (a + a.T)
    ev = eigenvalues_symmetric(a, "ql")
    assert np.all(np.diff(ev) >= 0)
    scale = a.shape[0] * max(np.max(np.abs(a)), 1e-300)
    # residual of the best unit vector for lambda is the distance to the true spectrum
    reference = np.linalg.eigvalsh(a)
    assert np.max(np.abs(ev - reference)) <= 1e-8 * scale


def test_tridiagonalize_preserves_spectrum():
    a = np.random.default_rng(5).normal(size=(20, 20))
    a = a + a.T
    d, e = tridiagonalize(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(a))


def test_ql_iteration_cap():
    d = np.linspace(0, 1, 30)
    e = np.full(29, 0.5)
    with pytest.raises(ConvergenceError) as exc:
        tridiagonal_eigenvalues(d, e, max_iterations=0)
    assert exc.value.index == 0


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        eigenvalues_symmetric([[1.0, np.nan], [np.nan, 1.0]])
    with pytest.raises(ValueError):
        eigenvalues_symmetric(np.zeros((2, 3)))


def test_grid():
    grid = interpolation_grid(100)
    assert grid[0] == 0 and grid[-1] == 1 and len(grid) == 100
    assert grid[1] == pytest.approx(1 / 99)
    assert np.all(np.diff(grid) > 0)
    with pytest.raises(ValueError):
        interpolation_grid(1)


@pytest.fixture(scope="module")
def n8_sweep():
    system = build_system(generate_instance(8, 16, 77))
    return system, sweep(system, 100)


def test_sweep_endpoints(n8_sweep):
    system, result = n8_sweep
    assert np.allclose(result.spectra[-1].eigenvalues, np.sort(system.hp_diag))
    assert np.allclose(result.spectra[0].eigenvalues, subset_sums(system.hb_weights), atol=1e-9)
    assert np.array_equal(result.s_grid, interpolation_grid(100))


def test_sweep_driver_endpoint_n10():
    system = build_system(generate_instance(10, 20, 3))
    result = sweep(system, 2)
    assert np.allclose(result.spectra[0].eigenvalues, subset_sums(system.hb_weights), atol=1e-8)


def test_sweep_ql_matches_lapack():
    system = build_system(generate_instance(5, 12, 8))
    a, b = sweep(system, 5), sweep(system, 5, method="ql")
    assert np.allclose(a.levels(), b.levels(), atol=1e-10)


def test_trace_and_continuity(n8_sweep):
    system, result = n8_sweep
    levels = result.levels()
    assert np.all(np.isfinite(levels))
    assert np.all(np.diff(levels, axis=1) >= 0)
    for sp in result.spectra:
        tol = 1e-9 * system.dim * np.max(np.abs(sp.eigenvalues))
        assert abs(sp.eigenvalues.sum() - system.trace(sp.s)) <= tol
    bound = np.linalg.norm(np.diag(system.hp_diag) - system.driver) * (1 / 99) + 1e-6
    assert np.max(np.abs(np.diff(levels, axis=0))) <= bound


def test_trace_identity_20_instances():
    for seed in range(20):
        system = build_system(generate_instance(8, 16, 1000 + seed))
        for sp in sweep(system, 20).spectra:
            assert sp.eigenvalues.sum() == pytest.approx(system.trace(sp.s), rel=1e-9)


def test_sweep_json_round_trip(n8_sweep):
    _, result = n8_sweep
    data = result.to_dict()
    assert set(data) == {"n", "m", "f", "seed", "s_grid", "spectra"}
    assert data["n"] == 8 and data["m"] == 16 and data["f"] == 2.0 and data["seed"] == 77
    back = SweepResult.from_json(result.to_json())
    assert np.array_equal(back.levels(), result.levels())
    assert np.array_equal(back.s_grid, result.s_grid)


def test_spectrum_len():
    assert len(Spectrum(0.5, np.arange(4.0))) == 4
