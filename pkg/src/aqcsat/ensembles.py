"""Gaussian random-matrix ensembles and one-parameter Gaussian processes.

A Gaussian process here is the family ``H(x) = cos(x) H1 + sin(x) H2`` with
H1, H2 independent draws from the same Gaussian ensemble. Its second moment is

    E[H_ij(x) H_kl(x')] = omega**2 / (2 beta) * cos(x - x') * g_ijkl

with ``g = d_ik d_jl + d_il d_jk`` for the orthogonal ensemble (beta = 1)
and ``g = 2 d_il d_jk`` for the unitary one (beta = 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .brody import BrodyFit, fit_brody
from .seeding import child_seed
from .spectrum import SweepResult, eigenvalues_symmetric
from .unfolding import InsufficientDataError, SpacingSample, unfold

__all__ = [
    "RmtEnsembleConfig",
    "GpFamily",
    "sample_goe",
    "sample_gue",
    "sample_ensemble",
    "sample_gp_family",
    "gp_moment",
    "velocity_rescaling",
    "mean_squared_velocity",
    "goe_pipeline_check",
    "poisson_pipeline_check",
    "covariance_check",
    "gp_validate",
]


@dataclass(frozen=True)
class RmtEnsembleConfig:
    beta_class: int = 1
    dim: int = 64
    omega: float = 1.0
    samples: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.beta_class not in (1, 2):
            raise ValueError("beta_class must be 1 (GOE) or 2 (GUE)")
        if self.dim < 2 or self.samples < 1:
            raise ValueError("need dim >= 2 and samples >= 1")


def _goe(rng, shape, dim, omega):
    x = rng.normal(scale=omega, size=(*shape, dim, dim))
    return 0.5 * (x + np.swapaxes(x, -1, -2))


def _gue(rng, shape, dim, omega):
    sd = omega / math.sqrt(2.0)
    x = rng.normal(scale=sd, size=(*shape, dim, dim)) + 1j * rng.normal(scale=sd, size=(*shape, dim, dim))
    return 0.5 * (x + np.conj(np.swapaxes(x, -1, -2)))


def sample_goe(dim: int, omega: float = 1.0, seed=None, size=None) -> np.ndarray:
    """Real symmetric matrix with Var H_ij = omega^2/2 off the diagonal, omega^2 on it.

    ``size`` prepends batch dimensions.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    shape = () if size is None else tuple(np.atleast_1d(size))
    return _goe(np.random.default_rng(seed), shape, dim, omega)


def sample_gue(dim: int, omega: float = 1.0, seed=None, size=None) -> np.ndarray:
    """Complex Hermitian matrix with E|H_ij|^2 = omega^2/2 for every entry."""
    if dim < 2:
        raise ValueError("dim must be at least 2")
    shape = () if size is None else tuple(np.atleast_1d(size))
    return _gue(np.random.default_rng(seed), shape, dim, omega)


def sample_ensemble(config: RmtEnsembleConfig) -> np.ndarray:
    """``config.samples`` matrices stacked along the first axis."""
    draw = _goe if config.beta_class == 1 else _gue
    return draw(np.random.default_rng(config.seed), (config.samples,), config.dim, config.omega)


@dataclass(frozen=True, eq=False)
class GpFamily:
    """Matrices ``H(x)`` on an increasing grid, with their declared correlation f."""

    x_grid: np.ndarray
    matrices: np.ndarray
    beta_class: int = 1
    correlation: Callable = np.cos
    components: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        x = np.asarray(self.x_grid, dtype=float)
        if x.ndim != 1 or np.any(np.diff(x) <= 0):
            raise ValueError("x_grid must be strictly increasing")
        if len(self.matrices) != x.size:
            raise ValueError("need one matrix per grid point")
        object.__setattr__(self, "x_grid", x)

    @classmethod
    def constant(cls, matrix, x_grid, beta_class: int = 1) -> "GpFamily":
        x = np.asarray(x_grid, dtype=float)
        return cls(x, np.broadcast_to(matrix, (x.size, *np.shape(matrix))), beta_class,
                   lambda d: np.ones_like(d, dtype=float))

    def at(self, x: float) -> np.ndarray:
        """H(x) for any x, from the two generating matrices."""
        if self.components is None:
            raise ValueError("family was not built from generating matrices")
        h1, h2 = self.components
        x = math.remainder(x, 2.0 * math.pi)
        return math.cos(x) * h1 + math.sin(x) * h2

    def with_grid(self, x_grid) -> "GpFamily":
        """Same matrices relabelled on a new grid (e.g. after rescaling)."""
        return GpFamily(np.asarray(x_grid, dtype=float), self.matrices, self.beta_class,
                        self.correlation, self.components)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return eigenvalues_symmetric(self.matrices) if self.beta_class == 1 else \
            np.linalg.eigvalsh(self.matrices)


def sample_gp_family(config: RmtEnsembleConfig, x_grid) -> GpFamily:
    """One realisation of the trigonometric Gaussian process on ``x_grid``."""
    x = np.asarray(x_grid, dtype=float)
    if x.size and x[-1] - x[0] > 2.0 * math.pi:
        raise ValueError("grid must lie within one period 2*pi")
    draw = _goe if config.beta_class == 1 else _gue
    h1, h2 = draw(np.random.default_rng(config.seed), (2,), config.dim, config.omega)
    matrices = np.cos(x)[:, None, None] * h1 + np.sin(x)[:, None, None] * h2
    return GpFamily(x, matrices, config.beta_class, np.cos, (h1, h2))


def gp_moment(beta_class: int, omega: float, dx: float, i, j, k, l) -> float:
    """Closed-form E[H_ij(x) H_kl(x + dx)]."""
    if beta_class == 1:
        g = (i == k) * (j == l) + (i == l) * (j == k)
    else:
        g = 2 * (i == l) * (j == k)
    return omega ** 2 / (2 * beta_class) * math.cos(dx) * g


def _unfolded_levels(spectra, poly_degree, edge_trim_fraction):
    return np.stack([unfold(ev, poly_degree, edge_trim_fraction).levels for ev in spectra])


def mean_squared_velocity(families, grid=None, poly_degree: int = 6,
                          edge_trim_fraction: float = 0.05) -> float:
    """Mean of (d eps_i / dx)^2 over levels, grid points and families.

    ``eps_i`` are unfolded levels; derivatives are central differences on the
    grid, one-sided at the ends. ``grid`` overrides the grid of a single family.
    """
    if isinstance(families, (GpFamily, SweepResult)):
        families = [families]
    total, count = 0.0, 0
    for fam in families:
        if isinstance(fam, SweepResult):
            x, spectra = fam.s_grid, fam.levels()
        else:
            x, spectra = fam.x_grid, fam.eigenvalues
        if grid is not None:
            x = np.asarray(grid, dtype=float)
        if x.size < 2:
            raise InsufficientDataError("need at least 2 grid points for level velocities")
        levels = _unfolded_levels(spectra, poly_degree, edge_trim_fraction)
        v = np.gradient(levels, x, axis=0)
        total += float(np.sum(v * v))
        count += v.size
    return total / count


def velocity_rescaling(families, grid=None, poly_degree: int = 6, edge_trim_fraction: float = 0.05) -> float:
    """Scale ``sqrt(<(d eps/dx)^2>)``; the universal parameter is ``scale * x``."""
    return math.sqrt(mean_squared_velocity(families, grid, poly_degree, edge_trim_fraction))


def _pipeline_fit(spectra, poly_degree, edge_trim_fraction, min_sample) -> BrodyFit:
    samples = [unfold(ev, poly_degree, edge_trim_fraction).spacing_sample() for ev in spectra]
    return fit_brody(SpacingSample.pooled(samples), min_sample)


def goe_pipeline_check(dim: int = 256, samples: int = 50, seed: int = 0, poly_degree: int = 6,
                       edge_trim_fraction: float = 0.05, min_sample: int = 50) -> BrodyFit:
    """Pooled Brody fit of unfolded GOE spectra; should sit near q = 1."""
    if dim < 64:
        raise ValueError("dim must be at least 64")
    spectra = (eigenvalues_symmetric(sample_goe(dim, seed=child_seed(seed, k))) for k in range(samples))
    return _pipeline_fit(spectra, poly_degree, edge_trim_fraction, min_sample)


def poisson_pipeline_check(dim: int = 256, samples: int = 50, seed: int = 0, poly_degree: int = 6,
                           edge_trim_fraction: float = 0.05, min_sample: int = 50) -> BrodyFit:
    """Same pipeline on diagonal matrices with i.i.d. uniform entries; should sit near q = 0."""
    def spectra():
        for k in range(samples):
            diag = np.random.default_rng(child_seed(seed, k)).random(dim)
            yield eigenvalues_symmetric(np.diag(diag))
    return _pipeline_fit(spectra(), poly_degree, edge_trim_fraction, min_sample)


def covariance_check(beta_class: int = 1, dim: int = 16, families: int = 10_000, omega: float = 1.0,
                     pairs: Sequence[tuple[float, float]] = ((0.0, 0.0), (0.0, math.pi / 3), (0.4, 1.5)),
                     seed: int = 0) -> list[dict]:
    """Sample moments of the GP against the closed form, one row per entry pair.

    Each row carries the observed mean, its standard error and whether it lies
    within 3 standard errors of the expected moment.
    """
    idx = [(0, 1, 0, 1), (0, 1, 1, 0), (0, 0, 0, 0), (2, 3, 2, 3), (0, 1, 2, 3), (0, 0, 1, 1)]
    config = RmtEnsembleConfig(beta_class, dim, omega)
    draw = _goe if beta_class == 1 else _gue
    h1, h2 = draw(np.random.default_rng(seed), (2, families), config.dim, omega)
    rows = []
    for x, xp in pairs:
        hx = math.cos(x) * h1 + math.sin(x) * h2
        hxp = math.cos(xp) * h1 + math.sin(xp) * h2
        for i, j, k, l in idx:
            prod = hx[:, i, j] * hxp[:, k, l]
            # the moment is defined without conjugation; its real part carries the check
            prod = np.real(prod)
            observed = float(prod.mean())
            stderr = float(prod.std(ddof=1) / math.sqrt(families))
            expected = gp_moment(beta_class, omega, xp - x, i, j, k, l)
            rows.append({
                "beta": beta_class, "x": x, "x_prime": xp, "index": [i, j, k, l],
                "expected": expected, "observed": observed, "stderr": stderr,
                "pass": abs(observed - expected) <= 3 * stderr,
            })
    return rows


def gp_validate(seed: int = 0, quick: bool = False) -> dict:
    """Calibration report: GOE and Poisson gates, GP moments, rescaling idempotence."""
    samples = 10 if quick else 50
    families = 2_000 if quick else 10_000
    goe = goe_pipeline_check(256, samples, child_seed(seed, 0))
    poisson = poisson_pipeline_check(256, samples, child_seed(seed, 1))
    checks = covariance_check(1, 16, families, seed=child_seed(seed, 2))
    checks += covariance_check(2, 16, families, seed=child_seed(seed, 3))
    fam = sample_gp_family(RmtEnsembleConfig(1, 64, 1.0, seed=child_seed(seed, 4)), np.linspace(0.0, 0.5, 26))
    scale = velocity_rescaling(fam)
    again = velocity_rescaling(fam, grid=fam.x_grid * scale)
    return {
        "goe_q": goe.q,
        "poisson_q": poisson.q,
        "covariance_checks": checks,
        "rescale_scale": scale,
        "rescale_idempotence": abs(again - 1.0),
    }
