"""Spectral unfolding to unit mean level spacing."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

__all__ = [
    "InsufficientDataError",
    "DegenerateSpectrumError",
    "UnfoldedSpectrum",
    "SpacingSample",
    "unfold",
    "MIN_LEVELS",
    "CLAMPED_SPACING",
]

MIN_LEVELS = 20
CLAMPED_SPACING = 1e-8
DEGENERACY_RTOL = 1e-10


class InsufficientDataError(ValueError):
    pass


class DegenerateSpectrumError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SpacingSample:
    """Nearest-neighbour spacings with unit mean plus where they came from."""

    spacings: np.ndarray
    s: float | None = None
    instance: int | None = None
    degenerate_fraction: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.spacings, dtype=float)
        if x.ndim != 1 or not np.all(np.isfinite(x)):
            raise ValueError("spacings must be a finite 1-d array")
        object.__setattr__(self, "spacings", x)

    def __len__(self):
        return self.spacings.size

    @classmethod
    def pooled(cls, samples) -> "SpacingSample":
        samples = list(samples)
        sizes = np.array([len(x) for x in samples], dtype=float)
        degenerate = np.array([x.degenerate_fraction for x in samples])
        frac = float(degenerate @ sizes / sizes.sum()) if sizes.sum() else 0.0
        return cls(np.concatenate([x.spacings for x in samples]), degenerate_fraction=frac)


@dataclass(frozen=True, eq=False)
class UnfoldedSpectrum:
    levels: np.ndarray
    spacings: np.ndarray
    degenerate_fraction: float
    edge_discard: int
    s: float | None = None

    def spacing_sample(self, instance: int | None = None) -> SpacingSample:
        mean = self.spacings.mean()
        return SpacingSample(self.spacings / mean, s=self.s, instance=instance,
                             degenerate_fraction=self.degenerate_fraction)


def unfold(spectrum, poly_degree: int = 6, edge_trim_fraction: float = 0.05,
           window: tuple[int, int] | None = None) -> UnfoldedSpectrum:
    """Map levels through a smooth fit of the staircase N(E).

    The staircase ``N(E) = #{levels <= E}`` is fitted by a least-squares
    polynomial and each level is replaced by the fit evaluated at it. After
    dropping ``edge_trim_fraction`` of the levels at each end (or keeping only
    the index ``window``), the levels are rescaled to unit mean spacing.
    Spacings whose raw width is below ``1e-10`` of the spectral span count as
    degenerate and are clamped to ``1e-8``.

    Parameters
    ----------
    spectrum : Spectrum or array_like
        Eigenvalues, any order.
    poly_degree : int
        Degree of the staircase fit.
    edge_trim_fraction : float
        Fraction of levels discarded on each side.
    window : (int, int), optional
        Half-open index range of sorted levels to keep instead of trimming.
    """
    s = getattr(spectrum, "s", None)
    raw = np.sort(np.asarray(getattr(spectrum, "eigenvalues", spectrum), dtype=float))
    if raw.size < MIN_LEVELS:
        raise InsufficientDataError(f"need at least {MIN_LEVELS} levels, got {raw.size}")
    span = raw[-1] - raw[0]
    if span <= 0:
        raise DegenerateSpectrumError("all levels coincide")

    staircase = np.searchsorted(raw, raw, side="right").astype(float)
    with warnings.catch_warnings():
        # heavily degenerate staircases make the fit rank-deficient; lstsq still returns the minimum-norm fit
        warnings.simplefilter("ignore", np.exceptions.RankWarning)
        fit = Polynomial.fit(raw, staircase, poly_degree)
    smooth = np.maximum.accumulate(fit(raw))

    if window is None:
        k = int(edge_trim_fraction * raw.size)
        lo, hi = k, raw.size - k
    else:
        lo, hi = window
        if not 0 <= lo < hi <= raw.size:
            raise ValueError(f"window {window} outside [0, {raw.size}]")
    if hi - lo < 2:
        raise InsufficientDataError("fewer than 2 levels left after trimming")

    kept = smooth[lo:hi]
    degenerate = np.diff(raw[lo:hi]) < DEGENERACY_RTOL * span
    spacings = np.diff(kept)
    mean = spacings.mean()
    if mean <= 0:
        raise DegenerateSpectrumError("retained levels collapse to a point")
    levels = kept / mean
    spacings = spacings / mean
    spacings[degenerate] = CLAMPED_SPACING
    np.maximum(spacings, CLAMPED_SPACING, out=spacings)
    return UnfoldedSpectrum(levels, spacings, float(degenerate.mean()), min(lo, raw.size - hi), s)
