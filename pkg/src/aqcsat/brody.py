"""Brody nearest-neighbour spacing distribution and its maximum-likelihood fit.

    p_q(x) = (1 + q) b x**q exp(-b x**(1 + q)),  b = Gamma((2 + q)/(1 + q))**(1 + q)

q = 0 is the Poisson law exp(-x), q = 1 the Wigner surmise.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .unfolding import (
    DegenerateSpectrumError,
    InsufficientDataError,
    SpacingSample,
    unfold,
)

__all__ = [
    "Q_MIN",
    "Q_MAX",
    "BrodyFit",
    "MaxBrody",
    "brody_beta",
    "brody_pdf",
    "brody_cdf",
    "brody_sample",
    "brody_log_likelihood",
    "golden_section_max",
    "fit_brody",
    "max_brody",
    "histogram_csv",
]

Q_MIN, Q_MAX = 0.0, 1.5
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def brody_beta(q: float) -> float:
    if q < 0:
        raise ValueError(f"Brody parameter must be non-negative, got {q}")
    return math.gamma((2.0 + q) / (1.0 + q)) ** (1.0 + q)


def brody_pdf(q: float, delta):
    delta = np.asarray(delta, dtype=float)
    if np.any(delta < 0):
        raise ValueError("spacings must be non-negative")
    b = brody_beta(q)
    out = (1.0 + q) * b * delta ** q * np.exp(-b * delta ** (1.0 + q))
    return out if out.ndim else float(out)


def brody_cdf(q: float, delta):
    delta = np.asarray(delta, dtype=float)
    if np.any(delta < 0):
        raise ValueError("spacings must be non-negative")
    out = -np.expm1(-brody_beta(q) * delta ** (1.0 + q))
    return out if out.ndim else float(out)


def brody_sample(q: float, count: int, seed=None) -> SpacingSample:
    """Draw ``count`` spacings by inverting the closed-form CDF."""
    if not Q_MIN <= q <= Q_MAX:
        raise ValueError(f"q={q} outside [{Q_MIN}, {Q_MAX}]")
    if count < 1:
        raise ValueError("count must be positive")
    u = np.random.default_rng(seed).random(count)
    return SpacingSample((-np.log1p(-u) / brody_beta(q)) ** (1.0 / (1.0 + q)))


def brody_log_likelihood(q: float, spacings=None, *, _logs=None, _n=None) -> float:
    """Log-likelihood of the spacings under p_q.

    ``_logs`` lets repeated calls reuse ``log(spacings)``.
    """
    logs = np.log(np.asarray(spacings, dtype=float)) if _logs is None else _logs
    n = logs.size if _n is None else _n
    b = brody_beta(q)
    return float(n * (math.log1p(q) + math.log(b)) + q * logs.sum() - b * np.exp((1.0 + q) * logs).sum())


def golden_section_max(func, lo: float, hi: float, tol: float = 1e-4) -> float:
    """Argmax of a unimodal function on [lo, hi] to absolute tolerance ``tol``."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = func(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class BrodyFit:
    q: float
    beta: float
    log_likelihood: float
    valid: bool
    sample_size: int
    s: float | None = None
    degenerate_fraction: float = 0.0
    flag: str | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        ll = self.log_likelihood
        return {
            "s": self.s,
            "q": self.q,
            "beta": self.beta,
            "log_likelihood": ll if math.isfinite(ll) else None,
            "sample_size": self.sample_size,
            "valid": self.valid,
            "degenerate_fraction": self.degenerate_fraction,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def fit_brody(sample: SpacingSample, min_sample: int = 50, max_degenerate_fraction: float = 0.5,
              q_upper: float = Q_MAX, tol: float = 1e-4) -> BrodyFit:
    """Maximum-likelihood Brody parameter over [0, q_upper].

    Golden-section search on the log-likelihood; the result is then compared
    against q = 0, 1 and ``q_upper`` so a boundary or near-boundary optimum is never
    beaten by one of those reference points. The fit is flagged invalid when
    the sample is smaller than ``min_sample`` or more than
    ``max_degenerate_fraction`` of it comes from degenerate levels.
    """
    if not isinstance(sample, SpacingSample):
        sample = SpacingSample(sample)
    x = sample.spacings
    if x.size == 0:
        raise InsufficientDataError("empty spacing sample")
    if np.any(x <= 0):
        raise ValueError("spacings must be positive; clamp degenerate spacings first")
    logs = np.log(x)

    def ll(q):
        return brody_log_likelihood(q, _logs=logs, _n=x.size)

    best = golden_section_max(ll, Q_MIN, q_upper, tol)
    candidates = [(ll(q), q) for q in (best, Q_MIN, min(1.0, q_upper), q_upper)]
    value, q = max(candidates, key=lambda c: c[0])

    flag = None
    if x.size < min_sample:
        flag = "small-sample"
    elif sample.degenerate_fraction > max_degenerate_fraction:
        flag = "degenerate"
    return BrodyFit(q, brody_beta(q), value, flag is None, int(x.size), sample.s,
                    sample.degenerate_fraction, flag)


@dataclass(frozen=True)
class MaxBrody:
    q_max: float
    s_at_max: float | None
    fits: tuple[BrodyFit, ...]
    flagged: bool = False

    def __iter__(self):
        return iter((self.q_max, self.s_at_max, self.fits))


def max_brody(sweep, poly_degree: int = 6, edge_trim_fraction: float = 0.05, min_sample: int = 50,
              max_degenerate_fraction: float = 0.5, window: tuple[int, int] | None = None,
              q_upper: float = Q_MAX) -> MaxBrody:
    """Unfold and fit every grid point, then take the largest valid q.

    Points whose spectrum is too short or collapsed to one value yield an
    invalid fit at q = 0. When no fit is valid, ``q_max`` is 0 and
    ``flagged`` is set.
    """
    spectra = list(sweep.spectra)
    if not spectra:
        raise ValueError("empty sweep")
    fits = []
    for sp in spectra:
        try:
            unfolded = unfold(sp, poly_degree, edge_trim_fraction, window)
        except (InsufficientDataError, DegenerateSpectrumError):
            fits.append(BrodyFit(0.0, 1.0, float("nan"), False, 0, sp.s, 1.0, "insufficient"))
            continue
        fits.append(fit_brody(unfolded.spacing_sample(), min_sample, max_degenerate_fraction, q_upper))
    valid = [f for f in fits if f.valid]
    if not valid:
        return MaxBrody(0.0, None, tuple(fits), True)
    top = max(valid, key=lambda f: f.q)
    return MaxBrody(top.q, top.s, tuple(fits), False)


def histogram_csv(sample: SpacingSample, fit: BrodyFit, bins: int = 30, upper: float = 4.0) -> str:
    """Spacing histogram with the fitted density at each bin centre."""
    counts, edges = np.histogram(sample.spacings, bins=bins, range=(0.0, upper))
    centres = 0.5 * (edges[:-1] + edges[1:])
    density = brody_pdf(fit.q, centres)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bin_left", "bin_right", "count", "brody_density_at_fit"])
    for row in zip(edges[:-1], edges[1:], counts, density):
        writer.writerow([repr(float(row[0])), repr(float(row[1])), int(row[2]), repr(float(row[3]))])
    return buf.getvalue()
