"""Full spectra of real symmetric matrices and interpolation sweeps."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import AqcSystem, hamiltonian_at

__all__ = [
    "ConvergenceError",
    "Spectrum",
    "SweepResult",
    "eigenvalues_symmetric",
    "tridiagonalize",
    "tridiagonal_eigenvalues",
    "interpolation_grid",
    "sweep",
]


class ConvergenceError(ArithmeticError):
    def __init__(self, index: int, iterations: int):
        super().__init__(f"eigenvalue {index} did not converge in {iterations} QL iterations")
        self.index = index


@dataclass(frozen=True, eq=False)
class Spectrum:
    s: float
    eigenvalues: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Spectra of one instance along the interpolation grid.

    Serialises to ``{n, m, f, seed, s_grid, spectra}``.
    """

    n: int
    m: int | None
    seed: int | None
    spectra: tuple[Spectrum, ...]

    @property
    def f(self) -> float | None:
        return None if self.m is None else self.m / self.n

    @property
    def s_grid(self) -> np.ndarray:
        return np.array([sp.s for sp in self.spectra])

    def levels(self) -> np.ndarray:
        """Eigenvalues stacked as ``(num_points, dim)``."""
        return np.stack([sp.eigenvalues for sp in self.spectra])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "f": self.f,
            "seed": self.seed,
            "s_grid": [float(s) for s in self.s_grid],
            "spectra": [sp.eigenvalues.tolist() for sp in self.spectra],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SweepResult":
        spectra = tuple(Spectrum(float(s), np.asarray(ev, dtype=float))
                        for s, ev in zip(data["s_grid"], data["spectra"]))
        return cls(int(data["n"]), data.get("m"), data.get("seed"), spectra)

    @classmethod
    def from_json(cls, text: str) -> "SweepResult":
        return cls.from_dict(json.loads(text))


def tridiagonalize(a) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a symmetric matrix to tridiagonal form.

    Returns the diagonal and the sub-diagonal. The input is not modified.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    offdiag = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1:, k]
        xmax = np.max(np.abs(x))
        if xmax == 0.0:
            continue
        # scale the column before squaring so tiny entries keep full precision
        v = x / xmax
        alpha = -math.copysign(np.linalg.norm(v), v[0])
        v[0] -= alpha
        alpha *= xmax
        v /= np.linalg.norm(v)
        sub = a[k + 1:, k + 1:]
        p = sub @ v
        q = p - (v @ p) * v
        sub -= 2.0 * (np.outer(v, q) + np.outer(q, v))
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha
    if n >= 2:
        offdiag[:] = np.diagonal(a, -1)
    return np.diagonal(a).copy(), offdiag


def tridiagonal_eigenvalues(diag, offdiag, max_iterations: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicitly shifted QL."""
    d = np.array(diag, dtype=float).tolist()
    n = len(d)
    e = list(np.asarray(offdiag, dtype=float)) + [0.0]
    # off-diagonals below eps * ||T|| are negligible; deflating them also keeps
    # subnormal entries from stalling the shift
    anorm = max([abs(x) for x in d] + [2 * abs(x) for x in e])
    negligible = np.finfo(float).eps * anorm
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= negligible or abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if iterations == max_iterations:
                raise ConvergenceError(l, iterations)
            iterations += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def eigenvalues_symmetric(matrix, method: str = "lapack") -> np.ndarray:
    """All eigenvalues of a real symmetric matrix (or a stack of them), ascending.

    ``method="lapack"`` defers to LAPACK's symmetric driver; ``"ql"`` runs the
    Householder + implicit QL path in this module (single matrices only).
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or a.shape[-1] < 1:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if method == "lapack":
        try:
            return np.linalg.eigvalsh(a)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(-1, 0) from exc
    if method == "ql":
        if a.ndim != 2:
            return np.stack([eigenvalues_symmetric(x, "ql") for x in a])
        # work at unit scale so squared norms neither underflow nor overflow
        amax = np.max(np.abs(a))
        if amax == 0.0:
            return np.zeros(a.shape[0])
        return amax * tridiagonal_eigenvalues(*tridiagonalize(a / amax))
    raise ValueError(f"unknown method {method!r}")


def interpolation_grid(num_points: int) -> np.ndarray:
    if num_points < 2:
        raise ValueError("need at least 2 interpolation points")
    return np.arange(num_points) / (num_points - 1)


def sweep(system: AqcSystem, num_points: int, method: str = "lapack", batch: int = 25) -> SweepResult:
    """Spectra of H(s) on ``s_k = k / (num_points - 1)``, endpoints included."""
    grid = interpolation_grid(num_points)
    # cap memory of the stacked batch near 64 MB
    batch = max(1, min(batch, (1 << 23) // (system.dim * system.dim)))
    spectra = []
    for start in range(0, num_points, batch):
        chunk = grid[start:start + batch]
        stack = np.stack([hamiltonian_at(system, float(s)) for s in chunk])
        for s, ev in zip(chunk, eigenvalues_symmetric(stack, method)):
            spectra.append(Spectrum(float(s), ev))
    src = system.source
    return SweepResult(system.n, system.num_clauses, None if src is None else src.seed, tuple(spectra))
