"""Adiabatic Hamiltonians for 3-SAT.

Basis state ``z`` encodes an assignment little-endian: bit ``i`` of ``z`` is the
value of variable ``i``. The problem Hamiltonian is diagonal and counts
violated clauses; the driver is ``sum_i d_i (1 - X_i) / 2`` with ``d_i`` the
number of clauses touching variable ``i``, so the uniform superposition is its
zero-energy ground state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sat import CnfFormula, ResourceBoundError

__all__ = [
    "AqcSystem",
    "MAX_QUBITS",
    "build_system",
    "violation_counts",
    "driver_matrix",
    "apply_driver",
    "hamiltonian_at",
    "hb_ground_state_check",
]

MAX_QUBITS = 14


@dataclass(frozen=True, eq=False)
class AqcSystem:
    """The pair (driver, problem) for one instance.

    ``hp_diag[z]`` is the number of clauses violated by assignment ``z``;
    ``hb_weights[i]`` the number of clauses containing variable ``i``.
    """

    n: int
    hp_diag: np.ndarray
    hb_weights: np.ndarray
    source: CnfFormula | None = None
    _driver: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        hp = np.asarray(self.hp_diag, dtype=float)
        hb = np.asarray(self.hb_weights, dtype=float)
        if hp.shape != (1 << self.n,) or hb.shape != (self.n,):
            raise ValueError("hp_diag must have length 2**n and hb_weights length n")
        hp.setflags(write=False)
        hb.setflags(write=False)
        object.__setattr__(self, "hp_diag", hp)
        object.__setattr__(self, "hb_weights", hb)

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def num_clauses(self) -> int | None:
        return None if self.source is None else self.source.num_clauses

    @property
    def driver(self) -> np.ndarray:
        """Dense driver matrix, built once and cached."""
        if self._driver is None:
            hb = driver_matrix(self.hb_weights)
            hb.setflags(write=False)
            object.__setattr__(self, "_driver", hb)
        return self._driver

    def trace(self, s: float) -> float:
        """Closed-form trace of H(s)."""
        return (1 - s) * self.dim * self.hb_weights.sum() / 2 + s * self.hp_diag.sum()


def violation_counts(formula: CnfFormula) -> np.ndarray:
    """Number of violated clauses for every basis state, as integers.

    A clause is violated on the sub-cube where all three of its variables take
    the falsifying value; that slab is incremented directly in a rank-n tensor
    (axis ``n-1-i`` holds variable ``i`` under C ordering).
    """
    n = formula.num_vars
    counts = np.zeros((2,) * n, dtype=np.int64)
    for clause in formula.clauses:
        index = [slice(None)] * n
        for lit in clause:
            index[n - 1 - lit.variable] = 1 if lit.negated else 0
        counts[tuple(index)] += 1
    return counts.reshape(-1)


def build_system(formula: CnfFormula, max_qubits: int = MAX_QUBITS) -> AqcSystem:
    n = formula.num_vars
    if n > max_qubits:
        raise ResourceBoundError(f"n={n} exceeds the dense limit of {max_qubits} qubits")
    weights = np.zeros(n, dtype=np.int64)
    for clause in formula.clauses:
        for lit in clause:
            weights[lit.variable] += 1
    return AqcSystem(n, violation_counts(formula), weights, source=formula)


def driver_matrix(weights) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    n = weights.size
    dim = 1 << n
    hb = np.zeros((dim, dim))
    rows = np.arange(dim)
    hb[rows, rows] = weights.sum() / 2
    for i, d in enumerate(weights):
        hb[rows, rows ^ (1 << i)] = -d / 2
    return hb


def apply_driver(weights, vector) -> np.ndarray:
    """Matrix-free product of the driver with ``vector``."""
    weights = np.asarray(weights, dtype=float)
    v = np.asarray(vector)
    z = np.arange(v.size)
    out = np.zeros_like(v, dtype=np.result_type(v, float))
    for i, d in enumerate(weights):
        out += d / 2 * (v - v[z ^ (1 << i)])
    return out


def hamiltonian_at(system: AqcSystem, s: float) -> np.ndarray:
    """Dense ``H(s) = (1 - s) H_b + s H_p`` as a fresh symmetric array."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"interpolation parameter s={s} outside [0, 1]")
    h = (1.0 - s) * system.driver
    h[np.diag_indices(system.dim)] += s * system.hp_diag
    return h


def hb_ground_state_check(system: AqcSystem, vector=None) -> bool:
    """True when ``vector`` (default: uniform superposition) is annihilated by H_b."""
    dim = system.dim
    if vector is None:
        vector = np.full(dim, dim ** -0.5)
    residual = apply_driver(system.hb_weights, vector)
    return bool(np.max(np.abs(residual)) <= 1e-10 * dim)
