"""Random 3-SAT instances, DIMACS I/O and classical solvers.

The DPLL solver here is deliberately plain: unit propagation and pure-literal
elimination at every search node, branching on the lowest-index free variable
with the true branch first. Its node count is the classical cost axis used by
the experiment harness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Literal",
    "CnfFormula",
    "SatResult",
    "DimacsError",
    "ResourceBoundError",
    "generate_instance",
    "brute_force",
    "dpll_solve",
    "parse_dimacs",
    "emit_dimacs",
    "BRUTE_FORCE_MAX_VARS",
]

BRUTE_FORCE_MAX_VARS = 24


class DimacsError(ValueError):
    """Malformed DIMACS input; ``line`` is the 1-based line of the problem."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} at line {line}")
        self.line = line


class ResourceBoundError(ValueError):
    """Problem size beyond what exhaustive or dense methods allow."""


@dataclass(frozen=True, order=True)
class Literal:
    variable: int
    negated: bool = False

    def to_int(self) -> int:
        """Signed 1-based DIMACS encoding."""
        return -(self.variable + 1) if self.negated else self.variable + 1

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        return cls(abs(lit) - 1, lit < 0)

    def satisfied_by(self, value: bool) -> bool:
        return value != self.negated


Clause = tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class CnfFormula:
    """A 3-CNF formula over variables ``0 .. num_vars-1``.

    ``seed`` records how a generated instance was drawn and ``has_duplicates``
    flags parsed files that repeat a clause; neither takes part in equality.
    """

    num_vars: int
    clauses: tuple[Clause, ...]
    seed: int | None = field(default=None, compare=False)
    has_duplicates: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be positive")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError(f"clause {clause} does not have 3 literals")
            variables = {lit.variable for lit in clause}
            if len(variables) != 3:
                raise ValueError(f"clause {clause} repeats a variable")
            if max(variables) >= self.num_vars or min(variables) < 0:
                raise ValueError(f"clause {clause} references a variable outside [0, {self.num_vars})")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def ratio(self) -> float:
        """Clause-to-variable ratio m/n."""
        return self.num_clauses / self.num_vars

    def to_ints(self) -> list[tuple[int, int, int]]:
        return [tuple(lit.to_int() for lit in clause) for clause in self.clauses]

    def is_satisfied_by(self, assignment) -> bool:
        return all(any(lit.satisfied_by(bool(assignment[lit.variable])) for lit in clause)
                   for clause in self.clauses)

    @classmethod
    def from_ints(cls, num_vars: int, clauses, **kwargs) -> "CnfFormula":
        return cls(num_vars, tuple(tuple(Literal.from_int(l) for l in c) for c in clauses), **kwargs)


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    dpll_decisions: int
    dpll_propagations: int
    model: tuple[bool, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "satisfiable": self.satisfiable,
            "dpll_decisions": self.dpll_decisions,
            "dpll_propagations": self.dpll_propagations,
        }


def _clause_key(clause) -> frozenset:
    return frozenset((lit.variable, lit.negated) for lit in clause)


def generate_instance(n: int, m: int, seed: int) -> CnfFormula:
    """Draw a random 3-SAT formula with ``m`` distinct clauses over ``n`` variables.

    Each clause picks 3 distinct variables uniformly and negates each with
    probability 1/2; a clause equal (up to literal order) to an earlier one is
    rejected and redrawn.
    """
    if n < 3:
        raise ValueError(f"need at least 3 variables, got n={n}")
    max_clauses = 8 * math.comb(n, 3)
    if m < 1 or m > max_clauses:
        raise ValueError(f"m={m} outside [1, {max_clauses}] for n={n}")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    seen: set[frozenset] = set()
    clauses = []
    while len(clauses) < m:
        variables = np.sort(rng.choice(n, size=3, replace=False))
        signs = rng.random(3) < 0.5
        clause = tuple(Literal(int(v), bool(s)) for v, s in zip(variables, signs))
        key = _clause_key(clause)
        if key in seen:
            continue
        seen.add(key)
        clauses.append(clause)
    return CnfFormula(n, tuple(clauses), seed=int(seed))


def brute_force(formula: CnfFormula) -> tuple[bool, int]:
    """Exact (satisfiable, number of satisfying assignments) by enumeration."""
    n = formula.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise ResourceBoundError(f"brute force limited to n <= {BRUTE_FORCE_MAX_VARS}, got n={n}")
    total = 0
    chunk = 1 << min(n, 20)
    for start in range(0, 1 << n, chunk):
        z = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        ok = np.ones(z.shape, dtype=bool)
        for clause in formula.clauses:
            sat = np.zeros(z.shape, dtype=bool)
            for lit in clause:
                bit = ((z >> lit.variable) & 1).astype(bool)
                sat |= bit != lit.negated
            ok &= sat
        total += int(np.count_nonzero(ok))
    return total > 0, total


class _Counters:
    __slots__ = ("nodes", "propagations")

    def __init__(self):
        self.nodes = 0
        self.propagations = 0


def _assign(clauses, lit):
    """Set ``lit`` true: drop satisfied clauses, strip the opposite literal.

    Returns None when an empty clause appears.
    """
    out = []
    for clause in clauses:
        if lit in clause:
            continue
        if -lit in clause:
            reduced = tuple(l for l in clause if l != -lit)
            if not reduced:
                return None
            out.append(reduced)
        else:
            out.append(clause)
    return out


def _dpll(clauses, assignment: dict, counters: _Counters):
    counters.nodes += 1
    while True:
        units = [c[0] for c in clauses if len(c) == 1]
        if units:
            lit = units[0]
            assignment[abs(lit)] = lit > 0
            counters.propagations += 1
            clauses = _assign(clauses, lit)
            if clauses is None:
                return None
            continue
        present = {l for c in clauses for l in c}
        pure = [l for l in present if -l not in present]
        if not pure:
            break
        for lit in sorted(pure, key=abs):
            assignment[abs(lit)] = lit > 0
            clauses = _assign(clauses, lit)
    if not clauses:
        return assignment
    var = min(abs(l) for c in clauses for l in c)
    for lit in (var, -var):
        reduced = _assign(clauses, lit)
        if reduced is None:
            continue
        branch = dict(assignment)
        branch[var] = lit > 0
        result = _dpll(reduced, branch, counters)
        if result is not None:
            return result
    return None


def dpll_solve(formula: CnfFormula) -> SatResult:
    """Decide satisfiability with DPLL and report its search cost.

    ``dpll_decisions`` counts search-tree nodes, the root included, so any
    formula costs at least one node. The branch variable is the lowest-index
    variable still occurring in the simplified formula, true branch first.
    """
    counters = _Counters()
    clauses = [tuple(c) for c in formula.to_ints()]
    found = _dpll(clauses, {}, counters)
    model = None
    if found is not None:
        model = tuple(bool(found.get(v + 1, False)) for v in range(formula.num_vars))
    return SatResult(found is not None, counters.nodes, counters.propagations, model)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text into a 3-CNF formula.

    Comment lines (``c``) are skipped and a ``%`` line ends the input, as in
    the SATLIB benchmark files. Clauses may span lines; errors point at the
    line where the offending clause is terminated.
    """
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise DimacsError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError("malformed header", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError("malformed header", lineno) from None
            if num_vars < 1 or num_clauses < 0:
                raise DimacsError("malformed header", lineno)
            continue
        if num_vars is None:
            raise DimacsError("clause before header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"invalid literal {tok!r}", lineno) from None
            if lit == 0:
                if len(current) != 3:
                    raise DimacsError(f"clause of length {len(current)}", lineno)
                if len({abs(l) for l in current}) != 3:
                    raise DimacsError("clause repeats a variable", lineno)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(f"variable {abs(lit)} out of range 1..{num_vars}", lineno)
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing header", max(last_line, 1))
    if current:
        raise DimacsError("unterminated clause", last_line)
    if len(clauses) != num_clauses:
        raise DimacsError(f"header declares {num_clauses} clauses, found {len(clauses)}", last_line)
    keys = {frozenset(c) for c in clauses}
    return CnfFormula.from_ints(num_vars, clauses, has_duplicates=len(keys) != len(clauses))


def emit_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    lines += [" ".join(str(l) for l in clause) + " 0" for clause in formula.to_ints()]
    return "\n".join(lines) + "\n"
