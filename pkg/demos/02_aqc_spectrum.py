# coding: utf-8

# # The interpolated Hamiltonian and its spectrum
#
# H(s) = (1-s) H_b + s H_p acts on 2^n basis states.  H_p counts violated
# clauses per assignment; H_b rotates every qubit, weighted by how many clauses
# mention it.  Both endpoints are highly degenerate; in between, levels repel.

import numpy as np

from aqcsat.hamiltonian import build_system
from aqcsat.plots import svg_plot
from aqcsat.sat import generate_instance
from aqcsat.spectrum import sweep
from aqcsat.unfolding import unfold

system = build_system(generate_instance(8, 34, seed=3))
print("dimension", system.dim, " clause weights", system.hb_weights.astype(int).tolist())

# Endpoint degeneracy: the problem Hamiltonian has only a handful of distinct
# eigenvalues, and the driver's levels are subset sums of the integer weights.

print("distinct H_p levels:", np.unique(system.hp_diag).size)
print("distinct H_b levels:", np.unique(np.round(np.linalg.eigvalsh(system.driver), 9)).size)

# Full sweep over 100 grid points.  tr H(s) is linear in s, which is a cheap
# sanity check on every spectrum.

result = sweep(system, 100)
levels = result.levels()
traces = levels.sum(axis=1)
print("max trace error:", np.max(np.abs(traces - [system.trace(s) for s in result.s_grid])))

# Unfold the middle of the sweep: mean spacing 1 by construction.

u = unfold(result.spectra[50])
print("s=%.2f  kept %d levels, mean spacing %.3f, degenerate fraction %.3f"
      % (result.s_grid[50], len(u.levels), u.spacings.mean(), u.degenerate_fraction))

# The gap to the first excited state.  With several satisfying assignments
# the ground level is degenerate at s=1 and the gap closes there; the
# interesting minimum is the one inside the interval.

gap = levels[:, 1] - levels[:, 0]
with open("aqc_gap.svg", "w") as fh:
    fh.write(svg_plot(result.s_grid, gap, None, "s", "E1 - E0", "Spectral gap along the interpolation"))
inner = gap[:-1]
print("gap at s=1: %.4f; interior minimum %.4f at s=%.2f -> aqc_gap.svg"
      % (gap[-1], inner.min(), result.s_grid[np.argmin(inner)]))
