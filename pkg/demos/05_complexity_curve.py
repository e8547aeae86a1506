# coding: utf-8

# # Spectral complexity versus clause ratio
#
# For each f, generate formulas, sweep their AQC spectra, fit the Brody
# parameter at every s and keep the largest.  Averaging that maximum over
# instances gives one point of the curve.  The full ensemble (200 instances,
# 100 points, 32 ratios) is `aqcsat reproduce-fig2`; this is a reduced version.

import argparse

from aqcsat.experiment import ExperimentConfig, run_experiment
from aqcsat.plots import emit_plots

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--instances", type=int, default=8)
parser.add_argument("--points", type=int, default=25)
parser.add_argument("--jobs", type=int, default=1)
args = parser.parse_args()

config = ExperimentConfig(f_grid=(0.25, 0.5, 1.0, 2.0, 3.0, 4.25, 6.0, 8.0),
                          instances_per_f=args.instances, interpolation_points=args.points, jobs=args.jobs)
curve = run_experiment(config, archive="curve_instances.jsonl")

print("   f    m   <q_max>   stderr  median-DPLL  SAT")
for r in curve.records:
    print(f"{r.f:5.2f} {r.m:3d}   {r.mean_q_max:.3f}   {r.stderr_q_max:.3f}   {r.median_dpll:6.1f}   {r.sat_fraction:.2f}")

for path in emit_plots(curve, "complexity_curve"):
    print("wrote", path)

# Below f ~ 1 many variables appear in no clause, H(s) splits into
# independent blocks and the spacings stay Poisson-like.  Once every variable
# is constrained the spectrum mixes and the maximal q approaches 1.
