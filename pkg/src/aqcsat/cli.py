"""Command line entry point: ``aqcsat <subcommand>``.

Exit codes: 0 success, 2 invalid input or configuration, 3 numeric failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

from .brody import fit_brody, histogram_csv, max_brody
from .ensembles import gp_validate
from .experiment import ComplexityCurve, ExperimentConfig, ExperimentError, run_classical_baseline, run_experiment
from .hamiltonian import build_system, hamiltonian_at
from .plots import emit_plots
from .sat import dpll_solve, emit_dimacs, generate_instance, parse_dimacs
from .spectrum import SweepResult, eigenvalues_symmetric, sweep
from .unfolding import unfold

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_gen(args):
    formula = generate_instance(args.vars, args.clauses, args.seed)
    _write(emit_dimacs(formula), args.out)


def cmd_solve(args):
    result = dpll_solve(parse_dimacs(Path(args.cnf).read_text()))
    if args.json:
        print(json.dumps(result.to_dict()))
    else:
        print("SATISFIABLE" if result.satisfiable else "UNSATISFIABLE")
        print(f"decisions {result.dpll_decisions} propagations {result.dpll_propagations}")


def cmd_spectrum(args):
    system = build_system(parse_dimacs(Path(args.cnf).read_text()))
    ev = eigenvalues_symmetric(hamiltonian_at(system, args.s), args.method)
    _write(json.dumps({"s": args.s, "eigenvalues": ev.tolist()}) + "\n", args.out)


def cmd_sweep(args):
    formula = parse_dimacs(Path(args.cnf).read_text())
    result = sweep(build_system(formula), args.points, args.method)
    _write(result.to_json() + "\n", args.out)


def cmd_fit(args):
    data = SweepResult.from_json(Path(args.sweep).read_text())
    window = tuple(args.window) if args.window else None
    best = max_brody(data, args.degree, args.trim, args.min_sample, args.max_degenerate, window)
    lines = [fit.to_json() for fit in best.fits]
    lines.append(json.dumps({"q_max": best.q_max, "s_at_max": best.s_at_max, "flagged": best.flagged}))
    _write("\n".join(lines) + "\n", args.out)
    if args.histogram:
        idx = args.histogram_index
        if idx is None:
            idx = next((k for k, f in enumerate(best.fits) if f.s == best.s_at_max), 0)
        sample = unfold(data.spectra[idx], args.degree, args.trim, window).spacing_sample()
        Path(args.histogram).write_text(histogram_csv(sample, fit_brody(sample, args.min_sample)))


def cmd_baseline(args):
    records = run_classical_baseline(args.n, _floats(args.f_grid), args.instances, args.seed)
    _write("".join(json.dumps(asdict(r)) + "\n" for r in records), args.out)


def cmd_gp_validate(args):
    _write(json.dumps(gp_validate(args.seed, args.quick), indent=2) + "\n", args.out)


def cmd_plot(args):
    curve = ComplexityCurve.from_csv(Path(args.curve).read_text())
    for path in emit_plots(curve, args.out, not args.no_cost):
        print(path)


def _experiment_config(args) -> ExperimentConfig:
    config = ExperimentConfig()
    if args.config:
        config = ExperimentConfig.from_dict(json.loads(Path(args.config).read_text()))
    overrides = {}
    for key, attr in [("n", "n"), ("instances", "instances_per_f"), ("points", "interpolation_points"),
                      ("seed", "seed"), ("jobs", "jobs")]:
        if getattr(args, key) is not None:
            overrides[attr] = getattr(args, key)
    if args.f_grid:
        overrides["f_grid"] = _floats(args.f_grid)
    if args.exclude_invalid:
        overrides["include_invalid"] = False
    config = replace(config, **overrides)
    return config.quick() if args.quick else config


def cmd_reproduce(args):
    config = _experiment_config(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(config.to_dict(), indent=2) + "\n")
    curve = run_experiment(config, archive=out / "instances.jsonl")
    for path in emit_plots(curve, out / "fig2"):
        print(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aqcsat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random 3-SAT instance as DIMACS")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run DPLL on a DIMACS file")
    p.add_argument("cnf")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="eigenvalues of H(s) for a DIMACS file")
    p.add_argument("cnf")
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--method", choices=["lapack", "ql"], default="lapack")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="spectra along the interpolation grid, as JSON")
    p.add_argument("cnf")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--method", choices=["lapack", "ql"], default="lapack")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="Brody fits for every point of a sweep JSON")
    p.add_argument("sweep")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--trim", type=float, default=0.05)
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--min-sample", type=int, default=50)
    p.add_argument("--max-degenerate", type=float, default=0.5)
    p.add_argument("--histogram", help="CSV path for the spacing histogram")
    p.add_argument("--histogram-index", type=int, help="grid index for the histogram (default: q_max point)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("baseline", help="classical DPLL cost and SAT fraction versus f")
    p.add_argument("--n", type=int, nargs="+", default=[20])
    p.add_argument("--f-grid", default=",".join(str(1 + 0.25 * k) for k in range(29)))
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("gp-validate", help="random-matrix calibration report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gp_validate)

    p = sub.add_parser("plot", help="render a curve CSV to SVG")
    p.add_argument("curve")
    p.add_argument("--out", required=True, help="output file stem")
    p.add_argument("--no-cost", action="store_true")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("reproduce-fig2", help="maximal Brody parameter versus f, end to end")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--quick", action="store_true", help="20 instances per f, 25 interpolation points")
    p.add_argument("--n", type=int)
    p.add_argument("--instances", type=int)
    p.add_argument("--points", type=int)
    p.add_argument("--f-grid")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--exclude-invalid", action="store_true")
    p.add_argument("--out-dir", default="fig2_out")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except OSError as exc:
        print(f"aqcsat: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, ExperimentError) as exc:
        print(f"aqcsat: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        print(f"aqcsat: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
