"""Command-line front end: integrations, named experiments, regions, convergence.

Experiments emit plot-ready CSV data, never images; a sample gnuplot script
lives in docs/.  Floats are written with 17 significant digits and LF line
endings so reruns are byte-identical across platforms.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical error
(with the failing step index on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import (
    BracketFailure,
    ConfigError,
    IntegrationError,
    MprkError,
    NumericalBreakdown,
    SingularSystem,
)
from .integrators import SchemeParams, StageVariant, Trajectory, integrate_linear_2x2
from .linear2d import Linear2x2PDS, exact_solution
from .stability import critical_time_step, raster_region

NAMED_EXPERIMENTS = (
    "exact-solution",
    "fig4",
    "fig6",
    "fig7",
    "fig8",
    "region-fig2",
    "points-fig5",
    "convergence",
)

# Reference problem of the stability experiments: a = b = 25 with initial
# state (0.998, 0.002), plus the near-steady initial state used to expose
# divergence.
REFERENCE_RATES = (25.0, 25.0)
REFERENCE_Y0 = (0.998, 0.002)
NEAR_STEADY_Y0 = (0.501, 0.499)

CONVERGENCE_T_END = 0.1
CONVERGENCE_DT_LIST = tuple(0.1 / 2**k for k in range(4, 11))


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _open_output(path: Path, overwrite: bool):
    if path.exists() and not overwrite:
        raise ConfigError(f"refusing to overwrite existing file {path} (pass --overwrite)")
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="")


def write_trajectory_csv(path: Path, problem: Linear2x2PDS, trajectory: Trajectory, overwrite=False) -> Path:
    """Write `step,t,y1,y2,mass,err1,err2` rows; err columns are signed
    differences against the analytic solution."""
    y0 = trajectory.states[0]
    with _open_output(path, overwrite) as fh:
        fh.write("step,t,y1,y2,mass,err1,err2\n")
        for n, (t, y) in enumerate(zip(trajectory.times, trajectory.states)):
            ref = exact_solution(problem, y0, t)
            fh.write(
                f"{n},{_fmt(t)},{_fmt(y[0])},{_fmt(y[1])},{_fmt(y[0] + y[1])},"
                f"{_fmt(y[0] - ref[0])},{_fmt(y[1] - ref[1])}\n"
            )
    return path


def write_region_csv(path: Path, raster, overwrite=False) -> Path:
    """Write `z_a,z_b,stable` rows with stable in {0, 1}."""
    with _open_output(path, overwrite) as fh:
        fh.write("z_a,z_b,stable\n")
        for i, za in enumerate(raster.z_values):
            for j, zb in enumerate(raster.z_values):
                fh.write(f"{_fmt(za)},{_fmt(zb)},{1 if raster.stable[i, j] else 0}\n")
    return path


def _require_keys(mapping, allowed, required, where):
    if not isinstance(mapping, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")
    missing = set(required) - set(mapping)
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {', '.join(sorted(missing))}")


def parse_config(config: dict):
    """Validate an experiment configuration; unknown keys are an error."""
    _require_keys(config, ("problem", "scheme", "run", "outputs"), ("problem", "scheme", "run", "outputs"), "config")
    _require_keys(config["problem"], ("a", "b", "y0"), ("a", "b", "y0"), "problem")
    _require_keys(config["scheme"], ("alpha", "variant"), ("alpha", "variant"), "scheme")
    _require_keys(config["run"], ("dt", "n_steps"), ("dt", "n_steps"), "run")
    _require_keys(config["outputs"], ("directory", "prefix"), ("directory",), "outputs")
    try:
        problem = Linear2x2PDS(config["problem"]["a"], config["problem"]["b"])
        y0 = np.asarray(config["problem"]["y0"], dtype=float)
        params = SchemeParams(config["scheme"]["alpha"], config["scheme"]["variant"])
        dt = float(config["run"]["dt"])
        n_steps = int(config["run"]["n_steps"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc
    directory = Path(config["outputs"]["directory"])
    prefix = str(config["outputs"].get("prefix", "trajectory"))
    return problem, y0, params, dt, n_steps, directory, prefix


def run_integration(config: dict, overwrite=False) -> Path:
    """Run the configured integration and write its trajectory CSV."""
    problem, y0, params, dt, n_steps, directory, prefix = parse_config(config)
    trajectory = integrate_linear_2x2(problem.a, problem.b, y0, dt, n_steps, params)
    return write_trajectory_csv(directory / f"{prefix}.csv", problem, trajectory, overwrite)


def compute_convergence(alpha, variant, t_end=CONVERGENCE_T_END, dt_list=CONVERGENCE_DT_LIST):
    """Error-against-analytic-solution table rows (dt, error, observed_order).

    The error is the max-norm distance at t_end on the reference problem; the
    observed order compares consecutive dt values (None in the first row).
    """
    params = SchemeParams(alpha, variant)
    a, b = REFERENCE_RATES
    problem = Linear2x2PDS(a, b)
    if params.variant is StageVariant.NON_CONSERVATIVE and params.alpha < 1.0:
        dt_max = critical_time_step(a, b, params.alpha)
        if max(dt_list) >= dt_max:
            raise ConfigError(
                f"dt = {max(dt_list)!r} is outside the stability region (critical dt = {dt_max!r})"
            )
    rows = []
    prev = None
    for dt in dt_list:
        n_steps = int(round(t_end / dt))
        trajectory = integrate_linear_2x2(a, b, REFERENCE_Y0, dt, n_steps, params)
        ref = exact_solution(problem, REFERENCE_Y0, n_steps * dt)
        err = float(np.max(np.abs(trajectory.states[-1] - ref)))
        order = None
        if prev is not None:
            prev_dt, prev_err = prev
            order = float(np.log(prev_err / err) / np.log(prev_dt / dt))
        rows.append((float(dt), err, order))
        prev = (dt, err)
    return rows


def write_convergence_csv(path: Path, rows, overwrite=False) -> Path:
    with _open_output(path, overwrite) as fh:
        fh.write("dt,error,observed_order\n")
        for dt, err, order in rows:
            fh.write(f"{_fmt(dt)},{_fmt(err)},{'' if order is None else _fmt(order)}\n")
    return path


def _named_exact_solution(outdir: Path, overwrite):
    problem = Linear2x2PDS(*REFERENCE_RATES)
    path = outdir / "exact_solution.csv"
    with _open_output(path, overwrite) as fh:
        fh.write("t,y1,y2\n")
        for t in np.linspace(0.0, 0.2, 1000):
            y = exact_solution(problem, REFERENCE_Y0, t)
            fh.write(f"{_fmt(t)},{_fmt(y[0])},{_fmt(y[1])}\n")
    return [path]


def _trajectory_file(outdir, name, alpha, dt, variant, y0, n_steps, overwrite):
    problem = Linear2x2PDS(*REFERENCE_RATES)
    params = SchemeParams(alpha, variant)
    trajectory = integrate_linear_2x2(problem.a, problem.b, y0, dt, n_steps, params)
    path = outdir / name
    return write_trajectory_csv(path, problem, trajectory, overwrite)


def _named_fig4(outdir: Path, overwrite):
    # the caption pairs (alpha, dt) only loosely, so emit the full cross
    # product of alpha in {1, 2}, dt in {4, 20} and both variants
    paths = []
    for alpha in (1.0, 2.0):
        for dt in (4.0, 20.0):
            for variant in StageVariant:
                name = f"fig4_alpha{alpha:g}_dt{dt:g}_{variant.value}.csv"
                paths.append(_trajectory_file(outdir, name, alpha, dt, variant, REFERENCE_Y0, 50, overwrite))
    return paths


def _named_fig6(outdir: Path, overwrite):
    paths = []
    for alpha in (0.5, 0.8):
        dt = critical_time_step(*REFERENCE_RATES, alpha) - 0.1
        for variant in StageVariant:
            name = f"fig6_alpha{alpha:g}_{variant.value}.csv"
            paths.append(_trajectory_file(outdir, name, alpha, dt, variant, REFERENCE_Y0, 500, overwrite))
    return paths


def _named_fig7(outdir: Path, overwrite):
    paths = []
    for alpha in (0.5, 0.8):
        dt = critical_time_step(*REFERENCE_RATES, alpha) + 0.1
        for variant in StageVariant:
            name = f"fig7_alpha{alpha:g}_{variant.value}.csv"
            paths.append(_trajectory_file(outdir, name, alpha, dt, variant, REFERENCE_Y0, 200, overwrite))
    return paths


def _named_fig8(outdir: Path, overwrite):
    paths = []
    for alpha in (0.5, 0.8):
        dt = critical_time_step(*REFERENCE_RATES, alpha) + 0.1
        name = f"fig8_alpha{alpha:g}_ncs.csv"
        paths.append(
            _trajectory_file(outdir, name, alpha, dt, StageVariant.NON_CONSERVATIVE, NEAR_STEADY_Y0, 200, overwrite)
        )
    return paths


def _named_region_fig2(outdir: Path, overwrite):
    paths = []
    for alpha in (0.5, 0.6, 0.7, 0.8, 0.9):
        raster = raster_region(alpha, z_min=-50.0, resolution=100)
        path = outdir / f"region_fig2_alpha{alpha:g}.csv"
        paths.append(write_region_csv(path, raster, overwrite))
    return paths


def _named_points_fig5(outdir: Path, overwrite):
    a, b = REFERENCE_RATES
    path = outdir / "points_fig5.csv"
    with _open_output(path, overwrite) as fh:
        fh.write("alpha,label,dt,z_a,z_b\n")
        for alpha in (0.5, 0.8):
            dt_star = critical_time_step(a, b, alpha)
            for label, dt in (("dt_minus", dt_star - 0.1), ("dt_star", dt_star), ("dt_plus", dt_star + 0.1)):
                fh.write(f"{_fmt(alpha)},{label},{_fmt(dt)},{_fmt(-dt * a)},{_fmt(-dt * b)}\n")
    return [path]


def _named_convergence(outdir: Path, overwrite):
    paths = []
    for alpha, variant in ((0.5, "cs"), (1.0, "cs"), (0.5, "ncs"), (1.0, "ncs")):
        rows = compute_convergence(alpha, variant)
        path = outdir / f"convergence_alpha{alpha:g}_{variant}.csv"
        paths.append(write_convergence_csv(path, rows, overwrite))
    return paths


_NAMED_RUNNERS = {
    "exact-solution": _named_exact_solution,
    "fig4": _named_fig4,
    "fig6": _named_fig6,
    "fig7": _named_fig7,
    "fig8": _named_fig8,
    "region-fig2": _named_region_fig2,
    "points-fig5": _named_points_fig5,
    "convergence": _named_convergence,
}


def run_named(name: str, outdir, overwrite=False) -> list[Path]:
    """Run one named experiment, returning the written file paths."""
    if name not in _NAMED_RUNNERS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(NAMED_EXPERIMENTS)}")
    return _NAMED_RUNNERS[name](Path(outdir), overwrite)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors by default; this CLI reserves 2
    # for numerical failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mprk22", description="MPRK22 integrators and stability experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser("integrate", help="run one integration from a JSON config")
    p_int.add_argument("--config", required=True, help="path to the JSON configuration")
    p_int.add_argument("--overwrite", action="store_true")

    p_named = sub.add_parser("named", help="reproduce a named experiment")
    p_named.add_argument("experiment", choices=NAMED_EXPERIMENTS)
    p_named.add_argument("--out", required=True, help="output directory")
    p_named.add_argument("--overwrite", action="store_true")

    p_region = sub.add_parser("region", help="rasterize a stability region")
    p_region.add_argument("--alpha", type=float, required=True)
    p_region.add_argument("--zmin", type=float, required=True)
    p_region.add_argument("--resolution", type=int, required=True)
    p_region.add_argument("--out", required=True, help="output CSV file")
    p_region.add_argument("--overwrite", action="store_true")

    p_crit = sub.add_parser("critical-dt", help="print the critical step size")
    p_crit.add_argument("--a", type=float, required=True)
    p_crit.add_argument("--b", type=float, required=True)
    p_crit.add_argument("--alpha", type=float, required=True)

    p_conv = sub.add_parser("convergence", help="run a convergence study")
    p_conv.add_argument("--alpha", type=float, required=True)
    p_conv.add_argument("--variant", choices=[v.value for v in StageVariant], required=True)
    p_conv.add_argument("--out", required=True, help="output CSV file")
    p_conv.add_argument("--overwrite", action="store_true")
    return parser


def _dispatch(args) -> None:
    if args.command == "integrate":
        with open(args.config) as fh:
            config = json.load(fh)
        path = run_integration(config, overwrite=args.overwrite)
        print(path)
    elif args.command == "named":
        for path in run_named(args.experiment, args.out, overwrite=args.overwrite):
            print(path)
    elif args.command == "region":
        raster = raster_region(args.alpha, args.zmin, args.resolution)
        print(write_region_csv(Path(args.out), raster, overwrite=args.overwrite))
    elif args.command == "critical-dt":
        print(_fmt(critical_time_step(args.a, args.b, args.alpha)))
    elif args.command == "convergence":
        rows = compute_convergence(args.alpha, args.variant)
        print(write_convergence_csv(Path(args.out), rows, overwrite=args.overwrite))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _dispatch(args)
    except IntegrationError as exc:
        print(f"numerical error at step {exc.step_index}: {exc}", file=sys.stderr)
        return 2
    except (NumericalBreakdown, SingularSystem, BracketFailure, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except (MprkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
