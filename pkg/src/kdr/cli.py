"""Command-line interface: fit CSV data, run benchmarks, probe the contrast.

Exit codes: 0 success, 2 malformed input (CSV parse errors, unknown methods,
bad flags), 3 constant covariate column, 4 invalid projection dimension.
Every command writes its numeric outputs as CSV plus a ``manifest.txt`` of
``key=value`` lines from which the run can be regenerated, and renders a
figure alongside unless ``--no-figures`` is given.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

from .baselines import SliceSpec
from .benchmark import (
    BENCHMARK_PARAMETERS,
    METHODS,
    REFERENCE_NOTES,
    BenchConfig,
    monotonicity_probe,
    run_benchmark,
)
from .datasets import (
    Dataset,
    GenSpec,
    generate,
    standardize,
    standardize_subspace,
    unstandardize_subspace,
)
from .errors import ConstantColumnError, CsvFormatError, InvalidConfigError, KdrError
from .kernels import Continuation, KernelConfig
from .stiefel import OptimConfig, fit_kdr, random_frame

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_CONSTANT_COLUMN = 3
EXIT_BAD_DIM = 4


# ---------------------------------------------------------------------------
# CSV input / output


def _parse_cell(cell: str) -> float | None:
    try:
        return float(cell)
    except ValueError:
        return None


def read_csv(path: str, response: str) -> Dataset:
    """Read a numeric CSV into a Dataset, splitting off the response column.

    The first row is treated as a header exactly when any of its cells is not
    numeric.  ``response`` selects the response column by header name or by
    0-based index.  Blank lines are skipped; ragged rows and non-numeric body
    cells raise ``CsvFormatError`` with a line diagnostic.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            raw = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1) if row]
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise CsvFormatError(f"{path}: file is empty")

    first_line, first_row = raw[0]
    has_header = any(_parse_cell(c.strip()) is None for c in first_row)
    names = [c.strip() for c in first_row] if has_header else None
    body = raw[1:] if has_header else raw
    if not body:
        raise CsvFormatError(f"{path}: no data rows")
    ncols = len(first_row)

    rows = []
    for lineno, row in body:
        if len(row) != ncols:
            raise CsvFormatError(
                f"{path}: line {lineno}: expected {ncols} fields, got {len(row)}"
            )
        values = []
        for j, cell in enumerate(row):
            v = _parse_cell(cell.strip())
            if v is None:
                col = names[j] if names else f"column {j}"
                raise CsvFormatError(
                    f"{path}: line {lineno}: {col}: not a number: {cell.strip()!r}"
                )
            values.append(v)
        rows.append(values)

    if names and response in names:
        resp_idx = names.index(response)
    else:
        try:
            resp_idx = int(response)
        except ValueError:
            raise CsvFormatError(
                f"{path}: response column {response!r} not found"
                + (f" in header {names}" if names else " (file has no header)")
            ) from None
        if not (0 <= resp_idx < ncols):
            raise CsvFormatError(
                f"{path}: response index {resp_idx} out of range for {ncols} columns"
            )
    if ncols < 2:
        raise CsvFormatError(f"{path}: need at least one covariate besides the response")

    data = np.asarray(rows, dtype=float)
    keep = [j for j in range(ncols) if j != resp_idx]
    return Dataset(
        X=data[:, keep],
        Y=data[:, [resp_idx]],
        column_names=[names[j] for j in keep] if names else None,
        response_name=(names[resp_idx] if names else f"col{resp_idx}"),
    )


def _fmt(v: float) -> str:
    # repr() of a Python float is the shortest exact round-trip form.
    return repr(float(v))


def write_matrix_csv(path: Path, header: list[str], rows: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in np.atleast_2d(rows):
            writer.writerow([_fmt(v) for v in row])


def write_manifest(path: Path, entries: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in entries.items():
            fh.write(f"{key}={value}\n")


def _trace_str(values: list[float]) -> str:
    return ",".join(_fmt(v) for v in values)


# ---------------------------------------------------------------------------
# Subcommands


def _parse_continuation(text: str) -> Continuation | None:
    if text.lower() == "none":
        return None
    parts = text.split(":")
    if len(parts) != 2:
        raise InvalidConfigError(f"--continuation expects START:END or 'none', got {text!r}")
    try:
        start, end = float(parts[0]), float(parts[1])
    except ValueError:
        raise InvalidConfigError(f"--continuation expects numbers, got {text!r}") from None
    return Continuation(sigma_sq_start=start, sigma_sq_end=end)


def cmd_fit(args: argparse.Namespace) -> int:
    data = read_csv(args.data, args.response)
    m = data.m
    if not (1 <= args.dim < m):
        print(f"error: --dim must satisfy 1 <= dim < {m} (covariate count), got {args.dim}",
              file=sys.stderr)
        return EXIT_BAD_DIM

    continuation = _parse_continuation(args.continuation)
    scale_x = args.kernel_scale_x
    if scale_x is None:
        scale_x = continuation.sigma_sq_end if continuation is not None else 10.0
    kcfg = KernelConfig(scale_x=scale_x, scale_y=args.kernel_scale_y, continuation=continuation)
    ocfg = OptimConfig(iterations=args.iters, seed=args.seed, restarts=args.restarts)

    started = time.perf_counter()
    fitted = standardize(data, target_sd=args.target_sd)
    result = fit_kdr(fitted, args.dim, kcfg, args.epsilon, ocfg)
    B_orig = unstandardize_subspace(result.B_hat, fitted.standardization)
    elapsed = time.perf_counter() - started

    Z = data.X @ B_orig
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    dir_names = [f"dir_{i + 1}" for i in range(args.dim)]
    write_matrix_csv(out / "basis.csv", dir_names, B_orig)
    write_matrix_csv(
        out / "projected.csv",
        [f"z_{i + 1}" for i in range(args.dim)] + [data.response_name or "response"],
        np.column_stack([Z, data.Y]),
    )
    write_manifest(
        out / "manifest.txt",
        {
            "command": "fit",
            "data": args.data,
            "response": args.response,
            "dim": args.dim,
            "epsilon": _fmt(args.epsilon),
            "kernel_scale_x": _fmt(scale_x),
            "kernel_scale_y": _fmt(kcfg.response_scale),
            "continuation": args.continuation,
            "iters": args.iters,
            "target_sd": _fmt(args.target_sd),
            "seed": args.seed,
            "restarts": args.restarts,
            "covariates": ",".join(data.column_names or [f"col{i}" for i in range(m)]),
            "n": data.n,
            "m": m,
            "final_objective": _fmt(result.final_value),
            "converged": result.converged_flag,
            "accepted_steps": len(result.objective_trace),
            "objective_trace": _trace_str(result.objective_trace),
            "sigma_sq_trace": _trace_str(result.sigma_sq_trace),
        },
    )
    if not args.no_figures:
        from .plots import projection_figure

        projection_figure(Z, data.Y, str(out / "projection.png"),
                          response_name=data.response_name or "response")

    print(f"fit: n={data.n} m={m} dim={args.dim} final objective {result.final_value:.6g} "
          f"({elapsed:.1f}s)")
    print(f"fit: outputs in {out}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    methods = [m.strip().lower() for m in args.methods.split(",") if m.strip()]
    for method in methods:
        if method not in METHODS:
            print(f"error: unknown method {method!r}; expected {','.join(METHODS)}",
                  file=sys.stderr)
            return EXIT_BAD_INPUT

    if args.params:
        try:
            params = [float(p) for p in args.params.split(",")]
        except ValueError:
            print(f"error: --params expects comma-separated numbers, got {args.params!r}",
                  file=sys.stderr)
            return EXIT_BAD_INPUT
    else:
        params = list(BENCHMARK_PARAMETERS[args.regression])

    slice_grid = tuple(int(h) for h in args.slices_grid.split(","))
    config = BenchConfig(
        base_seed=args.seed,
        epsilon=args.epsilon,
        iterations=args.iters,
        restarts=args.restarts,
        slice_grid=slice_grid,
    )

    results = []
    for method in methods:
        for parameter in params:
            result = run_benchmark(args.regression, parameter, method, args.reps, config)
            results.append(result)
            sd_text = f"{result.sd:.3f}" if result.sd is not None else "-"
            print(f"bench: {method:>4} {args.regression} param={parameter:g} "
                  f"mean={result.mean:.3f} sd={sd_text} "
                  f"failures={result.failures} ({result.wall_time_s:.1f}s)")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results_path = out / "results.csv"
    with open(results_path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# benchmark regression {args.regression}, seed {args.seed}, "
                 f"{args.reps} replications\n")
        note = REFERENCE_NOTES.get(args.regression)
        if note:
            fh.write(f"# {note}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["method", "regression", "parameter", "reps", "mean", "sd", "failures", "wall_time_s"]
        )
        for r in results:
            writer.writerow(
                [
                    r.method,
                    r.regression,
                    f"{r.parameter:g}",
                    r.replications,
                    f"{r.mean:.6f}",
                    "" if r.sd is None else f"{r.sd:.6f}",
                    r.failures,
                    f"{r.wall_time_s:.3f}" if args.timings else "",
                ]
            )

    manifest = {
        "command": "bench",
        "regression": args.regression,
        "methods": ",".join(methods),
        "parameters": ",".join(f"{p:g}" for p in params),
        "reps": args.reps,
        "seed": args.seed,
        "epsilon": _fmt(args.epsilon),
        "iters": args.iters,
        "restarts": args.restarts,
        "slices_grid": args.slices_grid,
        "standardize_sd": config.standardize_sd,
    }
    for r in results:
        if r.slices_used is not None:
            manifest[f"slices_used.{r.method}.{r.parameter:g}"] = r.slices_used
        if args.timings:
            manifest[f"wall_time_s.{r.method}.{r.parameter:g}"] = f"{r.wall_time_s:.3f}"
    write_manifest(out / "manifest.txt", manifest)

    if not args.no_figures:
        from .plots import benchmark_figure

        benchmark_figure(results, str(out / "bench.png"))

    print(f"bench: outputs in {out}")
    return EXIT_OK


def cmd_probe(args: argparse.Namespace) -> int:
    scale = args.kernel_scale_x if args.kernel_scale_x is not None else 2.0
    rows = []
    ordered = 0
    for trial in range(args.trials):
        data = generate(GenSpec(regression=args.regression, noise_or_a=args.noise,
                                seed=args.seed + trial))
        fitted = standardize(data, target_sd=1.0)
        truth = standardize_subspace(data.true_B, fitted.standardization)
        rng = np.random.default_rng([args.seed, trial])
        rand = random_frame(fitted.m, truth.shape[1], rng)
        report = monotonicity_probe(fitted, truth, rand, scale, args.epsilon)
        ordered += report.ordered
        rows.append((trial, report.contrast_containing, report.contrast_random,
                     int(report.ordered)))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "probe.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "contrast_containing", "contrast_random", "ordered"])
        for trial, c_cont, c_rand, flag in rows:
            writer.writerow([trial, _fmt(c_cont), _fmt(c_rand), flag])
    write_manifest(
        out / "manifest.txt",
        {
            "command": "probe",
            "regression": args.regression,
            "noise": _fmt(args.noise),
            "trials": args.trials,
            "seed": args.seed,
            "epsilon": _fmt(args.epsilon),
            "kernel_scale_x": _fmt(scale),
            "ordered": ordered,
        },
    )
    if not args.no_figures:
        from .plots import probe_figure

        gaps = np.array([c_rand - c_cont for _, c_cont, c_rand, _ in rows])
        probe_figure(gaps, str(out / "probe.png"))

    print(f"probe: containing frame scored lower in {ordered}/{args.trials} trials")
    print(f"probe: outputs in {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdr",
        description="Kernel dimension reduction: fit CSV data, benchmark against "
                    "classical estimators, probe the contrast ordering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="estimate a projection frame from a CSV file")
    fit.add_argument("--data", required=True, help="input CSV path")
    fit.add_argument("--response", required=True,
                     help="response column (header name or 0-based index)")
    fit.add_argument("--dim", type=int, required=True, help="projection dimension d")
    fit.add_argument("--epsilon", type=float, default=0.1, help="regularization (default 0.1)")
    fit.add_argument("--kernel-scale-x", type=float, default=None,
                     help="covariate kernel scale (default: continuation end)")
    fit.add_argument("--kernel-scale-y", type=float, default=None,
                     help="response kernel scale (default: same as covariate scale)")
    fit.add_argument("--continuation", default="100:10",
                     help="scale annealing START:END, or 'none' (default 100:10)")
    fit.add_argument("--iters", type=int, default=100, help="iteration budget (default 100)")
    fit.add_argument("--target-sd", type=float, default=5.0,
                     help="standardize covariates to this sample SD (default 5.0)")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--restarts", type=int, default=0,
                     help="extra random initial frames (default 0)")
    fit.add_argument("--out", default="kdr-fit", help="output directory")
    fit.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    fit.set_defaults(func=cmd_fit)

    bench = sub.add_parser("bench", help="run the synthetic benchmark suite")
    bench.add_argument("--regression", required=True, choices=("A", "B", "C"))
    bench.add_argument("--methods", default="kdr,sir,save,phd",
                       help="comma-separated subset of kdr,sir,save,phd")
    bench.add_argument("--reps", type=int, default=20, help="replications per cell (default 20)")
    bench.add_argument("--params", default=None,
                       help="comma-separated noise/offset values (default: the standard three)")
    bench.add_argument("--seed", type=int, default=0, help="base seed; replication r uses seed+r")
    bench.add_argument("--epsilon", type=float, default=0.1)
    bench.add_argument("--iters", type=int, default=100)
    bench.add_argument("--restarts", type=int, default=2,
                       help="extra random starts per KDR fit (default 2)")
    bench.add_argument("--slices-grid", default="4,5,8,10,20",
                       help="slice counts tried for SIR/SAVE (default 4,5,8,10,20)")
    bench.add_argument("--out", default="kdr-bench", help="output directory")
    bench.add_argument("--timings", action="store_true",
                       help="populate the wall_time_s column in results.csv (off by default "
                            "so identical seeds give byte-identical files)")
    bench.add_argument("--no-figures", action="store_true")
    bench.set_defaults(func=cmd_bench)

    probe = sub.add_parser("probe", help="check the contrast orders frames as expected")
    probe.add_argument("--regression", default="A", choices=("A", "B", "C"))
    probe.add_argument("--noise", type=float, default=0.1, help="noise/offset parameter")
    probe.add_argument("--trials", type=int, default=100)
    probe.add_argument("--seed", type=int, default=0)
    probe.add_argument("--epsilon", type=float, default=0.1)
    probe.add_argument("--kernel-scale-x", type=float, default=None,
                       help="kernel scale for both frames (default 2.0)")
    probe.add_argument("--out", default="kdr-probe", help="output directory")
    probe.add_argument("--no-figures", action="store_true")
    probe.set_defaults(func=cmd_probe)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ConstantColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTANT_COLUMN
    except KdrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
