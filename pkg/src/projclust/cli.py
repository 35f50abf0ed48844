"""Command-line entry point: ``projclust generate|cluster|verify|bench``.

Exit codes: 0 success, 1 usage error, 2 I/O or malformed input, 3
numerical failure. Wall-clock timings are only recorded with
``--timings`` so that default runs are byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import sys
import warnings

import numpy as np

from . import io
from .evaluation import (
    accuracy,
    align_to_truth,
    center_error_report,
    cross_term_check,
    deviation_check,
    frobenius_bound_check,
    spectral_bound_report,
    spectral_constant,
)
from .linalg import DEFAULT_TOL, ConvergenceError
from .model import (
    DataMatrix,
    Family,
    MixtureParams,
    SigmaFloorWarning,
    block_centers,
    sample_mixture,
    separation_report,
)
from .pipeline import cluster_run

EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 1, 2, 3

BENCH_COLUMNS = [
    "n", "m", "k", "sigma_sq", "family", "design", "seed",
    "accuracy", "separation_margin", "svd_ms", "kmeans_ms", "project_ms",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _weights(text):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weights {text!r}")


def build_params(n, k, sigma_sq, weights=None, family="bernoulli", design="blocks",
                 level=None, seed=0) -> MixtureParams:
    """Mixture parameters from command-line style settings.

    ``design="blocks"`` puts center ``r`` at ``level`` (default
    ``sigma_sq``) on the ``r``-th disjoint coordinate block;
    ``design="random"`` draws every coordinate uniformly from
    ``[0, sigma_sq]``.
    """
    if weights is None:
        weights = np.full(k, 1.0 / k)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (k,):
        raise UsageError(f"expected {k} weights, got {weights.size}")
    weights = weights / weights.sum()
    if design == "blocks":
        centers = block_centers(k, n, sigma_sq if level is None else level)
    elif design == "random":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(2**32,))))
        centers = sigma_sq * rng.random((k, n))
    else:
        raise UsageError(f"unknown design {design!r}")
    return MixtureParams(centers, weights, sigma_sq, Family(family))


def _params_from_args(args) -> MixtureParams:
    if getattr(args, "params_in", None):
        return io.read_params(args.params_in)
    for name in ("n", "k"):
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required without a params file")
    try:
        return build_params(args.n, args.k, args.sigma_sq, args.weights, args.family,
                            args.design, args.level, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _clean(obj):
    """Make numpy scalars and arrays JSON serialisable."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def _separation_dict(params, m, c):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SigmaFloorWarning)
        rep = separation_report(params, m, c)
    return {
        "pair_distances_sq": rep.pair_distances_sq,
        "required_bound": rep.required_bound,
        "c": rep.c,
        "w_min": rep.w_min,
        "margin": rep.margin,
        "satisfied": rep.satisfied,
        "sigma_floor_ok": rep.sigma_floor_ok,
    }


def cmd_generate(args):
    params = _params_from_args(args)
    if args.m is None:
        raise UsageError("--m is required")
    try:
        data = sample_mixture(params, args.m, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    labels_path = args.labels or args.out + ".labels"
    params_path = args.params or args.out + ".params"
    io.write_matrix(args.out, data.values)
    io.write_labels(labels_path, data.labels)
    io.write_params(params_path, params)
    return 0


def _instance_from_files(args):
    A = io.read_matrix(args.infile)
    params = io.read_params(args.params) if args.params else None
    labels = io.read_labels(args.labels) if args.labels else None
    if labels is not None and labels.shape[0] != A.shape[1]:
        raise ValueError("labels file length does not match the matrix")
    expected = None
    if labels is not None and params is not None:
        if params.n != A.shape[0]:
            raise ValueError("params dimension does not match the matrix")
        expected = params.centers[labels].T
    return DataMatrix(A, labels, expected), params


def cmd_cluster(args):
    data, params = _instance_from_files(args)
    k = args.k if args.k is not None else (params.k if params is not None else None)
    if k is None:
        raise UsageError("--k is required without a params file")
    run = cluster_run(data.values, k, args.seed, args.tol)
    io.write_labels(args.out, run.clustering.assignment)
    report = {
        "config": _config(args),
        "k": k,
        "seed": args.seed,
        "estimated_centers": run.theta.centers,
        "estimated_centers_other_half": run.nu.centers,
        "reports": [],
        "accuracy": None,
        "separation": None,
        "timings_ms": run.timings_ms if args.timings else {},
    }
    if data.labels is not None:
        report["accuracy"] = accuracy(run.clustering, data.labels, k).accuracy
    if params is not None and k >= 2:
        report["separation"] = _separation_dict(params, data.m, args.c)
    io.write_json(args.report or args.out + ".json", _clean(report))
    return 0


def verify_instance(data: DataMatrix, params: MixtureParams, seed: int, tol: float = DEFAULT_TOL,
                    c_max: float = 4.0, deviation_threshold: float = 0.01):
    """All bound checks for one instance with ground truth."""
    run = cluster_run(data.values, params.k, seed, tol)
    c_hat = spectral_constant(data, params.sigma_sq)
    theta = align_to_truth(run.theta, params)
    nu = align_to_truth(run.nu, params)
    reports = [
        spectral_bound_report(data, params.sigma_sq, c_max),
        frobenius_bound_check(data, params.k),
    ]
    if params.k >= 2:
        reports.append(deviation_check(data, deviation_threshold))
    reports.append(center_error_report(theta, params, params, data.m, c_hat))
    reports.append(cross_term_check(data, theta, nu, run.plan, params, c_hat))
    acc = accuracy(run.clustering, data.labels, params.k).accuracy
    return reports, acc


def cmd_verify(args):
    instances = []
    if args.infile:
        data, params = _instance_from_files(args)
        if params is None or data.labels is None:
            raise UsageError("verify needs --labels and --params with --in")
        instances.append((args.seed, data, params))
    else:
        params = _params_from_args(args)
        if args.m is None:
            raise UsageError("--m is required")
        for i in range(args.seeds):
            s = args.seed + i
            instances.append((s, sample_mixture(params, args.m, s), params))
    runs = []
    counts: dict[str, list[int]] = {}
    for s, data, params in instances:
        reports, acc = verify_instance(data, params, s, args.tol, args.c_max,
                                       args.deviation_threshold)
        runs.append({"seed": s, "accuracy": acc, "reports": [r.as_dict() for r in reports]})
        for r in reports:
            counts.setdefault(r.name, []).append(int(r.satisfied))
    summary = {}
    for name, hits in counts.items():
        freq = sum(hits) / len(hits)
        need = 1.0 if name == "frobenius_rank_k" else args.min_frequency
        summary[name] = {"frequency": freq, "required": need, "passed": freq >= need}
    out = {
        "config": _config(args),
        "runs": runs,
        "summary": summary,
        "passed": all(v["passed"] for v in summary.values()),
    }
    text = json.dumps(_clean(out), indent=2, sort_keys=True) + "\n"
    if args.out:
        io.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _bench_rows(grid, seeds, base_seed, tol, timings):
    for entry in grid:
        params = build_params(
            entry["n"], entry["k"], entry.get("sigma_sq", 0.5), entry.get("weights"),
            entry.get("family", "bernoulli"), entry.get("design", "blocks"),
            entry.get("level"), base_seed,
        )
        m = entry["m"]
        for i in range(seeds):
            s = base_seed + i
            data = sample_mixture(params, m, s)
            run = cluster_run(data.values, params.k, s, tol)
            acc = accuracy(run.clustering, data.labels, params.k).accuracy
            margin = _separation_dict(params, m, entry.get("c", 1.0))["margin"] if params.k >= 2 else None
            t = run.timings_ms if timings else {}
            yield {
                "n": params.n, "m": m, "k": params.k, "sigma_sq": params.sigma_sq,
                "family": params.family.value, "design": entry.get("design", "blocks"),
                "seed": s, "accuracy": acc, "separation_margin": margin,
                "svd_ms": t.get("svd"), "kmeans_ms": t.get("kmeans"),
                "project_ms": t.get("project"),
            }


def cmd_bench(args):
    if args.grid:
        with open(args.grid) as fh:
            grid = json.load(fh)
        if not isinstance(grid, list):
            raise ValueError("grid file must hold a JSON list of configurations")
    else:
        grid = []
    rows = list(_bench_rows(grid, args.seeds, args.seed, args.tol, args.timings))
    if args.format == "json":
        text = json.dumps(_clean({"config": _config(args), "rows": rows}),
                          indent=2, sort_keys=True) + "\n"
    else:
        buf = _stdio.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
        text = buf.getvalue()
    if args.out:
        io.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _add_model_args(p):
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--sigma-sq", type=float, default=0.5)
    p.add_argument("--weights", type=_weights, default=None,
                   help="comma separated mixing weights (default: equal)")
    p.add_argument("--family", choices=[f.value for f in Family], default="bernoulli")
    p.add_argument("--design", choices=["blocks", "random"], default="blocks")
    p.add_argument("--level", type=float, default=None,
                   help="block level for --design blocks (default: sigma_sq)")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="projclust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--c", type=float, default=1.0,
                        help="constant in the separation bound")
    common.add_argument("--timings", action="store_true",
                        help="record wall-clock timings (breaks byte reproducibility)")

    p = sub.add_parser("generate", parents=[common], help="sample a synthetic instance")
    _add_model_args(p)
    p.add_argument("--in", dest="params_in", help="params file to sample from")
    p.add_argument("--out", required=True, help="matrix file to write")
    p.add_argument("--labels", help="labels file (default: OUT.labels)")
    p.add_argument("--params", help="params file (default: OUT.params)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("cluster", parents=[common], help="cluster a matrix file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--out", required=True, help="predicted labels file")
    p.add_argument("--labels", help="true labels, enables accuracy")
    p.add_argument("--params", help="params file, enables the separation report")
    p.add_argument("--report", help="JSON report path (default: OUT.json)")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("verify", parents=[common], help="run the bound checks")
    _add_model_args(p)
    p.add_argument("--in", dest="infile", help="matrix file (needs --labels and --params)")
    p.add_argument("--labels")
    p.add_argument("--params")
    p.add_argument("--seeds", type=int, default=1, help="number of generated instances")
    p.add_argument("--c-max", type=float, default=4.0)
    p.add_argument("--deviation-threshold", type=float, default=0.01)
    p.add_argument("--min-frequency", type=float, default=0.95)
    p.add_argument("--out", help="JSON report path (default: stdout)")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_verify, params_in=None)

    p = sub.add_parser("bench", parents=[common], help="accuracy and runtime over a grid")
    p.add_argument("--grid", help="JSON list of configurations")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"projclust: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"projclust: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"projclust: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
