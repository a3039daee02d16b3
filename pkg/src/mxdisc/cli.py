"""Command-line driver: ``mxdisc {generate,detect,evaluate,sweep}``.

All subcommands read a JSON config (``--config``) carrying a ``version``
field; unknown keys are rejected.  Exit codes: 0 success, 1 usage or
configuration error, 2 a degenerate result (no discriminative structure).
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import itertools
import json
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import BenchmarkConfig, generate_instance, read_truth, write_truth
from .errors import ConfigError, DimensionError, ValidationError
from .model_selection import DimensionSpec
from .multiplex import read_edgelist, write_edgelist
from .pipeline import MODES, SolverParams, detect, planted_dims, score_detection, truth_from_instance

CONFIG_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2

SWEEP_COLUMNS = [
    "experiment", "parameter", "seed", "method", "alpha", "beta", "gamma",
    "auc_mean", "nmi", "runtime_ms", "error",
]


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# config handling


def _load(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    if doc.get("version") != CONFIG_VERSION:
        raise ConfigError(f"config 'version' must be {CONFIG_VERSION}")
    return doc


def _check_keys(doc: dict, allowed: set, where: str):
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _solver_params(doc: dict) -> SolverParams:
    allowed = {f.name for f in dataclasses.fields(SolverParams)}
    _check_keys(doc, allowed, "solver")
    return SolverParams(**doc)


def _dims(value) -> DimensionSpec | str:
    if value in ("auto", "planted"):
        return value
    if isinstance(value, dict):
        _check_keys(value, {"kt1", "kt2", "kc"}, "dimensions")
        return DimensionSpec(**value)
    raise ConfigError("dimensions must be 'auto', 'planted' or {kt1, kt2, kc}")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([[_fmt(v) for v in row] for row in rows])
    path.write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def _write_json(path: Path, doc):
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8", newline="\n")


def _outdir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {out}: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# generate


def cmd_generate(args) -> int:
    doc = _load(args.config)
    _check_keys(doc, {"version", "benchmark"}, "generate config")
    bench = dict(doc.get("benchmark", {}))
    if args.seed is not None:
        bench["seed"] = args.seed
    cfg = BenchmarkConfig.from_dict(bench)
    out = _outdir(args.out)
    resolved = {"version": CONFIG_VERSION, "benchmark": cfg.to_dict()}
    stamp = "config " + json.dumps(resolved, sort_keys=True)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = generate_instance(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    files = {
        "net1": write_edgelist(inst.net1, out / "net1.edges", [stamp]).name,
        "net2": write_edgelist(inst.net2, out / "net2.edges", [stamp]).name,
        "truth": write_truth(inst, out / "truth.json").name,
    }
    _write_json(out / "manifest.json", {"files": files, "config": resolved, "mxdisc_version": __version__})
    for key, name in files.items():
        print(f"{key}\t{out / name}")
    print(f"manifest\t{out / 'manifest.json'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# detect


def _resolve_input(base: Path, p: str) -> Path:
    path = Path(p)
    return path if path.is_absolute() else base / path


def cmd_detect(args) -> int:
    doc = _load(args.config)
    _check_keys(
        doc,
        {"version", "mode", "inputs", "solver", "dimensions", "model_selection", "seeds"},
        "detect config",
    )
    mode = doc.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")
    inputs = doc.get("inputs") or {}
    _check_keys(inputs, {"net1", "net2"}, "inputs")
    if set(inputs) != {"net1", "net2"}:
        raise ConfigError("inputs needs both 'net1' and 'net2'")
    params = _solver_params(doc.get("solver", {}))
    dims = _dims(doc.get("dimensions", "auto"))
    if dims == "planted":
        raise ConfigError("detect needs 'auto' or explicit dimensions")
    ms = doc.get("model_selection", {})
    _check_keys(ms, {"k_max", "merge_threshold"}, "model_selection")
    seeds = [args.seed] if args.seed is not None else doc.get("seeds", [0])
    if not seeds:
        raise ConfigError("seeds must be non-empty")

    base = Path(args.config).resolve().parent
    net1 = read_edgelist(_resolve_input(base, inputs["net1"]))
    net2 = read_edgelist(_resolve_input(base, inputs["net2"]))
    out = _outdir(args.out)
    status = EXIT_OK
    for seed in seeds:
        det = detect(
            net1, net2, mode, None if dims == "auto" else dims, params, seed,
            k_max=ms.get("k_max"), merge_threshold=ms.get("merge_threshold", 0.5),
        )
        resolved = dict(doc, seeds=[seed])
        resolved["inputs"] = {k: str(_resolve_input(base, v)) for k, v in inputs.items()}
        resolved["solver"] = dataclasses.asdict(params)
        _write_detection(out / f"seed_{seed}", det, resolved, args.emit_embeddings)
        if det.degenerate:
            print(f"warning: seed {seed}: degenerate dimensions {det.dims.as_dict()}", file=sys.stderr)
            status = EXIT_DEGENERATE
        print(f"seed {seed}\t{out / f'seed_{seed}'}")
    return status


def _write_detection(d: Path, det, resolved: dict, emit_embeddings: bool):
    d.mkdir(parents=True, exist_ok=True)
    for g, (scores, lab) in enumerate(zip(det.scores, det.labelings), start=1):
        rows = [(i, float(s), int(f)) for i, (s, f) in enumerate(zip(scores, lab.is_discriminative))]
        _write_csv(d / f"labels_group{g}.csv", ["node", "score", "is_discriminative"], rows)
    for g, part in enumerate(det.partitions, start=1):
        _write_csv(d / f"partition_group{g}.csv", ["node", "label"], list(enumerate(part.tolist())))
    for g, parts in enumerate(det.layer_partitions, start=1):
        header = ["node"] + [f"layer{l}" for l in range(parts.shape[0])]
        rows = [[i, *parts[:, i].tolist()] for i in range(parts.shape[1])]
        _write_csv(d / f"layer_partitions_group{g}.csv", header, rows)
    if det.objective_trace:
        _write_csv(d / "objective_trace.csv", ["iteration", "objective"], list(enumerate(det.objective_trace)))
    if emit_embeddings and det.embeddings:
        np.savez(d / "embeddings.npz", **det.embeddings)
    _write_json(d / "metadata.json", {
        "config": resolved,
        "seed": det.seed,
        "mode": det.mode,
        "dimensions": det.dims.as_dict(),
        "converged": det.converged,
        "degenerate": det.degenerate,
        "iterations": max(len(det.objective_trace) - 1, 0),
        "mxdisc_version": __version__,
    })


# ---------------------------------------------------------------------------
# evaluate


def _read_columns(path: Path) -> dict[str, list[str]]:
    with path.open(encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [r[k] for r in rows] for k in (rows[0].keys() if rows else [])}


def load_detection(d: Path):
    """Rebuild the scorable parts of a detection from a ``seed_*`` directory."""
    from .pipeline import Detection

    meta = json.loads((d / "metadata.json").read_text(encoding="utf-8"))
    det = Detection(meta["mode"], DimensionSpec(**{k: meta["dimensions"][k] for k in ("kt1", "kt2", "kc")}), meta["seed"])
    for g in (1, 2):
        f = d / f"labels_group{g}.csv"
        if f.exists():
            det.scores.append(np.asarray(_read_columns(f)["score"], dtype=float))
        f = d / f"partition_group{g}.csv"
        if f.exists():
            det.partitions.append(np.asarray(_read_columns(f)["label"], dtype=int))
        f = d / f"layer_partitions_group{g}.csv"
        if f.exists():
            cols = _read_columns(f)
            layers = sorted((k for k in cols if k.startswith("layer")), key=lambda k: int(k[5:]))
            det.layer_partitions.append(np.asarray([cols[k] for k in layers], dtype=int))
    return det, meta


def evaluate_dir(detect_dir: Path, truth_path: Path) -> list[dict]:
    truth = read_truth(truth_path)
    runs = sorted(
        (p for p in Path(detect_dir).glob("seed_*") if p.is_dir()),
        key=lambda p: int(p.name.split("_", 1)[1]),
    )
    if not runs:
        raise CliError(f"no seed_* directories under {detect_dir}")
    records = []
    for run in runs:
        det, meta = load_detection(run)
        n = len(truth["group1"]["reference"])
        sizes = [len(s) for s in det.scores] + [len(p) for p in det.partitions]
        if any(s != n for s in sizes):
            raise DimensionError(f"{run}: node count does not match truth ({n})")
        rec = score_detection(det, truth)
        rec.update(seed=det.seed, mode=det.mode, nmi_normalization="arithmetic",
                   config=meta["config"], truth_config=truth["config"])
        records.append(rec)
    agg = {"seed": "aggregate", "n_runs": len(records)}
    for key in ("nmi", "auc_group1", "auc_group2", "auc_mean"):
        vals = [r[key] for r in records if r[key] is not None]
        agg[key] = float(np.mean(vals)) if vals else None
        agg[f"{key}_std"] = float(np.std(vals)) if vals else None
    records.append(agg)
    return records


def cmd_evaluate(args) -> int:
    detect_dir, truth = args.detect_dir, args.truth
    if args.config:
        doc = _load(args.config)
        _check_keys(doc, {"version", "detect_dir", "truth"}, "evaluate config")
        base = Path(args.config).resolve().parent
        detect_dir = detect_dir or str(_resolve_input(base, doc.get("detect_dir", "")))
        truth = truth or str(_resolve_input(base, doc.get("truth", "")))
    if not detect_dir or not truth:
        raise CliError("evaluate needs a detect output directory and a truth file")
    records = evaluate_dir(Path(detect_dir), Path(truth))
    out = _outdir(args.out)
    with (out / "metrics.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    agg = records[-1]
    print(f"runs={agg['n_runs']} nmi={_fmt(agg['nmi'])} auc_mean={_fmt(agg['auc_mean'])}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _as_list(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def parse_sweep(doc: dict):
    _check_keys(doc, {"version", "experiments", "methods", "solver", "dimensions"}, "sweep config")
    experiments = doc.get("experiments")
    if not experiments:
        raise ConfigError("sweep needs a non-empty 'experiments' list")
    for exp in experiments:
        _check_keys(exp, {"name", "vary", "values", "base", "repetitions", "seed_offset"}, "experiment")
        for key in ("name", "vary", "values"):
            if key not in exp:
                raise ConfigError(f"experiment missing '{key}'")
        if exp["vary"] not in {f.name for f in dataclasses.fields(BenchmarkConfig)} - {"seed"}:
            raise ConfigError(f"cannot vary {exp['vary']!r}")
        BenchmarkConfig.from_dict(dict(exp.get("base", {})))
    methods = doc.get("methods", ["mx-dsc", "mx-dcsc"])
    for m in methods:
        if m not in MODES:
            raise ConfigError(f"unknown method {m!r}")
    solver = dict(doc.get("solver", {}))
    _check_keys(solver, {f.name for f in dataclasses.fields(SolverParams)}, "solver")
    grid_keys = ("alpha", "beta", "gamma")
    fixed = {k: v for k, v in solver.items() if k not in grid_keys}
    grid = [
        SolverParams(**fixed, alpha=a, beta=b, gamma=g)
        for a, b, g in itertools.product(*(_as_list(solver.get(k, 0.5)) for k in grid_keys))
    ]
    dims = _dims(doc.get("dimensions", "planted"))
    return experiments, methods, grid, dims


def _sweep_task(task):
    exp_name, value, seed, bench, methods, grid, dims, timing = task
    rows = []
    try:
        cfg = BenchmarkConfig.from_dict(bench)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            inst = generate_instance(cfg)
        truth = truth_from_instance(inst)
        spec = planted_dims(cfg) if dims == "planted" else (None if dims == "auto" else dims)
    except (ConfigError, ValidationError, DimensionError) as exc:
        return [[exp_name, value, seed, m, p.alpha, p.beta, p.gamma, None, None, None, str(exc)]
                for m in methods for p in grid]
    for method in methods:
        for p in grid:
            t0 = time.perf_counter()
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    det = detect(inst.net1, inst.net2, method, spec, p, seed)
                rec = score_detection(det, truth)
                err = None
            except (ConfigError, ValidationError, DimensionError, np.linalg.LinAlgError) as exc:
                rec, err = {"auc_mean": None, "nmi": None}, str(exc)
            ms = 1000.0 * (time.perf_counter() - t0) if timing else None
            rows.append([exp_name, value, seed, method, p.alpha, p.beta, p.gamma,
                         rec["auc_mean"], rec["nmi"], ms, err])
    return rows


def _mean(vals):
    vals = [v for v in vals if v is not None]
    return float(np.mean(vals)) if vals else None


def run_sweep(doc: dict, out: Path, jobs: int = 1, seed_base: int | None = None, timing: bool = False):
    experiments, methods, grid, dims = parse_sweep(doc)
    tasks = []
    for exp in experiments:
        offset = seed_base if seed_base is not None else exp.get("seed_offset", 0)
        for value in exp["values"]:
            for rep in range(exp.get("repetitions", 1)):
                bench = dict(exp.get("base", {}), **{exp["vary"]: value, "seed": offset + rep})
                tasks.append((exp["name"], value, offset + rep, bench, methods, grid, dims, timing))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_sweep_task, tasks))
    else:
        chunks = [_sweep_task(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]

    aggregates, table = [], {}
    key = lambda r: (r[0], r[1], r[3])
    for exp in experiments:
        for value in exp["values"]:
            for method in methods:
                combos = []
                for p in grid:
                    sel = [r for r in rows if key(r) == (exp["name"], value, method)
                           and (r[4], r[5], r[6]) == (p.alpha, p.beta, p.gamma)]
                    agg = [exp["name"], value, "mean", method, p.alpha, p.beta, p.gamma,
                           _mean(r[7] for r in sel), _mean(r[8] for r in sel),
                           _mean(r[9] for r in sel), None]
                    aggregates.append(agg)
                    combos.append(agg)
                best = max(combos, key=lambda a: -np.inf if a[7] is None else a[7])
                if len(grid) > 1:
                    aggregates.append([exp["name"], value, "best", *best[3:]])
                table[(exp["name"], value, method)] = best

    results = out / "results.csv"
    _write_csv(results, SWEEP_COLUMNS, rows + aggregates)
    header = ["experiment", "parameter"] + [f"{m}_auc" for m in methods] + [f"{m}_nmi" for m in methods]
    trows = []
    for exp in experiments:
        for value in exp["values"]:
            best = [table[(exp["name"], value, m)] for m in methods]
            trows.append([exp["name"], value] + [b[7] for b in best] + [b[8] for b in best])
    _write_csv(out / "table.csv", header, trows)
    _write_json(out / "sweep_config.json", {"config": doc, "jobs_independent": True,
                                            "seed_base": seed_base, "timing": timing,
                                            "mxdisc_version": __version__})
    return rows, aggregates


def cmd_sweep(args) -> int:
    doc = _load(args.config)
    out = _outdir(args.out)
    rows, aggregates = run_sweep(doc, out, args.jobs, args.seed, args.timing)
    failed = sum(1 for r in rows if r[10])
    print(f"{len(rows)} rows, {len(aggregates)} aggregates, {failed} failed -> {out / 'results.csv'}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mxdisc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="JSON config file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed(s)")

    p = sub.add_parser("generate", help="write a benchmark instance")
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("detect", help="run a detection method on two edge-list files")
    common(p)
    p.add_argument("--emit-embeddings", action="store_true", help="also write embeddings.npz")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("evaluate", help="score detect outputs against a truth file")
    common(p, config_required=False)
    p.add_argument("--detect-dir", help="output directory of a detect run")
    p.add_argument("--truth", help="ground-truth JSON written by generate")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="run benchmark grids and tabulate AUC/NMI")
    common(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--timing", action="store_true",
                   help="fill runtime_ms (makes results.csv run-dependent)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigError, ValidationError, DimensionError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
