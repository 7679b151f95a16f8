"""Command-line entry point: ``sominit {generate,train,fvu,experiment,report}``.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._atomic import atomic_write_text
from .config import ConfigError, ExperimentConfig, load_config, parse_value
from .datasets import DEFAULT_N, FAMILIES, ShapeSpec, generate, load_csv, save_csv
from .errors import SomInitError
from .experiment import run_ensemble
from .fvu import fvu_line, fvu_polyline
from .geom import first_principal_component
from .initialization import pci_grid, ri_sample
from .report import build_report, dumps_report, histogram_csv, histogram_svg, summary_csv, summary_text
from .som import DEFAULT_H_MAX, Chain, NeighborhoodSpec, train

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _params(pairs):
    out = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"--param expects KEY=VALUE, got {pair!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--param {key}: not a number: {value!r}") from None
    return out


def _dump_json(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_generate(args):
    try:
        spec = ShapeSpec(args.shape, n=args.n, noise_sigma=args.noise, params=_params(args.param))
        spec.resolved_params()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ds = generate(spec, args.seed, equispaced=args.equispaced)
    save_csv(ds, args.output)
    print(f"wrote {len(ds)} points ({ds.name}, seed {args.seed}) to {args.output}")
    return EXIT_OK


def _read_chain(path):
    with open(path, encoding="utf-8") as fh:
        return Chain.from_json(fh.read())


def cmd_train(args):
    data = load_csv(args.data)
    if args.init == "pci":
        initial = pci_grid(data, args.k)
    else:
        initial = ri_sample(data, args.k, args.seed, replace=args.replace)
    res = train(data, initial, NeighborhoodSpec(args.h_max), record_history=bool(args.history))
    atomic_write_text(args.output, res.final.to_json() + "\n")
    if args.history:
        atomic_write_text(args.history, _dump_json([c.to_dict() for c in res.history]))
    rep = fvu_polyline(data, res.final)
    print(f"steps={res.steps} converged={str(res.converged).lower()} fvu={rep.percent:.2f}%")
    return EXIT_OK


def cmd_fvu(args):
    data = load_csv(args.data)
    if args.pca:
        rep = fvu_line(data, first_principal_component(data.points))
    else:
        rep = fvu_polyline(data, _read_chain(args.chain))
    text = _dump_json(rep.to_dict())
    if args.output:
        atomic_write_text(args.output, text)
    sys.stdout.write(text)
    return EXIT_OK


_CONFIG_FLAGS = {
    "shape": "shape", "data": "data", "n": "n", "noise": "noise", "data_seed": "data_seed",
    "k": "ks", "trials": "trials", "seed_base": "seed_base", "h_max": "h_max",
    "threshold": "threshold", "unique_tol": "unique_tol", "workers": "workers", "out": "out_dir",
}


def experiment_config(args):
    overrides = {}
    for attr, key in _CONFIG_FLAGS.items():
        value = getattr(args, attr)
        if value is not None:
            overrides[key] = parse_value(key, value) if key == "ks" else value
    if args.replace:
        overrides["replace"] = True
    if args.equispaced:
        overrides["equispaced"] = True
    if args.config:
        return load_config(args.config, overrides)
    return ExperimentConfig(**overrides).validate()


def experiment_dataset(cfg):
    if cfg.data is not None:
        return load_csv(cfg.data)
    return generate(ShapeSpec(cfg.shape, n=cfg.n, noise_sigma=cfg.noise), cfg.data_seed, equispaced=cfg.equispaced)


def run_experiment(cfg):
    """Run every configured K and write all outputs; returns the reports."""
    data = experiment_dataset(cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = []
    for k in cfg.ks:
        ens = run_ensemble(
            data, k, trials=cfg.trials, seed_base=cfg.seed_base, h_max=cfg.h_max,
            replace=cfg.replace, workers=cfg.workers,
        )
        rep = build_report(ens, data, config=cfg.to_dict(), threshold=cfg.threshold, unique_tol=cfg.unique_tol)
        stem = f"{data.name}_k{k}"
        hist = rep["histogram"]
        edges, counts = np.array(hist["edges_percent"]), np.array(hist["counts"])
        atomic_write_text(out / f"{stem}.json", dumps_report(rep))
        atomic_write_text(out / f"{stem}_hist.csv", histogram_csv(edges, counts))
        title = f"{data.name}, K = {k}: RI FVU over {rep['trials']} trials"
        atomic_write_text(out / f"{stem}_hist.svg", histogram_svg(edges, counts, hist["pci_fvu_percent"], title))
        reports.append(rep)
    atomic_write_text(out / f"{data.name}_summary.csv", summary_csv(reports))
    return reports


def cmd_experiment(args):
    try:
        cfg = experiment_config(args)
    except (ConfigError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    reports = run_experiment(cfg)
    sys.stdout.write(summary_text(reports))
    return EXIT_OK


def _report_paths(paths):
    for p in map(Path, paths):
        if p.is_dir():
            yield from sorted(q for q in p.glob("*.json"))
        else:
            yield p


def cmd_report(args):
    reports = []
    for path in _report_paths(args.paths):
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if doc.get("schema", "").startswith("sominit.experiment-report/"):
            reports.append(doc)
    if not reports:
        print("no experiment reports found", file=sys.stderr)
        return EXIT_FAILURE
    text = summary_csv(reports) if args.format == "csv" else summary_text(reports)
    if args.output:
        atomic_write_text(args.output, text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="sominit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic shape dataset as CSV")
    g.add_argument("--shape", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int, default=DEFAULT_N)
    g.add_argument("--noise", type=float, default=0.0, help="isotropic Gaussian noise std")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--equispaced", action="store_true", help="equispaced curve parameters")
    g.add_argument("--param", action="append", metavar="KEY=VALUE", help="family parameter override")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("train", help="train one SOM and write its final chain as JSON")
    t.add_argument("--data", required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--init", choices=("pci", "ri"), default="pci")
    t.add_argument("--seed", type=int, default=0, help="RI seed")
    t.add_argument("--replace", action="store_true", help="RI sampling with replacement")
    t.add_argument("--h-max", type=int, default=DEFAULT_H_MAX)
    t.add_argument("--history", help="also write every intermediate chain to this JSON file")
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_train)

    f = sub.add_parser("fvu", help="fraction of variance unexplained of a chain or of PC1")
    f.add_argument("--data", required=True)
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--chain")
    src.add_argument("--pca", action="store_true", help="score the first principal component line")
    f.add_argument("-o", "--output")
    f.set_defaults(func=cmd_fvu)

    e = sub.add_parser("experiment", help="PCI vs RI ensembles for a list of node counts")
    e.add_argument("--config", help="key = value config file; flags override it")
    e.add_argument("--shape", choices=FAMILIES)
    e.add_argument("--data", help="CSV dataset instead of a generated shape")
    e.add_argument("--n", type=int)
    e.add_argument("--noise", type=float)
    e.add_argument("--data-seed", type=int)
    e.add_argument("--equispaced", action="store_true")
    e.add_argument("--k", help="comma-separated node counts, e.g. 10,20,50")
    e.add_argument("--trials", type=int)
    e.add_argument("--seed-base", type=int)
    e.add_argument("--h-max", type=int)
    e.add_argument("--threshold", type=float, help="quasi-linearity threshold")
    e.add_argument("--unique-tol", type=float)
    e.add_argument("--replace", action="store_true", help="RI sampling with replacement")
    e.add_argument("--workers", type=int)
    e.add_argument("--out", help="output directory")
    e.set_defaults(func=cmd_experiment)

    r = sub.add_parser("report", help="tabulate experiment JSON reports")
    r.add_argument("paths", nargs="+", help="report files or directories")
    r.add_argument("--format", choices=("text", "csv"), default="text")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SomInitError, OSError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
