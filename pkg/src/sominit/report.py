"""Experiment reports: JSON documents, FVU histograms (CSV + SVG) and summary tables."""

import json
import math

import numpy as np

from . import __version__
from .datasets import RNG_IDENTITY
from .experiment import (
    classify_quasilinear,
    monotone_fraction,
    proportion_better,
    summarize,
    unique_configurations,
)
from .geom import first_principal_component

SCHEMA = "sominit.experiment-report/1"
RI_RNG_IDENTITY = "numpy.random.default_rng(seed) [PCG64]; Generator.choice(n, k, replace=False)"
MIN_BINS = 10
MAX_BINS = 100

SUMMARY_COLUMNS = (
    "dataset", "k", "trials", "mean", "median", "std", "min", "max", "pci",
    "better_pct", "ci_low_pct", "ci_high_pct", "laplace_pct", "extreme", "unique", "classification",
)


def histogram(values, min_bins=MIN_BINS, max_bins=MAX_BINS):
    """Freedman-Diaconis bins, clamped to ``[min_bins, max_bins]``.

    Returns ``(edges, counts)``. A zero-width sample gets a unit-wide range
    centred on its value.
    """
    v = np.sort(np.asarray(values, dtype=np.float64))
    lo, hi = float(v[0]), float(v[-1])
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
        bins = min_bins
    else:
        q75, q25 = np.percentile(v, [75, 25])
        width = 2.0 * (q75 - q25) / v.size ** (1.0 / 3.0)
        bins = math.ceil((hi - lo) / width) if width > 0 else min_bins
        bins = min(max(bins, min_bins), max_bins)
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(v, bins=edges)
    return edges, counts


def histogram_csv(edges, counts):
    lines = ["bin_low,bin_high,count"]
    lines += [f"{float(a)!r},{float(b)!r},{int(c)}" for a, b, c in zip(edges[:-1], edges[1:], counts)]
    return "\n".join(lines) + "\n"


def histogram_svg(edges, counts, marker, title="", width=640, height=400):
    """Static bar chart with a vertical line at ``marker`` (the PCI FVU)."""
    left, right, top, bottom = 60, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    x0 = min(float(edges[0]), marker)
    x1 = max(float(edges[-1]), marker)
    pad = 0.02 * (x1 - x0)
    x0, x1 = x0 - pad, x1 + pad
    ymax = max(int(counts.max()), 1)

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(c):
        return top + ph - c / ymax * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.2f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{_escape(title)}</text>',
    ]
    for a, b, c in zip(edges[:-1], edges[1:], counts):
        if c == 0:
            continue
        out.append(
            f'<rect x="{sx(a):.2f}" y="{sy(c):.2f}" width="{sx(b) - sx(a):.2f}" '
            f'height="{sy(0) - sy(c):.2f}" fill="#7f9fbf" stroke="#335577" stroke-width="0.5"/>'
        )
    axis_y = top + ph
    out.append(f'<line x1="{left}" y1="{axis_y}" x2="{left + pw}" y2="{axis_y}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{axis_y}" stroke="black"/>')
    for i in range(6):
        v = x0 + i * (x1 - x0) / 5
        out.append(
            f'<text x="{sx(v):.2f}" y="{axis_y + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{v:.2f}</text>'
        )
    for c in sorted({0, ymax // 2, ymax}):
        out.append(
            f'<text x="{left - 6}" y="{sy(c) + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{c}</text>'
        )
    out.append(
        f'<text x="{left + pw / 2:.2f}" y="{height - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">FVU (%)</text>'
    )
    mx = sx(marker)
    out.append(f'<line x1="{mx:.2f}" y1="{top}" x2="{mx:.2f}" y2="{axis_y}" stroke="red" stroke-width="2"/>')
    out.append(
        f'<text x="{mx:.2f}" y="{top - 4}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="11" fill="red">PCI {marker:.2f}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def build_report(ensemble, data, config=None, threshold=0.5, unique_tol=1e-6):
    """Assemble the JSON-ready report for one ensemble."""
    summary = summarize(ensemble)
    prop = proportion_better(ensemble)
    line = first_principal_component(data.points)
    best = ensemble.best_chain()
    pci_pct = 100.0 * ensemble.pci.fvu
    edges, counts = histogram(100.0 * ensemble.fvus)
    return {
        "schema": SCHEMA,
        "tool": {"name": "sominit", "version": __version__, "numpy": np.__version__},
        "rng": {"dataset": RNG_IDENTITY, "ri": RI_RNG_IDENTITY},
        "config": config or {},
        "dataset": {
            "name": data.name,
            "n": len(data),
            "dim": data.dim,
            "seed": data.seed,
            "shape_params": data.shape_params,
        },
        "k": ensemble.k,
        "h_max": ensemble.h_max,
        "trials": len(ensemble.trials),
        "seed_base": ensemble.seed_base,
        "ri_with_replacement": ensemble.replace,
        "pci": {
            "fvu": ensemble.pci.fvu,
            "fvu_percent": pci_pct,
            "steps": ensemble.pci.steps,
            "converged": ensemble.pci.converged,
            "chain": ensemble.pci.final.to_dict(),
        },
        "ri": {
            "summary_percent": summary.to_dict(),
            "runs": [
                {"seed": t.seed, "fvu": t.fvu, "steps": t.steps, "converged": t.converged}
                for t in ensemble.trials
            ],
        },
        "proportion_better": prop.to_dict(),
        "unique_configurations": {"count": unique_configurations(ensemble, unique_tol), "tol": unique_tol},
        "classification": {
            "label": classify_quasilinear(best, line, threshold),
            "monotone_fraction": monotone_fraction(best, line),
            "threshold": threshold,
            "chain": "lowest-FVU final chain over PCI and RI runs",
            "pc1": {"origin": line.origin.tolist(), "direction": line.direction.tolist(), "tied": line.tied},
        },
        "histogram": {
            "rule": f"freedman-diaconis, bins clamped to [{MIN_BINS}, {MAX_BINS}]",
            "edges_percent": edges.tolist(),
            "counts": counts.tolist(),
            "pci_fvu_percent": pci_pct,
        },
    }


def dumps_report(report):
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def summary_row(report):
    s = report["ri"]["summary_percent"]
    p = report["proportion_better"]
    return {
        "dataset": report["dataset"]["name"],
        "k": report["k"],
        "trials": report["trials"],
        "mean": f"{s['mean']:.2f}",
        "median": f"{s['median']:.2f}",
        "std": f"{s['std']:.2f}",
        "min": f"{s['min']:.2f}",
        "max": f"{s['max']:.2f}",
        "pci": f"{report['pci']['fvu_percent']:.2f}",
        "better_pct": f"{100 * p['p_hat']:.2f}",
        "ci_low_pct": f"{100 * p['ci_low']:.2f}",
        "ci_high_pct": f"{100 * p['ci_high']:.2f}",
        "laplace_pct": f"{100 * p['laplace']:.2f}",
        "extreme": str(p["extreme"]).lower(),
        "unique": report["unique_configurations"]["count"],
        "classification": report["classification"]["label"],
    }


def summary_csv(reports):
    lines = [",".join(SUMMARY_COLUMNS)]
    for r in reports:
        row = summary_row(r)
        lines.append(",".join(str(row[c]) for c in SUMMARY_COLUMNS))
    return "\n".join(lines) + "\n"


def summary_text(reports):
    rows = [summary_row(r) for r in reports]
    header = list(SUMMARY_COLUMNS)
    widths = [max(len(h), *(len(str(r[h])) for r in rows)) if rows else len(h) for h in header]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    lines = [fmt.format(*header)]
    lines += [fmt.format(*(str(r[h]) for h in header)) for r in rows]
    return "\n".join(lines) + "\n"
