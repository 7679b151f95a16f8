"""Synthetic 2-D shape families and CSV point files.

Every generator maps a curve parameter ``t`` in ``[0, 1]`` onto a planar
curve (or, for ``tree``, a set of straight branches). Curve parameters and
noise come from two independent substreams of one seeded generator, so the
noiseless skeleton of a noisy dataset can always be regenerated.
"""

import csv
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._atomic import atomic_write_text
from .errors import DimensionMismatch, IoError, ParseError, UnknownShape

RNG_IDENTITY = "numpy.random.PCG64; SeedSequence(seed).spawn(2) -> [curve, noise]"

FAMILIES = ("spiral3", "horseshoe", "s_shape", "c_shape", "tree")

DEFAULT_N = 500

# noise levels for the "with noise" / "with scatter" variants
DEFAULT_NOISE = {
    "spiral3": 0.02,
    "horseshoe": 0.1,
    "s_shape": 0.1,
    "c_shape": 0.1,
    "tree": 0.05,
}

DEFAULT_PARAMS = {
    "spiral3": {"turns": 3.0, "b": 1.0 / (6.0 * math.pi)},
    "horseshoe": {"sweep_deg": 180.0, "radius": 1.0, "arm_length": 2.0},
    "s_shape": {"half_periods": 2.0, "amplitude": 0.5},
    "c_shape": {"sweep_deg": 210.0, "radius": 1.0},
    "tree": {},
}

# trunk with a fork half way up and a second fork at its top
TREE_BRANCHES = (
    ((0.0, -1.0), (0.0, 0.2)),
    ((0.0, -0.4), (-0.6, 0.1)),
    ((0.0, -0.4), (0.6, 0.1)),
    ((0.0, 0.2), (-0.5, 0.9)),
    ((0.0, 0.2), (0.5, 0.9)),
)


@dataclass(frozen=True)
class ShapeSpec:
    family: str
    n: int = DEFAULT_N
    noise_sigma: float = 0.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if not self.noise_sigma >= 0:
            raise ValueError("noise_sigma must be >= 0")

    def resolved_params(self):
        if self.family not in DEFAULT_PARAMS:
            raise UnknownShape(self.family)
        unknown = set(self.params) - set(DEFAULT_PARAMS[self.family])
        if unknown:
            raise ValueError(f"unknown parameters for {self.family}: {sorted(unknown)}")
        return {**DEFAULT_PARAMS[self.family], **self.params}

    def to_dict(self):
        return {
            "family": self.family,
            "n": self.n,
            "noise_sigma": self.noise_sigma,
            "params": self.resolved_params(),
        }


@dataclass(frozen=True, eq=False)
class DataSet:
    """Immutable point cloud with provenance.

    ``shape_params`` is the generator description, or the string
    ``"external"`` for loaded files.
    """

    points: np.ndarray
    name: str = "data"
    shape_params: object = "external"
    seed: int | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1 and pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.ndim != 2:
            raise DimensionMismatch(f"points must be (n, D), got {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def _streams(seed):
    curve_ss, noise_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(curve_ss)), np.random.Generator(np.random.PCG64(noise_ss))


def _arc(t, sweep_deg, radius, centre_deg):
    sweep = math.radians(sweep_deg)
    theta = math.radians(centre_deg) + sweep * (t - 0.5)
    return radius * np.column_stack([np.cos(theta), np.sin(theta)])


def _horseshoe(t, sweep_deg, radius, arm_length):
    """Arc opening downwards, continued at both ends by straight tangent arms.

    Points are spread uniformly in arc length: right arm tip to arc, over the
    arc, then down the left arm.
    """
    sweep = math.radians(sweep_deg)
    arc_len = radius * sweep
    s = t * (arc_len + 2.0 * arm_length)
    a0 = 0.5 * (math.pi - sweep)
    a1 = a0 + sweep
    out = np.empty((t.size, 2))
    right = s < arm_length
    left = s > arm_length + arc_len
    on_arc = ~right & ~left
    # unit tangents pointing away from the arc at each end
    tan0 = np.array([math.sin(a0), -math.cos(a0)])
    tan1 = np.array([-math.sin(a1), math.cos(a1)])
    end0 = radius * np.array([math.cos(a0), math.sin(a0)])
    end1 = radius * np.array([math.cos(a1), math.sin(a1)])
    out[right] = end0 + (arm_length - s[right])[:, None] * tan0
    theta = a0 + (s[on_arc] - arm_length) / radius
    out[on_arc] = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    out[left] = end1 + (s[left] - arm_length - arc_len)[:, None] * tan1
    return out


def spiral_angle(t, turns):
    return 2.0 * math.pi * turns * t


def curve_points(family, t, params):
    """Map curve parameters ``t`` in [0, 1] to points on the noiseless shape."""
    t = np.asarray(t, dtype=np.float64)
    if family == "spiral3":
        theta = spiral_angle(t, params["turns"])
        r = params["b"] * theta
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    if family == "horseshoe":
        return _horseshoe(t, params["sweep_deg"], params["radius"], params["arm_length"])
    if family == "c_shape":
        # opening to the right
        return _arc(t, params["sweep_deg"], params["radius"], 180.0)
    if family == "s_shape":
        x = 2.0 * t - 1.0
        y = params["amplitude"] * np.sin(0.5 * math.pi * params["half_periods"] * x)
        return np.column_stack([x, y])
    if family == "tree":
        return _tree_points(t)
    raise UnknownShape(family)


def _tree_points(t):
    starts = np.array([b[0] for b in TREE_BRANCHES])
    ends = np.array([b[1] for b in TREE_BRANCHES])
    lengths = np.linalg.norm(ends - starts, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()
    idx = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(TREE_BRANCHES) - 1)
    local = (t - cum[idx]) / (cum[idx + 1] - cum[idx])
    return starts[idx] + local[:, None] * (ends[idx] - starts[idx])


def sample_curve(spec, seed, equispaced=False):
    """Return ``(t, skeleton)``: the curve parameters and noiseless points."""
    params = spec.resolved_params()
    curve_rng, _ = _streams(seed)
    if equispaced:
        t = (np.arange(spec.n) + 0.5) / spec.n if spec.n else np.empty(0)
    else:
        t = curve_rng.random(spec.n)
    return t, curve_points(spec.family, t, params).reshape(spec.n, 2)


def generate(spec, seed, equispaced=False):
    """Draw ``spec.n`` points from the shape family, deterministically in ``seed``."""
    _, skeleton = sample_curve(spec, seed, equispaced=equispaced)
    points = skeleton
    if spec.noise_sigma > 0:
        _, noise_rng = _streams(seed)
        points = skeleton + spec.noise_sigma * noise_rng.standard_normal(skeleton.shape)
    name = spec.family if spec.noise_sigma == 0 else f"{spec.family}_noise{spec.noise_sigma:g}"
    info = spec.to_dict()
    info["equispaced"] = bool(equispaced)
    return DataSet(points=points, name=name, shape_params=info, seed=seed)


def _parse_record(fields, lineno):
    values = []
    for f in fields:
        try:
            v = float(f)
        except ValueError:
            raise ParseError(f"non-numeric field {f!r}", line=lineno) from None
        if not math.isfinite(v):
            raise ParseError(f"non-finite value {f!r}", line=lineno)
        values.append(v)
    return values


def load_csv(path):
    """Read one point per record. A non-numeric first record is taken as a header."""
    path = Path(path)
    rows = []
    dim = None
    first = True
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if first:
                first = False
                try:
                    [float(f) for f in fields]
                except ValueError:
                    continue
            values = _parse_record(fields, lineno)
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise DimensionMismatch(f"line {lineno}: expected {dim} fields, got {len(values)}")
            rows.append(values)
    points = np.array(rows, dtype=np.float64).reshape(len(rows), dim or 0)
    return DataSet(points=points, name=path.stem, shape_params="external")


def format_float(v):
    """Shortest round-trippable decimal, with integral values printed bare."""
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def dumps_csv(points):
    return "".join(",".join(format_float(v) for v in row) + "\n" for row in np.asarray(points))


def save_csv(ds, path):
    try:
        atomic_write_text(path, dumps_csv(ds.points))
    except OSError as exc:
        raise IoError(f"cannot write {os.fspath(path)}: {exc}") from exc
