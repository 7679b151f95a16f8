"""Fraction of variance unexplained for broken lines and straight lines."""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCloud
from .geom import total_variance_sum
from .som import _points


@dataclass(frozen=True)
class FvuReport:
    s: float
    v: float
    fvu: float

    @property
    def percent(self):
        return 100.0 * self.fvu

    def to_dict(self):
        return {"s": self.s, "v": self.v, "fvu": self.fvu}


def sq_dists_to_polyline(points, chain):
    """Squared distance from every row of ``points`` to the chain's broken line.

    Takes the vertex minimum, then lowers it with the perpendicular distance
    to any segment whose projection parameter lies strictly inside (0, 1).
    Zero-length segments contribute only through their vertices.
    """
    x = np.asarray(points, dtype=np.float64)
    y = chain.nodes
    diff = x[:, None, :] - y[None, :, :]
    vert = np.einsum("nkd,nkd->nk", diff, diff)
    best = vert.min(axis=1)
    if chain.k < 2:
        return best
    seg = y[1:] - y[:-1]
    seg_sq = np.einsum("kd,kd->k", seg, seg)
    live = seg_sq > 0
    if not np.any(live):
        return best
    seg, seg_sq = seg[live], seg_sq[live]
    start_diff = diff[:, :-1, :][:, live, :]
    start_sq = vert[:, :-1][:, live]
    l = np.einsum("nkd,kd->nk", start_diff, seg) / seg_sq
    r = np.maximum(start_sq - l * l * seg_sq, 0.0)
    inside = (l > 0.0) & (l < 1.0)
    r = np.where(inside, r, np.inf)
    return np.minimum(best, r.min(axis=1))


def sq_dist_to_polyline(x, chain):
    x = np.asarray(x, dtype=np.float64)
    return float(sq_dists_to_polyline(x[None, :], chain)[0])


def _report(s, data):
    v = total_variance_sum(data)
    if v == 0.0:
        raise DegenerateCloud("data has zero total variance")
    return FvuReport(s=s, v=v, fvu=s / v)


def fvu_polyline(data, chain):
    x = np.asarray(_points(data), dtype=np.float64)
    s = float(np.sum(sq_dists_to_polyline(x, chain)))
    return _report(s, x)


def fvu_line(data, line):
    """FVU of the infinite line ``line`` (perpendicular distances)."""
    x = np.asarray(_points(data), dtype=np.float64)
    c = x - line.origin
    along = c @ line.direction
    perp = np.maximum(np.einsum("nd,nd->n", c, c) - along * along, 0.0)
    return _report(float(np.sum(perp)), x)
