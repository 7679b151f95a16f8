"""Vector moments, first principal component and segment projection.

Point clouds are ``(n, D)`` float arrays throughout; a single point is a
length-``D`` array.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCloud, DimensionMismatch, EmptyDataSet, ZeroLengthSegment

POWER_TOL = 1e-12
POWER_MAX_ITER = 10_000
# relative eigen-gap below which the top eigenvalue is reported as tied
TIE_RTOL = 1e-12


def as_points(points):
    """Coerce to a finite ``(n, D)`` float64 array."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


@dataclass(frozen=True)
class LineSpec:
    """Infinite line through ``origin`` along the unit vector ``direction``.

    ``tied`` is set when the direction came out of an eigenvalue tie and was
    picked by convention rather than by the data.
    """

    origin: np.ndarray
    direction: np.ndarray
    tied: bool = False


@dataclass(frozen=True)
class SegmentProjection:
    l: float
    sq_dist: float


def mean(points):
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise EmptyDataSet("mean of an empty point set")
    return pts.mean(axis=0)


def total_variance_sum(points):
    """Sum of squared distances from each point to the centroid."""
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise EmptyDataSet("variance of an empty point set")
    centred = pts - pts.mean(axis=0)
    return float(np.einsum("ij,ij->", centred, centred))


def covariance(points):
    """Population covariance (divisor n)."""
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise EmptyDataSet("covariance of an empty point set")
    centred = pts - pts.mean(axis=0)
    return centred.T @ centred / pts.shape[0]


def normalize_sign(v):
    """Flip ``v`` so that its first non-negligible component is positive."""
    v = np.asarray(v, dtype=np.float64)
    for c in v:
        if abs(c) > 1e-12:
            return -v if c < 0 else v.copy()
    return v.copy()


def _top_eigvec_2x2(cov):
    a, b, c = cov[0, 0], cov[0, 1], cov[1, 1]
    half_diff = 0.5 * (a - c)
    disc = np.hypot(half_diff, b)
    scale = a + c
    if disc <= TIE_RTOL * scale:
        return np.array([1.0, 0.0]), True
    lam = 0.5 * scale + disc
    # two algebraically equivalent eigenvectors; use the better conditioned one
    v1 = np.array([lam - c, b])
    v2 = np.array([b, lam - a])
    v = v1 if np.dot(v1, v1) >= np.dot(v2, v2) else v2
    return v / np.linalg.norm(v), False


def _power(mat):
    """Leading eigenpair of a PSD matrix by power iteration."""
    j = int(np.argmax(np.diag(mat)))
    col = mat[:, j]
    norm = np.linalg.norm(col)
    if norm == 0.0:
        return np.zeros(mat.shape[0]), 0.0
    v = normalize_sign(col / norm)
    for _ in range(POWER_MAX_ITER):
        w = mat @ v
        wn = np.linalg.norm(w)
        if wn == 0.0:
            break
        w = normalize_sign(w / wn)
        if np.max(np.abs(w - v)) < POWER_TOL:
            v = w
            break
        v = w
    return v, float(v @ mat @ v)


def _top_eigvec_power(cov):
    v, lam1 = _power(cov)
    w, lam2 = _power(cov - lam1 * np.outer(v, v))
    if lam1 - lam2 > TIE_RTOL * np.trace(cov):
        return v, False
    # tied: unit vector of the top eigenspace with the largest first coordinate
    u = v[0] * v + w[0] * w
    norm = np.linalg.norm(u)
    return (u / norm if norm > 0 else v), True


def first_principal_component(points):
    """Line through the centroid along the leading covariance eigenvector.

    2-D clouds use the closed-form symmetric 2x2 eigenproblem; higher
    dimensions fall back to power iteration. On a tie the returned
    direction is the unit vector of the top eigenspace with the largest
    first coordinate (the x axis for an isotropic plane) and ``tied`` is set.
    """
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise EmptyDataSet("principal component of an empty point set")
    cov = covariance(pts)
    if not np.any(cov):
        raise DegenerateCloud("all points coincide")
    d = pts.shape[1]
    if d == 1:
        direction, tied = np.array([1.0]), False
    elif d == 2:
        direction, tied = _top_eigvec_2x2(cov)
    else:
        direction, tied = _top_eigvec_power(cov)
    return LineSpec(origin=pts.mean(axis=0), direction=normalize_sign(direction), tied=tied)


def project_to_segment(x, a, b):
    """Project ``x`` onto segment ``[a, b]``.

    ``l`` is the position along the segment in units of its length. Inside
    ``(0, 1)`` the squared distance comes from Pythagoras on the vertex
    distance; outside, it is the nearer endpoint's squared distance.
    """
    x, a, b = (np.asarray(v, dtype=np.float64) for v in (x, a, b))
    if not (x.shape == a.shape == b.shape):
        raise DimensionMismatch("point and segment ends differ in dimension")
    ab = b - a
    seg_sq = float(np.dot(ab, ab))
    if seg_sq == 0.0:
        raise ZeroLengthSegment("segment endpoints coincide")
    ax = x - a
    da = float(np.dot(ax, ax))
    l = float(np.dot(ax, ab)) / seg_sq
    bx = x - b
    sq = min(da, float(np.dot(bx, bx)))
    if 0.0 < l < 1.0:
        sq = min(sq, max(da - l * l * seg_sq, 0.0))
    return SegmentProjection(l=l, sq_dist=sq)
