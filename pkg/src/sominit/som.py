"""Batch training of a 1-D self-organizing map.

The loop follows the classic batch scheme with a triangular (linear
B-spline) neighbourhood over node indices:

1. assign every point to its nearest node;
2. stop if no point changed owner since the previous pass;
3. move each node to the neighbourhood-weighted mean of the cells around it;
4. stop after 100 updates.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyDataSet

MAX_STEPS = 100
DEFAULT_H_MAX = 3


@dataclass(frozen=True, eq=False)
class Chain:
    """Ordered coding vectors ``(K, D)``; consecutive nodes form a broken line."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=np.float64)
        if nodes.ndim != 2 or nodes.shape[0] < 1:
            raise ValueError(f"a chain needs a (K >= 1, D) node array, got {nodes.shape}")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def k(self):
        return self.nodes.shape[0]

    @property
    def dim(self):
        return self.nodes.shape[1]

    def reversed(self):
        return Chain(self.nodes[::-1])

    def to_dict(self):
        return {"k": self.k, "dim": self.dim, "nodes": self.nodes.tolist()}

    def to_json(self):
        # json renders floats with repr, which round-trips exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj):
        nodes = np.array(obj["nodes"], dtype=np.float64)
        if nodes.ndim != 2 or nodes.shape != (obj["k"], obj["dim"]):
            raise DimensionMismatch(
                f"chain header says k={obj['k']}, dim={obj['dim']} but nodes have shape {nodes.shape}"
            )
        return cls(nodes)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class NeighborhoodSpec:
    h_max: int = DEFAULT_H_MAX

    def __post_init__(self):
        if self.h_max < 0:
            raise ValueError("h_max must be >= 0")


@dataclass(frozen=True, eq=False)
class Assignment:
    """Nearest-node ownership; ``owner[j]`` is the node that owns point ``j``."""

    owner: np.ndarray
    k: int

    @property
    def counts(self):
        return np.bincount(self.owner, minlength=self.k)

    @property
    def cells(self):
        return [np.flatnonzero(self.owner == i) for i in range(self.k)]

    def same_cells(self, other):
        return other is not None and self.k == other.k and np.array_equal(self.owner, other.owner)


@dataclass(frozen=True, eq=False)
class TrainResult:
    """Outcome of :func:`train`.

    ``steps`` counts assignment passes. A run that converges after ``u``
    updates reports ``u + 1`` steps; a run cut off by the cap reports
    ``MAX_STEPS``.
    """

    final: Chain
    steps: int
    converged: bool
    assignment: Assignment
    history: list = field(default=None)


def neighborhood_weight(i, j, spec=NeighborhoodSpec()):
    d = abs(i - j)
    if d > spec.h_max:
        return 0.0
    return 1.0 - d / (spec.h_max + 1)


def neighborhood_matrix(k, spec=NeighborhoodSpec()):
    idx = np.arange(k)
    dist = np.abs(idx[:, None] - idx[None, :])
    return np.where(dist <= spec.h_max, 1.0 - dist / (spec.h_max + 1), 0.0)


def _points(data):
    return getattr(data, "points", data)


def assign(data, chain):
    """Give each point to its nearest node; ties go to the lowest node index."""
    x = np.asarray(_points(data), dtype=np.float64)
    if x.shape[0] == 0:
        raise EmptyDataSet("cannot assign an empty dataset")
    if x.shape[1] != chain.dim:
        raise DimensionMismatch(f"data has dimension {x.shape[1]}, chain has {chain.dim}")
    diff = x[:, None, :] - chain.nodes[None, :, :]
    sq = np.einsum("nkd,nkd->nk", diff, diff)
    return Assignment(owner=np.argmin(sq, axis=1), k=chain.k)


def batch_step(data, chain, asg, spec=NeighborhoodSpec(), h=None):
    """One simultaneous update of all nodes from the current cells.

    Nodes whose neighbourhood holds no points at all keep their position.
    """
    x = np.asarray(_points(data), dtype=np.float64)
    if h is None:
        h = neighborhood_matrix(chain.k, spec)
    sums = np.zeros_like(chain.nodes)
    np.add.at(sums, asg.owner, x)
    weight = h @ asg.counts.astype(np.float64)
    weighted = h @ sums
    nodes = chain.nodes.copy()
    moving = weight != 0
    nodes[moving] = weighted[moving] / weight[moving, None]
    return Chain(nodes)


def train(data, initial, spec=NeighborhoodSpec(), record_history=False):
    x = np.asarray(_points(data), dtype=np.float64)
    if x.shape[0] == 0:
        raise EmptyDataSet("cannot train on an empty dataset")
    h = neighborhood_matrix(initial.k, spec)
    chain = initial
    previous = None  # all cells empty before learning
    history = [] if record_history else None
    updates = 0
    while True:
        asg = assign(x, chain)
        if asg.same_cells(previous):
            return TrainResult(chain, updates + 1, True, asg, history)
        chain = batch_step(x, chain, asg, spec, h=h)
        if history is not None:
            history.append(chain)
        updates += 1
        if updates == MAX_STEPS:
            return TrainResult(chain, updates, False, asg, history)
        previous = asg
