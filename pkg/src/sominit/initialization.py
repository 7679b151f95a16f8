"""Principal-component grid and random-sample initial chains."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCloud, TooManyNodes
from .geom import first_principal_component
from .som import Chain, _points

PCI = "PCI"
RI = "RI"


@dataclass(frozen=True)
class InitSpec:
    method: str
    k: int
    seed: int | None = None
    replace: bool = False

    def __post_init__(self):
        if self.method not in (PCI, RI):
            raise ValueError(f"unknown init method {self.method!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")


def grid_scale(sigma, k):
    """Half-extent of a k-point equispaced grid whose variance is ``sigma**2``."""
    if k == 1:
        return 0.0
    return sigma * math.sqrt(3.0 * (k - 1) / (k + 1))


def pci_grid(data, k):
    """Equispaced nodes along the first principal component.

    The grid is centred on the mean and stretched so that the population
    variance of its positions equals the variance of the data projected on
    the component.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x = np.asarray(_points(data), dtype=np.float64)
    line = first_principal_component(x)
    proj = (x - line.origin) @ line.direction
    sigma = math.sqrt(float(np.mean(proj * proj)))
    if sigma == 0.0:
        raise DegenerateCloud("data has no spread along its principal component")
    u = np.linspace(-1.0, 1.0, k) if k > 1 else np.zeros(1)
    s = grid_scale(sigma, k)
    return Chain(line.origin + (s * u)[:, None] * line.direction)


def ri_sample(data, k, seed, replace=False):
    """Pick ``k`` data points as nodes, in draw order."""
    x = np.asarray(_points(data), dtype=np.float64)
    n = x.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if not replace and k > n:
        raise TooManyNodes(f"cannot draw {k} distinct nodes from {n} points")
    if n == 0:
        raise TooManyNodes("cannot draw nodes from an empty dataset")
    rng = np.random.default_rng(seed)
    idx = rng.choice(n, size=k, replace=replace)
    return Chain(x[idx])


def initial_chain(data, spec):
    if spec.method == PCI:
        return pci_grid(data, spec.k)
    return ri_sample(data, spec.k, spec.seed, replace=spec.replace)
