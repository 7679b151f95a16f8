"""Random-vs-principal-component initialization ensembles and their statistics."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import DegenerateRegressor, DomainError, TooManyNodes
from .fvu import fvu_polyline
from .initialization import pci_grid, ri_sample
from .som import DEFAULT_H_MAX, NeighborhoodSpec, _points, train

DEFAULT_TRIALS = 100
DEFAULT_UNIQUE_TOL = 1e-6
DEFAULT_QUASILINEAR_THRESHOLD = 0.5
QUASI_LINEAR = "quasi_linear"
NONLINEAR = "nonlinear"


@dataclass(frozen=True, eq=False)
class Trial:
    seed: int | None
    final: object  # Chain
    fvu: float
    steps: int
    converged: bool


@dataclass(frozen=True, eq=False)
class TrialEnsemble:
    dataset_name: str
    k: int
    h_max: int
    trials: list
    pci: Trial
    seed_base: int = 0
    replace: bool = False

    @property
    def fvus(self):
        return np.array([t.fvu for t in self.trials])

    def best_chain(self):
        """Final chain with the lowest FVU over the PCI run and all RI trials."""
        best = min([self.pci, *self.trials], key=lambda t: t.fvu)
        return best.final


def _fit(x, initial, h_max, seed):
    res = train(x, initial, NeighborhoodSpec(h_max))
    return Trial(seed, res.final, fvu_polyline(x, res.final).fvu, res.steps, res.converged)


def _ri_trial(args):
    x, k, seed, h_max, replace = args
    return _fit(x, ri_sample(x, k, seed, replace=replace), h_max, seed)


def run_ensemble(data, k, trials=DEFAULT_TRIALS, seed_base=0, h_max=DEFAULT_H_MAX,
                 replace=False, workers=1):
    """One PCI run plus ``trials`` RI runs seeded ``seed_base .. seed_base + trials - 1``.

    With ``workers > 1`` the RI runs go to a process pool; results are kept
    in seed order so the ensemble does not depend on scheduling.
    """
    x = np.asarray(_points(data), dtype=np.float64)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not replace and k > x.shape[0]:
        raise TooManyNodes(f"k={k} exceeds the {x.shape[0]} available points")
    NeighborhoodSpec(h_max)
    pci = _fit(x, pci_grid(x, k), h_max, None)
    jobs = [(x, k, seed_base + i, h_max, replace) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_ri_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [_ri_trial(j) for j in jobs]
    return TrialEnsemble(
        dataset_name=getattr(data, "name", "data"),
        k=k,
        h_max=h_max,
        trials=results,
        pci=pci,
        seed_base=seed_base,
        replace=replace,
    )


@dataclass(frozen=True)
class DistributionSummary:
    """Five-number description of the RI FVU distribution, in percent."""

    mean: float
    median: float
    std: float
    min: float
    max: float

    def to_dict(self):
        return {"mean": self.mean, "median": self.median, "std": self.std, "min": self.min, "max": self.max}


def summarize_values(values):
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("no values to summarize")
    std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return DistributionSummary(
        mean=float(np.mean(v)),
        median=float(np.median(v)),
        std=std,
        min=float(np.min(v)),
        max=float(np.max(v)),
    )


def summarize(ensemble):
    return summarize_values(100.0 * ensemble.fvus)


@dataclass(frozen=True)
class ProportionEstimate:
    successes: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float
    laplace: float
    extreme: bool
    confidence: float = 0.95

    def to_dict(self):
        return {
            "successes": self.successes,
            "trials": self.trials,
            "p_hat": self.p_hat,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "laplace": self.laplace,
            "extreme": self.extreme,
            "confidence": self.confidence,
        }


def _check_counts(x, n):
    if not (isinstance(x, (int, np.integer)) and isinstance(n, (int, np.integer))):
        raise DomainError("successes and trials must be integers")
    if n < 1 or x < 0 or x > n:
        raise DomainError(f"need 0 <= x <= n and n >= 1, got x={x}, n={n}")


def z_quantile(confidence):
    """Two-sided standard normal critical value."""
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    return NormalDist().inv_cdf(0.5 * (1.0 + confidence))


def adjusted_wald_ci(x, n, confidence=0.95):
    """Adjusted Wald (Agresti-Coull) interval, clipped to [0, 1]."""
    _check_counts(x, n)
    z = z_quantile(confidence)
    z2 = z * z
    n_adj = n + z2
    p_adj = (x + 0.5 * z2) / n_adj
    half = z * math.sqrt(p_adj * (1.0 - p_adj) / n_adj)
    return max(0.0, p_adj - half), min(1.0, p_adj + half)


def laplace_estimate(x, n):
    _check_counts(x, n)
    return (x + 1) / (n + 2)


def estimate_proportion(x, n, confidence=0.95, extreme_margin=1):
    """Point and interval estimates for ``x`` successes in ``n`` trials.

    ``extreme`` flags counts within ``extreme_margin`` of 0 or ``n``, where
    the Laplace estimate is the preferred point value.
    """
    low, high = adjusted_wald_ci(x, n, confidence)
    return ProportionEstimate(
        successes=int(x),
        trials=int(n),
        p_hat=x / n,
        ci_low=low,
        ci_high=high,
        laplace=laplace_estimate(x, n),
        extreme=bool(x <= extreme_margin or x >= n - extreme_margin),
        confidence=confidence,
    )


def proportion_better(ensemble, confidence=0.95, extreme_margin=1):
    """Share of RI trials with FVU strictly below the PCI run's FVU."""
    x = int(np.sum(ensemble.fvus < ensemble.pci.fvu))
    return estimate_proportion(x, len(ensemble.trials), confidence, extreme_margin)


def chain_distance(a, b):
    """Max node-wise distance between two chains under the better orientation."""
    if a.nodes.shape != b.nodes.shape:
        return math.inf
    fwd = np.max(np.linalg.norm(a.nodes - b.nodes, axis=1))
    rev = np.max(np.linalg.norm(a.nodes - b.nodes[::-1], axis=1))
    return float(min(fwd, rev))


def count_unique_chains(chains, tol=DEFAULT_UNIQUE_TOL):
    """Number of classes of chains linked by ``chain_distance <= tol``.

    Classes are connected components, so the count does not depend on the
    order of ``chains``.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    parent = list(range(len(chains)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(chains)):
        for j in range(i + 1, len(chains)):
            if chain_distance(chains[i], chains[j]) <= tol:
                parent[find(i)] = find(j)
    return len({find(i) for i in range(len(chains))})


def unique_configurations(ensemble, tol=DEFAULT_UNIQUE_TOL):
    return count_unique_chains([t.final for t in ensemble.trials], tol)


@dataclass(frozen=True)
class OlsFit:
    slope: float
    intercept: float
    slope_std_error: float
    t_statistic: float
    intercept_std_error: float
    intercept_t: float
    beta: float  # standardized slope, equal to Pearson's r

    def to_dict(self):
        return dict(self.__dict__)


def _ratio(num, den):
    if den > 0:
        return num / den
    return math.copysign(math.inf, num) if num else math.nan


def ols_fit(xs, ys):
    """Simple least-squares regression of ``ys`` on ``xs`` with slope t-test."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be equal-length sequences")
    n = x.size
    if n < 3:
        raise DegenerateRegressor("need at least 3 points for a slope standard error")
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateRegressor("all regressor values are equal")
    syy = float(dy @ dy)
    slope = float(dx @ dy) / sxx
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    s2 = float(resid @ resid) / (n - 2)
    se_slope = math.sqrt(s2 / sxx)
    se_int = math.sqrt(s2 * (1.0 / n + xm * xm / sxx))
    return OlsFit(
        slope=slope,
        intercept=intercept,
        slope_std_error=se_slope,
        t_statistic=_ratio(slope, se_slope),
        intercept_std_error=se_int,
        intercept_t=_ratio(intercept, se_int),
        beta=slope * math.sqrt(sxx / syy) if syy > 0 else math.nan,
    )


def monotone_fraction(chain, line):
    """Longest strictly monotone run of node projections, as a share of K - 1 steps."""
    if chain.k < 2:
        raise ValueError("need at least two nodes")
    proj = (chain.nodes - line.origin) @ line.direction
    sign = np.sign(np.diff(proj))
    best = run = 0
    prev = 0.0
    for s in sign:
        if s != 0 and s == prev:
            run += 1
        elif s != 0:
            run = 1
        else:
            run = 0
        prev = s
        best = max(best, run)
    return best / (chain.k - 1)


def classify_quasilinear(chain, line, threshold=DEFAULT_QUASILINEAR_THRESHOLD):
    """Label a trained chain by whether it projects (mostly) univalently onto ``line``."""
    return QUASI_LINEAR if monotone_fraction(chain, line) >= threshold else NONLINEAR
