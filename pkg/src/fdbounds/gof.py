"""Goodness-of-fit statistics built from f-divergences, with Monte Carlo checks.

Random streams: replicate ``i`` of an experiment with seed ``s`` draws from
``numpy.random.default_rng(SeedSequence(entropy=s, spawn_key=(i,)))``.  Each
replicate therefore has its own independent PCG64 stream and results do not
depend on the order in which replicates are evaluated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, IntervalEmpty, ZeroCellProbability
from .generators import (CHI_SQUARED, DiscreteDistribution, Generator, divergence_terms,
                         get_generator)
from .numerics import chi_squared_cdf, ks_distance, normal_cdf

LAMBDA_GRID = np.linspace(0.0, 1.0, 41)


class Statistic(str, enum.Enum):
    CHI2 = "chi2"
    FDIV = "fdiv"
    TV = "tv"


def _masses(p) -> np.ndarray:
    return p.masses if isinstance(p, DiscreteDistribution) else np.asarray(p, dtype=float)


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def multinomial_sample(p, n: int, rng: np.random.Generator) -> np.ndarray:
    """One multinomial(n; p) count vector."""
    if n < 1:
        raise DomainError("sample size must be >= 1")
    return rng.multinomial(n, _masses(p))


def _check_cells(counts, p):
    counts = np.asarray(counts, dtype=float)
    p = _masses(p)
    if counts.shape[-1] != p.size:
        raise DomainError("counts and cell probabilities differ in length")
    if np.any(p <= 0):
        raise ZeroCellProbability("every cell probability must be positive")
    return counts, p


def chi2_statistic(counts, p, n: int) -> float:
    """Pearson's T_n = sum (n_i - n p_i)^2 / (n p_i); works row-wise on 2-D counts."""
    counts, p = _check_cells(counts, p)
    expected = n * p
    out = np.sum((counts - expected) ** 2 / expected, axis=-1)
    return float(out) if out.ndim == 0 else out


def fdiv_statistic(counts, p, n: int, g: Generator) -> float:
    """2 n D_g(p_hat || p) / g''(1)."""
    if not g.is_second_type:
        raise DomainError(f"{g.name} has no second derivative at 1")
    counts, p = _check_cells(counts, p)
    p_hat = counts / n
    out = 2.0 * n * divergence_terms(p_hat, p, g).sum(axis=-1) / g.second_deriv_at_one
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def _tv(counts, p, n):
    counts, p = _check_cells(counts, p)
    return 0.5 * np.abs(counts / n - p).sum(axis=-1)


def tv_statistic(counts, p, n: int, c_t) -> float:
    """4 n c_t TV(p_hat, p)^2."""
    out = 4.0 * n * np.asarray(c_t, dtype=float) * _tv(counts, p, n) ** 2
    return float(out) if out.ndim == 0 else out


def c_t_interval(p_hat, p, epsilon: Optional[float] = None) -> tuple[float, float]:
    """The interval [1, gamma^2 / Delta] that contains the TV-statistic scale.

    ``epsilon`` defaults to max |p_hat/p - 1|, which makes gamma = 1.
    """
    p_hat, p = _masses(p_hat), _masses(p)
    if np.any(p <= 0):
        raise ZeroCellProbability("every cell probability must be positive")
    u = p_hat / p - 1.0
    dev = float(np.abs(u).max())
    if dev == 0.0:
        raise IntervalEmpty("p_hat = p: gamma and Delta vanish")
    eps = dev if epsilon is None else float(epsilon)
    gamma = dev / eps
    delta = float(np.sum(p * u * u)) / eps**2
    return 1.0, gamma**2 / delta


@dataclass(frozen=True)
class GofExperiment:
    cell_distribution: DiscreteDistribution
    sample_size: int
    replications: int
    statistic: Statistic = Statistic.CHI2
    generator: Optional[Generator] = None
    seed: int = 0
    normalized: bool = False
    min_expected_threshold: float = 5.0

    def __post_init__(self):
        if self.sample_size < 1 or self.replications < 1:
            raise DomainError("sample size and replications must be >= 1")
        if len(self.cell_distribution) < 2:
            raise DomainError("a goodness-of-fit experiment needs k >= 2 cells")
        if self.statistic is Statistic.FDIV and self.generator is None:
            raise DomainError("the f-divergence statistic needs a generator")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    @property
    def k(self) -> int:
        return len(self.cell_distribution)

    @property
    def min_expected_count(self) -> float:
        return float(self.sample_size * self.cell_distribution.masses.min())


@dataclass
class GofResult:
    statistic_samples: np.ndarray
    reference: str
    ks_distance: float
    c_t_interval: Optional[tuple] = None
    details: dict = field(default_factory=dict)

    def to_dict(self, include_samples: bool = False) -> dict:
        out = {"reference": self.reference, "ks_distance": self.ks_distance,
               "replications": int(self.statistic_samples.size),
               "sample_mean": float(self.statistic_samples.mean()), **self.details}
        if self.c_t_interval is not None:
            out["c_t_interval"] = list(self.c_t_interval)
        if include_samples:
            out["statistic_samples"] = self.statistic_samples.tolist()
        return out


def draw_counts(exp: GofExperiment) -> np.ndarray:
    p = exp.cell_distribution.masses
    return np.stack([replicate_rng(exp.seed, i).multinomial(exp.sample_size, p)
                     for i in range(exp.replications)])


def _chi2_ks(samples, dof):
    return ks_distance(samples, lambda x: chi_squared_cdf(dof, max(x, 0.0)))


def run_experiment(exp: GofExperiment) -> GofResult:
    """Simulate the statistic under the null and compare with its limit law."""
    p = exp.cell_distribution.masses
    n, k = exp.sample_size, exp.k
    dof = k - 1
    counts = draw_counts(exp)
    details = {"k": k, "n": n, "seed": exp.seed, "statistic": exp.statistic.value,
               "min_expected_count": exp.min_expected_count}

    if exp.statistic is Statistic.TV:
        return _run_tv(counts, p, n, dof, details)

    g = CHI_SQUARED if exp.statistic is Statistic.CHI2 else exp.generator
    details["generator"] = g.name
    stats = fdiv_statistic(counts, p, n, g) if g is not CHI_SQUARED else chi2_statistic(counts, p, n)
    stats = np.atleast_1d(stats)
    if exp.normalized:
        if exp.min_expected_count <= exp.min_expected_threshold:
            raise DomainError(
                f"min n p_i = {exp.min_expected_count:g} does not exceed the threshold "
                f"{exp.min_expected_threshold:g} required by the normal limit")
        z = (stats - dof) / math.sqrt(2.0 * dof)
        return GofResult(z, "normal(0,1)", ks_distance(z, normal_cdf), details=details)
    return GofResult(stats, f"chi2({dof})", _chi2_ks(stats, dof), details=details)


def _run_tv(counts, p, n, dof, details) -> GofResult:
    tv = np.atleast_1d(_tv(counts, p, n))
    chi2 = np.atleast_1d(chi2_statistic(counts, p, n)) / n
    if np.any(tv == 0):
        raise IntervalEmpty("a replicate reproduced p exactly; the c_t interval is empty")
    u = counts / n / p - 1.0
    eps = np.abs(u).max(axis=1)
    upper = eps**2 / chi2  # gamma^2/Delta with gamma = 1
    base = 4.0 * n * tv**2
    ks_lower = _chi2_ks(base, dof)
    ks_upper = _chi2_ks(base * upper, dof)
    # c_t = upper^lambda sweeps the interval geometrically
    grid = [(float(lam), _chi2_ks(base * upper**lam, dof)) for lam in LAMBDA_GRID]
    best_lam, best_ks = min(grid, key=lambda t: t[1])
    # the scale that turns 4 n TV^2 into T_n lies inside every replicate's interval
    matching = n * chi2 / base
    inside = bool(np.all((matching >= 1.0 - 1e-12) & (matching <= upper * (1.0 + 1e-12))))
    details.update({
        "ks_at_lower_endpoint": ks_lower,
        "ks_at_upper_endpoint": ks_upper,
        "best_lambda": best_lam,
        "ks_at_best_lambda": best_ks,
        "matching_c_t_inside_interval": inside,
        "upper_endpoint_median": float(np.median(upper)),
    })
    ks = min(ks_lower, ks_upper, best_ks)
    return GofResult(base * upper**best_lam, f"chi2({dof})", ks,
                     c_t_interval=(1.0, float(np.median(upper))), details=details)


def make_experiment(k: int, n: int, replications: int, statistic: str = "chi2",
                    generator: Optional[str] = None, seed: int = 0, normalized: bool = False,
                    p=None) -> GofExperiment:
    dist = DiscreteDistribution(np.asarray(p, float)) if p is not None else DiscreteDistribution.uniform(k)
    stat = Statistic(statistic)
    g = get_generator(generator) if generator else (get_generator("kl") if stat is Statistic.FDIV else None)
    return GofExperiment(dist, n, replications, stat, g, seed, normalized)
