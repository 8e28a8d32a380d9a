"""Special functions and one-dimensional quadrature.

The regularized incomplete gamma function is computed with the usual
two-branch scheme: a power series below ``z = a + 1`` and a modified Lentz
continued fraction above it.  Both the lower (P) and upper (Q) regularized
forms are exposed, because the truncated-Gaussian families need tail masses
far below double-precision resolution of ``1 - P``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import DomainError, NonConvergence

_EPS = np.finfo(float).eps
_TINY = 1e-300
_MAX_ITER = 10_000


@dataclass(frozen=True)
class QuadratureSpec:
    relative_tolerance: float = 1e-10
    max_subdivisions: int = 200
    tail_quantile_cutoff: float = 1e-12
    absolute_tolerance: float = 0.0

    def __post_init__(self):
        if not self.relative_tolerance > 0:
            raise DomainError("relative_tolerance must be positive")
        if not 0 < self.tail_quantile_cutoff <= 1e-6:
            raise DomainError("tail_quantile_cutoff must lie in (0, 1e-6]")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def _check_gamma_args(a: float, z: float) -> None:
    if not a > 0:
        raise DomainError(f"incomplete gamma needs a > 0, got {a}")
    if not z >= 0:
        raise DomainError(f"incomplete gamma needs z >= 0, got {z}")


def _log_prefactor(a: float, z: float) -> float:
    # log of z^a e^{-z} / Gamma(a)
    return a * math.log(z) - z - math.lgamma(a)


def gamma_series(a: float, z: float) -> float:
    """Lower regularized P(a, z) by its power series (accurate for z < a + 1)."""
    _check_gamma_args(a, z)
    if z == 0.0:
        return 0.0
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return min(1.0, total * math.exp(_log_prefactor(a, z)))
    raise NonConvergence(f"gamma series did not converge for a={a}, z={z}")


def gamma_continued_fraction(a: float, z: float) -> float:
    """Upper regularized Q(a, z) by Lentz's continued fraction (z >= a + 1)."""
    _check_gamma_args(a, z)
    if z == 0.0:
        return 1.0
    b = z + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0 else 1.0 / _TINY
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return max(0.0, math.exp(_log_prefactor(a, z)) * h)
    raise NonConvergence(f"gamma continued fraction did not converge for a={a}, z={z}")


def lower_incomplete_gamma_regularized(a: float, z: float) -> float:
    """P(a, z) = gamma(a, z) / Gamma(a)."""
    _check_gamma_args(a, z)
    if math.isinf(z):
        return 1.0
    if z < a + 1.0:
        return gamma_series(a, z)
    return 1.0 - gamma_continued_fraction(a, z)


def upper_incomplete_gamma_regularized(a: float, z: float) -> float:
    """Q(a, z) = 1 - P(a, z), computed without cancellation in the tail."""
    _check_gamma_args(a, z)
    if math.isinf(z):
        return 0.0
    if z < a + 1.0:
        return 1.0 - gamma_series(a, z)
    return gamma_continued_fraction(a, z)


def erf(x: float) -> float:
    return math.erf(x)


def erfc(x: float) -> float:
    return math.erfc(x)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _check_dof(dof: int, x: float) -> None:
    if int(dof) != dof or dof < 1:
        raise DomainError(f"degrees of freedom must be a positive integer, got {dof}")
    if not x >= 0:
        raise DomainError(f"chi-squared argument must be >= 0, got {x}")


def chi_squared_cdf(dof: int, x: float) -> float:
    _check_dof(dof, x)
    return lower_incomplete_gamma_regularized(dof / 2.0, x / 2.0)


def chi_squared_sf(dof: int, x: float) -> float:
    _check_dof(dof, x)
    return upper_incomplete_gamma_regularized(dof / 2.0, x / 2.0)


def chi_squared_pdf(dof: int, x: float) -> float:
    if x <= 0:
        return 0.0 if dof != 2 or x < 0 else 0.5
    k = dof / 2.0
    return math.exp((k - 1.0) * math.log(x) - x / 2.0 - k * math.log(2.0) - math.lgamma(k))


def _truncation_point(envelope: Callable[[float], float], start: float,
                      cutoff: float, direction: float) -> float:
    step = 1.0
    x = start
    for _ in range(200):
        x = start + direction * step
        if envelope(x) < cutoff:
            return x
        step *= 2.0
    raise NonConvergence("decay envelope never dropped below the tail cutoff")


def integrate_1d(f: Callable[[float], float], a: float, b: float,
                 spec: QuadratureSpec = DEFAULT_QUADRATURE,
                 envelope: Optional[Callable[[float], float]] = None) -> float:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``.

    Infinite limits are truncated where ``envelope`` falls below
    ``spec.tail_quantile_cutoff`` when an envelope is given; otherwise
    they are handed to QUADPACK's infinite-range transform.
    """
    if a == b:
        return 0.0
    if a > b:
        return -integrate_1d(f, b, a, spec, envelope)
    if envelope is not None:
        if math.isinf(b):
            b = _truncation_point(envelope, max(a, 0.0) if not math.isinf(a) else 0.0,
                                  spec.tail_quantile_cutoff, +1.0)
        if math.isinf(a):
            a = _truncation_point(envelope, min(b, 0.0), spec.tail_quantile_cutoff, -1.0)
        if a >= b:
            return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr, info = integrate.quad(
            f, a, b,
            epsabs=spec.absolute_tolerance,
            epsrel=max(spec.relative_tolerance, 50 * _EPS),
            limit=spec.max_subdivisions,
            full_output=1,
        )[:3]
    if not math.isfinite(value):
        raise NonConvergence(f"integral over [{a}, {b}] is not finite")
    target = max(spec.absolute_tolerance, spec.relative_tolerance * abs(value))
    if abserr > 10.0 * target and abserr > 1e-300:
        raise NonConvergence(
            f"quadrature over [{a}, {b}] stopped at error {abserr:.3g} "
            f"(target {target:.3g}) after {info.get('last', '?')} subdivisions"
        )
    return float(value)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre_unit(nodes: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    if nodes not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(nodes)
        _GL_CACHE[nodes] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[nodes]


def ks_distance(samples, cdf: Callable[[float], float]) -> float:
    """Kolmogorov-Smirnov sup-distance between the empirical CDF and ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise DomainError("KS distance needs at least one sample")
    ref = np.array([cdf(v) for v in x])
    upper = np.arange(1, n + 1) / n - ref
    lower = ref - np.arange(0, n) / n
    return float(min(1.0, max(upper.max(), lower.max(), 0.0)))
