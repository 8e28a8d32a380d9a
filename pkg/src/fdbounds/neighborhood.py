"""Certification of the (eps, M, m) neighborhood conditions for a distribution pair.

With ``h = (dP1/dP0 - 1)/eps`` and a region ``Pi`` the three conditions are

1. ``-m <= h <= M`` P0-almost surely on ``Pi``;
2. the complement carries a fraction ``tilde_c < 1`` of the chi-squared mass;
3. the cubic Taylor remainder over the complement is ``c_hat' Delta <= Delta_bar <= c_hat Delta``.

All constants are reported as the exact achieved ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (AbsoluteContinuityError, DegenerateError, DomainError,
                     RatioUnbounded, UnsupportedDerivative)
from .generators import (DiscreteDistribution, Generator, SignClass,
                         excess_with_boundary, get_generator)
from .measures import Atom, DiscretePair, DistributionPair, Segment, as_pair, integrate_pieces
from .numerics import gauss_legendre_unit

RATIO_TOL = 1e-12
# below this ratio g''' near 0 makes the phi-quadrature inaccurate
QUADRATURE_RATIO_FLOOR = 0.25


@dataclass(frozen=True)
class NeighborhoodSpec:
    epsilon: float
    big_m: float
    small_m: float
    region: Optional[str] = None  # None = family default, "full" or "band"

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise DomainError(f"epsilon must be positive and finite, got {self.epsilon}")
        if not (self.big_m > 0 and self.small_m > 0):
            raise DomainError("M and m must be positive")
        if self.epsilon * self.small_m > 1.0 + 1e-15:
            raise DomainError(f"eps * m must not exceed 1 (got {self.epsilon * self.small_m})")
        if self.region not in (None, "full", "band"):
            raise DomainError(f"unknown region selector {self.region!r}")

    @property
    def gamma(self) -> float:
        return max(self.big_m, self.small_m)

    @property
    def band(self) -> tuple[float, float]:
        return (-self.small_m * self.epsilon, self.big_m * self.epsilon)

    @property
    def theta_interval(self) -> tuple[float, float]:
        return (1.0 - self.small_m * self.epsilon, 1.0 + self.big_m * self.epsilon)

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "big_m": self.big_m, "small_m": self.small_m,
                "gamma": self.gamma, "region": self.region}


@dataclass(frozen=True)
class RemainderWitness:
    delta_bar: float
    c_hat: float
    c_hat_prime: float
    achieved_ratio: float
    sign_shortcut_valid: bool

    def to_dict(self) -> dict:
        return {"delta_bar": self.delta_bar, "c_hat": self.c_hat, "c_hat_prime": self.c_hat_prime,
                "achieved_ratio": self.achieved_ratio,
                "sign_shortcut_valid": self.sign_shortcut_valid}


@dataclass(frozen=True, eq=False)
class NeighborhoodCertificate:
    spec: NeighborhoodSpec
    pair: DistributionPair
    chi_squared: float
    delta: float
    delta_in: float
    delta_out: float
    tilde_c: float
    one_minus_tilde_c: float
    complement_mass: float
    full_support: bool
    per_generator: dict = field(default_factory=dict)
    condition1_holds: bool = True
    condition2_holds: bool = True
    condition3_holds: bool = True
    degenerate: bool = False
    region_description: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return self.condition1_holds and self.condition2_holds and self.condition3_holds

    def witness(self, g: Generator) -> RemainderWitness:
        if g.name not in self.per_generator:
            w = remainder_witness(self.pair, self.spec, g, self.delta, self.full_support)
            self.per_generator[g.name] = w
        return self.per_generator[g.name]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "pair": self.pair.describe(),
            "chi_squared": self.chi_squared,
            "delta": self.delta,
            "delta_in": self.delta_in,
            "delta_out": self.delta_out,
            "tilde_c": self.tilde_c,
            "one_minus_tilde_c": self.one_minus_tilde_c,
            "complement_mass": self.complement_mass,
            "full_support": self.full_support,
            "region": self.region_description,
            "per_generator": {k: v.to_dict() for k, v in self.per_generator.items()},
            "condition1_holds": self.condition1_holds,
            "condition2_holds": self.condition2_holds,
            "condition3_holds": self.condition3_holds,
            "degenerate": self.degenerate,
        }


def h_epsilon(pair, spec: NeighborhoodSpec, x) -> float:
    """Scaled ratio deviation (dP1/dP0(x) - 1) / eps."""
    ratio = as_pair(pair).density_ratio(x)
    if not math.isfinite(ratio):
        raise DomainError(f"density ratio is infinite at {x!r}")
    return (ratio - 1.0) / spec.epsilon


def tightest_spec_discrete(p, q, epsilon: float) -> NeighborhoodSpec:
    """Smallest (M, m) for which the full support satisfies the ratio band at ``epsilon``."""
    p = p.masses if isinstance(p, DiscreteDistribution) else np.asarray(p, dtype=float)
    q = q.masses if isinstance(q, DiscreteDistribution) else np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DomainError("distributions differ in length")
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    if np.any(q <= 0):
        raise DomainError("every reference cell must have positive mass")
    u = (p - q) / q
    if np.all(u == 0):
        raise DegenerateError("P = Q: M and m are undefined")
    big_m = max(float(u.max()), 0.0) / epsilon
    small_m = max(float(-u.min()), 0.0) / epsilon
    # one-sided deviations cannot happen for probability vectors, but keep M, m > 0
    tiny = np.finfo(float).tiny
    return NeighborhoodSpec(epsilon, max(big_m, tiny), min(max(small_m, tiny), 1.0 / epsilon))


# --------------------------------------------------------------------------
# cubic remainder

def remainder_value(g: Generator, u: float) -> float:
    """R_g(u) = f(1+u) - f'(1) u - f''(1) u^2 / 2 for u >= -1.

    Uses u^3/2 * int_0^1 f'''(1 + phi u)(1 - phi)^2 dphi on a 64-node
    Gauss-Legendre rule when the ratio stays away from 0, and the closed form
    otherwise.
    """
    g2 = g.second_deriv_at_one
    if 1.0 + u >= QUADRATURE_RATIO_FLOOR and abs(u) > 1e-300:
        phi, w = gauss_legendre_unit(64)
        inner = float(np.sum(w * g.deriv3(1.0 + phi * u) * (1.0 - phi) ** 2))
        return 0.5 * u**3 * inner
    return float(excess_with_boundary(g, u)) - 0.5 * g2 * u * u


def _remainder_integral(pieces, g: Generator) -> float:
    fn = np.vectorize(lambda u: remainder_value(g, float(u)), otypes=[float])
    return integrate_pieces(pieces, fn, where=False, power=max(3.0, g.alpha or 0.0))


def remainder_witness(pair: DistributionPair, spec: NeighborhoodSpec, g: Generator,
                      delta: float, full_support: bool) -> RemainderWitness:
    if not g.is_second_type:
        raise UnsupportedDerivative(f"{g.name} has no third derivative")
    if full_support or delta == 0:
        return RemainderWitness(0.0, 0.0, 0.0, 0.0, True)
    eps = spec.epsilon
    try:
        dbar = 2.0 / eps**2 * _remainder_integral(_region_pieces(pair, spec), g)
    except AbsoluteContinuityError:
        return RemainderWitness(math.inf, math.inf, -math.inf, math.inf, False)
    ratio = dbar / delta
    c_hat = c_hat_prime = ratio
    shortcut_ok = True
    sign = g.sign_class
    if sign is SignClass.ZERO:
        c_hat = c_hat_prime = 0.0
    elif sign is SignClass.NEGATIVE:
        shortcut_ok = ratio <= 0.0
        if shortcut_ok:
            c_hat = 0.0
    elif sign is SignClass.POSITIVE:
        shortcut_ok = ratio >= 0.0
        if shortcut_ok:
            c_hat_prime = 0.0
    return RemainderWitness(dbar, c_hat, c_hat_prime, ratio, shortcut_ok)


# --------------------------------------------------------------------------
# certification

def _uses_full_support(pair: DistributionPair, spec: NeighborhoodSpec) -> bool:
    if spec.region == "full":
        return True
    if spec.region == "band":
        return False
    return pair.default_full_support


def _region_pieces(pair: DistributionPair, spec: NeighborhoodSpec):
    if _uses_full_support(pair, spec):
        return pair.pieces(None)
    if pair.region_kind == "band":
        return pair.pieces(spec.band)
    return pair.pieces()


def _segment_u_samples(seg: Segment) -> list[float]:
    a = seg.a if math.isfinite(seg.a) else min(seg.b, 0.0) - 40.0
    b = seg.b if math.isfinite(seg.b) else max(seg.a, 0.0) + 40.0
    return [seg.u(x) for x in np.linspace(a, b, 65)]


def _condition1(pieces, spec: NeighborhoodSpec) -> bool:
    lo, hi = spec.band
    for piece in pieces:
        if not piece.inside:
            continue
        values = [piece.u] if isinstance(piece, Atom) else _segment_u_samples(piece)
        for u in values:
            tol = RATIO_TOL * max(1.0, abs(u))
            if not (lo - tol <= u <= hi + tol):
                return False
    return True


def certify(pair, spec: NeighborhoodSpec, generators: Iterable = (),
            strict: bool = False) -> NeighborhoodCertificate:
    """Check the three neighborhood conditions and compute every constant.

    With ``strict`` a failed ratio condition raises ``RatioUnbounded``;
    otherwise it is reported through ``condition1_holds``.
    """
    pair = as_pair(pair)
    gens = [get_generator(g) if isinstance(g, str) else g for g in generators]
    if pair.singular_mass > 0:
        raise AbsoluteContinuityError("P1 has mass where P0 has none; chi-squared is infinite")
    full = _uses_full_support(pair, spec)
    pieces = _region_pieces(pair, spec)
    eps2 = spec.epsilon**2

    chi_in = integrate_pieces(pieces, np.square, where=True)
    chi_out = integrate_pieces(pieces, np.square, where=False)
    chi2 = chi_in + chi_out
    out_mass = sum(p.weight for p in pieces if isinstance(p, Atom) and not p.inside)
    out_mass += integrate_pieces([p for p in pieces if isinstance(p, Segment)],
                                 lambda u: 1.0, where=False)
    cond1 = _condition1(pieces, spec)
    if strict and not cond1:
        raise RatioUnbounded("the ratio leaves [1 - m eps, 1 + M eps] on the region")

    region = {"kind": "full_support" if full else pair.region_kind,
              "band": list(spec.band)}
    if hasattr(pair, "region") and not full:
        region["interval"] = list(pair.region(spec.band))

    if chi2 == 0.0:
        cert = NeighborhoodCertificate(
            spec=spec, pair=pair, chi_squared=0.0, delta=0.0, delta_in=0.0, delta_out=0.0,
            tilde_c=0.0, one_minus_tilde_c=1.0, complement_mass=out_mass, full_support=full,
            condition1_holds=cond1, degenerate=True, region_description=region)
        for g in gens:
            if g.is_second_type:
                cert.per_generator[g.name] = RemainderWitness(0.0, 0.0, 0.0, 0.0, True)
        return cert

    delta = chi2 / eps2
    tilde_c = chi_out / chi2
    # 1 - tilde_c from the inside mass; tilde_c itself can round to 1
    inside_fraction = chi_in / chi2
    cert = NeighborhoodCertificate(
        spec=spec, pair=pair, chi_squared=chi2, delta=delta,
        delta_in=chi_in / eps2, delta_out=chi_out / eps2, tilde_c=tilde_c,
        one_minus_tilde_c=inside_fraction, complement_mass=out_mass, full_support=full,
        condition1_holds=cond1, condition2_holds=inside_fraction > 0.0,
        region_description=region)
    cond3 = True
    for g in gens:
        if not g.is_second_type:
            continue
        w = cert.witness(g)
        cond3 = cond3 and math.isfinite(w.delta_bar)
    object.__setattr__(cert, "condition3_holds", cond3)
    return cert


def certify_discrete(p, q, epsilon: float, generators: Sequence = ()) -> NeighborhoodCertificate:
    """Infer the tightest (M, m) at ``epsilon`` and certify on the full support."""
    p = p if isinstance(p, DiscreteDistribution) else DiscreteDistribution(p)
    q = q if isinstance(q, DiscreteDistribution) else DiscreteDistribution(q)
    spec = tightest_spec_discrete(p, q, epsilon)
    return certify(DiscretePair(p, q), spec, generators)
