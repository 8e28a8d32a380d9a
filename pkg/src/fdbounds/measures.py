"""Distribution pairs: finite discrete pairs and the analytic continuous families.

Every pair is reduced to a list of *pieces* over the reference measure P0:

* ``Atom``: a point mass of P0 carrying a constant ratio ``1 + u``;
* ``Segment``: an interval of the real line with a P0 density and a ratio
  function ``1 + u(x)``.

Divergences, chi-squared masses and region integrals are all sums over pieces,
so discrete and continuous pairs share one code path.  The n-dimensional
truncated families collapse to two atoms because their ratio is piecewise
constant in the radius, whose law is chi-squared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (AbsoluteContinuityError, ClosedFormUnavailable, DomainError,
                     LengthMismatch)
from .generators import (DiscreteDistribution, Generator,
                         divergence_terms, excess_with_boundary)
from .numerics import (QuadratureSpec, integrate_1d, lower_incomplete_gamma_regularized,
                       upper_incomplete_gamma_regularized)

# absolute floor keeps near-zero tail integrals from tripping the error check
PIECE_QUADRATURE = QuadratureSpec(relative_tolerance=1e-11, absolute_tolerance=1e-17)

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def std_normal_pdf(x):
    return np.exp(-0.5 * np.square(x)) / _SQRT_2PI


@dataclass(frozen=True)
class Atom:
    weight: float
    u: float
    inside: bool = True


@dataclass(frozen=True)
class Segment:
    a: float
    b: float
    density: Callable[[float], float]
    u: Callable[[float], float]
    inside: bool = True
    growth: float = 0.0  # |x|-rate of the log-ratio, used for the tail envelope

    def envelope(self, power: float = 2.0) -> Callable[[float], float]:
        rate = self.growth * max(power, 1.0) + 1.0
        return lambda x: math.exp(-0.5 * x * x + rate * abs(x))


Piece = Union[Atom, Segment]
Band = tuple  # (lower, upper) on u = ratio - 1


def _in_band(u, band: Optional[Band], tol: float = 0.0):
    if band is None:
        return np.ones_like(np.asarray(u, dtype=bool), dtype=bool)
    lo, hi = band
    u = np.asarray(u, dtype=float)
    return (u >= lo - tol) & (u <= hi + tol)


def integrate_pieces(pieces: Sequence[Piece], fn: Callable, where: Optional[bool] = None,
                     power: float = 2.0, spec: QuadratureSpec = PIECE_QUADRATURE) -> float:
    """Sum of ``fn(u)`` against P0 over the pieces (optionally only inside/outside)."""
    total = 0.0
    for piece in pieces:
        if where is not None and piece.inside != where:
            continue
        if isinstance(piece, Atom):
            if piece.weight > 0:
                total += piece.weight * float(fn(np.float64(piece.u)))
            continue
        seg = piece

        def integrand(x, seg=seg):
            return float(fn(np.float64(seg.u(x)))) * float(seg.density(x))

        total += integrate_1d(integrand, seg.a, seg.b, spec, envelope=seg.envelope(power))
    return total


def _power_of(g: Generator) -> float:
    if g.alpha is not None:
        return max(2.0, g.alpha)
    return 2.0


class DistributionPair:
    """A pair (P1, P0); subclasses supply pieces and the ratio dP1/dP0."""

    #: "band" regions are the ratio band {-m eps <= u <= M eps}; "fixed" regions
    #: are a support set chosen by the family itself
    region_kind = "band"
    #: discrete pairs certify on the full support by default
    default_full_support = False

    def pieces(self, band: Optional[Band] = None) -> list[Piece]:
        raise NotImplementedError

    def density_ratio(self, x) -> float:
        raise NotImplementedError

    @property
    def singular_mass(self) -> float:
        """P1 mass sitting where P0 has none."""
        return 0.0

    def chi_squared(self) -> float:
        if self.singular_mass > 0:
            return math.inf
        return integrate_pieces(self.pieces(), np.square)

    def total_p1_mass(self) -> float:
        return integrate_pieces(self.pieces(), lambda u: 1.0 + u) + self.singular_mass

    def quadrature_divergence(self, g: Generator) -> float:
        out = integrate_pieces(self.pieces(), lambda u: excess_with_boundary(g, u), power=_power_of(g))
        if self.singular_mass > 0:
            if not math.isfinite(g.conj_at_zero):
                raise AbsoluteContinuityError(f"{g.name}: P1 has mass where P0 has none")
            out += self.singular_mass * (g.conj_at_zero - g.slope_at_one)
        return max(0.0, out)

    def closed_form(self, g: Generator) -> float:
        raise ClosedFormUnavailable(f"no closed form for {g.name} on {type(self).__name__}")

    def describe(self) -> dict:
        raise NotImplementedError


# --------------------------------------------------------------------------
# discrete

@dataclass(frozen=True, eq=False)
class DiscretePair(DistributionPair):
    p1: DiscreteDistribution
    p0: DiscreteDistribution
    default_full_support = True

    def __post_init__(self):
        if len(self.p1) != len(self.p0):
            raise LengthMismatch(f"distributions have lengths {len(self.p1)} and {len(self.p0)}")

    @property
    def ratios(self) -> np.ndarray:
        p, q = self.p1.masses, self.p0.masses
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(q > 0, p / np.where(q > 0, q, 1.0), np.where(p > 0, np.inf, 1.0))

    @property
    def u(self) -> np.ndarray:
        p, q = self.p1.masses, self.p0.masses
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(q > 0, (p - q) / np.where(q > 0, q, 1.0), np.where(p > 0, np.inf, 0.0))

    @property
    def singular_mass(self) -> float:
        return float(self.p1.masses[self.p0.masses == 0].sum())

    def pieces(self, band: Optional[Band] = None) -> list[Piece]:
        q, u = self.p0.masses, self.u
        inside = _in_band(u, band)
        return [Atom(float(q[i]), float(u[i]), bool(inside[i])) for i in range(q.size) if q[i] > 0]

    def density_ratio(self, x) -> float:
        i = int(x)
        if not 0 <= i < len(self.p0):
            raise DomainError(f"cell index {x} out of range")
        return float(self.ratios[i])

    def closed_form(self, g: Generator) -> float:
        return max(0.0, float(divergence_terms(self.p1.masses, self.p0.masses, g).sum()))

    def describe(self) -> dict:
        return {"kind": "discrete", "p1": self.p1.masses.tolist(), "p0": self.p0.masses.tolist()}


# --------------------------------------------------------------------------
# Gaussian shift and Gaussian mixtures

def _exp_family_interval(t: float, scale: float, band: Band) -> tuple[float, float]:
    """x-interval where ``scale * expm1(t x - t^2/2)`` lies inside ``band``."""
    lo, hi = band
    # u(x) is monotone in x with direction sign(t); u -> -scale on one side
    edge = -math.inf if t > 0 else math.inf

    def solve(v: float) -> float:
        w = v / scale
        if w <= -1.0:
            return edge
        return (math.log1p(w) + 0.5 * t * t) / t

    if t > 0:
        return solve(lo), solve(hi)
    return solve(hi), solve(lo)


def _segments_for(t: float, scale: float, band: Optional[Band]) -> list[Segment]:
    def u_of(x, t=t, s=scale):
        return s * math.expm1(t * x - 0.5 * t * t)

    growth = abs(t)
    if t == 0.0 or band is None:
        return [Segment(-math.inf, math.inf, std_normal_pdf, u_of, True, growth)]
    xa, xb = _exp_family_interval(t, scale, band)
    out = []
    if xa > -math.inf:
        out.append(Segment(-math.inf, xa, std_normal_pdf, u_of, False, growth))
    if xb > xa:
        out.append(Segment(xa, xb, std_normal_pdf, u_of, True, growth))
    if xb < math.inf:
        out.append(Segment(xb, math.inf, std_normal_pdf, u_of, False, growth))
    return out


@dataclass(frozen=True, eq=False)
class LocalGaussian(DistributionPair):
    """P1 = N(t, 1) against P0 = N(0, 1)."""

    t: float

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise DomainError("mean shift must be finite")

    def density_ratio(self, x) -> float:
        return math.exp(self.t * float(x) - 0.5 * self.t**2)

    def pieces(self, band: Optional[Band] = None) -> list[Piece]:
        return _segments_for(self.t, 1.0, band)

    def region(self, band: Band) -> tuple[float, float]:
        if self.t == 0:
            return (-math.inf, math.inf)
        return _exp_family_interval(self.t, 1.0, band)

    def closed_form(self, g: Generator) -> float:
        t2 = self.t**2
        name = g.name
        if name == "chi2":
            return math.expm1(t2)
        if name == "tv":
            return math.erf(abs(self.t) / (2.0 * math.sqrt(2.0)))
        if name in ("kl", "reverse_kl"):
            return 0.5 * t2
        if name == "jeffreys":
            return t2
        if g.alpha is not None and name.startswith("hellinger"):
            a = g.alpha
            return math.expm1(0.5 * a * (a - 1.0) * t2) / (a - 1.0)
        return super().closed_form(g)

    def describe(self) -> dict:
        return {"kind": "local_gaussian", "t": self.t}


def gaussian_tv_small_t(t: float) -> float:
    """First-order approximation |t|/sqrt(2 pi) of TV(N(t,1), N(0,1)); error O(t^3)."""
    return abs(t) / _SQRT_2PI


def gaussian_tilde_c_lower(t: float, epsilon: float, big_m: float, small_m: float) -> float:
    """Tail-inequality lower estimate of the complement chi-squared fraction.

    Built from the Gaussian tail bound P(Z > x) > x e^{-x^2/2} / ((x^2+1) sqrt(2 pi))
    on the inner sets x > 2 ln(1+M eps)/t and x < ln(1-m eps)/t.
    """
    if t <= 0:
        raise DomainError("the tail estimate is stated for t > 0")
    lp = math.log1p(big_m * epsilon)
    lm = math.log1p(-small_m * epsilon)
    term_hi = 2.0 * t * big_m**2 * epsilon**2 * lp / (t * t + 4.0 * lp * lp)
    term_lo = t * small_m**2 * epsilon**2 * lm / (t * t + 4.0 * lm * lm)
    return (term_hi + term_lo) / (2.0 * math.pi * math.expm1(t * t))


@dataclass(frozen=True, eq=False)
class Mixture(DistributionPair):
    """P1 = (1 - lam) Q + lam P against P0 = Q.

    Components are either two discrete distributions of equal length or two
    unit-variance Gaussians given as ``LocalGaussian`` shifts.
    """

    lam: float
    p: Union[DiscreteDistribution, LocalGaussian]
    q: Union[DiscreteDistribution, LocalGaussian]

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise DomainError(f"mixture weight must lie strictly inside (0, 1), got {self.lam}")
        kinds = {type(self.p), type(self.q)}
        if kinds not in ({DiscreteDistribution}, {LocalGaussian}):
            raise DomainError("mixture components must both be discrete or both Gaussian")
        if isinstance(self.p, DiscreteDistribution) and len(self.p) != len(self.q):
            raise LengthMismatch("mixture components differ in length")

    @property
    def is_discrete(self) -> bool:
        return isinstance(self.p, DiscreteDistribution)

    @property
    def shift(self) -> float:
        return self.p.t - self.q.t

    def as_discrete(self) -> DiscretePair:
        mixed = (1.0 - self.lam) * self.q.masses + self.lam * self.p.masses
        mixed = mixed / mixed.sum()
        return DiscretePair(DiscreteDistribution(mixed), self.q)

    @property
    def singular_mass(self) -> float:
        return self.as_discrete().singular_mass if self.is_discrete else 0.0

    def component_chi_squared(self) -> float:
        """chi^2(P || Q)."""
        if self.is_discrete:
            return DiscretePair(self.p, self.q).chi_squared()
        return math.expm1(self.shift**2)

    def pieces(self, band: Optional[Band] = None) -> list[Piece]:
        if self.is_discrete:
            return self.as_discrete().pieces(band)
        return _segments_for(self.shift, self.lam, band)

    def density_ratio(self, x) -> float:
        if self.is_discrete:
            return self.as_discrete().density_ratio(x)
        s = self.shift
        # P0 = N(q.t, 1); shift coordinates so Q is standard
        z = float(x) - self.q.t
        return 1.0 - self.lam + self.lam * math.exp(s * z - 0.5 * s * s)

    def closed_form(self, g: Generator) -> float:
        if g.name == "chi2":
            return self.lam**2 * self.component_chi_squared()
        if self.is_discrete:
            return self.as_discrete().closed_form(g)
        return super().closed_form(g)

    def markov_complement_bound(self, epsilon: float, big_m: float, small_m: float) -> float:
        """Upper bound lam^2 chi^2(P||Q) / (gamma'^2 eps^2) on P0 of the band complement."""
        gp = min(big_m, small_m)
        return self.lam**2 * self.component_chi_squared() / (gp * gp * epsilon * epsilon)

    def describe(self) -> dict:
        if self.is_discrete:
            comp = {"p": self.p.masses.tolist(), "q": self.q.masses.tolist()}
        else:
            comp = {"p_mean": self.p.t, "q_mean": self.q.t}
        return {"kind": "mixture", "lambda": self.lam, **comp}


# --------------------------------------------------------------------------
# truncated Gaussians

def _truncated_atoms(inside_mass: float, outside_mass: float) -> list[Piece]:
    # ratio is 1/inside_mass on the support, 0 off it
    return [Atom(inside_mass, outside_mass / inside_mass, True), Atom(outside_mass, -1.0, False)]


def _radius_sq(x) -> float:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return float(arr) ** 2
    return float(np.dot(arr.ravel(), arr.ravel()))


def _truncated_closed_form(inside: float, outside: float, g: Generator) -> float:
    if g.name == "tv":
        return outside
    if g.name == "chi2":
        return outside / inside
    if g.name == "kl":
        return -math.log1p(-outside)
    return _atoms_divergence(inside, outside, g)


def _atoms_divergence(inside: float, outside: float, g: Generator) -> float:
    return inside * float(excess_with_boundary(g, outside / inside)) + outside * float(
        excess_with_boundary(g, -1.0))


@dataclass(frozen=True, eq=False)
class TruncatedBall(DistributionPair):
    """P0 = N(0, variance I_n); P1 is P0 restricted to the ball ||x||^2 <= y variance."""

    variance: float
    y: float
    n: int
    region_kind = "fixed"

    def __post_init__(self):
        if not self.variance > 0 or not self.y > 0:
            raise DomainError("variance and y must be positive")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("dimension n must be a positive integer")

    @property
    def theta(self) -> float:
        return ball_mass_theta(self)

    @property
    def tail(self) -> float:
        return upper_incomplete_gamma_regularized(self.n / 2.0, self.y / 2.0)

    def pieces(self, band: Optional[Band] = None) -> list[Piece]:
        return _truncated_atoms(self.theta, self.tail)

    def density_ratio(self, x) -> float:
        r2 = _radius_sq(x)
        return 1.0 / self.theta if r2 <= self.y * self.variance else 0.0

    def closed_form(self, g: Generator) -> float:
        return _truncated_closed_form(self.theta, self.tail, g)

    def describe(self) -> dict:
        return {"kind": "truncated_ball", "variance": self.variance, "y": self.y, "n": self.n,
                "theta": self.theta}


def ball_mass_theta(fam: TruncatedBall) -> float:
    """P0 mass of the ball, P(n/2, y/2)."""
    return lower_incomplete_gamma_regularized(fam.n / 2.0, fam.y / 2.0)


def ball_tail_asymptotic(n: int, y: float) -> float:
    """Leading tail term 2^{1-n/2} e^{-y/2} y^{n/2-1} / Gamma(n/2) for 1 - Theta."""
    return math.exp((1.0 - n / 2.0) * math.log(2.0) - y / 2.0
                    + (n / 2.0 - 1.0) * math.log(y) - math.lgamma(n / 2.0))


@dataclass(frozen=True, eq=False)
class TruncatedShell(DistributionPair):
    """P0 = N(0, mu variance I_n); P1 is P0 restricted to mu^2 n variance <= ||x||^2 <= n variance."""

    variance: float
    mu: float
    n: int
    region_kind = "fixed"

    def __post_init__(self):
        if not self.variance > 0:
            raise DomainError("variance must be positive")
        if not 0.0 < self.mu < 1.0:
            raise DomainError(f"mu must lie strictly inside (0, 1), got {self.mu}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("dimension n must be a positive integer")

    def _bounds(self) -> tuple[float, float, float]:
        a = self.n / 2.0
        return a, self.n * self.mu / 2.0, self.n / (2.0 * self.mu)

    @property
    def outside(self) -> float:
        a, lo, hi = self._bounds()
        return lower_incomplete_gamma_regularized(a, lo) + upper_incomplete_gamma_regularized(a, hi)

    @property
    def mass(self) -> float:
        return shell_mass(self)

    def pieces(self, band: Optional[Band] = None) -> list[Piece]:
        return _truncated_atoms(self.mass, self.outside)

    def density_ratio(self, x) -> float:
        r2 = _radius_sq(x)
        lo = self.mu**2 * self.n * self.variance
        hi = self.n * self.variance
        return 1.0 / self.mass if lo <= r2 <= hi else 0.0

    def closed_form(self, g: Generator) -> float:
        return _truncated_closed_form(self.mass, self.outside, g)

    def describe(self) -> dict:
        return {"kind": "truncated_shell", "variance": self.variance, "mu": self.mu, "n": self.n,
                "mass": self.mass}


def shell_mass(fam: TruncatedShell) -> float:
    """[gamma(n/2, n/(2 mu)) - gamma(n/2, n mu/2)] / Gamma(n/2)."""
    a, lo, hi = fam._bounds()
    p_lo = lower_incomplete_gamma_regularized(a, lo)
    if p_lo < 0.5:
        return lower_incomplete_gamma_regularized(a, hi) - p_lo
    return upper_incomplete_gamma_regularized(a, lo) - upper_incomplete_gamma_regularized(a, hi)


# --------------------------------------------------------------------------
# public entry points

DensityFamily = Union[LocalGaussian, Mixture, TruncatedBall, TruncatedShell]


def density_ratio(fam: DistributionPair, x) -> float:
    return fam.density_ratio(x)


def exact_divergence(fam: DistributionPair, g: Generator) -> float:
    """Closed form when one is registered, otherwise quadrature over the pieces."""
    try:
        return fam.closed_form(g)
    except ClosedFormUnavailable:
        return fam.quadrature_divergence(g)


def as_pair(obj) -> DistributionPair:
    if isinstance(obj, DistributionPair):
        return obj
    if isinstance(obj, tuple) and len(obj) == 2:
        p1, p0 = (o if isinstance(o, DiscreteDistribution) else DiscreteDistribution(o) for o in obj)
        return DiscretePair(p1, p0)
    raise DomainError(f"cannot interpret {type(obj).__name__} as a distribution pair")


__all__ = [
    "Atom", "Segment", "DistributionPair", "DiscretePair", "LocalGaussian", "Mixture",
    "TruncatedBall", "TruncatedShell", "DensityFamily", "ball_mass_theta", "shell_mass",
    "ball_tail_asymptotic", "density_ratio", "exact_divergence", "gaussian_tv_small_t",
    "gaussian_tilde_c_lower", "integrate_pieces", "as_pair",
]
