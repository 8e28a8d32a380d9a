"""f-divergence generators, their derivatives, conjugation and discrete divergences.

All logarithms are natural, so every divergence is in nats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (AbsoluteContinuityError, DomainError, LengthMismatch,
                     UnsupportedDerivative)
from .numerics import gauss_legendre_unit

Fn = Callable[[np.ndarray], np.ndarray]

SIGN_GRID = np.logspace(-6, 6, 2401)


class SignClass(str, enum.Enum):
    ZERO = "identically_zero"
    POSITIVE = "strictly_positive"
    NEGATIVE = "strictly_negative"
    MIXED = "mixed"


class Differentiability(str, enum.Enum):
    FIRST_TYPE = "first_type"
    SECOND_TYPE = "second_type"


@dataclass(frozen=True, eq=False)
class Generator:
    """Convex ``f`` on (0, inf) with ``f(1) = 0``.

    ``excess(u)`` is ``f(1+u) - f'(1) u``, written per generator so that it
    stays accurate when ``u`` is small.  Divergences are summed from it, which
    keeps every cell contribution nonnegative.
    """

    name: str
    value: Fn
    deriv1: Optional[Fn]
    deriv2: Optional[Fn]
    deriv3: Optional[Fn]
    f_at_zero: float
    conj_at_zero: float
    sign_class: Optional[SignClass]
    differentiability: Differentiability
    excess: Optional[Fn] = None
    alpha: Optional[float] = None
    logarithmic: bool = False
    monotone_third: bool = False
    params: dict = field(default_factory=dict)

    def __repr__(self) -> str:
        return f"Generator({self.name!r})"

    @property
    def is_second_type(self) -> bool:
        return self.differentiability is Differentiability.SECOND_TYPE

    @property
    def second_deriv_at_one(self) -> Optional[float]:
        if not self.is_second_type:
            return None
        return float(self.deriv2(np.float64(1.0)))

    @property
    def slope_at_one(self) -> float:
        # TV has no derivative at 1; 0 is a valid subgradient
        if self.deriv1 is None or not self.is_second_type:
            return 0.0
        return float(self.deriv1(np.float64(1.0)))

    def excess_at(self, u):
        """``f(1+u) - f'(1) u`` for ``u >= -1``."""
        u = np.asarray(u, dtype=float)
        if self.excess is not None:
            return self.excess(u)
        return self.value(1.0 + u) - self.slope_at_one * u

    def __call__(self, t):
        return self.value(np.asarray(t, dtype=float))


def _ensure_positive(t) -> None:
    if np.any(np.asarray(t) <= 0):
        raise DomainError("generators are defined for t > 0 only")


def eval_generator(g: Generator, order: int, t):
    """Value (order 0) or derivative (orders 1-3) of ``g`` at ``t > 0``."""
    if order not in (0, 1, 2, 3):
        raise DomainError(f"derivative order must be 0..3, got {order}")
    _ensure_positive(t)
    t_arr = np.asarray(t, dtype=float)
    if not g.is_second_type:
        if order >= 2:
            raise UnsupportedDerivative(f"{g.name} has no derivative of order {order}")
        if order == 1 and np.any(t_arr == 1.0):
            raise UnsupportedDerivative(f"{g.name} is not differentiable at t = 1")
    fn = (g.value, g.deriv1, g.deriv2, g.deriv3)[order]
    if fn is None:
        raise UnsupportedDerivative(f"{g.name} has no derivative of order {order}")
    out = fn(t_arr)
    return float(out) if np.ndim(out) == 0 else out


def classify_third_derivative(d3: Fn, grid: np.ndarray = SIGN_GRID) -> SignClass:
    vals = np.asarray(d3(grid), dtype=float)
    scale = np.maximum(1.0, np.abs(vals).max())
    if np.all(np.abs(vals) <= 1e-13 * scale):
        return SignClass.ZERO
    if np.all(vals > 0):
        return SignClass.POSITIVE
    if np.all(vals < 0):
        return SignClass.NEGATIVE
    return SignClass.MIXED


# --------------------------------------------------------------------------
# registry

def _xlogx(t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t > 0, t * np.log(np.where(t > 0, t, 1.0)), 0.0)


TV = Generator(
    name="tv",
    value=lambda t: 0.5 * np.abs(t - 1.0),
    deriv1=lambda t: 0.5 * np.sign(t - 1.0),
    deriv2=None,
    deriv3=None,
    f_at_zero=0.5,
    conj_at_zero=0.5,
    sign_class=None,
    differentiability=Differentiability.FIRST_TYPE,
    excess=lambda u: 0.5 * np.abs(u),
)

KL = Generator(
    name="kl",
    value=_xlogx,
    deriv1=lambda t: np.log(t) + 1.0,
    deriv2=lambda t: 1.0 / t,
    deriv3=lambda t: -1.0 / t**2,
    f_at_zero=0.0,
    conj_at_zero=math.inf,
    sign_class=SignClass.NEGATIVE,
    differentiability=Differentiability.SECOND_TYPE,
    excess=lambda u: (1.0 + u) * np.log1p(u) - u,
    logarithmic=True,
    monotone_third=True,
)

REVERSE_KL = Generator(
    name="reverse_kl",
    value=lambda t: -np.log(t),
    deriv1=lambda t: -1.0 / t,
    deriv2=lambda t: 1.0 / t**2,
    deriv3=lambda t: -2.0 / t**3,
    f_at_zero=math.inf,
    conj_at_zero=0.0,
    sign_class=SignClass.NEGATIVE,
    differentiability=Differentiability.SECOND_TYPE,
    excess=lambda u: u - np.log1p(u),
    logarithmic=True,
    monotone_third=True,
)

CHI_SQUARED = Generator(
    name="chi2",
    value=lambda t: t**2 - 1.0,
    deriv1=lambda t: 2.0 * t,
    deriv2=lambda t: 2.0 + 0.0 * t,
    deriv3=lambda t: 0.0 * t,
    f_at_zero=-1.0,
    conj_at_zero=math.inf,
    sign_class=SignClass.ZERO,
    differentiability=Differentiability.SECOND_TYPE,
    excess=lambda u: u * u,
    monotone_third=True,
)

JEFFREYS = Generator(
    name="jeffreys",
    value=lambda t: (t - 1.0) * np.log(t),
    deriv1=lambda t: np.log(t) + 1.0 - 1.0 / t,
    deriv2=lambda t: 1.0 / t + 1.0 / t**2,
    deriv3=lambda t: -1.0 / t**2 - 2.0 / t**3,
    f_at_zero=math.inf,
    conj_at_zero=math.inf,
    sign_class=SignClass.NEGATIVE,
    differentiability=Differentiability.SECOND_TYPE,
    excess=lambda u: u * np.log1p(u),
    logarithmic=True,
    monotone_third=True,
)


def _js_value(t):
    return _xlogx(t) - (1.0 + t) * np.log((1.0 + t) / 2.0)


JENSEN_SHANNON = Generator(
    name="jensen_shannon",
    value=_js_value,
    deriv1=lambda t: np.log(2.0 * t / (1.0 + t)),
    deriv2=lambda t: 1.0 / t - 1.0 / (1.0 + t),
    deriv3=lambda t: -1.0 / t**2 + 1.0 / (1.0 + t) ** 2,
    f_at_zero=math.log(2.0),
    conj_at_zero=math.log(2.0),
    sign_class=SignClass.NEGATIVE,
    differentiability=Differentiability.SECOND_TYPE,
    excess=lambda u: np.where(u > -1.0, (1.0 + u) * np.log1p(np.maximum(u, -1.0 + 1e-300)), 0.0)
    - (2.0 + u) * np.log1p(u / 2.0),
    logarithmic=True,
    monotone_third=True,
)


def hellinger(alpha: float) -> Generator:
    """Hellinger divergence of order alpha, ``f(t) = (t^alpha - 1)/(alpha - 1)``."""
    alpha = float(alpha)
    if not alpha > 0 or alpha == 1.0 or not math.isfinite(alpha):
        raise DomainError(f"Hellinger order must lie in (0,1) or (1,inf), got {alpha}")
    a = alpha
    if a < 2:
        sign = SignClass.NEGATIVE
    elif a == 2:
        sign = SignClass.ZERO
    else:
        sign = SignClass.POSITIVE

    def excess(u):
        return (np.expm1(a * np.log1p(u)) - a * u) / (a - 1.0)

    return Generator(
        name=f"hellinger:{a:g}",
        value=lambda t: (t**a - 1.0) / (a - 1.0),
        deriv1=lambda t: a * t ** (a - 1.0) / (a - 1.0),
        deriv2=lambda t: a * t ** (a - 2.0),
        deriv3=lambda t: a * (a - 2.0) * t ** (a - 3.0),
        f_at_zero=1.0 / (1.0 - a),
        conj_at_zero=0.0 if a < 1 else math.inf,
        sign_class=sign,
        differentiability=Differentiability.SECOND_TYPE,
        excess=excess,
        alpha=a,
        monotone_third=True,
        params={"alpha": a},
    )


def custom(name: str, value: Fn, deriv1: Fn, deriv2: Fn, deriv3: Fn,
           f_at_zero: float, conj_at_zero: float) -> Generator:
    """Second-type generator from user callbacks.

    ``f(1) = 0`` and convexity are checked on a grid; the third-derivative
    sign class is measured on the grid rather than trusted.
    """
    grid = SIGN_GRID
    if abs(float(value(np.float64(1.0)))) > 1e-12:
        raise DomainError(f"custom generator {name!r} must satisfy f(1) = 0")
    if np.any(np.asarray(deriv2(grid)) < -1e-12):
        raise DomainError(f"custom generator {name!r} is not convex on the sample grid")
    return Generator(
        name=name, value=value, deriv1=deriv1, deriv2=deriv2, deriv3=deriv3,
        f_at_zero=float(f_at_zero), conj_at_zero=float(conj_at_zero),
        sign_class=classify_third_derivative(deriv3),
        differentiability=Differentiability.SECOND_TYPE,
    )


def conjugate(g: Generator) -> Generator:
    """``f*(t) = t f(1/t)``; swaps the argument order of the divergence."""
    f, d1, d2, d3 = g.value, g.deriv1, g.deriv2, g.deriv3

    def value(t):
        return t * f(1.0 / t)

    def deriv1(t):
        s = 1.0 / t
        return f(s) - s * d1(s)

    deriv2 = deriv3 = None
    if g.is_second_type:
        def deriv2(t):
            return d2(1.0 / t) / t**3

        def deriv3(t):
            s = 1.0 / t
            return -3.0 * d2(s) / t**4 - d3(s) / t**5

    slope = g.slope_at_one
    g_excess = g.excess_at

    def excess(u):
        # f*(1+u) - f*'(1) u  with  f*'(1) = -f'(1)
        u = np.asarray(u, dtype=float)
        v = -u / (1.0 + u)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (1.0 + u) * g_excess(v)
        return np.where(u == -1.0, g.conj_at_zero + slope, out)

    sign = None
    if g.is_second_type:
        sign = classify_third_derivative(deriv3)
    base = g.name[5:-1] if g.name.startswith("conj(") and g.name.endswith(")") else None
    return Generator(
        name=base if base is not None else f"conj({g.name})",
        value=value, deriv1=deriv1, deriv2=deriv2, deriv3=deriv3,
        f_at_zero=g.conj_at_zero, conj_at_zero=g.f_at_zero,
        sign_class=sign, differentiability=g.differentiability,
        excess=excess, logarithmic=g.logarithmic, params=dict(g.params),
    )


def offset(g: Generator, c: float) -> Generator:
    """``f_c(t) = f(t) + c (t - 1)``; leaves every divergence unchanged."""
    f, d1 = g.value, g.deriv1
    return Generator(
        name=f"{g.name}+{c:g}(t-1)",
        value=lambda t: f(t) + c * (t - 1.0),
        deriv1=(lambda t: d1(t) + c) if d1 is not None else None,
        deriv2=g.deriv2, deriv3=g.deriv3,
        f_at_zero=g.f_at_zero - c, conj_at_zero=g.conj_at_zero + c,
        sign_class=g.sign_class, differentiability=g.differentiability,
        alpha=g.alpha, logarithmic=g.logarithmic, monotone_third=g.monotone_third,
    )


REGISTRY: dict[str, Generator] = {
    g.name: g for g in (TV, KL, REVERSE_KL, CHI_SQUARED, JEFFREYS, JENSEN_SHANNON)
}

_ALIASES = {
    "rkl": "reverse_kl", "reversekl": "reverse_kl", "reverse-kl": "reverse_kl",
    "chi-squared": "chi2", "chisquared": "chi2", "chi_squared": "chi2",
    "js": "jensen_shannon", "jensen-shannon": "jensen_shannon",
    "jensenshannon": "jensen_shannon", "total_variation": "tv",
}


def get_generator(name: str) -> Generator:
    """Look up a generator by name; ``hellinger:<alpha>`` builds one on demand."""
    key = name.strip().lower()
    if key.startswith(("hellinger:", "hellinger=", "h:")):
        return hellinger(float(key.split(":" if ":" in key else "=", 1)[1]))
    key = _ALIASES.get(key, key)
    try:
        return REGISTRY[key]
    except KeyError:
        raise DomainError(f"unknown generator {name!r}") from None


# --------------------------------------------------------------------------
# Taylor remainders around t = 1

def taylor_remainder(g: Generator, u):
    """``f(1+u) - f'(1) u - f''(1) u^2 / 2``, evaluated in closed form."""
    if not g.is_second_type:
        raise UnsupportedDerivative(f"{g.name} has no second derivative at 1")
    u = np.asarray(u, dtype=float)
    out = g.excess_at(u) - 0.5 * g.second_deriv_at_one * u * u
    return float(out) if out.ndim == 0 else out


def taylor_remainder_quadrature(g: Generator, u: float, nodes: int = 64) -> float:
    """Integral form ``(u^3/2) * int_0^1 f'''(1 + phi u) (1 - phi)^2 dphi``."""
    if not g.is_second_type:
        raise UnsupportedDerivative(f"{g.name} has no third derivative")
    phi, w = gauss_legendre_unit(nodes)
    inner = float(np.sum(w * g.deriv3(1.0 + phi * u) * (1.0 - phi) ** 2))
    return 0.5 * u**3 * inner


def first_order_remainder_form(g: Generator, u: float, nodes: int = 64) -> float:
    """``(u^2/2) * int_0^1 f'''(1 + phi u) (1 - phi) dphi``.

    This is the remainder shape used in the neighborhood definition's
    third condition.  It is *not* equal to the Taylor remainder in general;
    it is kept so the two can be compared.
    """
    phi, w = gauss_legendre_unit(nodes)
    inner = float(np.sum(w * g.deriv3(1.0 + phi * u) * (1.0 - phi)))
    return 0.5 * u**2 * inner


# --------------------------------------------------------------------------
# discrete distributions and divergences

@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    masses: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float).copy()
        if m.ndim != 1 or m.size < 1:
            raise DomainError("a discrete distribution needs a 1-D vector of length >= 1")
        if np.any(~np.isfinite(m)) or np.any(m < 0):
            raise DomainError("probability masses must be finite and nonnegative")
        if abs(m.sum() - 1.0) > 1e-12:
            raise DomainError(f"masses must sum to 1 within 1e-12 (sum = {m.sum():.17g})")
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != m.size:
                raise LengthMismatch("labels and masses differ in length")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_weights(cls, weights: Sequence[float], labels=None) -> "DiscreteDistribution":
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0) or w.sum() <= 0:
            raise DomainError("weights must be nonnegative with a positive total")
        return cls(w / w.sum(), labels)

    @classmethod
    def uniform(cls, k: int) -> "DiscreteDistribution":
        if k < 1:
            raise DomainError("uniform distribution needs k >= 1")
        return cls(np.full(k, 1.0 / k))

    def __len__(self) -> int:
        return self.masses.size

    def __eq__(self, other) -> bool:
        return isinstance(other, DiscreteDistribution) and np.array_equal(self.masses, other.masses)

    __hash__ = None


def _as_masses(d) -> np.ndarray:
    if isinstance(d, DiscreteDistribution):
        return d.masses
    return np.asarray(d, dtype=float)


def divergence_terms(p: np.ndarray, q: np.ndarray, g: Generator) -> np.ndarray:
    """Per-cell contributions ``q_i f(p_i/q_i)`` (offset-normalized, all >= 0).

    Works row-wise when ``p`` is 2-D.
    """
    p = np.asarray(p, dtype=float)
    q = np.broadcast_to(np.asarray(q, dtype=float), p.shape)
    slope = g.slope_at_one
    both = (p > 0) & (q > 0)
    p_zero = (p == 0) & (q > 0)
    q_zero = (q == 0) & (p > 0)
    if np.any(p_zero) and not math.isfinite(g.f_at_zero):
        raise AbsoluteContinuityError(f"{g.name}: p_i = 0 < q_i but f(0) is infinite")
    if np.any(q_zero) and not math.isfinite(g.conj_at_zero):
        raise AbsoluteContinuityError(f"{g.name}: q_i = 0 < p_i but f*(0) is infinite")
    out = np.zeros_like(p)
    qs = np.where(both, q, 1.0)
    u = np.where(both, p / qs - 1.0, 0.0)
    out[both] = (q * g.excess_at(u))[both]
    if np.any(p_zero):
        out[p_zero] = q[p_zero] * (g.f_at_zero + slope)
    if np.any(q_zero):
        out[q_zero] = p[q_zero] * (g.conj_at_zero - slope)
    return out


def f_divergence_discrete(P, Q, g: Generator) -> float:
    """``D_f(P || Q) = sum_i q_i f(p_i / q_i)`` with the usual boundary conventions."""
    p, q = _as_masses(P), _as_masses(Q)
    if p.shape != q.shape:
        raise LengthMismatch(f"distributions have lengths {p.size} and {q.size}")
    return max(0.0, float(divergence_terms(p, q, g).sum()))


def total_variation(P, Q) -> float:
    return f_divergence_discrete(P, Q, TV)


def excess_with_boundary(g: Generator, u):
    """``excess_at`` extended to ``u = -1`` by the limit ``f(0) + f'(1)``."""
    u = np.asarray(u, dtype=float)
    at_zero = u <= -1.0
    if np.any(at_zero) and not math.isfinite(g.f_at_zero):
        raise AbsoluteContinuityError(f"{g.name}: ratio vanishes on positive mass but f(0) is infinite")
    safe = np.where(at_zero, 0.0, u)
    out = np.where(at_zero, g.f_at_zero + g.slope_at_one, g.excess_at(safe))
    return float(out) if out.ndim == 0 else out
