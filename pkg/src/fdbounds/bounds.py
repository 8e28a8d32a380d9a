"""Bound constants and the divergence inequalities built from them.

Everything here is in nats.  Bounds are evaluated at the tightest admissible
constants unless the caller passes its own.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize

from .errors import (DomainError, InadmissibleConstant, NotCertified,
                     RatioUnbounded, RegionNotFull, UnknownPair, UnsupportedDerivative)
from .generators import (CHI_SQUARED, KL, REVERSE_KL, TV, Generator, SignClass,
                         get_generator, hellinger)
from .measures import DiscretePair, exact_divergence
from .neighborhood import NeighborhoodCertificate

HOLDS_TOL = 1e-12
GRID_POINTS = 4096
# presets for reproducing the coarse constants used in worked examples
PRESETS = {"coarse_c": 1.0}


class GammaMethod(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    GRID_SEARCH = "grid_search"


@dataclass(frozen=True)
class GammaBounds:
    gamma_sup: float
    gamma_inf: float
    method: GammaMethod

    def to_dict(self) -> dict:
        return {"gamma_sup": self.gamma_sup, "gamma_inf": self.gamma_inf, "method": self.method.value}


@dataclass
class BoundReport:
    source: str
    lower: float
    upper: float
    exact: float
    constants: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    name: str = ""
    parts: list = field(default_factory=list)
    holds: bool = field(init=False)
    slack: float = field(init=False)

    def __post_init__(self):
        self.refresh()

    def refresh(self) -> None:
        if math.isnan(self.exact):
            own_ok, slack = True, math.nan
        else:
            own_ok = (self.lower <= self.exact + HOLDS_TOL) and (self.exact <= self.upper + HOLDS_TOL)
            slack = min(self.exact - self.lower, self.upper - self.exact)
        self.holds = own_ok and all(p.holds for p in self.parts)
        self.slack = slack

    def to_dict(self) -> dict:
        out = {"source": self.source, "name": self.name, "lower": self.lower, "upper": self.upper,
               "exact": self.exact, "holds": self.holds, "slack": self.slack,
               "constants": dict(self.constants), "flags": list(self.flags)}
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out


def _require_second_type(g: Generator) -> float:
    if not g.is_second_type:
        raise UnsupportedDerivative(f"{g.name} has no second derivative at 1")
    return g.second_deriv_at_one


def _theta_interval(epsilon: float, big_m: float, small_m: float) -> tuple[float, float]:
    lo = 1.0 - small_m * epsilon
    if lo <= 0.0:
        raise DomainError(f"1 - m eps = {lo} must be positive for the third-derivative bounds")
    return lo, 1.0 + big_m * epsilon


# --------------------------------------------------------------------------
# Gamma_sup / Gamma_inf and the minimal constants

def _grid_extrema(d3, lo: float, hi: float) -> tuple[float, float]:
    theta = np.linspace(lo, hi, GRID_POINTS)
    vals = np.asarray(d3(theta), dtype=float)
    i_max, i_min = int(np.argmax(vals)), int(np.argmin(vals))
    gmax, gmin = float(vals[i_max]), float(vals[i_min])
    # refine each extremum inside its bracketing grid cells
    for idx, sign in ((i_max, -1.0), (i_min, 1.0)):
        a = theta[max(idx - 1, 0)]
        b = theta[min(idx + 1, GRID_POINTS - 1)]
        if b <= a:
            continue
        res = optimize.minimize_scalar(lambda x: sign * float(d3(np.float64(x))),
                                       bounds=(a, b), method="bounded",
                                       options={"xatol": 1e-14 * max(1.0, hi)})
        val = float(d3(np.float64(res.x)))
        if sign < 0:
            gmax = max(gmax, val)
        else:
            gmin = min(gmin, val)
    return gmax, gmin


def gamma_bounds(g: Generator, epsilon: float, big_m: float, small_m: float,
                 method: Optional[GammaMethod] = None) -> GammaBounds:
    """Extrema of g'''(theta) * eta over theta in [1 - m eps, 1 + M eps], eta in [-m, M].

    ``eta`` enters linearly so only its endpoints matter.  For registered
    generators g''' is monotone and the theta extrema sit at the interval ends.
    """
    _require_second_type(g)
    lo, hi = _theta_interval(epsilon, big_m, small_m)
    if method is None:
        uniform = g.sign_class in (SignClass.ZERO, SignClass.POSITIVE, SignClass.NEGATIVE)
        method = GammaMethod.CLOSED_FORM if (g.monotone_third and uniform) else GammaMethod.GRID_SEARCH
    if g.sign_class is SignClass.ZERO and method is GammaMethod.CLOSED_FORM:
        return GammaBounds(0.0, 0.0, method)
    if method is GammaMethod.CLOSED_FORM:
        ends = np.asarray(g.deriv3(np.array([lo, hi])), dtype=float)
        gmax, gmin = float(ends.max()), float(ends.min())
    else:
        gmax, gmin = _grid_extrema(g.deriv3, lo, hi)
    sup = max(big_m * gmax, -small_m * gmin, 0.0)
    inf = min(big_m * gmin, -small_m * gmax, 0.0)
    return GammaBounds(sup, inf, method)


def minimal_c(g: Generator, epsilon: float, big_m: float, small_m: float) -> float:
    """Smallest c with c >= eps Gamma_sup / (3 g''(1))."""
    g2 = _require_second_type(g)
    return epsilon * gamma_bounds(g, epsilon, big_m, small_m).gamma_sup / (3.0 * g2)


def minimal_c_bar(g: Generator, epsilon: float, big_m: float, small_m: float) -> float:
    """Largest c-bar with c-bar <= eps Gamma_inf / (3 g''(1))."""
    g2 = _require_second_type(g)
    return epsilon * gamma_bounds(g, epsilon, big_m, small_m).gamma_inf / (3.0 * g2)


def _admissible_c(g, spec, c):
    cmin = minimal_c(g, spec.epsilon, spec.big_m, spec.small_m)
    if c is None:
        return cmin
    if c < cmin - 1e-15 * max(1.0, abs(cmin)):
        raise InadmissibleConstant(f"c = {c} is below the admissible minimum {cmin} for {g.name}")
    return float(c)


def _admissible_c_bar(g, spec, c_bar):
    cmax = minimal_c_bar(g, spec.epsilon, spec.big_m, spec.small_m)
    if c_bar is None:
        return cmax
    if c_bar > cmax + 1e-15 * max(1.0, abs(cmax)):
        raise InadmissibleConstant(f"c_bar = {c_bar} exceeds the admissible maximum {cmax} for {g.name}")
    return float(c_bar)


# --------------------------------------------------------------------------
# factor functions

def g_factor(g: Generator, c: float, c_hat: float) -> float:
    """(1 + c) g''(1), plus c_hat unless g''' < 0 everywhere."""
    g2 = _require_second_type(g)
    base = (1.0 + c) * g2
    if g.sign_class is SignClass.NEGATIVE:
        return base
    return base + c_hat


def g_prime_factor(g: Generator, c_bar: float, tilde_c: float, c_hat_prime: float) -> float:
    """(1 + c_bar - c_bar tilde_c) g''(1), plus c_hat' unless g''' > 0 everywhere."""
    g2 = _require_second_type(g)
    base = (1.0 + c_bar - c_bar * tilde_c) * g2
    if g.sign_class is SignClass.POSITIVE:
        return base
    return base + c_hat_prime


# --------------------------------------------------------------------------
# theorems and corollaries

def _check_certified(cert: NeighborhoodCertificate) -> None:
    if not cert.condition1_holds:
        raise RatioUnbounded("condition (1) fails on the certified region")
    if not (cert.condition2_holds and cert.condition3_holds):
        raise NotCertified("conditions (2)-(3) do not hold for this certificate")


def _regime_flags(cert: NeighborhoodCertificate, g: Generator, witness) -> list:
    flags = []
    if abs(witness.c_hat) >= g.second_deriv_at_one or cert.tilde_c >= 0.5:
        flags.append("LooseRegime")
    if not witness.sign_shortcut_valid:
        flags.append("SignShortcutInvalid")
    return flags


def theorem1_reverse_pinsker(cert: NeighborhoodCertificate, g: Generator,
                             c: Optional[float] = None, honor_witness: bool = False) -> BoundReport:
    """sqrt(2 D_g / (G_g(c, c_hat) Delta)) <= eps <= 2 gamma TV / ((1 - tilde_c) Delta).

    The left side is D_g <= G Delta eps^2 / 2 solved for eps; the value
    without the Delta factor is kept as ``lower_without_delta``.  With
    ``honor_witness`` c_hat is added to G even when g''' < 0, which keeps the
    bound valid when the complement remainder is positive.
    """
    _require_second_type(g)
    _check_certified(cert)
    spec = cert.spec
    c = _admissible_c(g, spec, c)
    w = cert.witness(g)
    G = g_factor(g, c, w.c_hat)
    if honor_witness and g.sign_class is SignClass.NEGATIVE:
        G += w.c_hat
    consts = {"c": c, "c_hat": w.c_hat, "G": G, "gamma": spec.gamma, "tilde_c": cert.tilde_c,
              "delta": cert.delta, "delta_in": cert.delta_in}
    name = f"reverse_pinsker[{g.name}]"
    if cert.degenerate:
        return BoundReport("theorem1", 0.0, math.inf, spec.epsilon, consts, ["DegenerateZero"], name=name)
    d = exact_divergence(cert.pair, g)
    tv = exact_divergence(cert.pair, TV)
    flags = _regime_flags(cert, g, w)
    if g.sign_class is SignClass.NEGATIVE and w.c_hat != 0.0 and not honor_witness:
        flags.append("WitnessDropped")
    lower = math.sqrt(2.0 * d / (G * cert.delta)) if G > 0 else math.inf
    # (1 - tilde_c) Delta is exactly the inside mass Delta_eps
    upper = 2.0 * spec.gamma * tv / cert.delta_in if cert.delta_in > 0 else math.inf
    consts.update({"divergence": d, "tv": tv,
                   "lower_without_delta": math.sqrt(2.0 * d / G) if G > 0 else math.inf,
                   "divergence_upper": 0.5 * G * cert.delta * spec.epsilon**2})
    return BoundReport("theorem1", lower, upper, spec.epsilon, consts, flags, name=name)


def _ratio_report(source, name, cert, g1, g2, num_lo, den_lo, num_hi, den_hi, consts, flags):
    lower = num_lo / den_lo if den_lo > 0 else -math.inf
    if num_lo <= 0 or den_lo <= 0:
        lower = -math.inf
        flags.append("TrivialBound")
    if den_hi > 0:
        upper = num_hi / den_hi
    else:
        upper = math.inf
        flags.append("TrivialBound")
    if cert.degenerate:
        return BoundReport(source, lower, upper, math.nan, consts, flags + ["DegenerateZero"], name=name)
    d1 = exact_divergence(cert.pair, g1)
    d2 = exact_divergence(cert.pair, g2)
    consts.update({"d1": d1, "d2": d2})
    exact = d1 / d2 if d2 > 0 else math.nan
    return BoundReport(source, lower, upper, exact, consts, sorted(set(flags)), name=name)


def theorem2_ratio_bounds(cert: NeighborhoodCertificate, g1: Generator, g2: Generator,
                          c1=None, c_bar1=None, c2=None, c_bar2=None) -> BoundReport:
    """G'_{g1}(c_bar1, tilde_c, c_hat'_1) / G_{g2}(c2, c_hat_2) <= D1/D2 <= G_{g1} / G'_{g2}."""
    _check_certified(cert)
    spec = cert.spec
    c1 = _admissible_c(g1, spec, c1)
    c2 = _admissible_c(g2, spec, c2)
    c_bar1 = _admissible_c_bar(g1, spec, c_bar1)
    c_bar2 = _admissible_c_bar(g2, spec, c_bar2)
    w1, w2 = cert.witness(g1), cert.witness(g2)
    tc = cert.tilde_c
    G1, G2 = g_factor(g1, c1, w1.c_hat), g_factor(g2, c2, w2.c_hat)
    Gp1 = g_prime_factor(g1, c_bar1, tc, w1.c_hat_prime)
    Gp2 = g_prime_factor(g2, c_bar2, tc, w2.c_hat_prime)
    consts = {"c1": c1, "c_bar1": c_bar1, "c2": c2, "c_bar2": c_bar2, "G1": G1, "G2": G2,
              "G_prime1": Gp1, "G_prime2": Gp2, "tilde_c": tc}
    flags = _regime_flags(cert, g1, w1) + _regime_flags(cert, g2, w2)
    return _ratio_report("theorem2", f"ratio[{g1.name}/{g2.name}]", cert, g1, g2,
                         Gp1, G2, G1, Gp2, consts, flags)


def _require_full(cert: NeighborhoodCertificate) -> None:
    if not cert.full_support:
        raise RegionNotFull("this corollary needs the region to cover the full support")


def corollary1_bounds(cert: NeighborhoodCertificate, g: Generator,
                      c: Optional[float] = None) -> BoundReport:
    """TV and divergence bounds for full-support certificates.

    The headline report is sqrt(Delta D_g / (2 (1+c) g''(1) gamma^2)) <= TV; its
    parts hold the TV lower bound, the divergence upper bound and the two
    chi-squared rewrites.
    """
    g2 = _require_second_type(g)
    _check_certified(cert)
    _require_full(cert)
    spec = cert.spec
    c = _admissible_c(g, spec, c)
    eps, gam, delta = spec.epsilon, spec.gamma, cert.delta
    consts = {"c": c, "gamma": gam, "delta": delta, "epsilon": eps, "g2": g2}
    name = f"corollary1[{g.name}]"
    if cert.degenerate:
        return BoundReport("corollary1", 0.0, math.inf, 0.0, consts, ["DegenerateZero"], name=name)
    d = exact_divergence(cert.pair, g)
    tv = exact_divergence(cert.pair, TV)
    chi2 = cert.chi_squared
    parts = [
        BoundReport("corollary1", delta * eps / (2.0 * gam), math.inf, tv, name="tv_lower"),
        BoundReport("corollary1", -math.inf, 0.5 * (1.0 + c) * eps**2 * g2 * delta, d,
                    name="divergence_upper"),
        BoundReport("corollary1", -math.inf, 2.0 * gam * eps * tv, chi2, name="chi2_tv"),
        BoundReport("corollary1", -math.inf, 0.5 * (1.0 + c) * g2 * chi2, d, name="divergence_chi2"),
    ]
    lower = math.sqrt(delta * d / (2.0 * (1.0 + c) * g2 * gam**2))
    consts.update({"divergence": d, "tv": tv, "chi_squared": chi2,
                   "divergence_upper_from_tv": 2.0 * (1.0 + c) * g2 * gam**2 * tv**2 / delta})
    return BoundReport("corollary1", lower, math.inf, tv, consts, name=name, parts=parts)


def corollary2_ratio(cert: NeighborhoodCertificate, g1: Generator, g2: Generator,
                     c1=None, c_bar1=None, c2=None, c_bar2=None) -> BoundReport:
    """(1+c_bar1) g1''/((1+c2) g2'') <= D1/D2 <= (1+c1) g1''/((1+c_bar2) g2'')."""
    _check_certified(cert)
    _require_full(cert)
    spec = cert.spec
    c1 = _admissible_c(g1, spec, c1)
    c2 = _admissible_c(g2, spec, c2)
    c_bar1 = _admissible_c_bar(g1, spec, c_bar1)
    c_bar2 = _admissible_c_bar(g2, spec, c_bar2)
    a1, a2 = g1.second_deriv_at_one, g2.second_deriv_at_one
    consts = {"c1": c1, "c_bar1": c_bar1, "c2": c2, "c_bar2": c_bar2}
    return _ratio_report("corollary2", f"ratio[{g1.name}/{g2.name}]", cert, g1, g2,
                         (1.0 + c_bar1) * a1, (1.0 + c2) * a2,
                         (1.0 + c1) * a1, (1.0 + c_bar2) * a2, consts, [])


def corollary2_interval(g1: Generator, g2: Generator, epsilon: float, big_m: float,
                        small_m: float) -> tuple[float, float]:
    """Tightest ratio interval from the parameters alone (no pair needed)."""
    c1, cb1 = minimal_c(g1, epsilon, big_m, small_m), minimal_c_bar(g1, epsilon, big_m, small_m)
    c2, cb2 = minimal_c(g2, epsilon, big_m, small_m), minimal_c_bar(g2, epsilon, big_m, small_m)
    a1, a2 = g1.second_deriv_at_one, g2.second_deriv_at_one
    lower = (1.0 + cb1) * a1 / ((1.0 + c2) * a2) if 1.0 + cb1 > 0 else -math.inf
    upper = (1.0 + c1) * a1 / ((1.0 + cb2) * a2) if 1.0 + cb2 > 0 else math.inf
    return lower, upper


def taylor_sandwich(cert: NeighborhoodCertificate, g: Generator) -> BoundReport:
    """1/2 eps^2 g'' Delta + eps^3 Delta Gamma_inf / 6 <= D_g <= ... Gamma_sup / 6."""
    g2 = _require_second_type(g)
    _check_certified(cert)
    _require_full(cert)
    spec = cert.spec
    gb = gamma_bounds(g, spec.epsilon, spec.big_m, spec.small_m)
    eps, delta = spec.epsilon, cert.delta
    base = 0.5 * eps**2 * g2 * delta
    d = 0.0 if cert.degenerate else exact_divergence(cert.pair, g)
    return BoundReport("sandwich", base + eps**3 * delta * gb.gamma_inf / 6.0,
                       base + eps**3 * delta * gb.gamma_sup / 6.0, d,
                       {"gamma_sup": gb.gamma_sup, "gamma_inf": gb.gamma_inf},
                       name=f"sandwich[{g.name}]")


# --------------------------------------------------------------------------
# closed-form constants for the six worked pairs

PAIR_IDS = ("kl_tv", "chi2_tv", "hellinger_tv", "kl_rkl", "chi2_kl", "hellinger_kl")


def _kl_consts(e, M, m):
    return e * m / (3.0 * (1.0 - e * m) ** 2), -e * M / (3.0 * (1.0 - e * m) ** 2)


def _rkl_consts(e, M, m):
    return 2.0 * e * m / (3.0 * (1.0 - e * m) ** 3), -2.0 * e * M / (3.0 * (1.0 - e * m) ** 3)


def _hellinger_consts(a, e, M, m):
    if a == 2.0:
        return 0.0, 0.0
    lo, hi = 1.0 - e * m, 1.0 + e * M
    if a < 2.0:
        # g''' < 0 with |g'''| largest at the lower end
        return -e * m * (a - 2.0) / (3.0 * lo ** (3.0 - a)), e * M * (a - 2.0) / (3.0 * lo ** (3.0 - a))
    if a < 3.0:
        return e * M * (a - 2.0) / (3.0 * lo ** (3.0 - a)), -e * m * (a - 2.0) / (3.0 * lo ** (3.0 - a))
    return e * M * (a - 2.0) * hi ** (a - 3.0) / 3.0, -e * m * (a - 2.0) * hi ** (a - 3.0) / 3.0


def _parse_pair(pair_id: str, alpha: Optional[float]):
    key = pair_id.strip().lower().replace("-", "_")
    if ":" in key:
        key, a = key.split(":", 1)
        alpha = float(a)
    if key not in PAIR_IDS:
        raise UnknownPair(f"unknown pair {pair_id!r}; expected one of {', '.join(PAIR_IDS)}")
    if key.startswith("hellinger"):
        if alpha is None:
            raise UnknownPair(f"{key} needs an order alpha")
        hellinger(alpha)  # validates the order
    return key, alpha


def pair_generators(pair_id: str, alpha: Optional[float] = None) -> tuple[Generator, Generator]:
    key, alpha = _parse_pair(pair_id, alpha)
    first = {"kl": KL, "chi2": CHI_SQUARED}.get(key.split("_")[0])
    if first is None:
        first = hellinger(alpha)
    second = {"tv": TV, "rkl": REVERSE_KL, "kl": KL}[key.split("_")[1]]
    return first, second


def specialized_constants(pair_id: str, epsilon: float, big_m: float, small_m: float,
                          alpha: Optional[float] = None) -> dict:
    """Hand-derived minimal c / maximal c-bar for the worked divergence pairs."""
    key, alpha = _parse_pair(pair_id, alpha)
    _theta_interval(epsilon, big_m, small_m)
    e, M, m = epsilon, big_m, small_m
    if key == "kl_tv":
        c, cb = _kl_consts(e, M, m)
        return {"c": c, "c_bar": cb}
    if key == "chi2_tv":
        return {"c": 0.0, "c_bar": 0.0}
    if key == "hellinger_tv":
        c, cb = _hellinger_consts(alpha, e, M, m)
        return {"c": c, "c_bar": cb}
    if key == "kl_rkl":
        c1, cb1 = _kl_consts(e, M, m)
        c2, cb2 = _rkl_consts(e, M, m)
    elif key == "chi2_kl":
        c1 = cb1 = 0.0
        c2, cb2 = _kl_consts(e, M, m)
    else:
        c1, cb1 = _hellinger_consts(alpha, e, M, m)
        c2, cb2 = _kl_consts(e, M, m)
    return {"c1": c1, "c_bar1": cb1, "c2": c2, "c_bar2": cb2}


def generic_constants(pair_id: str, epsilon: float, big_m: float, small_m: float,
                      alpha: Optional[float] = None) -> dict:
    """The same constants from the generic Gamma machinery."""
    g1, g2 = pair_generators(pair_id, alpha)
    args = (epsilon, big_m, small_m)
    if g2 is TV:
        return {"c": minimal_c(g1, *args), "c_bar": minimal_c_bar(g1, *args)}
    return {"c1": minimal_c(g1, *args), "c_bar1": minimal_c_bar(g1, *args),
            "c2": minimal_c(g2, *args), "c_bar2": minimal_c_bar(g2, *args)}


# --------------------------------------------------------------------------
# baselines from earlier work, for comparison only

def _phi(t: float) -> float:
    if t == 0.0:
        return 0.0
    if t == 1.0:
        return 1.0
    return t * math.log(t) / (t - 1.0)


def kappa(t: float) -> float:
    """(t ln t + 1 - t) / (t - 1 - ln t), the KL / reverse-KL ratio envelope."""
    if t == 1.0:
        return 1.0
    return (t * math.log(t) + 1.0 - t) / ((t - 1.0) - math.log(t))


def baseline_bounds(cert: NeighborhoodCertificate, g: Generator) -> list[BoundReport]:
    """Evaluate each earlier bound that applies to (pair, g)."""
    spec = cert.spec
    pair = cert.pair
    tv = exact_divergence(pair, TV)
    d = exact_divergence(pair, g)
    lo_r, hi_r = spec.theta_interval
    out = []

    coef = g.f_at_zero + g.conj_at_zero
    out.append(BoundReport("baseline", -math.inf, coef * tv if math.isfinite(coef) else math.inf, d,
                           {"coefficient": coef}, name="linear"))

    if lo_r < 1.0 < hi_r:
        try:
            f_lo = float(g.value(np.float64(lo_r))) if lo_r > 0 else g.f_at_zero
            f_hi = float(g.value(np.float64(hi_r)))
            coef = f_lo / (1.0 - lo_r) + f_hi / (hi_r - 1.0)
        except (ValueError, ZeroDivisionError):
            coef = math.inf
        up = coef * tv if math.isfinite(coef) else math.inf
        out.append(BoundReport("baseline", -math.inf, up, d,
                               {"m_hat": lo_r, "M_hat": hi_r, "coefficient": coef},
                               name="ratio_range_linear"))

    if g.name == "kl":
        coef = _phi(hi_r) - _phi(lo_r)
        out.append(BoundReport("baseline", -math.inf, coef * tv, d,
                               {"beta1_inv": hi_r, "beta2": lo_r, "coefficient": coef},
                               name="phi_linear"))
        # Pinsker bounds TV from above: TV <= sqrt(D / 2)
        out.append(BoundReport("baseline", -math.inf, math.sqrt(d / 2.0), tv, name="pinsker"))
        if isinstance(pair, DiscretePair):
            qmin = float(pair.p0.masses.min())
            if qmin > 0:
                out.append(BoundReport("baseline", -math.inf, math.log1p(2.0 * tv**2 / qmin), d,
                                       {"q_min": qmin}, name="finite_alphabet"))
    if g.name in ("kl", "reverse_kl") and not cert.degenerate:
        d_kl = exact_divergence(pair, KL)
        d_rkl = exact_divergence(pair, REVERSE_KL)
        ratio = d_kl / d_rkl if d_rkl > 0 else math.nan
        lo_k = kappa(lo_r) if lo_r > 0 else 0.0
        out.append(BoundReport("baseline", lo_k, kappa(hi_r), ratio,
                               {"beta2": lo_r, "beta1_inv": hi_r}, name="kappa_ratio"))
    return out


def tightness_condition(n: int, m: float, k: float, c: float) -> dict:
    """Compare the neighborhood KL upper bound (1+c)/(n k^2) with 2/(2 + m^2 n).

    The first is smaller exactly when 2 k^2 > (1+c) m^2 + 2 (1+c)/n.
    """
    ours = (1.0 + c) / (n * k * k)
    theirs = 2.0 / (2.0 + m * m * n)
    lhs = 2.0 * k * k
    rhs = (1.0 + c) * m * m + 2.0 * (1.0 + c) / n
    return {"neighborhood_bound": ours, "finite_alphabet_floor": theirs,
            "lhs": lhs, "rhs": rhs, "condition_holds": lhs > rhs,
            "neighborhood_tighter": ours <= theirs}


def resolve_generator(g) -> Generator:
    return get_generator(g) if isinstance(g, str) else g


__all__ = [
    "GammaBounds", "GammaMethod", "BoundReport", "gamma_bounds", "minimal_c", "minimal_c_bar",
    "g_factor", "g_prime_factor", "theorem1_reverse_pinsker", "theorem2_ratio_bounds",
    "corollary1_bounds", "corollary2_ratio", "corollary2_interval", "taylor_sandwich",
    "specialized_constants", "generic_constants", "pair_generators", "baseline_bounds", "kappa",
    "tightness_condition", "PRESETS", "PAIR_IDS",
]
