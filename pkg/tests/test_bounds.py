import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fdbounds.bounds import (PAIR_IDS, GammaMethod, baseline_bounds, corollary1_bounds,
                             corollary2_interval, corollary2_ratio, gamma_bounds, generic_constants,
                             kappa, minimal_c, minimal_c_bar, pair_generators, specialized_constants,
                             taylor_sandwich, theorem1_reverse_pinsker, theorem2_ratio_bounds,
                             tightness_condition)
from fdbounds.errors import (DomainError, InadmissibleConstant, NotCertified, RatioUnbounded,
                             RegionNotFull, UnknownPair)
from fdbounds.generators import (CHI_SQUARED, JEFFREYS, JENSEN_SHANNON, KL, REVERSE_KL, TV,
                                 hellinger)
from fdbounds.measures import LocalGaussian, TruncatedBall, as_pair
from fdbounds.neighborhood import NeighborhoodSpec, certify, certify_discrete

GENERATORS = [KL, REVERSE_KL, CHI_SQUARED, hellinger(0.5), hellinger(3.0), JEFFREYS, JENSEN_SHANNON]
# hand-evaluated: KL''' = -1/t^2 on [0.9, 1.1] peaks in magnitude at 0.9
KL_GAMMA_SUP = 1.0 / 0.81
KL_RKL_INTERVAL = (0.8785085881860074, 1.1459486663311524)


def test_gamma_bounds_kl():
    gb = gamma_bounds(KL, 0.1, 1.0, 1.0)
    assert gb.method is GammaMethod.CLOSED_FORM
    assert gb.gamma_sup == pytest.approx(KL_GAMMA_SUP, rel=1e-14)
    assert gb.gamma_inf == pytest.approx(-KL_GAMMA_SUP, rel=1e-14)
    assert minimal_c(KL, 0.1, 1.0, 1.0) == pytest.approx(0.1 * KL_GAMMA_SUP / 3, rel=1e-14)
    assert minimal_c_bar(KL, 0.1, 1.0, 1.0) == pytest.approx(-0.1 * KL_GAMMA_SUP / 3, rel=1e-14)


@pytest.mark.parametrize("g", [KL, REVERSE_KL, hellinger(0.5), hellinger(3.5), JEFFREYS, JENSEN_SHANNON],
                         ids=lambda g: g.name)
@pytest.mark.parametrize("eps,M,m", [(0.1, 1, 1), (0.05, 2.0, 0.5), (0.3, 0.5, 3.0)])
def test_grid_search_matches_closed_form(g, eps, M, m):
    cf = gamma_bounds(g, eps, M, m, GammaMethod.CLOSED_FORM)
    gs = gamma_bounds(g, eps, M, m, GammaMethod.GRID_SEARCH)
    assert gs.gamma_sup == pytest.approx(cf.gamma_sup, rel=1e-10)
    assert gs.gamma_inf == pytest.approx(cf.gamma_inf, rel=1e-10)


def test_chi2_constants_vanish():
    gb = gamma_bounds(CHI_SQUARED, 0.2, 1.0, 1.0)
    assert gb.gamma_sup == 0.0 and gb.gamma_inf == 0.0


def test_gamma_bounds_need_positive_interval():
    with pytest.raises(DomainError):
        gamma_bounds(KL, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        gamma_bounds(TV, 0.1, 1.0, 1.0)


def test_kl_rkl_interval():
    lo, hi = corollary2_interval(KL, REVERSE_KL, 0.1, 1.0, 1.0)
    assert lo == pytest.approx(KL_RKL_INTERVAL[0], abs=1e-15)
    assert hi == pytest.approx(KL_RKL_INTERVAL[1], abs=1e-15)


@pytest.mark.parametrize("pair_id,alpha", [
    ("kl_tv", None), ("chi2_tv", None), ("kl_rkl", None), ("chi2_kl", None),
    ("hellinger_tv", 0.5), ("hellinger_tv", 2.0), ("hellinger_tv", 2.5), ("hellinger_tv", 3.5),
    ("hellinger_kl", 0.5), ("hellinger_kl", 2.0), ("hellinger_kl", 2.5), ("hellinger_kl", 3.5),
])
@pytest.mark.parametrize("eps,M,m", [(0.1, 1, 1), (0.02, 5, 3), (0.4, 0.2, 2.0)])
def test_specialized_constants_match_generic(pair_id, alpha, eps, M, m):
    s = specialized_constants(pair_id, eps, M, m, alpha)
    g = generic_constants(pair_id, eps, M, m, alpha)
    assert s.keys() == g.keys()
    for k in s:
        assert s[k] == pytest.approx(g[k], abs=1e-12)


def test_pair_id_parsing():
    assert pair_generators("kl-rkl") == (KL, REVERSE_KL)
    assert pair_generators("hellinger-tv:0.5")[0].alpha == 0.5
    assert set(PAIR_IDS) == {"kl_tv", "chi2_tv", "hellinger_tv", "kl_rkl", "chi2_kl", "hellinger_kl"}
    with pytest.raises(UnknownPair):
        pair_generators("kl-js")
    with pytest.raises(UnknownPair):
        pair_generators("hellinger_tv")


def test_inadmissible_constants(categorical_pair):
    cert = certify_discrete(categorical_pair.p1, categorical_pair.p0, 0.05)
    with pytest.raises(InadmissibleConstant):
        corollary1_bounds(cert, KL, c=0.0)
    rep = corollary1_bounds(cert, KL, c=1.0)
    assert rep.holds and rep.lower == pytest.approx(math.sqrt(0.016 * 2.0000333346667e-5 / (4 * 0.2**2)), rel=1e-10)


def test_categorical_theorem1_and_corollary1(categorical_pair):
    cert = certify_discrete(categorical_pair.p1, categorical_pair.p0, 0.05, [KL])
    t1 = theorem1_reverse_pinsker(cert, KL)
    assert t1.holds
    assert t1.upper == pytest.approx(0.05, rel=1e-12)
    assert t1.lower < 0.05
    c1 = corollary1_bounds(cert, KL)
    assert c1.holds and all(p.holds for p in c1.parts)
    assert c1.lower == pytest.approx(0.0019966242761467, rel=1e-10)
    assert c1.exact == pytest.approx(0.002, rel=1e-12)


def test_categorical_baselines(categorical_pair):
    cert = certify_discrete(categorical_pair.p1, categorical_pair.p0, 0.05, [KL])
    rows = {r.name: r for r in baseline_bounds(cert, KL)}
    assert {"pinsker", "phi_linear", "finite_alphabet", "kappa_ratio"} <= set(rows)
    assert all(r.holds for r in rows.values())
    assert rows["pinsker"].upper == pytest.approx(math.sqrt(2.0000333346667e-5 / 2), rel=1e-10)
    assert rows["finite_alphabet"].upper == pytest.approx(math.log1p(2 * 0.002**2 / 0.2), rel=1e-12)


def test_tightness_condition():
    out = tightness_condition(5, 100.0, 20.0, 1.0)
    assert out["lhs"] == 800.0
    assert out["rhs"] == pytest.approx(2 * 100**2 + 2 * 2 / 5)
    assert not out["condition_holds"]
    assert out["condition_holds"] == out["neighborhood_tighter"]


def test_kappa():
    assert kappa(1.0) == 1.0
    assert kappa(0.9) < 1.0 < kappa(1.1)


def test_truncated_ball_sign_shortcut():
    fam = TruncatedBall(1.0, 100.0, 4)
    cert = certify(fam, NeighborhoodSpec(0.1, 1.0, 1.0), [KL, CHI_SQUARED])
    literal = theorem1_reverse_pinsker(cert, KL)
    assert not literal.holds
    assert "WitnessDropped" in literal.flags
    honored = theorem1_reverse_pinsker(cert, KL, honor_witness=True)
    assert honored.holds
    chi = theorem1_reverse_pinsker(cert, CHI_SQUARED)
    assert chi.holds and chi.lower == pytest.approx(0.1, rel=1e-9)


@pytest.mark.parametrize("g", [KL, REVERSE_KL, CHI_SQUARED, hellinger(0.5), hellinger(3.0)],
                         ids=lambda g: g.name)
def test_gaussian_theorem1(g):
    cert = certify(LocalGaussian(0.1), NeighborhoodSpec(0.05, 1.0, 1.0), [g])
    assert theorem1_reverse_pinsker(cert, g).holds


def test_gaussian_theorem2():
    cert = certify(LocalGaussian(0.1), NeighborhoodSpec(0.05, 1.0, 1.0), [KL, CHI_SQUARED])
    assert theorem2_ratio_bounds(cert, KL, CHI_SQUARED).holds


def test_corollaries_need_full_support():
    cert = certify(LocalGaussian(0.1), NeighborhoodSpec(0.05, 1.0, 1.0), [KL])
    with pytest.raises(RegionNotFull):
        corollary1_bounds(cert, KL)
    with pytest.raises(RegionNotFull):
        taylor_sandwich(cert, KL)


def test_uncertified_inputs_raise():
    bad = certify(as_pair(([0.3, 0.7], [0.5, 0.5])), NeighborhoodSpec(0.05, 1.0, 1.0))
    with pytest.raises(RatioUnbounded):
        theorem1_reverse_pinsker(bad, KL)
    fam = TruncatedBall(1.0, 100.0, 4)
    cert = certify(fam, NeighborhoodSpec(0.1, 1.0, 1.0))
    object.__setattr__(cert, "condition2_holds", False)
    with pytest.raises(NotCertified):
        theorem1_reverse_pinsker(cert, KL)


def test_degenerate_pair_reports():
    u = np.full(3, 1 / 3)
    cert = certify(as_pair((u, u)), NeighborhoodSpec(0.1, 1.0, 1.0), [KL])
    rep = theorem1_reverse_pinsker(cert, KL)
    assert "DegenerateZero" in rep.flags and rep.holds


def test_pinch_along_shrinking_family():
    q = np.array([0.1, 0.2, 0.3, 0.4])
    v = np.array([1.0, -1.0, 0.5, -0.25])
    v = v - np.dot(q, v)
    p = q * (1 + 1e-3 * v)
    cert = certify_discrete(p, q, 1e-3 * np.abs(v).max())
    rep = corollary2_ratio(cert, KL, CHI_SQUARED)
    assert rep.holds
    assert rep.upper - rep.lower < 0.01
    assert abs(0.5 * (rep.upper + rep.lower) - 0.5) < 0.005


probs = arrays(np.float64, st.integers(2, 30), elements=st.floats(0.02, 1.0))


@given(probs, st.data(), st.sampled_from(GENERATORS))
@settings(max_examples=80, deadline=None)
def test_bounds_sound_on_random_pairs(w, data, g):
    v = data.draw(arrays(np.float64, w.size, elements=st.floats(0.02, 1.0)))
    p, q = w / w.sum(), v / v.sum()
    u = p / q - 1
    if np.max(np.abs(u)) < 1e-9 or -u.min() >= 1.0:
        return
    eps = float(np.abs(u).max())
    cert = certify_discrete(p, q, eps, [g, CHI_SQUARED])
    assert taylor_sandwich(cert, g).holds
    assert corollary1_bounds(cert, g).holds
    assert corollary2_ratio(cert, g, CHI_SQUARED).holds
    assert theorem1_reverse_pinsker(cert, g).holds
    assert theorem2_ratio_bounds(cert, g, CHI_SQUARED).holds
