import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fdbounds.errors import AbsoluteContinuityError, DegenerateError, DomainError, RatioUnbounded
from fdbounds.generators import (CHI_SQUARED, KL, REVERSE_KL, DiscreteDistribution, hellinger,
                                 taylor_remainder)
from fdbounds.measures import DiscretePair, LocalGaussian, Mixture, TruncatedBall, as_pair
from fdbounds.neighborhood import (NeighborhoodSpec, certify, certify_discrete, h_epsilon,
                                   remainder_value, tightest_spec_discrete)
from fdbounds.numerics import normal_cdf


@pytest.mark.parametrize("args", [(0.0, 1, 1), (0.1, -1, 1), (0.1, 1, 0), (0.5, 1, 3), (math.inf, 1, 1)])
def test_spec_validation(args):
    with pytest.raises(DomainError):
        NeighborhoodSpec(*args)


def test_spec_derived_quantities():
    spec = NeighborhoodSpec(0.1, 2.0, 0.5)
    assert spec.gamma == 2.0
    assert spec.band == pytest.approx((-0.05, 0.2))
    assert spec.theta_interval == pytest.approx((0.95, 1.2))


def test_categorical_certificate(categorical_pair):
    spec = tightest_spec_discrete(categorical_pair.p1, categorical_pair.p0, 0.05)
    assert spec.big_m == pytest.approx(0.2, rel=1e-12)
    assert spec.small_m == pytest.approx(0.2, rel=1e-12)
    cert = certify(categorical_pair, spec, [KL])
    assert cert.all_hold and cert.full_support
    assert cert.delta == pytest.approx(0.016, rel=1e-12)
    assert cert.tilde_c == 0.0
    assert cert.witness(KL).c_hat == 0.0
    assert h_epsilon(categorical_pair, spec, 0) == pytest.approx(0.2, rel=1e-12)


def test_identical_pair_is_degenerate():
    u = DiscreteDistribution.uniform(4)
    cert = certify(DiscretePair(u, u), NeighborhoodSpec(0.1, 1, 1))
    assert cert.degenerate and cert.delta == 0.0 and cert.all_hold
    with pytest.raises(DegenerateError):
        tightest_spec_discrete(u, u, 0.1)


def test_singular_pair_rejected():
    pair = as_pair(([0.5, 0.5], [1.0, 0.0]))
    with pytest.raises(AbsoluteContinuityError):
        certify(pair, NeighborhoodSpec(0.1, 1, 1))


def test_zero_reference_cell_rejected():
    with pytest.raises(DomainError):
        tightest_spec_discrete([0.5, 0.5], [1.0, 0.0], 0.1)


def test_ratio_violation_reported_and_strict_raises():
    pair = as_pair(([0.3, 0.7], [0.5, 0.5]))
    spec = NeighborhoodSpec(0.05, 1.0, 1.0)  # needs M = m = 8
    cert = certify(pair, spec)
    assert not cert.condition1_holds and not cert.all_hold
    with pytest.raises(RatioUnbounded):
        certify(pair, spec, strict=True)


def test_gaussian_band_split():
    fam = LocalGaussian(0.1)
    spec = NeighborhoodSpec(0.05, 1.0, 1.0)
    cert = certify(fam, spec, [KL, hellinger(3.0)])
    assert not cert.full_support
    assert cert.all_hold
    assert cert.delta * 0.05**2 == pytest.approx(math.expm1(0.01), rel=1e-8)
    assert cert.delta_in + cert.delta_out == pytest.approx(cert.delta, rel=1e-12)
    lo, hi = fam.region(spec.band)
    outside = normal_cdf(lo) + (1.0 - normal_cdf(hi))
    assert cert.complement_mass == pytest.approx(outside, rel=1e-7)
    assert 0.0 < cert.tilde_c < 1.0


def test_mixture_band_certificate():
    fam = Mixture(0.1, LocalGaussian(0.5), LocalGaussian(0.0))
    cert = certify(fam, NeighborhoodSpec(0.05, 1.0, 1.0), [KL])
    assert cert.all_hold
    assert cert.complement_mass <= fam.markov_complement_bound(0.05, 1.0, 1.0)


def test_truncated_ball_certificate():
    fam = TruncatedBall(1.0, 100.0, 4)
    cert = certify(fam, NeighborhoodSpec(0.1, 1.0, 1.0), [KL, CHI_SQUARED])
    assert cert.tilde_c == pytest.approx(fam.theta, rel=1e-15)
    assert cert.one_minus_tilde_c == pytest.approx(fam.tail, rel=1e-10)
    assert cert.all_hold
    w = cert.witness(KL)
    # the remainder on the complement is positive while KL''' < 0
    assert w.achieved_ratio > 0 and not w.sign_shortcut_valid
    assert cert.witness(CHI_SQUARED).c_hat == 0.0


@pytest.mark.parametrize("g", [KL, REVERSE_KL, hellinger(0.5), hellinger(3.0), CHI_SQUARED],
                         ids=lambda g: g.name)
@pytest.mark.parametrize("u", [-0.99, -0.8, -0.3, 1e-6, 0.2, 3.0])
def test_remainder_value_matches_closed_form(g, u):
    assert remainder_value(g, u) == pytest.approx(taylor_remainder(g, u), rel=1e-9, abs=1e-18)


def test_remainder_at_zero_ratio():
    assert remainder_value(KL, -1.0) == pytest.approx(0.5)


probs = arrays(np.float64, st.integers(2, 20), elements=st.floats(0.02, 1.0))


@given(probs, st.data(), st.floats(0.01, 0.5))
@settings(max_examples=60, deadline=None)
def test_tightest_spec_certifies_full_support(w, data, eps):
    v = data.draw(arrays(np.float64, w.size, elements=st.floats(0.02, 1.0)))
    p, q = w / w.sum(), v / v.sum()
    if np.allclose(p, q, rtol=0, atol=1e-15):
        return
    try:
        cert = certify_discrete(p, q, eps, [KL])
    except DomainError:
        # eps * m > 1 cannot be certified at this epsilon
        return
    assert cert.condition1_holds
    assert cert.tilde_c == 0.0
    assert cert.delta * eps**2 == pytest.approx(np.sum((p - q) ** 2 / q), rel=1e-10)
