import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from it2fuzzy.sets import (GaussianT1, GaussianUncertainMeanIT2, GaussianUncertainStdIT2,
                           TrapezoidIT2, TrapezoidT1, it2_membership_interval, make_set,
                           t1_membership)

centres = st.floats(-5, 5)
spreads = st.floats(0.05, 3)


def test_gaussian_t1_examples():
    g = GaussianT1(-1, 0.6)
    assert t1_membership(g, -0.2) == pytest.approx(0.4111, abs=5e-4)
    assert t1_membership(g, -1) == 1.0


@pytest.mark.parametrize("x, want", [(0.5, 0.5), (3.5, 0.0), (-0.1, 0.0), (1.0, 1.0), (2.0, 1.0), (2.5, 0.5)])
def test_trapezoid_t1_values(x, want):
    assert t1_membership(TrapezoidT1(0, 1, 2, 3), x) == want


def test_trapezoid_step_edges():
    # a == b and c == d: the closed plateau is the whole support
    t = TrapezoidT1(0, 0, 1, 1)
    assert t.membership(0.0) == 1.0
    assert t.membership(1.0) == 1.0
    assert t.membership(-1e-9) == 0.0
    assert t.membership(1 + 1e-9) == 0.0


def test_triangle_peak_is_single_point():
    tri = TrapezoidT1(0, 1, 1, 2)
    x = np.linspace(0, 2, 2001)
    mu = tri.membership(x)
    assert np.count_nonzero(mu == 1.0) == 1
    assert mu[1000] == 1.0


def test_it2_std_examples():
    s = GaussianUncertainStdIT2(-1, 0.5, 0.7)
    lo, hi = it2_membership_interval(s, -0.2)
    assert lo == pytest.approx(0.2780, abs=5e-4)
    assert hi == pytest.approx(0.5205, abs=5e-4)
    assert it2_membership_interval(s, -1) == (1.0, 1.0)


def test_it2_mean_example():
    lo, hi = it2_membership_interval(GaussianUncertainMeanIT2(0, 1, 0.5), 0.5)
    assert lo == pytest.approx(math.exp(-0.5 ** 2 / (2 * 0.5 ** 2)), abs=1e-12)
    assert lo == pytest.approx(0.6065, abs=5e-4)
    assert hi == 1.0


def test_it2_mean_upper_is_flat_between_means():
    s = GaussianUncertainMeanIT2(-0.3, 0.4, 0.2)
    x = np.linspace(-2, 2, 4001)
    up = s.upper(x)
    inside = (x >= -0.3) & (x <= 0.4)
    assert np.all(up[inside] == 1.0)
    away = (x < -0.31) | (x > 0.41)
    assert np.all(up[away] < 1.0)


def test_trapezoid_it2_degenerate_interval():
    s = TrapezoidIT2(0, 1, 2, 3, 0, 1, 2, 3, 1.0)
    x = np.linspace(-1, 4, 501)
    lo, hi = s.interval(x)
    assert np.array_equal(lo, hi)


def test_trapezoid_it2_rejects_lmf_above_umf():
    with pytest.raises(ValueError, match="LMF exceeds UMF"):
        # LMF plateau h=1 on [0.5, 2.5] pokes above the UMF edges
        TrapezoidIT2(0, 1, 2, 3, 0.2, 0.5, 2.5, 2.8, 1.0)


@pytest.mark.parametrize("cls, args", [
    (GaussianT1, (0, 0)),
    (GaussianT1, (0, -1)),
    (TrapezoidT1, (0, 2, 1, 3)),
    (TrapezoidT1, (1, 1, 1, 1)),
    (GaussianUncertainMeanIT2, (1, 0, 0.5)),
    (GaussianUncertainStdIT2, (0, 0.7, 0.5)),
    (GaussianUncertainStdIT2, (0, 0.0, 0.5)),
    (TrapezoidIT2, (0, 1, 2, 3, -1, 1, 2, 3, 0.5)),
    (TrapezoidIT2, (0, 1, 2, 3, 0.5, 1, 2, 2.5, 0.0)),
])
def test_invalid_parameters_rejected(cls, args):
    with pytest.raises(ValueError):
        cls(*args)


def test_non_finite_input_rejected():
    with pytest.raises(ValueError):
        t1_membership(GaussianT1(0, 1), float("nan"))
    with pytest.raises(ValueError):
        it2_membership_interval(GaussianUncertainStdIT2(0, 1, 2), float("inf"))


def test_family_mismatch_is_a_type_error():
    with pytest.raises(TypeError):
        t1_membership(GaussianUncertainStdIT2(0, 1, 2), 0.0)
    with pytest.raises(TypeError):
        it2_membership_interval(GaussianT1(0, 1), 0.0)


def test_sets_are_immutable():
    g = GaussianT1(0, 1)
    with pytest.raises(AttributeError):
        g.m = 2


def test_make_set_unknown_family():
    with pytest.raises(ValueError, match="unknown set family"):
        make_set("bell", {})


@st.composite
def it2_sets(draw):
    kind = draw(st.sampled_from(["mean", "std", "trap"]))
    if kind == "mean":
        m1, m2 = sorted([draw(centres), draw(centres)])
        return GaussianUncertainMeanIT2(m1, m2, draw(spreads))
    if kind == "std":
        s1, s2 = sorted([draw(spreads), draw(spreads)])
        return GaussianUncertainStdIT2(draw(centres), s1, s2)
    a, b, c, d = sorted(draw(st.lists(centres, min_size=4, max_size=4)))
    if a == d:
        d = a + 1.0
    # plateau inside [b, c] and feet inside [a, d] keep the LMF under the UMF
    u = sorted(draw(st.lists(st.floats(0, 1), min_size=2, max_size=2)))
    f, g = b + u[0] * (c - b), b + u[1] * (c - b)
    e = a + draw(st.floats(0, 1)) * (f - a)
    i = d - draw(st.floats(0, 1)) * (d - g)
    e, i = min(e, f), max(i, g)
    return TrapezoidIT2(a, b, c, d, e, f, g, i, draw(st.floats(0.05, 1.0)))


@settings(max_examples=150, deadline=None)
@given(it2_sets())
def test_it2_lower_below_upper_on_dense_grid(s):
    x = np.linspace(-8, 8, 10_001)
    lo, hi = s.interval(x)
    assert np.all(lo <= hi)
    assert np.all((lo >= 0) & (hi <= 1))


@settings(max_examples=100, deadline=None)
@given(centres, spreads)
def test_zero_width_gaussian_fous_reproduce_t1(m, sigma):
    x = np.linspace(m - 10, m + 10, 10_001)
    t1 = GaussianT1(m, sigma).membership(x)
    for s in (GaussianUncertainMeanIT2(m, m, sigma), GaussianUncertainStdIT2(m, sigma, sigma)):
        lo, hi = s.interval(x)
        assert np.max(np.abs(lo - t1)) < 1e-12
        assert np.max(np.abs(hi - t1)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(centres, spreads, st.floats(-10, 10))
def test_gaussians_strictly_positive_near_domain(m, sigma, offset):
    # positive wherever exp does not underflow (|x - m| under ~38 sigma)
    x = m + np.clip(offset, -30 * sigma, 30 * sigma)
    assert GaussianT1(m, sigma).membership(x) > 0
    lo, hi = GaussianUncertainStdIT2(m, sigma, sigma * 1.5).interval(x)
    assert lo > 0 and hi > 0


def test_array_and_scalar_evaluation_agree():
    s = GaussianUncertainMeanIT2(-0.2, 0.3, 0.4)
    x = np.array([-1.0, -0.2, 0.0, 0.3, 1.5])
    lo, hi = s.interval(x)
    for j, xv in enumerate(x):
        assert s.interval(float(xv)) == (lo[j], hi[j])
    assert isinstance(s.lower(0.1), float)
