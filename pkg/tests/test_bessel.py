import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgoursat.bessel import (
    SeriesParams,
    asymptotic_J00,
    biv_bessel_array,
    eval_biv_bessel,
    grad_biv_bessel,
)
from kgoursat.errors import ConvergenceError, DomainError

finite = st.floats(-8, 8, allow_nan=False)
orders = st.integers(0, 5)


def test_boundary_values():
    assert eval_biv_bessel(0, 3.7, 0).value == 1
    assert eval_biv_bessel(2, 3, 0).value == pytest.approx(4.5, abs=1e-15)
    assert eval_biv_bessel(1, 0, 2.5).value == 0


def test_j0_of_two(bessel_oracle):
    v = eval_biv_bessel(0, 1, 1)
    assert abs(v.value - float(bessel_oracle["j0_2"])) <= 1e-15


@pytest.mark.parametrize("group, tol", [("low", 1e-9), ("high", 1e-5)])
def test_oracle_agreement(bessel_oracle, group, tol):
    pts = bessel_oracle[group]
    for a in range(6):
        sel = [p for p in pts if p[0] == a]
        if not sel:
            continue
        x = np.array([p[1] for p in sel])
        y = np.array([p[2] for p in sel])
        ref = np.array([float(p[3]) for p in sel])
        got = biv_bessel_array(a, x, y).real
        assert np.max(np.abs(got - ref)) <= tol


def test_error_estimate_is_honest(bessel_oracle):
    for a, x, y, ref in bessel_oracle["honesty"]:
        v = eval_biv_bessel(a, x, y)
        assert abs(v.value.real - float(ref)) <= v.est_error + 1e-12


def test_matches_classical_bessel_on_timelike_axis():
    # J_{a,0}(x, x) = J_a(2x)
    mp = pytest.importorskip("mpmath")
    for a in range(4):
        for x in (0.3, 1.0, 2.5, 4.0):
            assert eval_biv_bessel(a, x, x).value.real == pytest.approx(float(mp.besselj(a, 2 * x)), abs=1e-13)


def test_spacelike_matches_modified_bessel():
    mp = pytest.importorskip("mpmath")
    for x, y in ((1.0, -1.0), (3.0, -2.0), (0.5, -8.0)):
        ref = float(mp.besseli(0, 2 * math.sqrt(-x * y)))
        assert eval_biv_bessel(0, x, y).value.real == pytest.approx(ref, rel=1e-13)


def test_domain_cap_and_convergence_budget():
    with pytest.raises(DomainError):
        eval_biv_bessel(0, 20, 20)
    with pytest.raises(DomainError):
        eval_biv_bessel(0, math.nan, 1)
    with pytest.raises(DomainError):
        eval_biv_bessel(-1, 1, 1)
    with pytest.raises(ConvergenceError):
        eval_biv_bessel(0, 5, 5, SeriesParams(max_terms=3))


def test_series_params_validation():
    with pytest.raises(ValueError):
        SeriesParams(rel_tol=0)
    with pytest.raises(ValueError):
        SeriesParams(max_terms=0)


def test_broadcasting():
    x = np.linspace(0, 2, 5)[:, None]
    y = np.linspace(-1, 1, 3)[None, :]
    out = biv_bessel_array(1, x, y)
    assert out.shape == (5, 3)
    assert out[2, 1] == eval_biv_bessel(1, x[2, 0], y[0, 1]).value


@settings(max_examples=60, deadline=None)
@given(a=orders, x=finite, y=finite)
def test_gradient_matches_central_differences(a, x, y):
    if abs(x * y) > 60:
        return
    h = 1e-5
    dx, dy = grad_biv_bessel(a, x, y)
    fx = (eval_biv_bessel(a, x + h, y).value - eval_biv_bessel(a, x - h, y).value) / (2 * h)
    fy = (eval_biv_bessel(a, x, y + h).value - eval_biv_bessel(a, x, y - h).value) / (2 * h)
    scale = max(1.0, abs(eval_biv_bessel(a, x, y).value), abs(eval_biv_bessel(a + 1, x, y).value))
    assert abs(dx.value - fx) <= 1e-6 * scale
    assert abs(dy.value - fy) <= 1e-6 * scale


@settings(max_examples=80, deadline=None)
@given(a=orders, x=finite, y=finite)
def test_klein_gordon_equation(a, x, y):
    # u_xy + u = 0: x-difference of the recurrence-based u_y
    if abs(x * y) > 60:
        return
    h = 1e-5
    uy_plus = grad_biv_bessel(a, x + h, y)[1].value
    uy_minus = grad_biv_bessel(a, x - h, y)[1].value
    u = eval_biv_bessel(a, x, y).value
    scale = max(1.0, abs(u), abs(uy_plus))
    assert abs((uy_plus - uy_minus) / (2 * h) + u) <= 1e-6 * scale


@settings(max_examples=60, deadline=None)
@given(x=finite, y=finite)
def test_symmetry_of_order_zero(x, y):
    if abs(x * y) > 100:
        return
    v1 = eval_biv_bessel(0, x, y).value
    v2 = eval_biv_bessel(0, y, x).value
    assert abs(v1 - v2) <= 1e-12 * max(1.0, abs(v1))


def test_asymptotic_form():
    x = y = 6.0
    exact = eval_biv_bessel(0, x, -y).value.real
    approx = asymptotic_J00(x, y)
    # leading term, relative error O(1 / sqrt(xy))
    assert abs(approx / exact - 1) < 0.03
    with pytest.raises(DomainError):
        asymptotic_J00(1.0, 1.0)
    with pytest.raises(DomainError):
        asymptotic_J00(-1.0, 30.0)
