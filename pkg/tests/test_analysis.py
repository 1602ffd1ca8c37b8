import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from kgoursat.analysis import (
    CoveringSpec,
    anqa_integral,
    beta,
    beta_conjugate_asymptotic,
    bound_constants,
    covering_radius,
    first_uncovered_probe,
    lemma_bound,
    log_growth_integral,
    log_lemma_bound,
    numeric_growth_integral,
    psi,
    q_covering_check,
    regime_classify,
    threshold_intermediate,
    u1_envelope_check,
    y_star_min,
)
from kgoursat.errors import DomainError, SpecError
from kgoursat.field import Grid

GROWTH_EXACT = 1 + 0.5 * math.sqrt(math.pi) * math.exp(0.25) * (1 + math.erf(0.5))


def test_bound_constants_at_half():
    c = bound_constants(0.5, 1.0)
    assert c.A == pytest.approx(2**0.75 * 0.5 * math.sqrt(4 * math.pi), rel=1e-15)
    assert c.A == pytest.approx(2.98090, abs=1e-5)
    assert c.B == 8 and c.D == pytest.approx(0.25)
    for theta in (0.3, 1.7, 4.0):
        assert bound_constants(0.5, theta).D == pytest.approx(theta**2 / 4, rel=1e-14)
    Bs = [bound_constants(q, 1.0).B for q in (0.5, 0.9, 0.99, 0.999)]
    assert Bs == sorted(Bs)
    for q in (0.0, 1.0):
        with pytest.raises(DomainError):
            bound_constants(q, 1.0)


def test_growth_integral_values():
    assert numeric_growth_integral(0.5, 1, 1) == pytest.approx(GROWTH_EXACT, rel=1e-12)
    assert numeric_growth_integral(0.5, 1e-12, 1) == pytest.approx(1.0, rel=1e-9)
    assert lemma_bound(0.5, 1, 1) == pytest.approx(14.0998, abs=1e-3)


def test_growth_integral_against_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    for q, th, s in [(0.3, 2, 0.1), (0.9, 0.5, 10), (0.7, 1, 1), (0.1, 0.5, 10), (0.9, 2, 1)]:
        t0 = (q * th / s) ** (1 / (1 - q))
        ref = mp.quad(lambda t: mp.exp(th * t**q - s * t), [0, t0 / 4, t0, 4 * t0, 16 * t0 + 100 / s, mp.inf])
        assert log_growth_integral(q, th, s) == pytest.approx(float(mp.log(ref)), abs=1e-10)


def test_lemma_dominance_sweep():
    for q, th, s in itertools.product(np.arange(1, 10) / 10, (0.5, 1, 2), (0.1, 1, 10)):
        assert log_growth_integral(q, th, s) <= log_lemma_bound(q, th, s)


@settings(max_examples=40, deadline=None)
@given(q=st.floats(0.05, 0.95), th=st.floats(0.1, 3), s=st.floats(0.2, 20))
def test_lemma_dominance_random(q, th, s):
    assert log_growth_integral(q, th, s) <= log_lemma_bound(q, th, s)


REGIME_TABLE = [
    ((1, 0.5, 1.5), "UniqueForced", "Thm-main-1-0"),
    ((1, 1, 1), "NontrivialExists", "Thm-main-1-1"),
    ((1, 2, 3), "NontrivialExists", "Thm-main-1-1"),
    ((0.3, 1e6, 1e6), "UniqueForced", "Thm-main-2"),
    ((0.49, 50, 50), "UniqueForced", "Thm-main-2"),
    ((0.5, 2, 3), "UniqueForced", "Thm-main-3"),
    ((0.5, 2, 3.2), "Unknown", "Thm-main-3"),
    ((0.75, 0.5, 0.5), "UniqueForced", "Thm-main-1-2"),
    ((0.75, 1, 1), "Unknown", "Thm-main-1-2"),
]


@pytest.mark.parametrize("args, verdict, theorem", REGIME_TABLE)
def test_regime_table(args, verdict, theorem):
    r = regime_classify(*args)
    assert (r.verdict, r.theorem) == (verdict, theorem)


def test_intermediate_threshold_value():
    assert threshold_intermediate(0.75) == pytest.approx((4 / 3) ** (4 / 3) * (2 / 3) ** (2 / 3) * 0.75, rel=1e-14)
    assert threshold_intermediate(0.75) == pytest.approx(0.8400, abs=1e-4)


def test_regime_domain():
    for q in (0.0, 1.2, -1):
        with pytest.raises(DomainError):
            regime_classify(q, 1, 1)
    with pytest.raises(DomainError):
        regime_classify(0.5, 0, 1)


positive = st.floats(0.01, 20)
orders = st.sampled_from([0.2, 0.5, 0.6, 0.75, 0.9, 1.0])


@settings(max_examples=200, deadline=None)
@given(q=orders, t1=positive, t2=positive, s=st.floats(0.01, 1))
def test_regime_monotone_and_symmetric(q, t1, t2, s):
    r = regime_classify(q, t1, t2)
    if q == 1:
        assert regime_classify(q, t2, t1) == r
    if r.verdict == "UniqueForced":
        assert regime_classify(q, s * t1, t2).verdict == "UniqueForced"
        assert regime_classify(q, t1, s * t2).verdict == "UniqueForced"


def test_y_star_example():
    y, m, E = y_star_min(1.5, 1, 0.75)
    assert y == pytest.approx(-1, abs=1e-12)
    assert m == pytest.approx(-0.5, abs=1e-12)
    assert E == pytest.approx(1 / 3 / 1.5**2, rel=1e-14)
    with pytest.raises(DomainError):
        y_star_min(1, 1, 0.5)


@settings(max_examples=60, deadline=None)
@given(sp=st.floats(0.1, 10), t2=st.floats(0.1, 5), q=st.floats(0.55, 0.95), lam=st.floats(0.2, 5))
def test_y_star_properties(sp, t2, q, lam):
    y, m, _ = y_star_min(sp, t2, q)
    p = q / (2 * q - 1)
    h = 1e-6 * abs(y)
    dpsi = (psi(y + h, sp, t2, q) - psi(y - h, sp, t2, q)) / (2 * h)
    assert abs(dpsi) <= 1e-6 * max(1.0, sp)
    probes = np.linspace(5 * y, 0, 100) if y < 0 else np.array([])
    assert np.all(psi(probes, sp, t2, q) >= m - 1e-12 * max(1, abs(m)))
    y2, _, _ = y_star_min(lam * sp, t2, q)
    assert y2 == pytest.approx(lam ** (1 / (p - 1)) * y, rel=1e-10)


def test_covering_examples():
    arith = CoveringSpec(tuple(-float(n) for n in range(0, 300)), 1.0, 0.75, -1.0, -250.0)
    assert q_covering_check(arith)
    geom = CoveringSpec(tuple(-(2.0**n) for n in range(0, 12)), 1.0, 0.75, -1.0, -1000.0)
    assert not q_covering_check(geom)
    miss = first_uncovered_probe(geom)
    # the gap between -4 and -8 is the first one larger than the radii
    assert -8 < miss < -4
    dense = CoveringSpec(tuple(-0.01 * n for n in range(0, 2001)), 0.05, 0.75, -1.0, -19.0)
    assert q_covering_check(dense)


def test_covering_radius():
    assert covering_radius([0.0, -0.5, -1.0], 0.75).tolist() == [0.0, 0.5, 1.0]
    assert covering_radius(-16.0, 0.75) == pytest.approx(16 * 16**-0.75)


def test_covering_spec_validation():
    with pytest.raises(SpecError):
        CoveringSpec((-1.0, -0.5), 1, 0.75, -1, -2)
    with pytest.raises(SpecError):
        CoveringSpec((0.0, -1.0), 0, 0.75, -1, -2)
    with pytest.raises(SpecError):
        CoveringSpec((0.0, -1.0), 1, 0.4, -1, -2)
    with pytest.raises(SpecError):
        CoveringSpec((0.0, -1.0), 1, 0.75, -1, -0.5)
    with pytest.raises(SpecError):
        q_covering_check(CoveringSpec((0.0,), 1, 0.75, -1, -2))


@settings(max_examples=20, deadline=None)
@given(
    gaps=st.lists(st.floats(0.05, 8), min_size=3, max_size=30),
    M=st.floats(0.05, 3),
    factor=st.floats(1, 4),
    q=st.floats(0.55, 0.95),
)
def test_covering_monotone_in_M(gaps, M, factor, q):
    Y = tuple(-np.cumsum(gaps))
    depth = Y[-1] - 1
    assume(depth < -1.0)
    small = q_covering_check(CoveringSpec(Y, M, q, -1.0, depth))
    large = q_covering_check(CoveringSpec(Y, M * factor, q, -1.0, depth))
    assert large or not small


def test_anqa_closed_forms():
    for q, th, delta in [(0.3, 1, 1e-6), (0.5, 2, 1e-3), (0.7, 1, 0.1), (0.2, 0.5, 0.5)]:
        D = bound_constants(q, th).D
        e = 1 / (2 * (1 - q))
        if abs(e - 1) < 1e-12:
            exact = math.sqrt(D) * -math.log(delta)
        else:
            exact = math.sqrt(D) * (1 - delta ** (1 - e)) / (1 - e)
        val, conv = anqa_integral(q, th, delta)
        assert val == pytest.approx(exact, rel=1e-12)
        assert conv == (q < 0.5)
    D = bound_constants(0.3, 1).D
    limit = math.sqrt(D) / (1 - 1 / (2 * 0.7))
    assert anqa_integral(0.3, 1, 1e-14)[0] == pytest.approx(limit, rel=1e-3)


@settings(max_examples=50, deadline=None)
@given(q=st.floats(0.01, 0.99))
def test_anqa_flag(q):
    assert anqa_integral(q, 1.0, 0.5)[1] == (q < 0.5)


def test_beta_conjugate_basics():
    from kgoursat.analysis import legendre_conjugate_beta

    assert legendre_conjugate_beta(1, 1) == 0
    assert legendre_conjugate_beta(3, 0.5) == 0
    for t in (2.0, 10.0, 1e3):
        b = legendre_conjugate_beta(1.3, t)
        ys = np.linspace(0, 60, 601)
        assert np.all(b >= ys * t - beta(ys, 1.3) - 1e-9 * max(1, b))


def test_beta_conjugate_asymptotics():
    from kgoursat.analysis import legendre_conjugate_beta

    ratios = []
    for t in (1e3, 1e4, 1e6, 1e8):
        d = abs(legendre_conjugate_beta(1, t) - beta_conjugate_asymptotic(t))
        ratios.append(d / (t * math.log(t)))
    assert max(ratios) <= 10
    assert ratios == sorted(ratios, reverse=True)


def test_beta_conjugate_monotone_convex():
    from kgoursat.analysis import legendre_conjugate_beta

    ts = np.linspace(0.5, 50, 100)
    b = np.array([legendre_conjugate_beta(0.7, t) for t in ts])
    assert np.all(np.diff(b) >= -1e-9 * np.abs(b[1:]))
    second = b[2:] - 2 * b[1:-1] + b[:-2]
    assert np.all(second >= -1e-9 * np.maximum(1, np.abs(b[1:-1])))


def test_u1_envelope():
    viol, ratio = u1_envelope_check(Grid.uniform(0, 6, 61, -6, 0, 61), theta1=1, theta2=1)
    assert viol <= 1e-8
    assert ratio <= 1.1
    with pytest.raises(DomainError):
        u1_envelope_check(Grid.uniform(-1, 1, 3, -1, 0, 3))
