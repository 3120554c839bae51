import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tscale import TimeScaleError, WindowExhausted, build_timescale
from tscale.catalog import NAMES, scale


@pytest.fixture(scope="module")
def q():
    return scale("powers", n=20)


@pytest.fixture(scope="module")
def t3():
    return scale("dyadic_blocks", n=5)


def vals(points):
    return [p.value for p in points]


def test_q_closure_build():
    T = scale("q_closure", n=20)
    assert T.contains(0) is not None
    assert not T.is_star(T.contains(0))
    assert T.is_star(T.contains(2))
    assert T.first_point().value == 0
    assert T.last_point().value == 2.0 ** 20


def test_block_union_build():
    T = scale("dyadic_blocks", n=5)
    assert T.contains(4 ** -5) is not None
    assert T.contains(2 * 4 ** 5) is not None
    assert T.contains(3) is None


@pytest.mark.parametrize("text,msg", [
    ("kind=interval a=0 b=2\nkind=interval a=1 b=3\n", "overlapping"),
    ('kind=parametric expr="(n-2)^2" n_min=0 n_max=4\n', "non-monotone"),
    ("", "empty"),
])
def test_build_errors(text, msg):
    with pytest.raises(TimeScaleError, match=msg):
        build_timescale(text)


def test_contains(q, t3):
    p = q.contains(8)
    assert p.param == 3 and p.value == 8
    assert q.contains(3) is None
    p = t3.contains(1.5)
    assert p.param == 1.5 and not p.discrete


def test_sigma_rho(q, t3):
    assert q.sigma(q.contains(4)).value == 8
    assert t3.sigma(t3.contains(2)).value == 4
    assert t3.sigma(t3.contains(1.5)).value == 1.5
    assert q.rho(q.contains(8)).value == 4
    assert t3.rho(t3.contains(4)).value == 2
    assert t3.rho(t3.contains(1.5)).value == 1.5


def test_window_edges(q):
    with pytest.raises(WindowExhausted):
        q.sigma(q.last_point())
    with pytest.raises(WindowExhausted):
        q.rho(q.first_point())


def test_graininess(q, t3):
    assert q.graininess(q.contains(4)) == 4
    assert t3.graininess(t3.contains(1.5)) == 0
    hz = scale("hz", n=10)
    assert hz.graininess(hz.contains(1)) == 0.5


def test_classify(q, t3):
    assert t3.classify_point(t3.contains(2)) == ("right_scattered", "left_dense")
    assert q.classify_point(q.contains(4)) == ("right_scattered", "left_scattered")
    assert t3.classify_point(t3.contains(1.5)) == ("right_dense", "left_dense")


def test_enumerate(q, t3):
    assert vals(q.enumerate_points(1, 8)) == [1, 2, 4, 8]
    assert vals(t3.enumerate_points(1, 4, 3)) == [1, 1.25, 1.5, 1.75, 2, 4]
    assert q.enumerate_points(5, 4) == []
    assert t3.enumerate_points(1, 4, 3) == t3.enumerate_points(1, 4, 3)


def test_nearby(q):
    below, above = q.nearby(5)
    assert (below.value, above.value) == (4, 8)


def test_exact_values(q):
    p = q.contains(2.0 ** -7)
    assert q.exact_value(p) == Fraction(1, 128)
    assert q.exact_value(q.sigma(p)) - q.exact_value(p) == Fraction(1, 128)


def test_classic_periodic():
    hz = scale("hz", h="1/2", n=50)
    assert hz.check_classic_periodic(0.5).holds
    assert scale("integers", n=50).check_classic_periodic(1).holds
    blocks = scale("alternating_blocks", h=1, n=20)
    assert blocks.check_classic_periodic(2).holds
    assert not blocks.check_classic_periodic(1).holds
    rep = scale("q_closure", n=20).check_classic_periodic(1)
    assert not rep.holds and rep.counterexample.value == 0
    with pytest.raises(ValueError):
        hz.check_classic_periodic(0)


# invariants over every catalog scale

SCALES = {name: scale(name, n=12) if name not in ("real_line", "nonzero_reals") else scale(name, width=50)
          for name in NAMES}


@pytest.mark.parametrize("name", NAMES)
def test_enumeration_strictly_increasing(name):
    pts = vals(SCALES[name].points(8))
    assert all(a < b for a, b in zip(pts, pts[1:]))


@pytest.mark.parametrize("name", NAMES)
def test_jump_invariants(name):
    T = SCALES[name]
    for p in T.points(8):
        try:
            nxt, prv = T.sigma(p), T.rho(p)
        except WindowExhausted:
            # the true neighbour lies beyond a truncated lattice end
            continue
        assert nxt.value >= p.value and prv.value <= p.value
        assert T.graininess(p) == float(T.exact_value(nxt) - T.exact_value(p))
        if nxt != p and T.rho(nxt) != nxt:
            assert T.rho(nxt) == p


@settings(max_examples=200, deadline=None)
@given(st.integers(-19, 19))
def test_lattice_jumps_exact(n):
    T = scale("powers", n=20)
    p = T.contains(2.0 ** n)
    assert T.sigma(p).param == n + 1
    assert T.rho(T.sigma(p)) == p
    assert T.graininess(p) == 2.0 ** n


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=2 ** -10, max_value=2 * 4 ** 5, allow_nan=False))
def test_block_membership(x):
    T = scale("dyadic_blocks", n=5)
    k = math.floor(math.log(x, 4))
    inside = any(4.0 ** j <= x <= 2 * 4.0 ** j for j in (k - 1, k, k + 1))
    assert (T.contains(x, 0.0) is not None) == inside
