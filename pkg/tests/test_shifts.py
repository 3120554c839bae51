import math

import pytest
from hypothesis import given, settings, strategies as st

from tscale import (IncompatibleFamily, OutsideDomain, SampleConfig, WindowExhausted,
                    check_axioms, check_lemma_properties, eval_shift, in_domain,
                    make_builtin_shift, make_user_shift, rebase, shift_delta_derivative)
from tscale.catalog import scale

CFG = SampleConfig(samples=300, seed=7)


@pytest.fixture(scope="module")
def powers():
    return make_builtin_shift(scale("powers", n=40), "multiplicative")


@pytest.fixture(scope="module")
def root():
    return make_builtin_shift(scale("sqrt_n", n=400), "quadratic")


@pytest.fixture(scope="module")
def rstar():
    return make_builtin_shift(scale("nonzero_reals"), "signed_multiplicative")


def test_initial_points(rstar):
    assert make_builtin_shift(scale("real_line"), "additive").t0.value == 0
    assert make_builtin_shift(scale("sqrt_n", n=10), "quadratic").t0.value == 0
    assert make_builtin_shift(scale("q_closure"), "multiplicative").t0.value == 1
    assert rstar.t0.value == 1
    assert make_builtin_shift(scale("logistic"), "logistic").t0.value == 0.5


def test_worked_values(powers, root, rstar):
    assert eval_shift(powers, "+", 2, 8).value == 16
    assert eval_shift(root, "+", 3, 4).value == 5
    assert eval_shift(rstar, "-", 2, -3).value == -6
    assert eval_shift(rstar, "-", 2, 6).value == 3
    assert eval_shift(rstar, "+", 2, -6).value == -3
    for pair in (powers, root, rstar):
        for t in pair.scale.star_points(4)[::7]:
            assert pair.apply("+", pair.t0, t) == t


def test_domains(root):
    closure = make_builtin_shift(scale("q_closure"), "multiplicative")
    assert not in_domain(closure, "+", 2, 0)
    assert in_domain(make_builtin_shift(scale("integers"), "additive"), "+", 3, 5)
    assert not in_domain(root, "-", 4, 3)
    assert root.domain_status("-", 4, 3) == "out"
    with pytest.raises(OutsideDomain):
        root.apply("-", 4, 3)


def test_window_exhaustion(powers):
    top = powers.scale.last_point()
    assert powers.domain_status("+", 2, top) == "exhausted"
    with pytest.raises(WindowExhausted):
        powers.apply("+", 2, top)
    # the cached failure is raised again as a new exception object
    with pytest.raises(WindowExhausted) as a:
        powers.apply("+", 2, top)
    with pytest.raises(WindowExhausted) as b:
        powers.apply("+", 2, top)
    assert a.value is not b.value


def test_shift_sizes_must_be_star_and_at_least_t0(powers):
    with pytest.raises(OutsideDomain):
        powers.apply("+", 0.5, 4)
    with pytest.raises(OutsideDomain):
        make_builtin_shift(scale("q_closure"), "multiplicative").apply("+", 0, 4)


def test_incompatible_family():
    with pytest.raises(IncompatibleFamily):
        make_builtin_shift(scale("integers"), "multiplicative")
    with pytest.raises(IncompatibleFamily):
        make_builtin_shift(scale("integers"), "logistic")
    with pytest.raises(IncompatibleFamily, match="unknown shift family"):
        make_builtin_shift(scale("integers"), "nonsense")


def test_rebase_additive_real():
    pair = rebase(make_builtin_shift(scale("real_line"), "additive"), 2.5)
    assert pair.t0.value == 2.5
    for s, t in [(3, 1), (10, -7.25), (2.5, 4)]:
        assert pair.apply("+", s, t).value == pytest.approx(t - 2.5 + s, abs=1e-12)
        assert pair.apply("-", s, t).value == pytest.approx(t + 2.5 - s, abs=1e-12)


def test_rebase_uniform_lattice():
    h, lam = 0.5, 3
    pair = rebase(make_builtin_shift(scale("hz", n=60), "additive"), h * lam)
    for s in (1.5, 2, 4.5):
        for t in (-3, 0, 1, 7.5):
            assert pair.apply("-", s, t).value == t + h * lam - s
            assert pair.apply("+", s, t).value == t - h * lam + s


def test_rebase_geometric_lattice():
    lam = 3
    pair = rebase(make_builtin_shift(scale("two_n", n=60), "multiplicative"), 2 ** lam)
    assert pair.t0.value == 8
    for s in (8, 16, 256):
        for t in (1, 4, 64):
            if pair.in_domain("-", s, t):
                assert pair.apply("-", s, t).value == 2 ** lam * t / s
            assert pair.apply("+", s, t).value == t * s / 2 ** lam
    with pytest.raises(OutsideDomain):
        pair.apply("+", 4, 4)


def test_rebase_rejects_non_star():
    with pytest.raises(OutsideDomain):
        rebase(make_builtin_shift(scale("two_n", n=20), "multiplicative"), 3)


def test_user_rebase_matches_builtin():
    T = scale("hz", n=60)
    builtin = rebase(make_builtin_shift(T, "additive"), 1.5)
    user = rebase(make_user_shift(T, "t+s", "t-s", 0), 1.5)
    for s in (1.5, 2, 3.5):
        for t in (-2, 0.5, 4):
            assert user.apply("+", s, t) == builtin.apply("+", s, t)
            assert user.apply("-", s, t) == builtin.apply("-", s, t)


def test_shift_derivative():
    assert shift_delta_derivative(make_builtin_shift(scale("powers"), "multiplicative"),
                                  "+", 2, 4) == 2
    assert shift_delta_derivative(make_builtin_shift(scale("real_line"), "additive"),
                                  "+", 3, 1.25) == pytest.approx(1)
    half_line = make_builtin_shift(scale("real_line").__class__(
        [scale("real_line").segments[0].__class__(1e-3, 1e3)]), "multiplicative")
    assert shift_delta_derivative(half_line, "+", 4, 2.5) == pytest.approx(4, rel=1e-8)


SUITE_NAMES = ["P.1", "P.2", "P.3", "P.4", "P.5"] + [
    f"lemma.{r}" for r in ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x")]


@pytest.mark.parametrize("name,family,kw", [
    ("signed_squares", "signed_quadratic", {"n": 60}),
    ("logistic", "logistic", {"n": 40}),
    ("dyadic_blocks", "multiplicative", {"n": 10}),
    ("q_closure", "multiplicative", {"n": 60}),
    ("nonzero_reals", "signed_multiplicative", {}),
])
def test_other_builtin_pairs_are_shift_pairs(name, family, kw):
    pair = make_builtin_shift(scale(name, **kw), family)
    axioms, lemma = check_axioms(pair, CFG), check_lemma_properties(pair, CFG)
    assert [r.name for r in axioms] + [r.name for r in lemma] == SUITE_NAMES
    for rep in list(axioms) + list(lemma):
        assert rep.holds, (rep.name, rep.counterexample)


def test_user_pair_suite():
    pair = make_user_shift(scale("powers", n=30), "s*t", "t/s", 1)
    assert check_axioms(pair, CFG).holds
    assert check_lemma_properties(pair, CFG).holds


def test_broken_pair_fails_strict_monotonicity():
    pair = make_user_shift(scale("integers", n=30), "t", "t", 0)
    rep = check_axioms(pair, CFG)
    assert not rep["P.2"].holds
    assert rep["P.2"].counterexample is not None
    assert not rep["P.3"].holds
    assert rep["P.1"].holds


def test_lemma_x_only_on_diagonal():
    pair = make_builtin_shift(scale("powers", n=20), "multiplicative")
    rep = check_lemma_properties(pair, CFG)["lemma.x"]
    assert rep.holds and rep.samples_checked > 0


def test_strict_domains_option():
    pair = make_builtin_shift(scale("sqrt_n", n=200), "quadratic")
    loose = check_axioms(pair, CFG)
    strict = check_axioms(pair, CFG, strict_domains=True)
    assert loose["P.5"].holds and loose["P.5"].notes["domain_gaps"] > 0
    assert not strict["P.5"].holds


# exact lattice round trips and monotonicity

POWERS = make_builtin_shift(scale("powers", n=40), "multiplicative")
ROOTS = make_builtin_shift(scale("sqrt_n", n=400), "quadratic")
RSTAR = make_builtin_shift(scale("nonzero_reals", width=1e5), "signed_multiplicative")
SQUARES = make_builtin_shift(scale("signed_squares", n=80), "signed_quadratic")

@settings(max_examples=300, deadline=None)
@given(st.integers(0, 20), st.integers(-20, 20))
def test_multiplicative_round_trip(k, n):
    pair = POWERS
    s, t = 2.0 ** k, 2.0 ** n
    up = pair.apply("+", s, t)
    assert up.param == n + k
    assert pair.apply("-", s, up) == pair.scale.contains(t)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 150), st.integers(0, 150), st.integers(0, 150))
def test_quadratic_monotone_in_t(k, a, b):
    pair = ROOTS
    s, t, u = math.sqrt(k), math.sqrt(a), math.sqrt(b)
    if a < b:
        assert pair.apply("+", s, t).value < pair.apply("+", s, u).value
    assert pair.apply("+", s, t).param == a + k


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0, 50.0), st.floats(-500.0, 500.0).filter(lambda x: abs(x) > 1e-2))
def test_signed_multiplicative_round_trip(s, t):
    pair = RSTAR
    back = pair.apply("-", s, pair.apply("+", s, t))
    assert back.value == pytest.approx(t, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30))
def test_symmetry_on_signed_squares(a, b):
    pair = SQUARES
    u, t = float(abs(a) ** 2), float(abs(b) ** 2)
    assert pair.apply("+", u, t) == pair.apply("+", t, u)
