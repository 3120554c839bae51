import pytest

from tscale import (OutsideDomain, SampleConfig, UnsupportedFamily, check_sigma_commutativity,
                    check_structure_preservation, find_period, integral_invariance_check,
                    make_builtin_shift, make_user_shift, verify_delta_periodic_function,
                    verify_periodic_function, verify_periodic_timescale)
from tscale.catalog import scale

CFG = SampleConfig(samples=300)


def pair_for(name, family, **kw):
    T = scale(name, **kw)
    return T, make_builtin_shift(T, family)


@pytest.mark.parametrize("name,family,P", [
    ("q_closure", "multiplicative", 2),
    ("dyadic_blocks", "multiplicative", 4),
    ("signed_squares", "signed_quadratic", 1),
    ("integers", "additive", 1),
])
def test_periodic_scales(name, family, P):
    T, pair = pair_for(name, family)
    rep = verify_periodic_timescale(T, pair, P, CFG)
    assert rep.holds and rep.samples_checked > 0
    assert rep.direction_results == {"+": True, "-": True}


def test_periodic_scale_argument_checks():
    T, pair = pair_for("powers", "multiplicative")
    with pytest.raises(OutsideDomain):
        verify_periodic_timescale(T, pair, 3)
    with pytest.raises(OutsideDomain):
        verify_periodic_timescale(T, pair, 0.5)


@pytest.mark.parametrize("name,family,kw,expected", [
    ("integers", "additive", {"n": 50}, 1.0),
    ("hz", "additive", {"n": 50}, 0.5),
    ("powers", "multiplicative", {"n": 20}, 2.0),
    ("powers", "multiplicative", {"n": 10, "q": 3}, 3.0),
    ("signed_squares", "signed_quadratic", {"n": 30}, 1.0),
    ("logistic", "logistic", {"n": 20, "q": 3}, 0.75),
])
def test_find_period_values(name, family, kw, expected):
    T, pair = pair_for(name, family, **kw)
    cert = find_period(T, pair, CFG)
    assert cert.periodic_in_shifts and cert.period_value == pytest.approx(expected)
    assert "period P=" in cert.describe()


def test_dense_scales_have_no_period():
    for name, family in [("real_line", "additive"), ("nonzero_reals", "signed_multiplicative")]:
        T, pair = pair_for(name, family)
        cert = find_period(T, pair, CFG)
        assert cert.periodic_in_shifts and cert.infimum_equals_t0 and cert.period is None
        assert "no period" in cert.describe()


@pytest.mark.parametrize("name,family", [("two_n", "multiplicative"), ("sqrt_n", "quadratic")])
def test_one_sided_scales_are_not_periodic(name, family):
    T, pair = pair_for(name, family, n=60)
    cert = find_period(T, pair, CFG)
    assert not cert.periodic_in_shifts
    assert cert.describe() == "not periodic in shifts"


def test_find_period_needs_builtin_family():
    T = scale("powers")
    with pytest.raises(UnsupportedFamily):
        find_period(T, make_user_shift(T, "s*t", "t/s", 1))


def test_user_pair_can_still_be_verified():
    T = scale("powers")
    assert verify_periodic_timescale(T, make_user_shift(T, "s*t", "t/s", 1), 2, CFG).holds


def test_larger_admissible_period_also_works():
    _, pair = pair_for("powers", "multiplicative")
    assert verify_periodic_function("cos(pi*ln(t)/ln(2))", pair, 16).holds


def test_function_period_must_not_be_below_scale_period():
    _, pair = pair_for("powers", "multiplicative")
    with pytest.raises(OutsideDomain):
        verify_periodic_function("1", pair, 2, period=4)


def test_undefined_function_values_are_failures():
    _, pair = pair_for("powers", "multiplicative")
    rep = verify_periodic_function("1/(t-2)", pair, 4)
    assert not rep.holds
    assert rep.notes["domain_violations"] > 0 and "first_violation" in rep.notes


def test_counterexample_reported():
    _, pair = pair_for("powers", "multiplicative")
    rep = verify_periodic_function("cos(pi*ln(t)/ln(2))", pair, 2)
    assert rep.counterexample is not None
    assert abs(rep.counterexample.lhs - rep.counterexample.rhs) == 2


def test_additive_delta_periodicity_is_classical():
    _, pair = pair_for("real_line", "additive", width=100)
    assert verify_delta_periodic_function("sin(2*pi*t)", pair, 1, CFG).max_residual < 1e-9
    assert not verify_delta_periodic_function("t", pair, 1, CFG).holds


def test_delta_periodic_implies_invariant_integrals():
    T, pair = pair_for("powers", "multiplicative", n=20)
    assert verify_delta_periodic_function("1/t", pair, 4).holds
    for t in T.star_points():
        if 1 <= t.value <= 2 ** 15:
            for d in ("+", "-"):
                assert integral_invariance_check("1/t", pair, 4, T, t, d).residual <= 1e-12


@pytest.mark.parametrize("name,family,P", [
    ("signed_squares", "signed_quadratic", 1),
    ("powers", "multiplicative", 2),
    ("dyadic_blocks", "multiplicative", 4),
    ("logistic", "logistic", 2 / 3),
    ("integers", "additive", 1),
    ("hz", "additive", 0.5),
])
def test_structure_and_commutativity(name, family, P):
    T, pair = pair_for(name, family)
    assert check_sigma_commutativity(T, pair, P, CFG).holds
    assert check_structure_preservation(T, pair, P, CFG).holds


def test_worked_commutativity_values():
    T, pair = pair_for("dyadic_blocks", "multiplicative")
    t = T.contains(2)
    assert pair.apply("+", 4, T.sigma(t)).value == 16
    assert T.sigma(pair.apply("+", 4, t)).value == 16
    S, sq = pair_for("signed_squares", "signed_quadratic")
    assert sq.apply("+", 1, 4).value == 9
    assert S.sigma(S.contains(9)).value == 16
    assert sq.apply("+", 1, S.sigma(S.contains(4))).value == 16


def test_structure_of_images():
    T, pair = pair_for("dyadic_blocks", "multiplicative")
    img = pair.apply("+", 4, 1.5)
    assert img.value == 6 and T.sigma(img) == img
    img = pair.apply("+", 4, 2)
    assert img.value == 8 and T.sigma(img).value == 16


def test_shift_by_period_is_a_bijection():
    T, pair = pair_for("powers", "multiplicative", n=15)
    images = {}
    for t in T.star_points():
        if pair.domain_status("+", 2, t) == "in":
            img = pair.apply("+", 2, t)
            assert img not in images
            images[img] = t
            assert pair.apply("-", 2, img) == t
