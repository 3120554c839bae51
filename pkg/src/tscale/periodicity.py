"""Periodicity in shifts: periodic scales, periods, periodic and Delta-periodic functions.

A scale is periodic in shifts when some ``p > t0`` of the star set can be
shifted by in both directions from every star point.  The period is the
infimum of such ``p``; when that infimum is ``t0`` itself (as on the reals)
the scale is periodic without a period.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import exprlang
from .errors import OutsideDomain, UnsupportedFamily, WindowExhausted
from .reports import CheckReport, Row, SampleConfig, point_residual, same_point
from .shifts import DIRECTIONS, FAMILIES, ShiftPair, shift_delta_derivative
from .timescale import CanonicalPoint, TimeScale

__all__ = [
    "PeriodCertificate", "verify_periodic_timescale", "find_period",
    "verify_periodic_function", "verify_delta_periodic_function",
    "check_structure_preservation", "check_sigma_commutativity",
]


@dataclass
class PeriodCertificate:
    periodic_in_shifts: bool
    period: Optional[CanonicalPoint] = None
    witness_p: Optional[CanonicalPoint] = None
    infimum_equals_t0: bool = False
    report: Optional[CheckReport] = None

    @property
    def period_value(self) -> Optional[float]:
        return None if self.period is None else self.period.value

    def describe(self) -> str:
        if not self.periodic_in_shifts:
            return "not periodic in shifts"
        if self.infimum_equals_t0:
            return "periodic in shifts, no period (infimum equals t0)"
        return f"periodic in shifts, period P={self.period.value!r}"


def _star_point(pair: ShiftPair, x, what="P") -> CanonicalPoint:
    scale = pair.scale
    pt = scale.contains(x, pair.tol)
    if pt is None or not scale.is_star(pt):
        raise OutsideDomain(f"{what}={float(x)!r} is not a point of the star set")
    return pt


def _sample(pair, sampler):
    cfg = sampler or SampleConfig()
    return cfg, cfg.pool(pair.scale, star=True)


def verify_periodic_timescale(T: TimeScale, pair: ShiftPair, P,
                              sampler: Optional[SampleConfig] = None,
                              stop_on_failure: bool = False) -> CheckReport:
    """Check that ``(P, t)`` lies in both shift domains for every sampled star ``t``.

    Tests whose image would leave the window are skipped; the report only
    holds if at least one point was actually checked.
    """
    P = _star_point(pair, P)
    if not P.value > pair.t0.value:
        raise OutsideDomain(f"P={P.value!r} must exceed t0={pair.t0.value!r}")
    _, pool = _sample(pair, sampler)
    rep = CheckReport("periodic_timescale")
    rep.direction_results = {d: True for d in DIRECTIONS}
    for t in pool:
        for d in DIRECTIONS:
            status = pair.domain_status(d, P, t)
            if status == "exhausted":
                rep.skip()
                continue
            ok = status == "in"
            lhs = pair.apply(d, P, t).value if ok else math.nan
            rep.record(ok, Row(t.value, P.value, lhs, t.value, 0.0 if ok else math.inf,
                               f"domain{d}"))
            if not ok:
                rep.direction_results[d] = False
                if stop_on_failure:
                    return rep
    return _finish(rep)


def _candidates_near_t0(pair):
    """Star points just to the right of a right-dense ``t0``."""
    scale, t0 = pair.scale, pair.t0
    seg = scale.segments[t0.segment_id]
    out = []
    for frac in (1e-1, 1e-3, 1e-6):
        x = t0.value + frac * max(1.0, abs(t0.value))
        if x < seg.b:
            p = scale.point(t0.segment_id, x)
            if scale.is_star(p):
                out.append(p)
    return out


def _anchor_candidates(pair, anchors):
    """Values ``p`` that carry one anchor onto another, smallest first."""
    scale, t0 = pair.scale, pair.t0
    found = {}
    for a in anchors:
        for b in anchors:
            try:
                x = pair.map_value("-", a.value, b.value)
                p = scale.contains(x, pair.tol)
            except (OutsideDomain, ValueError, ArithmeticError):
                continue
            if p is not None and scale.is_star(p) and p.value > t0.value:
                found[(p.segment_id, p.param)] = p
    return sorted(found.values(), key=lambda p: p.value)


def find_period(T: TimeScale, pair: ShiftPair, sampler: Optional[SampleConfig] = None,
                max_candidates: int = 200) -> PeriodCertificate:
    """Decide periodicity in shifts and find the period for builtin pairs.

    When ``t0`` is right-dense and shifts by points arbitrarily close to it
    succeed everywhere, the infimum is ``t0`` and there is no period.
    Otherwise candidate periods are the shift sizes that carry one isolated
    point or interval end onto another; the smallest that verifies is the
    period.
    """
    base = getattr(pair, "base_family", pair.family)
    if base not in FAMILIES:
        raise UnsupportedFamily(f"period discovery is not available for {pair.family!r} "
                                "pairs; verify a candidate with verify_periodic_timescale")
    cfg, pool = _sample(pair, sampler)
    scale, t0 = pair.scale, pair.t0

    if scale.sigma(t0) == t0:
        near = _candidates_near_t0(pair)
        reports = [verify_periodic_timescale(T, pair, p, cfg, True) for p in near]
        if near and all(r.holds for r in reports):
            return PeriodCertificate(True, None, near[0], True, reports[0])

    anchors = []
    for p in pool:
        seg = scale.segments[p.segment_id]
        if not seg.dense or p.value in (seg.a, seg.b):
            anchors.append(p)
    for cand in _anchor_candidates(pair, anchors)[:max_candidates]:
        rep = verify_periodic_timescale(T, pair, cand, cfg, True)
        if rep.holds:
            return PeriodCertificate(True, cand, cand, False, rep)
    return PeriodCertificate(False)


# ------------------------------------------------------------ functions


def _shift_size(pair, T_shift, period):
    T = _star_point(pair, T_shift, "T")
    if T.value < pair.t0.value:
        raise OutsideDomain(f"T={T.value!r} is smaller than t0={pair.t0.value!r}")
    if period is not None and T.value < float(period):
        raise OutsideDomain(f"T={T.value!r} is smaller than the period {float(period)!r}")
    return T


def verify_periodic_function(f, pair: ShiftPair, T_shift,
                             sampler: Optional[SampleConfig] = None,
                             period=None) -> CheckReport:
    """Check ``f(delta(+-, T, t)) = f(t)`` at sampled star points.

    Residuals are absolute.  A sampled ``t`` with ``(T, t)`` outside a shift
    domain, or where ``f`` cannot be evaluated, is a failure.
    """
    fn = exprlang.function_of(f)
    T = _shift_size(pair, T_shift, period)
    cfg, pool = _sample(pair, sampler)

    def at(d, t):
        return fn(pair.apply(d, T, t).value), fn(t.value)

    return _function_check("periodic_function", T, pool, at, cfg.tol)


def verify_delta_periodic_function(f, pair: ShiftPair, T_shift,
                                   sampler: Optional[SampleConfig] = None,
                                   period=None) -> CheckReport:
    """Check ``f(delta(+-, T, t)) * D_t delta(+-, T, t) = f(t)`` at sampled points."""
    fn = exprlang.function_of(f)
    T = _shift_size(pair, T_shift, period)
    cfg, pool = _sample(pair, sampler)

    def at(d, t):
        img = pair.apply(d, T, t)
        der = shift_delta_derivative(pair, d, T, t)
        return fn(img.value) * der, fn(t.value)

    return _function_check("delta_periodic_function", T, pool, at, cfg.tol)


def _function_check(name, T, pool, at, tol):
    """Shared loop; ``at(d, t)`` returns ``(lhs, rhs)`` or raises."""
    rep = CheckReport(name)
    rep.direction_results = {d: True for d in DIRECTIONS}
    violations = 0
    for t in pool:
        for d in DIRECTIONS:
            try:
                lhs, rhs = at(d, t)
            except WindowExhausted:
                rep.skip()
                continue
            except (OutsideDomain, exprlang.EvalError) as exc:
                violations += 1
                rep.notes.setdefault("first_violation", f"t={t.value!r} dir={d}: {exc}")
                rep.record(False, Row(t.value, T.value, math.nan, math.nan, math.inf, f"{name}{d}"))
                rep.direction_results[d] = False
                continue
            res = abs(lhs - rhs)
            ok = res <= tol
            rep.record(ok, Row(t.value, T.value, lhs, rhs, res, f"{name}{d}"))
            if not ok:
                rep.direction_results[d] = False
    rep.notes["domain_violations"] = violations
    return _finish(rep)


def _finish(rep):
    if rep.samples_checked == 0:
        rep.holds = False
        rep.notes["reason"] = "no sample point could be checked inside the window"
    return rep


# ----------------------------------------------------- structural checks


def check_structure_preservation(T: TimeScale, pair: ShiftPair, P,
                                 sampler: Optional[SampleConfig] = None) -> CheckReport:
    """Shifting by ``P`` maps right-dense points to right-dense points and
    right-scattered points to right-scattered points."""
    P = _star_point(pair, P)
    cfg, pool = _sample(pair, sampler)
    scale = pair.scale
    rep = CheckReport("structure")
    rep.direction_results = {d: True for d in DIRECTIONS}
    for t in pool:
        for d in DIRECTIONS:
            try:
                img = pair.apply(d, P, t)
                dense_t = scale.sigma(t) == t
                dense_img = scale.sigma(img) == img
            except WindowExhausted:
                rep.skip()
                continue
            except OutsideDomain:
                rep.record(False, Row(t.value, P.value, math.nan, t.value, math.inf,
                                      f"structure{d}"))
                rep.direction_results[d] = False
                continue
            ok = dense_t == dense_img
            # lhs/rhs carry the classification: 0 right-dense, 1 right-scattered
            rep.record(ok, Row(t.value, P.value, float(not dense_img), float(not dense_t),
                               0.0 if ok else 1.0, f"structure{d}"))
            if not ok:
                rep.direction_results[d] = False
    return _finish(rep)


def check_sigma_commutativity(T: TimeScale, pair: ShiftPair, P,
                              sampler: Optional[SampleConfig] = None) -> CheckReport:
    """Check ``delta(+-, P, sigma(t)) = sigma(delta(+-, P, t))`` at sampled points."""
    P = _star_point(pair, P)
    cfg, pool = _sample(pair, sampler)
    scale = pair.scale
    rep = CheckReport("sigma_commutativity")
    rep.direction_results = {d: True for d in DIRECTIONS}
    for t in pool:
        for d in DIRECTIONS:
            try:
                lhs = pair.apply(d, P, scale.sigma(t))
                rhs = scale.sigma(pair.apply(d, P, t))
            except WindowExhausted:
                rep.skip()
                continue
            except OutsideDomain:
                rep.record(False, Row(t.value, P.value, math.nan, math.nan, math.inf,
                                      f"sigma_commutativity{d}"))
                rep.direction_results[d] = False
                continue
            ok = same_point(lhs, rhs, cfg.tol)
            rep.record(ok, Row(t.value, P.value, lhs.value, rhs.value,
                               point_residual(lhs, rhs), f"sigma_commutativity{d}"))
            if not ok:
                rep.direction_results[d] = False
    return _finish(rep)
