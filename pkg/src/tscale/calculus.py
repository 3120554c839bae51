"""Delta derivative and Delta integral on mixed scales, substitution and shift invariance.

Scattered parts are handled exactly (difference quotients over the
graininess, sums of ``f(t) mu(t)``); interval parts use Richardson
extrapolation and adaptive quadrature from :mod:`tscale.numerics`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import exprlang
from .errors import OutsideDomain, TimeScaleError
from .numerics import dense_derivative, quadrature
from .shifts import ShiftPair, opposite
from .timescale import CanonicalPoint, RealInterval, TimeScale, explicit_points

__all__ = [
    "IntegralResult", "SubstitutionCheck", "delta_derivative", "delta_integral",
    "substitution_check", "integral_invariance_check", "ShiftMap",
]


@dataclass
class IntegralResult:
    value: float
    scattered_contribution: float
    continuous_contribution: float
    abs_error_estimate: float

    def negated(self) -> "IntegralResult":
        return IntegralResult(-self.value, -self.scattered_contribution,
                              -self.continuous_contribution, self.abs_error_estimate)


@dataclass
class SubstitutionCheck:
    lhs: IntegralResult
    rhs: IntegralResult
    residual: float
    description: str

    def holds(self, tol: float) -> bool:
        return self.residual <= tol


def _point(T: TimeScale, x) -> CanonicalPoint:
    if isinstance(x, CanonicalPoint):
        return x
    pt = T.locate(x)
    if pt is None:
        raise TimeScaleError(f"{x!r} is not a point of the scale")
    return pt


def delta_derivative(f, T: TimeScale, t, tol: float = 1e-10) -> float:
    """Delta derivative of ``f`` at ``t``.

    Right-scattered ``t``: ``(f(sigma(t)) - f(t)) / mu(t)``.  Right-dense
    ``t``: limit of difference quotients taken inside the interval piece.
    """
    fn = exprlang.function_of(f)
    t = _point(T, t)
    nxt = T.sigma(t)
    if nxt != t:
        mu = T.exact_value(nxt) - T.exact_value(t)
        return (fn(nxt.value) - fn(t.value)) / float(mu)
    seg = T.segments[t.segment_id]
    value, _ = dense_derivative(fn, t.value, seg.a, seg.b, tol)
    return value


def delta_integral(f, T: TimeScale, a, b, tol: float = 1e-10) -> IntegralResult:
    """Delta integral of ``f`` over ``[a, b)`` of ``T``.

    Right-scattered points contribute ``f(t) mu(t)`` (summed with
    ``math.fsum``); interval pieces are integrated numerically.  Swapping the
    limits negates the result.
    """
    fn = exprlang.function_of(f)
    a, b = _point(T, a), _point(T, b)
    if a.value > b.value:
        return delta_integral(fn, T, b, a, tol).negated()
    scattered, continuous, err = [], [], 0.0
    if a.value == b.value:
        return IntegralResult(0.0, 0.0, 0.0, 0.0)
    lo, hi = a.value, b.value
    for k, seg in enumerate(T.segments):
        if seg.hi < lo or seg.lo > hi:
            continue
        if seg.dense:
            x0, x1 = max(lo, seg.a), min(hi, seg.b)
            if x0 < x1:
                v, e = quadrature(fn, x0, x1, tol)
                continuous.append(v)
                err += e
            # the right end of a piece is right-scattered unless it is the top of the scale
            if lo <= seg.b < hi:
                end = T.point(k, seg.b)
                nxt = T.sigma(end)
                if nxt != end:
                    scattered.append(fn(seg.b) * float(T.exact_value(nxt) - T.exact_value(end)))
            continue
        for n in seg.index_range(lo, hi):
            pt = T.point(k, n)
            if pt.value >= hi:
                break
            nxt = T.sigma(pt)
            scattered.append(fn(pt.value) * float(T.exact_value(nxt) - T.exact_value(pt)))
    s, c = math.fsum(scattered), math.fsum(continuous)
    return IntegralResult(s + c, s, c, err)


# ------------------------------------------------------------ substitution


class ShiftMap:
    """A shift ``x -> delta(direction, T, x)`` used as a substitution map."""

    def __init__(self, pair: ShiftPair, T_shift, direction: str = "+"):
        self.pair = pair
        self.T = pair.resolve(T_shift)
        self.direction = direction

    def __call__(self, x: float) -> float:
        return self.pair.apply(self.direction, self.T, x).value

    def raw(self, x: float) -> float:
        return self.pair.map_value(self.direction, self.T.value, x)

    def inverse(self, y: float) -> float:
        return self.pair.map_value(opposite(self.direction), self.T.value, y)

    def __str__(self):
        return f"delta{self.direction}({self.T.value!r}, .)"


def _bisect_inverse(nu, y, lo, hi, tol=1e-12):
    """Solve ``nu(x) = y`` for increasing ``nu`` on ``[lo, hi]``."""
    if y <= nu(lo):
        return lo
    if y >= nu(hi):
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if nu(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def _image_scale(T, nu, a, b):
    """``nu([a, b] of T)`` as a scale, with a map from image pieces back to ``T``."""
    points, inverse_pts, pieces, segments = [], {}, [], []
    for k, seg in enumerate(T.segments):
        if seg.hi < a.value or seg.lo > b.value:
            continue
        if seg.dense:
            x0, x1 = max(a.value, seg.a), min(b.value, seg.b)
            if x0 == x1:
                y = nu(x0)
                points.append(y)
                inverse_pts[y] = x0
                continue
            y0, y1 = nu(x0), nu(x1)
            segments.append(RealInterval(y0, y1))
            pieces.append((y0, y1, x0, x1))
            continue
        for n in seg.index_range(a.value, b.value):
            x = seg.value(n)
            y = nu(x)
            points.append(y)
            inverse_pts[y] = x
    if points:
        segments.append(explicit_points(Fraction(y) for y in points))
    return TimeScale(segments), inverse_pts, pieces


def substitution_check(g, nu, T: TimeScale, a, b, tol: float = 1e-10) -> SubstitutionCheck:
    """Compare both sides of the substitution rule for an increasing map ``nu``.

    ``lhs = int_a^b g(s) nu^Delta(s) Delta s`` over ``T`` and
    ``rhs = int_{nu(a)}^{nu(b)} g(nu^{-1}(y)) Delta y`` over the image scale
    ``nu(T)``.  ``nu`` may be expression text, an AST, a callable or a
    :class:`ShiftMap`; shift maps are inverted with the opposite shift,
    everything else by bisection.
    """
    gfn = exprlang.function_of(g)
    if isinstance(nu, ShiftMap):
        nufn, desc = nu, str(nu)
    else:
        if isinstance(nu, str):
            desc = nu
        elif callable(nu):
            desc = getattr(nu, "__name__", repr(nu))
        else:
            desc = exprlang.unparse(nu)
        nufn = exprlang.function_of(nu)
    a, b = _point(T, a), _point(T, b)
    if a.value > b.value:
        a, b = b, a
        sign = -1.0
    else:
        sign = 1.0

    samples = T.enumerate_points(a.value, b.value, 16)
    vals = [nufn(p.value) for p in samples]
    if any(not v0 < v1 for v0, v1 in zip(vals, vals[1:])):
        raise ValueError("substitution map is not strictly increasing on the sampled points")

    image, inverse_pts, pieces = _image_scale(T, nufn, a, b)

    def nu_inv(y):
        hit = inverse_pts.get(y)
        if hit is not None:
            return hit
        for y0, y1, x0, x1 in pieces:
            if y0 <= y <= y1:
                if isinstance(nufn, ShiftMap):
                    return min(max(nufn.inverse(y), x0), x1)
                return _bisect_inverse(nufn, y, x0, x1)
        raise OutsideDomain(f"{y!r} is not in the image of the substitution map")

    lhs = delta_integral(lambda s: gfn(s) * delta_derivative(nufn, T, s), T, a, b, tol)
    rhs = delta_integral(lambda y: gfn(nu_inv(y)), image, image.first_point(),
                         image.last_point(), tol)
    if sign < 0:
        lhs, rhs = lhs.negated(), rhs.negated()
    return SubstitutionCheck(lhs, rhs, abs(lhs.value - rhs.value), f"nu = {desc}")


def integral_invariance_check(f, pair: ShiftPair, T_shift, T: TimeScale, t,
                              direction: str = "+", tol: float = 1e-10) -> SubstitutionCheck:
    """Compare ``int_{t0}^{t} f`` with the integral between the shifted limits."""
    t = _point(T, t)
    T_pt = pair.resolve(T_shift)
    lhs = delta_integral(f, T, pair.t0, t, tol)
    lo = pair.apply(direction, T_pt, pair.t0)
    hi = pair.apply(direction, T_pt, t)
    rhs = delta_integral(f, T, lo, hi, tol)
    desc = (f"int from {pair.t0.value!r} to {t.value!r} vs "
            f"int from {lo.value!r} to {hi.value!r}")
    return SubstitutionCheck(lhs, rhs, abs(lhs.value - rhs.value), desc)
