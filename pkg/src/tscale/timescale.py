"""Exact representation of time scales as ordered unions of segments.

A time scale is stored as a sorted tuple of disjoint segments.  Discrete
segments (uniform lattices, geometric lattices, explicit point families and
parametric families ``n -> x(n)``) carry integer indices, so successor,
predecessor and graininess on them are index arithmetic.  Real intervals
carry a real coordinate.

Infinite scales are materialized over a finite index window.  A segment end
that is an artefact of the window is *truncated*; stepping across a truncated
end raises :class:`WindowExhausted` instead of silently answering with the
window's edge.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import TimeScaleError, WindowExhausted
from . import exprlang

__all__ = [
    "CanonicalPoint", "RealInterval", "Lattice", "TimeScale", "ClassicReport",
    "uniform_lattice", "geometric_lattice", "explicit_points", "parametric",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9

Number = Union[int, float, Fraction]


@dataclass(frozen=True, order=False)
class CanonicalPoint:
    """A point of a time scale: ``(segment_id, param)`` plus its real image.

    ``param`` is an ``int`` index on discrete segments and the real
    coordinate itself on intervals.
    """

    segment_id: int
    param: Union[int, float]
    value: float

    @property
    def discrete(self) -> bool:
        return isinstance(self.param, int)

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"CanonicalPoint({self.segment_id}, {self.param!r}, {self.value!r})"


# ----------------------------------------------------------------- segments


@dataclass(frozen=True)
class RealInterval:
    a: float
    b: float
    trunc_lo: bool = False
    trunc_hi: bool = False
    exact_a: Optional[Fraction] = None
    exact_b: Optional[Fraction] = None

    dense = True
    kind = "interval"

    def __post_init__(self):
        if not (self.a < self.b):
            raise TimeScaleError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def lo(self):
        return self.a

    @property
    def hi(self):
        return self.b

    def value(self, param):
        return float(param)

    def exact(self, param):
        if param == self.a and self.exact_a is not None:
            return self.exact_a
        if param == self.b and self.exact_b is not None:
            return self.exact_b
        return None

    def locate(self, x, tol):
        slack = tol * abs(x)
        if self.a <= x <= self.b:
            # snap onto endpoints so that computed images of endpoints stay endpoints
            if abs(x - self.a) <= slack:
                return self.a
            if abs(x - self.b) <= slack:
                return self.b
            return float(x)
        if self.a - slack <= x < self.a:
            return self.a
        if self.b < x <= self.b + slack:
            return self.b
        return None

    def first(self):
        return self.a

    def last(self):
        return self.b


@dataclass(frozen=True)
class Lattice:
    """Finite run of isolated points ``values[i]`` with index ``n_min + i``."""

    kind: str  # uniform | geometric | points | parametric
    n_min: int
    values: tuple
    trunc_lo: bool = True
    trunc_hi: bool = True
    exact_values: Optional[tuple] = None
    params: dict = field(default_factory=dict, compare=False, hash=False)

    dense = False

    def __post_init__(self):
        if not self.values:
            raise TimeScaleError(f"empty {self.kind} segment")
        for x in self.values:
            if not math.isfinite(x):
                raise TimeScaleError(f"non-finite point {x!r} in {self.kind} segment")
        for u, v in zip(self.values, self.values[1:]):
            if not u < v:
                what = "non-monotone parametric segment" if self.kind == "parametric" \
                    else f"{self.kind} segment points not strictly increasing"
                raise TimeScaleError(f"{what} ({u!r} then {v!r})")

    @property
    def n_max(self):
        return self.n_min + len(self.values) - 1

    @property
    def lo(self):
        return self.values[0]

    @property
    def hi(self):
        return self.values[-1]

    def value(self, n):
        return self.values[n - self.n_min]

    def exact(self, n):
        if self.exact_values is None:
            return None
        return self.exact_values[n - self.n_min]

    def has(self, n):
        return self.n_min <= n <= self.n_max

    def locate(self, x, tol):
        vals = self.values
        i = bisect.bisect_left(vals, x)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(vals):
                d = abs(vals[j] - x)
                if best is None or d < best[0]:
                    best = (d, j)
        if best is None:
            return None
        d, j = best
        if d == 0 or d <= tol * abs(x):
            return self.n_min + j
        return None

    def first(self):
        return self.n_min

    def last(self):
        return self.n_max

    def index_range(self, a, b):
        """Indices whose values lie in the closed range [a, b]."""
        i = bisect.bisect_left(self.values, a)
        j = bisect.bisect_right(self.values, b)
        return range(self.n_min + i, self.n_min + j)


def uniform_lattice(h: Number, n_min: int, n_max: int, offset: Number = 0,
                    trunc_lo=True, trunc_hi=True) -> Lattice:
    h, offset = Fraction(h), Fraction(offset)
    if h <= 0:
        raise TimeScaleError("uniform lattice requires h > 0")
    exact = tuple(offset + n * h for n in range(n_min, n_max + 1))
    return Lattice("uniform", n_min, tuple(float(x) for x in exact), trunc_lo, trunc_hi,
                   exact, {"h": h, "offset": offset})


def geometric_lattice(q: Number, n_min: int, n_max: int, trunc_lo=True, trunc_hi=True) -> Lattice:
    q = Fraction(q)
    if q <= 1:
        raise TimeScaleError("geometric lattice requires q > 1")
    exact = tuple(q ** n for n in range(n_min, n_max + 1))
    return Lattice("geometric", n_min, tuple(float(x) for x in exact), trunc_lo, trunc_hi,
                   exact, {"q": q})


def explicit_points(values: Iterable[Number]) -> Lattice:
    exact = sorted({Fraction(v) for v in values})
    return Lattice("points", 0, tuple(float(x) for x in exact), False, False, tuple(exact))


def parametric(expr, n_min: int, n_max: int, trunc_lo=True, trunc_hi=True) -> Lattice:
    """Point family ``n -> expr(n)``; strict monotonicity is checked over the window."""
    if isinstance(expr, str):
        expr = exprlang.parse(expr)
    fn = exprlang.compile_expr(expr)
    try:
        values = tuple(fn({"n": float(n)}) for n in range(n_min, n_max + 1))
    except exprlang.EvalError as exc:
        raise TimeScaleError(f"parametric segment cannot be evaluated: {exc}") from exc
    return Lattice("parametric", n_min, values, trunc_lo, trunc_hi, None,
                   {"expr": exprlang.unparse(expr)})


Segment = Union[RealInterval, Lattice]


# --------------------------------------------------------------- the scale


@dataclass
class ClassicReport:
    holds: bool
    counterexample: Optional[CanonicalPoint]
    checked: int
    skipped: int
    period: float


class TimeScale:
    """An immutable time scale built from disjoint segments.

    ``exclude_from_star`` lists values that belong to the scale but not to the
    subset on which shift operators act (for example the accumulation point 0
    of the closure of q^Z).
    """

    def __init__(self, segments: Sequence[Segment], exclude_from_star: Iterable[float] = (),
                 tol: float = DEFAULT_TOL, name: str = ""):
        self.tol = tol
        self.name = name
        self.segments = self._normalize(list(segments))
        self._los = [seg.lo for seg in self.segments]
        excluded = set()
        for x in exclude_from_star:
            pt = self.contains(float(x))
            if pt is None:
                raise TimeScaleError(f"excluded value {x} is not a point of the scale")
            excluded.add((pt.segment_id, pt.param))
        self.excluded = frozenset(excluded)

    @staticmethod
    def _normalize(segments):
        if not segments:
            raise TimeScaleError("empty time scale")
        is_pts = [isinstance(seg, Lattice) and seg.kind == "points" for seg in segments]
        points = [seg for seg, flag in zip(segments, is_pts) if flag]
        others = sorted((seg for seg, flag in zip(segments, is_pts) if not flag),
                        key=lambda seg: seg.lo)
        for left, right in zip(others, others[1:]):
            if not left.hi < right.lo:
                raise TimeScaleError(
                    f"overlapping segments [{left.lo}, {left.hi}] and [{right.lo}, {right.hi}]")
        exact = {}
        for seg in points:
            for v, ex in zip(seg.values, seg.exact_values):
                exact[v] = ex
        # group explicit points into runs lying in the gaps between other segments
        runs = {}
        for v in sorted(exact):
            gap = bisect.bisect_right([seg.lo for seg in others], v)
            if gap > 0 and v <= others[gap - 1].hi:
                raise TimeScaleError(f"explicit point {v} overlaps segment "
                                     f"[{others[gap - 1].lo}, {others[gap - 1].hi}]")
            runs.setdefault(gap, []).append(v)
        merged = list(others)
        for vals in runs.values():
            merged.append(Lattice("points", 0, tuple(vals), False, False,
                                  tuple(exact[v] for v in vals)))
        merged.sort(key=lambda seg: seg.lo)
        return tuple(merged)

    # -- basic access ----------------------------------------------------

    def __repr__(self):
        return f"TimeScale({self.name or len(self.segments)!r} segments)"

    def point(self, segment_id: int, param) -> CanonicalPoint:
        seg = self.segments[segment_id]
        if seg.dense:
            param = float(param)
            if not seg.a <= param <= seg.b:
                raise ValueError(f"{param} outside interval segment {segment_id}")
        elif not seg.has(param):
            raise ValueError(f"index {param} outside segment {segment_id}")
        return CanonicalPoint(segment_id, param, seg.value(param))

    def first_point(self) -> CanonicalPoint:
        return self.point(0, self.segments[0].first())

    def last_point(self) -> CanonicalPoint:
        k = len(self.segments) - 1
        return self.point(k, self.segments[k].last())

    @property
    def lower(self) -> float:
        return self.segments[0].lo

    @property
    def upper(self) -> float:
        return self.segments[-1].hi

    def exact_value(self, pt: CanonicalPoint) -> Fraction:
        ex = self.segments[pt.segment_id].exact(pt.param)
        return ex if ex is not None else Fraction(pt.value)

    def is_star(self, pt: CanonicalPoint) -> bool:
        return (pt.segment_id, pt.param) not in self.excluded

    def is_dense_segment(self, pt: CanonicalPoint) -> bool:
        return self.segments[pt.segment_id].dense

    # -- membership ------------------------------------------------------

    def locate(self, x: float, tol: Optional[float] = None) -> Optional[CanonicalPoint]:
        """Resolve a real number to a canonical point.

        Returns ``None`` when ``x`` is certainly not in the scale and raises
        :class:`WindowExhausted` when the answer depends on points outside
        the window.
        """
        tol = self.tol if tol is None else tol
        x = float(x)
        if not math.isfinite(x):
            return None
        segs = self.segments
        i = bisect.bisect_right(self._los, x)
        # x may sit just below a segment's lower end within tolerance
        for k in (i - 1, i):
            if 0 <= k < len(segs):
                seg = segs[k]
                slack = tol * abs(x)
                if seg.lo - slack <= x <= seg.hi + slack:
                    param = seg.locate(x, tol)
                    if param is None:
                        return None
                    return CanonicalPoint(k, param, seg.value(param))
        # x lies in a gap or beyond the extremes
        if i == 0:
            if segs[0].trunc_lo:
                raise WindowExhausted(f"{x!r} lies below the window")
            return None
        if i == len(segs):
            if segs[-1].trunc_hi:
                raise WindowExhausted(f"{x!r} lies above the window")
            return None
        if segs[i - 1].trunc_hi or segs[i].trunc_lo:
            raise WindowExhausted(f"{x!r} lies in a gap next to a truncated segment")
        return None

    def nearby(self, x: float) -> list:
        """The scale points closest to ``x`` from below and above (window only)."""
        out = []
        i = bisect.bisect_right(self._los, x)
        for k in (i - 1, i):
            if not 0 <= k < len(self.segments):
                continue
            seg = self.segments[k]
            if seg.dense:
                out.append(self.point(k, min(max(x, seg.a), seg.b)))
                continue
            j = bisect.bisect_left(seg.values, x)
            for jj in (j - 1, j):
                if 0 <= jj < len(seg.values):
                    out.append(self.point(k, seg.n_min + jj))
        return out

    def contains(self, x, tol: Optional[float] = None) -> Optional[CanonicalPoint]:
        """Canonical point matching ``x`` (within relative ``tol``) or None."""
        if isinstance(x, CanonicalPoint):
            try:
                pt = self.point(x.segment_id, x.param)
            except (ValueError, IndexError):
                return None
            return pt if pt.value == x.value else None
        try:
            return self.locate(x, tol)
        except WindowExhausted:
            return None

    def __contains__(self, x):
        return self.contains(x) is not None

    # -- jump operators --------------------------------------------------

    def sigma(self, pt: CanonicalPoint) -> CanonicalPoint:
        """Forward jump: the next point of the scale, or ``pt`` when right-dense."""
        k, seg = pt.segment_id, self.segments[pt.segment_id]
        if seg.dense:
            if pt.param < seg.b:
                return pt
        elif pt.param < seg.n_max:
            return self.point(k, pt.param + 1)
        if seg.trunc_hi:
            raise WindowExhausted(f"no successor of {pt.value!r} inside the window")
        if k + 1 == len(self.segments):
            return pt
        nxt = self.segments[k + 1]
        if nxt.trunc_lo:
            raise WindowExhausted(f"successor of {pt.value!r} is outside the window")
        return self.point(k + 1, nxt.first())

    def rho(self, pt: CanonicalPoint) -> CanonicalPoint:
        """Backward jump, mirror of :meth:`sigma`."""
        k, seg = pt.segment_id, self.segments[pt.segment_id]
        if seg.dense:
            if pt.param > seg.a:
                return pt
        elif pt.param > seg.n_min:
            return self.point(k, pt.param - 1)
        if seg.trunc_lo:
            raise WindowExhausted(f"no predecessor of {pt.value!r} inside the window")
        if k == 0:
            return pt
        prev = self.segments[k - 1]
        if prev.trunc_hi:
            raise WindowExhausted(f"predecessor of {pt.value!r} is outside the window")
        return self.point(k - 1, prev.last())

    def graininess(self, pt: CanonicalPoint) -> float:
        nxt = self.sigma(pt)
        if nxt == pt:
            return 0.0
        a, b = self.segments[pt.segment_id].exact(pt.param), \
            self.segments[nxt.segment_id].exact(nxt.param)
        if a is not None and b is not None:
            return float(b - a)
        return nxt.value - pt.value

    def classify_point(self, pt: CanonicalPoint) -> tuple:
        right = "right_dense" if self.sigma(pt) == pt else "right_scattered"
        left = "left_dense" if self.rho(pt) == pt else "left_scattered"
        return right, left

    # -- enumeration -----------------------------------------------------

    def enumerate_points(self, a: float, b: float, dense_samples: int = 0,
                         spacing: str = "linear") -> list:
        """Scattered points of [a, b] plus equispaced samples of interval pieces.

        Each interval piece contributes its two ends and ``dense_samples``
        interior points.  ``spacing='log'`` spaces interior samples
        geometrically in |x| (pieces must not straddle 0).
        """
        out = []
        if a > b:
            return out
        for k, seg in enumerate(self.segments):
            if seg.hi < a or seg.lo > b:
                continue
            if not seg.dense:
                out.extend(self.point(k, n) for n in seg.index_range(a, b))
                continue
            lo, hi = max(a, seg.a), min(b, seg.b)
            if lo == hi:
                out.append(self.point(k, lo))
                continue
            xs = [lo] + _interior(lo, hi, dense_samples, spacing) + [hi]
            out.extend(self.point(k, x) for x in xs)
        return out

    def points(self, dense_samples: int = 0) -> list:
        return self.enumerate_points(self.lower, self.upper, dense_samples)

    def star_points(self, dense_samples: int = 0) -> list:
        return [p for p in self.points(dense_samples) if self.is_star(p)]

    # -- classic periodicity baseline -------------------------------------

    def check_classic_periodic(self, P: float, tol: Optional[float] = None,
                               dense_samples: int = 16) -> ClassicReport:
        """Check that t + P and t - P are points for every enumerated t.

        Comparisons whose partner falls outside the window are skipped and
        counted.
        """
        if not P > 0:
            raise ValueError("period must be positive")
        checked = skipped = 0
        for t in self.points(dense_samples):
            ok = True
            for x in (t.value + P, t.value - P):
                try:
                    if self.locate(x, tol) is None:
                        ok = False
                except WindowExhausted:
                    skipped += 1
            checked += 1
            if not ok:
                return ClassicReport(False, t, checked, skipped, P)
        return ClassicReport(True, None, checked, skipped, P)


def _interior(lo, hi, count, spacing):
    if count <= 0:
        return []
    if spacing == "log":
        if lo < 0 < hi or lo == 0 or hi == 0:
            raise ValueError("log spacing needs a piece that does not touch 0")
        sign = 1.0 if lo > 0 else -1.0
        la, lb = math.log(abs(lo)), math.log(abs(hi))
        return [sign * math.exp(la + (lb - la) * k / (count + 1)) for k in range(1, count + 1)]
    if spacing != "linear":
        raise ValueError(f"unknown spacing {spacing!r}")
    step = (hi - lo) / (count + 1)
    return [lo + step * k for k in range(1, count + 1)]
