"""Sampling configuration, report records and CSV serialization."""
from __future__ import annotations

import csv
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .timescale import CanonicalPoint, TimeScale

CSV_COLUMNS = ("t", "s", "lhs", "rhs", "residual", "check_name", "u")


@dataclass
class SampleConfig:
    """How check suites pick points.

    Tuple spaces no larger than ``exhaustive_limit`` are enumerated in full;
    larger ones are sampled with a seeded RNG until ``samples`` admissible
    tuples have been seen (or ``max_draw_factor * samples`` draws).
    """

    samples: int = 1000
    seed: int = 42
    dense_samples: int = 64
    exhaustive_limit: int = 100_000
    ranges: Optional[Sequence[tuple]] = None
    spacing: str = "linear"
    tol: float = 1e-9
    max_draw_factor: int = 50

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")

    def rng(self) -> random.Random:
        return random.Random(self.seed)

    def points(self, scale: TimeScale, star: bool = True) -> list:
        """Deterministic sample of the scale restricted to ``ranges``."""
        ranges = self.ranges or [(scale.lower, scale.upper)]
        seen, out = set(), []
        for a, b in ranges:
            for p in scale.enumerate_points(a, b, self.dense_samples, self.spacing):
                key = (p.segment_id, p.param)
                if key in seen or (star and not scale.is_star(p)):
                    continue
                seen.add(key)
                out.append(p)
        out.sort(key=lambda p: p.value)
        return out

    def pool(self, scale: TimeScale, star: bool = True) -> list:
        """Sample points plus seeded random reals on interval segments.

        The reals are uniform, or log-uniform in ``|x|`` when ``spacing='log'``
        and the piece does not touch 0.
        """
        pts = self.points(scale, star)
        dense = [k for k, seg in enumerate(scale.segments) if seg.dense]
        if not dense:
            return pts
        rng = random.Random(self.seed + 1)
        ranges = self.ranges or [(scale.lower, scale.upper)]
        pieces = []
        for k in dense:
            seg = scale.segments[k]
            for a, b in ranges:
                lo, hi = max(a, seg.a), min(b, seg.b)
                if lo < hi:
                    pieces.append((k, lo, hi))
        extra = []
        # a fixed total of random reals, spread evenly over the interval pieces
        for i in range(2 * self.samples if pieces else 0):
            k, lo, hi = pieces[i % len(pieces)]
            if self.spacing == "log" and (lo > 0 or hi < 0):
                mag = math.exp(rng.uniform(math.log(abs(lo)), math.log(abs(hi))))
                x = min(max(math.copysign(mag, lo), lo), hi)
            else:
                x = rng.uniform(lo, hi)
            p = scale.point(k, x)
            if not star or scale.is_star(p):
                extra.append(p)
        return sorted(set(pts) | set(extra), key=lambda p: p.value)

    def tuples(self, pools: Sequence[list], max_draws: Optional[int] = None) -> tuple:
        """Return ``(iterator, exhaustive)`` over tuples drawn from ``pools``."""
        total = math.prod(len(p) for p in pools)
        if total <= self.exhaustive_limit:
            return itertools.product(*pools), True
        rng = self.rng()
        if max_draws is None:
            max_draws = self.samples * self.max_draw_factor

        def draws() -> Iterator[tuple]:
            for _ in range(max_draws):
                yield tuple(rng.choice(p) for p in pools)
        return draws(), False


@dataclass
class Row:
    t: float
    s: Optional[float]
    lhs: float
    rhs: float
    residual: float
    check_name: str
    u: Optional[float] = None

    def as_tuple(self):
        return (self.t, self.s, self.lhs, self.rhs, self.residual, self.check_name, self.u)


@dataclass
class CheckReport:
    """Outcome of one property over a sample."""

    name: str
    holds: bool = True
    max_residual: float = 0.0
    samples_checked: int = 0
    samples_skipped: int = 0
    worst: Optional[Row] = None
    counterexample: Optional[Row] = None
    rows: list = field(default_factory=list)
    direction_results: dict = field(default_factory=dict)
    exhaustive: bool = False
    notes: dict = field(default_factory=dict)

    def record(self, ok: bool, row: Row, keep_rows: bool = False):
        self.samples_checked += 1
        if keep_rows:
            self.rows.append(row)
        r = row.residual
        if self.worst is None or r > self.max_residual:
            self.worst = row
            if r > self.max_residual:
                self.max_residual = r
        if not ok:
            self.holds = False
            if self.counterexample is None:
                self.counterexample = row

    def skip(self, n: int = 1):
        self.samples_skipped += n

    def summary_line(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        return f"{status} {self.name} {self.max_residual!r} {self.samples_checked}"


@dataclass
class SuiteReport:
    name: str
    results: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.results)

    def __getitem__(self, key) -> CheckReport:
        for r in self.results:
            if r.name == key:
                return r
        raise KeyError(key)

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)


def point_residual(a: CanonicalPoint, b: CanonicalPoint) -> float:
    """Relative distance with a unit floor; 0 for identical canonical points."""
    if a == b:
        return 0.0
    return abs(a.value - b.value) / max(1.0, abs(a.value), abs(b.value))


def same_point(a: CanonicalPoint, b: CanonicalPoint, tol: float) -> bool:
    if a.discrete and b.discrete:
        return a == b
    return point_residual(a, b) <= tol


def write_csv(path, rows: Iterable[Row], summaries: Iterable[str] = ()):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v)
                        for v in row.as_tuple()])
        for line in summaries:
            fh.write(f"# {line}\n")
