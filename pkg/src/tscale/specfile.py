"""Line-oriented key/value format for scales and shift pairs.

Example::

    # closure of 2^Z
    kind=geometric q=2 n_min=-20 n_max=20
    kind=points values=0
    exclude_from_star=0
    shift=multiplicative

Segment lines start with ``kind=`` (``interval``, ``uniform``,
``geometric``, ``points``, ``parametric``).  Interval lines may be repeated
over an index range with ``scale_by=r`` (pieces ``r^n [a, b]``) or
``shift_by=d`` (pieces ``[a + n d, b + n d]``).  ``window_ends`` names the
ends that are window truncations (``lo``, ``hi``, ``both``, ``none``).
Values may be numbers or constant expressions such as ``sqrt(2)``.
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from . import exprlang
from .errors import TimeScaleError
from .timescale import (RealInterval, TimeScale, explicit_points, geometric_lattice,
                        parametric, uniform_lattice)

__all__ = ["ScaleSpec", "parse_scale_spec", "build_timescale", "load_scale"]

_KINDS = ("interval", "uniform", "geometric", "points", "parametric")
_DEFAULT_WINDOW = (-32, 32)


@dataclass
class ScaleSpec:
    segments: list = field(default_factory=list)
    exclude_from_star: list = field(default_factory=list)
    shift: Optional[dict] = None
    name: str = ""


def _fields(line: str, lineno: int) -> dict:
    out = {}
    for tok in shlex.split(line, comments=True):
        key, sep, value = tok.partition("=")
        if not sep:
            raise TimeScaleError(f"line {lineno}: expected key=value, got {tok!r}")
        out[key.strip()] = value.strip()
    return out


def parse_scale_spec(text: str) -> ScaleSpec:
    spec = ScaleSpec()
    for lineno, line in enumerate(text.splitlines(), 1):
        fields = _fields(line, lineno)
        if not fields:
            continue
        if "kind" in fields:
            if fields["kind"] not in _KINDS:
                raise TimeScaleError(f"line {lineno}: unknown kind {fields['kind']!r}")
            spec.segments.append(fields)
        elif "exclude_from_star" in fields:
            spec.exclude_from_star.extend(
                v for v in fields["exclude_from_star"].split(",") if v.strip())
        elif "shift" in fields:
            spec.shift = fields
        elif "name" in fields:
            spec.name = fields["name"]
        else:
            raise TimeScaleError(f"line {lineno}: cannot interpret {line.strip()!r}")
    return spec


def number(text: Union[str, float, int, Fraction]) -> Fraction:
    """Exact value of a decimal literal; constant expressions fall back to float."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except ValueError:
        pass
    try:
        return Fraction(exprlang.evaluate(exprlang.parse(text), {}))
    except (exprlang.ParseError, exprlang.EvalError) as exc:
        raise TimeScaleError(f"bad numeric value {text!r}: {exc}") from exc


def _int(fields, key, default):
    if key not in fields:
        return default
    try:
        return int(fields[key])
    except ValueError:
        raise TimeScaleError(f"{key} must be an integer, got {fields[key]!r}") from None


def _ends(fields, default):
    value = fields.get("window_ends", default)
    table = {"both": (True, True), "none": (False, False), "lo": (True, False), "hi": (False, True)}
    if value not in table:
        raise TimeScaleError(f"window_ends must be one of {sorted(table)}, got {value!r}")
    return table[value]


def _segments(fields: dict, window=None) -> list:
    kind = fields["kind"]
    n_min = _int(fields, "n_min", _DEFAULT_WINDOW[0])
    n_max = _int(fields, "n_max", _DEFAULT_WINDOW[1])
    repeated = kind == "interval" and ("scale_by" in fields or "shift_by" in fields)
    if window is not None and (kind in ("uniform", "geometric", "parametric") or repeated):
        n_min, n_max = window
    if n_min > n_max:
        raise TimeScaleError(f"empty index range [{n_min}, {n_max}]")
    if kind == "uniform":
        lo, hi = _ends(fields, "both")
        return [uniform_lattice(number(fields.get("h", "1")), n_min, n_max,
                                number(fields.get("offset", "0")), lo, hi)]
    if kind == "geometric":
        lo, hi = _ends(fields, "both")
        return [geometric_lattice(number(fields["q"]), n_min, n_max, lo, hi)]
    if kind == "parametric":
        lo, hi = _ends(fields, "both")
        try:
            return [parametric(fields["expr"], n_min, n_max, lo, hi)]
        except exprlang.ParseError as exc:
            raise TimeScaleError(f"bad parametric expression: {exc}") from exc
    if kind == "points":
        return [explicit_points(number(v) for v in fields["values"].split(",") if v.strip())]
    # interval, possibly repeated
    a, b = number(fields["a"]), number(fields["b"])
    if repeated:
        lo_t, hi_t = _ends(fields, "both")
        pieces = []
        for n in range(n_min, n_max + 1):
            if "scale_by" in fields:
                r = number(fields["scale_by"]) ** n
                pa, pb = a * r, b * r
            else:
                d = number(fields["shift_by"]) * n
                pa, pb = a + d, b + d
            pieces.append((pa, pb))
        segs = []
        for i, (pa, pb) in enumerate(pieces):
            segs.append(RealInterval(float(pa), float(pb), lo_t and i == 0,
                                     hi_t and i == len(pieces) - 1, pa, pb))
        return segs
    lo_t, hi_t = _ends(fields, "none")
    return [RealInterval(float(a), float(b), lo_t, hi_t, a, b)]


def build_timescale(spec: Union[ScaleSpec, str], window: Optional[tuple] = None,
                    tol: float = 1e-9) -> TimeScale:
    """Build a :class:`TimeScale` from a spec (or its text).

    ``window`` overrides the index range of every lattice-like line.
    """
    if isinstance(spec, str):
        spec = parse_scale_spec(spec)
    segments = []
    for fields in spec.segments:
        try:
            segments.extend(_segments(fields, window))
        except KeyError as exc:
            raise TimeScaleError(f"kind={fields['kind']} line is missing key {exc}") from None
    excluded = [float(number(v)) for v in spec.exclude_from_star]
    return TimeScale(segments, excluded, tol=tol, name=spec.name)


def load_scale(path, window=None, tol=1e-9):
    """Read a scale file; returns ``(TimeScale, ScaleSpec)``."""
    spec = parse_scale_spec(Path(path).read_text())
    if not spec.name:
        spec.name = Path(path).stem
    return build_timescale(spec, window, tol), spec
