"""Numerical helpers for right-dense points: derivatives and quadrature."""
from __future__ import annotations

import math
import warnings

from scipy import integrate

__all__ = ["dense_derivative", "quadrature"]


def dense_derivative(f, x: float, lo: float, hi: float, tol: float = 1e-10,
                     max_iter: int = 12) -> tuple:
    """Derivative of ``f`` at ``x`` using points of ``[lo, hi]`` only.

    Central differences when ``x`` has room on both sides, a second-order
    forward formula when ``x`` is a left endpoint.  The step is halved and
    the sequence Richardson-extrapolated until two successive diagonal
    entries agree to ``tol`` (relative, unit floor).  Returns
    ``(value, error_estimate)``; the estimate stays large when the sequence
    oscillates instead of converging.
    """
    room_l, room_r = x - lo, hi - x
    mag = max(1.0, abs(x))
    central = room_l > 0 and room_r > 0
    if central:
        h = min(room_l, room_r, 1e-2 * mag)
    elif room_r > 0:
        h = min(room_r / 2, 1e-2 * mag)
    else:
        raise ValueError(f"no room to the right of {x!r} inside [{lo!r}, {hi!r}]")

    if central:
        def diff(h):
            return (f(x + h) - f(x - h)) / (2 * h)
    else:
        fx = f(x)

        def diff(h):
            return (-3 * fx + 4 * f(x + h) - f(x + 2 * h)) / (2 * h)

    table = [[diff(h)]]
    best, best_err = table[0][0], math.inf
    for i in range(1, max_iter):
        h /= 2
        row = [diff(h)]
        for j in range(1, i + 1):
            factor = 4.0 ** j if central else 2.0 ** (j + 1)
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (factor - 1))
        err = abs(row[i] - table[i - 1][i - 1])
        table.append(row)
        if err < best_err:
            best, best_err = row[i], err
        if err <= tol * max(1.0, abs(row[i])):
            break
    return best, best_err


def quadrature(f, a: float, b: float, tol: float = 1e-10) -> tuple:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``: ``(value, abs_error)``."""
    if a == b:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(f, a, b, epsabs=tol * 1e-2, epsrel=tol * 1e-2, limit=500)
    return value, err
