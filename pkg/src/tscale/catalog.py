"""Named scales used throughout the test corpus and the bundled scale files.

Every builder goes through the text format of :mod:`tscale.specfile`, so the
catalog doubles as a set of worked examples of that format.
"""
from .specfile import build_timescale


def spec_text(name: str, **kw) -> str:
    n = kw.get("n", 20)
    if name == "real_line":
        w = kw.get("width", 1000)
        return f"name=R\nkind=interval a={-w} b={w} window_ends=both\n"
    if name == "nonzero_reals":
        w = kw.get("width", 1000)
        return f"name=R*\nkind=interval a={-w} b={w} window_ends=both\nexclude_from_star=0\n"
    if name == "integers":
        return f"name=Z\nkind=uniform h=1 n_min={-n} n_max={n}\n"
    if name == "hz":
        return f"name=hZ\nkind=uniform h={kw.get('h', '1/2')} n_min={-n} n_max={n}\n"
    if name == "powers":
        return f"name=q^Z\nkind=geometric q={kw.get('q', 2)} n_min={-n} n_max={n}\n"
    if name == "q_closure":
        return (f"name=closure(q^Z)\nkind=geometric q={kw.get('q', 2)} n_min={-n} n_max={n}\n"
                "kind=points values=0\nexclude_from_star=0\n")
    if name == "two_n":
        return f"name=2^N\nkind=geometric q=2 n_min=0 n_max={n} window_ends=hi\n"
    if name == "sqrt_n":
        return f'name=N^(1/2)\nkind=parametric expr="sqrt(n)" n_min=0 n_max={n} window_ends=hi\n'
    if name == "signed_squares":
        return (f'name=signed_squares\nkind=parametric expr="piecewise(n >= 0, n^2, -(n^2))" '
                f"n_min={-n} n_max={n}\n")
    if name == "dyadic_blocks":
        return f"name=dyadic_blocks\nkind=interval a=1 b=2 scale_by=4 n_min={-n} n_max={n}\n"
    if name == "logistic":
        q = kw.get("q", 2)
        return (f'name=logistic\nkind=parametric expr="{q}^n / (1 + {q}^n)" n_min={-n} n_max={n}\n'
                "kind=points values=0,1\nexclude_from_star=0,1\n")
    if name == "alternating_blocks":
        h = kw.get("h", 1)
        return (f"name=union[(2i-1)h,2ih]\nkind=interval a={-h} b=0 shift_by={2 * h} "
                f"n_min={-n} n_max={n}\n")
    raise KeyError(f"unknown catalog scale {name!r}")


NAMES = ("real_line", "nonzero_reals", "integers", "hz", "powers", "q_closure", "two_n",
         "sqrt_n", "signed_squares", "dyadic_blocks", "logistic", "alternating_blocks")


def scale(name: str, **kw):
    """Build a catalog scale, e.g. ``scale('q_closure', q=2, n=20)``."""
    return build_timescale(spec_text(name, **kw))
