class TimeScaleError(ValueError):
    """Malformed scale description (overlap, empty scale, bad parameters)."""


class WindowExhausted(LookupError):
    """An operation needed a point beyond the materialized window."""


class OutsideDomain(ValueError):
    """A shift was evaluated at (s, t) outside its domain D+ or D-."""


class IncompatibleFamily(ValueError):
    pass


class UnsupportedFamily(ValueError):
    pass
