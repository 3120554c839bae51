"""Time scales with shift operators: exact scales, shift pairs, periodicity in
shifts and Delta calculus, plus a small expression language for user formulas."""

from .errors import (IncompatibleFamily, OutsideDomain, TimeScaleError, UnsupportedFamily,
                     WindowExhausted)
from .timescale import CanonicalPoint, TimeScale
from .specfile import build_timescale, load_scale, parse_scale_spec
from .reports import SampleConfig
from .shifts import (ShiftPair, UserShift, check_axioms, check_lemma_properties, eval_shift,
                     in_domain, make_builtin_shift, make_user_shift, rebase,
                     shift_delta_derivative)
from .periodicity import (PeriodCertificate, check_sigma_commutativity,
                          check_structure_preservation, find_period,
                          verify_delta_periodic_function, verify_periodic_function,
                          verify_periodic_timescale)
from .calculus import (IntegralResult, ShiftMap, SubstitutionCheck, delta_derivative,
                       delta_integral, integral_invariance_check, substitution_check)

from . import exprlang

__all__ = [
    "IncompatibleFamily", "OutsideDomain", "TimeScaleError", "UnsupportedFamily",
    "WindowExhausted", "CanonicalPoint", "TimeScale", "build_timescale", "load_scale",
    "parse_scale_spec", "SampleConfig", "ShiftPair", "UserShift", "check_axioms",
    "check_lemma_properties", "eval_shift", "in_domain", "make_builtin_shift",
    "make_user_shift", "rebase", "shift_delta_derivative", "PeriodCertificate",
    "check_sigma_commutativity", "check_structure_preservation", "find_period",
    "verify_delta_periodic_function", "verify_periodic_function", "verify_periodic_timescale",
    "IntegralResult", "ShiftMap", "SubstitutionCheck", "delta_derivative", "delta_integral",
    "integral_invariance_check", "substitution_check", "exprlang",
]

__version__ = "0.1.0"
