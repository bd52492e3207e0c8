"""Exact Möbius and bilinear transforms of multidimensional continued fractions."""

from .bilinear import BilinearState, product_forms, run_bilinear, sum_forms
from .errors import GuardHit, InputExhausted, McfError, PrecisionExhausted, Terminated
from .exactnum import Interval
from .experiments import TrialConfig, fit_slope, run_cubic_suite, run_random_suite
from .mcf import JpaExpander, Mcf, check_admissible, convergents, jpa_expand
from .mobius import MobiusState, RunResult, run
from .oracle import eval_bilinear, eval_moebius, verify_prefix
from .partial import run_bilinear_with_partial, run_with_partial
from .sources import McfSource, RationalSource, RootSource, cube_root_pair, parse_source
from .steplog import StepLog

__all__ = [
    "BilinearState",
    "GuardHit",
    "InputExhausted",
    "Interval",
    "JpaExpander",
    "Mcf",
    "McfError",
    "McfSource",
    "MobiusState",
    "PrecisionExhausted",
    "RationalSource",
    "RootSource",
    "RunResult",
    "StepLog",
    "Terminated",
    "TrialConfig",
    "check_admissible",
    "convergents",
    "cube_root_pair",
    "eval_bilinear",
    "eval_moebius",
    "fit_slope",
    "jpa_expand",
    "parse_source",
    "product_forms",
    "run",
    "run_bilinear",
    "run_bilinear_with_partial",
    "run_cubic_suite",
    "run_random_suite",
    "run_with_partial",
    "sum_forms",
    "verify_prefix",
]
