"""Quasi-cyclic code-based encryption with a concatenated Reed-Muller /
Reed-Solomon decoder, exact error-distribution and DFR calculators, and a
reproducible Monte Carlo simulator."""

from .dfr import concat_dfr, end_to_end_dfr, rm_dfr_improved, rm_dfr_simple
from .error_model import p_star, p_tilde
from .params import PARAM_SETS, SIM_SETS, get_params
from .scheme import decrypt, encrypt, keygen

__version__ = "0.1.0"

__all__ = [
    "PARAM_SETS",
    "SIM_SETS",
    "concat_dfr",
    "decrypt",
    "encrypt",
    "end_to_end_dfr",
    "get_params",
    "keygen",
    "p_star",
    "p_tilde",
    "rm_dfr_improved",
    "rm_dfr_simple",
    "__version__",
]
