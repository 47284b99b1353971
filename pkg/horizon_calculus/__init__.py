"""
Exact horizon calculus for the extreme background.

Restricted commuted wave identities and the conservation laws H_l
derived from them, all in exact rational arithmetic.
"""

from .exact import ExactCoefficient
from .identities import (
    JetSymbol,
    HorizonIdentity,
    BACKGROUND_SYMBOLS,
    background_horizon_jet,
    restrict_commuted_wave,
)
from .laws import (
    ConservationLaw,
    derive_conservation_law,
    substitute_alphas,
    substitute_law,
    format_law_table,
)

__all__ = [
    "ExactCoefficient",
    "JetSymbol",
    "HorizonIdentity",
    "BACKGROUND_SYMBOLS",
    "background_horizon_jet",
    "restrict_commuted_wave",
    "ConservationLaw",
    "derive_conservation_law",
    "substitute_alphas",
    "substitute_law",
    "format_law_table",
]
