"""
crsynth - weighted Church-Rosser systems of finite index for regular languages
"""

from .algebra import Dfa, FiniteMonoid, MonoidHom, local_divisor, transition_monoid
from .config import SynthesisOptions, WebSettings
from .errors import (
    CrsError,
    GcdObstructionError,
    InvalidInputError,
    PreconditionError,
    ResourceCapError,
    VerificationError,
)
from .rewriting import CrsReport, Rule, SemiThueSystem, normalize, quotient_monoid, verify_crs
from .strategies import get_strategy
from .synthesis import construct, group_system, monoid_system, recognize, simple_group_system
from .words import WeightedAlphabet, Word

__version__ = "0.1.0"

__all__ = [
    "CrsError",
    "CrsReport",
    "Dfa",
    "FiniteMonoid",
    "GcdObstructionError",
    "InvalidInputError",
    "MonoidHom",
    "PreconditionError",
    "ResourceCapError",
    "Rule",
    "SemiThueSystem",
    "SynthesisOptions",
    "VerificationError",
    "WebSettings",
    "WeightedAlphabet",
    "Word",
    "construct",
    "get_strategy",
    "group_system",
    "local_divisor",
    "monoid_system",
    "normalize",
    "quotient_monoid",
    "recognize",
    "simple_group_system",
    "transition_monoid",
    "verify_crs",
]
