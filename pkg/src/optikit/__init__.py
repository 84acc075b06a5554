"""Existential optics over finite sets with a decidable quotient."""
from __future__ import annotations

from .action import make_action
from .caps import Caps, default_caps
from .concrete import (Affine, Iso, Lens, Linear, Prism, StatefulLens, Traversal, abstractify,
                       compose_concrete, concretize, convert)
from .errors import (AuditFailure, DomainMismatch, KindMismatch, OptikitError, OutOfTable,
                     Overflow, SignatureMismatch, UnsupportedAction)
from .finset import FiniteFunction, FiniteSet
from .laws import is_lawful, lawful_verdict, laws_of
from .optic_core import (OpticSignature, Representative, build_quotient, compose_optics,
                         get_table, identity_optic, iota, same_class)
from .profunctor import (is_comonoid_homomorphism, optic_to_profunctor, phi_exchange,
                         profunctor_to_optic)
from .suites import run_suite

__version__ = "0.1.0"

__all__ = [
    "make_action", "Caps", "default_caps", "Affine", "Iso", "Lens", "Linear", "Prism",
    "StatefulLens", "Traversal", "abstractify", "compose_concrete", "concretize", "convert",
    "AuditFailure", "DomainMismatch", "KindMismatch", "OptikitError", "OutOfTable", "Overflow",
    "SignatureMismatch", "UnsupportedAction", "FiniteFunction", "FiniteSet", "is_lawful",
    "lawful_verdict", "laws_of", "OpticSignature", "Representative", "build_quotient",
    "compose_optics", "get_table", "identity_optic", "iota", "same_class",
    "is_comonoid_homomorphism", "optic_to_profunctor", "phi_exchange", "profunctor_to_optic",
    "run_suite", "__version__",
]
