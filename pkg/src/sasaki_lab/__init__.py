"""Finite ordered-algebra workbench for Sasaki operations and adjoint pairs."""

from sasaki_lab.core import FinitePoset, bounds, cones, poset_from_covers, unary_properties
from sasaki_lab.terms import Law, Verdict, check_law, eval_term, parse_law, parse_term
from sasaki_lab.algebras import Algebra
from sasaki_lab.sasaki import SasakiPair, check_adjointness, derive_sasaki

__all__ = [
    "Algebra",
    "FinitePoset",
    "Law",
    "SasakiPair",
    "Verdict",
    "bounds",
    "check_adjointness",
    "check_law",
    "cones",
    "derive_sasaki",
    "eval_term",
    "parse_law",
    "parse_term",
    "poset_from_covers",
    "unary_properties",
]

__version__ = "0.1.0"
