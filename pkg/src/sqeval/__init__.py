"""Symbolic evaluation of second-quantized expectation values in a
Hartree-Fock reference, with a brute-force Fock-space cross-check."""
from .canon import antisymmetrize, canonicalize, merge_terms, simplify, sort_terms
from .dsl import parse, render
from .engine import Stats, fixpoint, one_step
from .model import Expression, Index, Space, Term
from .oracle import OrbitalBasis, check_equivalence, random_tensors
from .pipeline import evaluate
from .presets import PRESETS

__all__ = [
    "PRESETS",
    "Expression",
    "Index",
    "OrbitalBasis",
    "Space",
    "Stats",
    "Term",
    "antisymmetrize",
    "canonicalize",
    "check_equivalence",
    "evaluate",
    "fixpoint",
    "merge_terms",
    "one_step",
    "parse",
    "random_tensors",
    "render",
    "simplify",
    "sort_terms",
]
