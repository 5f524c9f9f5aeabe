"""Full evaluation: rewrite to scalars, contract deltas, simplify."""
from __future__ import annotations

from typing import Iterable, Optional

from .canon import simplify
from .engine import Stats, apply_deltas, fixpoint
from .model import Expression, Term


class InvariantViolation(AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""


def check_dummy_counts(expr: Iterable[Term]) -> None:
    for term in expr:
        for idx, n in term.counts().items():
            if n > 2:
                raise InvariantViolation(f"index {idx!r} occurs {n} times in {term.serialize()}")


def evaluate(expr: Iterable[Term], stats: Optional[Stats] = None) -> Expression:
    """Reduce a vacuum expectation value to a sum of tensor products."""
    expr = Expression(expr)
    stats = stats if stats is not None else Stats()
    raw = fixpoint(expr, stats)
    if any(t.ops for t in raw):
        raise InvariantViolation("operators survived the fixpoint")
    contracted = Expression(c for c in (apply_deltas(t) for t in raw) if c is not None)
    check_dummy_counts(contracted)
    stats.raw_terms = len(contracted)
    return simplify(contracted)
