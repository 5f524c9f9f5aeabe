"""Iterative anticommutation rewriting of operator strings against the
Hartree-Fock reference.

Operators that annihilate the ket (``a_i^+``, ``a_a``) travel right, those
that annihilate the bra (``a_i``, ``a_a^+``) travel left.  Each swap of a
creator past an annihilator spawns a Kronecker-delta term.  Operators on
general indices do not move; once a string holds nothing else, the leftmost
general index is split into an occupied and a virtual branch.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .model import (
    Expression,
    FermionOp,
    Index,
    Space,
    Tensor,
    TensorKind,
    Term,
    intersect,
)


class Direction(enum.Enum):
    RIGHT = "right"
    LEFT = "left"
    STATIONARY = "stationary"


class InvalidPosition(IndexError):
    pass


class NotAllGeneral(ValueError):
    pass


def direction(op: FermionOp) -> Direction:
    space = op.index.space
    if space is Space.GEN:
        return Direction.STATIONARY
    # a_i^+ and a_a kill the ket; a_i and a_a^+ kill the bra
    if op.is_creation == (space is Space.OCC):
        return Direction.RIGHT
    return Direction.LEFT


_FRESH = {Space.OCC: "mno", Space.VIR: "efg", Space.GEN: "uvw"}


def fresh_labels(space: Space) -> Iterable[str]:
    """Endless sequence of engine-owned labels for ``space``: m, n, o, m1, ..."""
    letters = _FRESH[space]
    yield from letters
    for k in itertools.count(1):
        for ch in letters:
            yield f"{ch}{k}"


def fresh_index(space: Space, taken: set[str]) -> Index:
    for name in fresh_labels(space):
        if name not in taken:
            return Index(name, space)
    raise AssertionError("unreachable")


def swap_adjacent(term: Term, pos: int) -> Expression:
    """Anticommute ``ops[pos]`` with ``ops[pos + 1]``."""
    ops = term.ops
    if not 0 <= pos < len(ops) - 1:
        raise InvalidPosition(f"cannot swap at {pos} in a string of {len(ops)} operators")
    x, y = ops[pos], ops[pos + 1]
    if x == y:
        return Expression()
    swapped = Term(-term.coeff, term.tensors, ops[:pos] + (y, x) + ops[pos + 2:])
    if x.kind is y.kind or intersect(x.index.space, y.index.space) is None:
        return Expression([swapped])
    contracted = Term(
        term.coeff,
        term.tensors + (Tensor(TensorKind.DELTA, (x.index, y.index)),),
        ops[:pos] + ops[pos + 2:],
    )
    return Expression([contracted, swapped])


def one_step(term: Term) -> Expression:
    """A single rewrite of ``term``: zero, one or two resulting terms.

    Returns ``Expression([term])`` itself when nothing can move.
    """
    dirs = [direction(op) for op in term.ops]
    last = len(dirs) - 1
    for k in range(last, -1, -1):
        if dirs[k] is Direction.RIGHT:
            return Expression() if k == last else swap_adjacent(term, k)
    for k, d in enumerate(dirs):
        if d is Direction.LEFT:
            return Expression() if k == 0 else swap_adjacent(term, k - 1)
    return Expression([term])


def split_general(term: Term) -> Expression:
    """Split the leftmost general operator index into occupied + virtual.

    A dummy index is renamed outright.  A free index cannot be renamed, so
    each branch gets a fresh dummy tied to it by a delta instead.
    """
    if not term.ops or any(direction(op) is not Direction.STATIONARY for op in term.ops):
        raise NotAllGeneral("split_general needs a non-empty, all-general operator string")
    target = term.ops[0].index
    taken = term.names()
    is_dummy = term.counts()[target] == 2
    out = []
    for space in (Space.OCC, Space.VIR):
        new = fresh_index(space, taken)
        if is_dummy:
            out.append(term.substitute({target: new}))
        else:
            ops = tuple(FermionOp(op.kind, new) if k == 0 else op for k, op in enumerate(term.ops))
            out.append(Term(term.coeff, term.tensors + (Tensor(TensorKind.DELTA, (target, new)),), ops))
    return Expression(out)


def _pick_substitution(x: Index, y: Index, counts) -> Optional[tuple[Index, Index]]:
    """(old, new) for contracting delta[x, y], or None to keep the delta."""
    common = intersect(x.space, y.space)
    x_dummy, y_dummy = counts[x] == 2, counts[y] == 2
    if x_dummy and y_dummy:
        if x.space is y.space:
            return (y, x) if x.name <= y.name else (x, y)
        return (y, x) if x.space is common else (x, y)
    if x_dummy and y.space is common:
        return (x, y)
    if y_dummy and x.space is common:
        return (y, x)
    return None


def apply_deltas(term: Term) -> Optional[Term]:
    """Contract Kronecker deltas; ``None`` when the term vanishes.

    Deltas between two free indices, between a free index and a dummy of a
    narrower space, and traces ``d[x,x]`` are kept.
    """
    while True:
        for k, factor in enumerate(term.tensors):
            if factor.kind is not TensorKind.DELTA:
                continue
            x, y = factor.indices
            if intersect(x.space, y.space) is None:
                return None
            if x == y:
                continue
            choice = _pick_substitution(x, y, term.counts())
            if choice is None:
                continue
            old, new = choice
            rest = Term(term.coeff, term.tensors[:k] + term.tensors[k + 1:], term.ops)
            term = rest.substitute({old: new})
            break
        else:
            return term


def measure(term: Term) -> tuple[int, int, int]:
    """Lexicographic termination measure (operators, general operators, M).

    M sums, over right movers, the operators to their right and, over left
    movers, the operators to their left.
    """
    n = len(term.ops)
    m = 0
    general = 0
    for k, op in enumerate(term.ops):
        d = direction(op)
        if d is Direction.RIGHT:
            m += n - 1 - k
        elif d is Direction.LEFT:
            m += k
        else:
            general += 1
    return (n, general, m)


def potential(term: Term, max_ops: int) -> int:
    """Scalar embedding of :func:`measure` for strings of at most ``max_ops``."""
    n, g, m = measure(term)
    width = max_ops * (max_ops - 1) // 2 + 1
    return (n * (max_ops + 1) + g) * width + m


@dataclass
class Stats:
    iterations: int = 0
    splits: int = 0
    max_terms: int = 0
    raw_terms: int = 0


StepHook = Callable[[Term, list], None]


def fixpoint(expr: Expression | Iterable[Term], stats: Optional[Stats] = None,
             on_step: Optional[StepHook] = None) -> Expression:
    """Rewrite every term until no operators remain.

    ``on_step(parent, children)`` is called for every productive rewrite,
    including general-index splits; children already have their deltas
    contracted.
    """
    stats = stats if stats is not None else Stats()
    terms = [x for x in (apply_deltas(t) for t in expr) if x is not None]
    while True:
        while True:
            new_terms: list[Term] = []
            for term in terms:
                out = one_step(term)
                if len(out) == 1 and out[0] is term:
                    new_terms.append(term)
                    continue
                children = [c for c in (apply_deltas(x) for x in out) if c is not None]
                if on_step is not None:
                    on_step(term, children)
                new_terms.extend(children)
            stats.iterations += 1
            stats.max_terms = max(stats.max_terms, len(new_terms))
            if new_terms == terms:
                break
            terms = new_terms
        if not any(t.ops for t in terms):
            return Expression(terms)
        resumed: list[Term] = []
        for term in terms:
            if not term.ops:
                resumed.append(term)
                continue
            children = [c for c in (apply_deltas(x) for x in split_general(term)) if c is not None]
            stats.splits += 1
            if on_step is not None:
                on_step(term, children)
            resumed.extend(children)
        terms = resumed
