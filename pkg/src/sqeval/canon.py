"""Sorting, merging and simplification of operator-free terms.

Terms are brought to a canonical form under the integral symmetries

    h[p,q] = h[q,p]
    V[p,q,r,s] = V[r,s,p,q] = V[q,p,s,r] = V[s,r,q,p]
    A[p,q,r,s] = V[p,q,r,s] - V[p,q,s,r]

and renaming of summed indices, so that equal terms serialize identically.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Optional

from .engine import fresh_labels
from .model import Expression, Index, Space, Tensor, TensorKind, Term

_PLUS, _MINUS = 1, -1

# (index permutation, sign) images of each tensor kind
_IMAGES = {
    TensorKind.DELTA: [((0, 1), _PLUS), ((1, 0), _PLUS)],
    TensorKind.ONE: [((0, 1), _PLUS), ((1, 0), _PLUS)],
    TensorKind.BARE: [
        ((0, 1, 2, 3), _PLUS), ((2, 3, 0, 1), _PLUS), ((1, 0, 3, 2), _PLUS), ((3, 2, 1, 0), _PLUS),
    ],
    TensorKind.ANTISYM: [
        ((0, 1, 2, 3), _PLUS), ((2, 3, 0, 1), _PLUS), ((1, 0, 3, 2), _PLUS), ((3, 2, 1, 0), _PLUS),
        ((0, 1, 3, 2), _MINUS), ((1, 0, 2, 3), _MINUS), ((3, 2, 0, 1), _MINUS), ((2, 3, 1, 0), _MINUS),
    ],
}

# past this many candidates the exhaustive search gives way to iteration
SEARCH_LIMIT = 50_000


class OperatorsRemain(ValueError):
    pass


def tensor_images(x: Tensor) -> list[tuple[Tensor, int]]:
    """Every symmetry-equivalent form of ``x`` with its sign."""
    perms = _IMAGES.get(x.kind)
    if perms is None:
        return [(x, _PLUS)]
    return [(Tensor(x.kind, tuple(x.indices[k] for k in perm)), sign) for perm, sign in perms]


def canonical_tensor(x: Tensor) -> tuple[Tensor, int]:
    """Lexicographically smallest image of ``x`` and its sign.

    The sign is 0 when the tensor equals its own negative (``A[p,p,r,s]``).
    """
    images = tensor_images(x)
    best = min(images, key=lambda im: im[0].sort_key())
    signs = {s for im, s in images if im == best[0]}
    return best[0], (0 if len(signs) > 1 else best[1])


def _require_no_ops(term: Term) -> None:
    if term.ops:
        raise OperatorsRemain(f"term still carries operators: {term.serialize()}")


def _relabel_map(order: Iterable[Index], dummies: set[Index], taken: set[str]) -> dict[Index, Index]:
    mapping: dict[Index, Index] = {}
    streams = {sp: (n for n in fresh_labels(sp) if n not in taken) for sp in Space}
    for i in order:
        if i in dummies and i not in mapping:
            mapping[i] = Index(next(streams[i.space]), i.space)
    return mapping


def relabel_dummies(term: Term) -> Term:
    """Rename summed indices to m, n, ... / e, f, ... by first appearance."""
    _require_no_ops(term)
    taken = {i.name for i in term.free()}
    return term.substitute(_relabel_map(term.indices(), term.dummies(), taken))


def _iterated_canonical(term: Term) -> Optional[Term]:
    coeff = term.coeff
    for _ in range(8):
        tensors = []
        for x in term.tensors:
            y, sign = canonical_tensor(x)
            if sign == 0:
                return None
            coeff *= sign
            tensors.append(y)
        nxt = relabel_dummies(Term(coeff, tensors))
        if nxt == term:
            break
        term = nxt
    return term


def _orders(group: list[Tensor]) -> list[tuple[int, ...]]:
    # amplitude order is significant and never permuted
    if group[0].kind is TensorKind.AMP:
        return [tuple(range(len(group)))]
    return list(itertools.permutations(range(len(group))))


def canonicalize_term(term: Term) -> Optional[Term]:
    """Canonical representative of ``term``; ``None`` if it is identically zero.

    Searches every combination of tensor images and every traversal order of
    same-kind factors, relabels dummies by first appearance and keeps the
    smallest serialization.  Equivalent terms reach the same candidate set,
    so the result does not depend on the input's dummy names.
    """
    _require_no_ops(term)
    if term.coeff == 0:
        return None
    dummies = term.dummies()
    taken = {i.name for i in term.free()}
    groups = [list(g) for _, g in itertools.groupby(term.tensors, key=lambda x: x.kind.rank)]
    n_candidates = math.prod(len(tensor_images(x)) for x in term.tensors)
    n_candidates *= math.prod(len(_orders(g)) for g in groups)
    if n_candidates > SEARCH_LIMIT:
        return _iterated_canonical(term)

    best_body, best_term, signs = None, None, set()
    image_lists = [[tensor_images(x) for x in g] for g in groups]
    for orders in itertools.product(*(_orders(g) for g in groups)):
        for choice in itertools.product(*(itertools.product(*il) for il in image_lists)):
            sign = 1
            walk: list[Tensor] = []
            for order, chosen in zip(orders, choice):
                for k in order:
                    x, s = chosen[k]
                    walk.append(x)
                    sign *= s
            mapping = _relabel_map((i for x in walk for i in x.indices), dummies, taken)
            cand = Term(term.coeff * sign, [x.substitute(mapping) for x in walk])
            body = cand.body()
            if best_body is None or body < best_body:
                best_body, best_term, signs = body, cand, {sign}
            elif body == best_body:
                signs.add(sign)
    if len(signs) > 1:
        return None
    return best_term


def canonicalize(expr: Iterable[Term]) -> Expression:
    return Expression(c for c in (canonicalize_term(t) for t in expr) if c is not None)


def sort_terms(expr: Iterable[Term]) -> Expression:
    """Stable sort by serialized body, then coefficient."""
    return Expression(sorted(expr, key=lambda t: (t.body(), t.coeff)))


def merge_terms(expr: Iterable[Term]) -> Expression:
    """Collapse adjacent terms with identical bodies, dropping cancellations."""
    out = []
    for _, run in itertools.groupby(expr, key=Term.body):
        run = list(run)
        total = sum((t.coeff for t in run), Fraction(0))
        if total != 0:
            out.append(Term(total, run[0].tensors, run[0].ops))
    return Expression(out)


def _as_antisym(term: Term) -> Optional[Term]:
    bare = [k for k, x in enumerate(term.tensors) if x.kind is TensorKind.BARE]
    if len(bare) != 1:
        return None
    k = bare[0]
    tensors = list(term.tensors)
    tensors[k] = Tensor(TensorKind.ANTISYM, tensors[k].indices)
    return canonicalize_term(Term(term.coeff, tensors))


def antisymmetrize(expr: Iterable[Term]) -> Expression:
    """Fuse ``c X V[p,q,r,s] - c X V[p,q,s,r]`` pairs into ``c X A[p,q,r,s]``.

    Terms are keyed by their canonical form with the bare integral read as
    antisymmetrized.  Two terms sharing a key come from the two halves of
    the antisymmetrizer; they fuse when their A coefficients agree.
    """
    terms = list(expr)
    keyed: dict[str, list[int]] = defaultdict(list)
    forms: dict[int, Term] = {}
    for n, term in enumerate(terms):
        form = _as_antisym(term)
        if form is not None:
            forms[n] = form
            keyed[form.body()].append(n)
    fused: dict[int, Term] = {}
    drop: set[int] = set()
    for members in keyed.values():
        # greedy in expression order
        while len(members) >= 2:
            first = members.pop(0)
            partner = next((m for m in members if forms[m].coeff == forms[first].coeff), None)
            if partner is None:
                continue
            members.remove(partner)
            fused[first] = forms[first]
            drop.add(partner)
    out = []
    for n, term in enumerate(terms):
        if n in drop:
            continue
        out.append(fused.get(n, term))
    return Expression(out)


def expand_antisym(expr: Iterable[Term]) -> Expression:
    """Rewrite each ``A[p,q,r,s]`` as ``V[p,q,r,s] - V[p,q,s,r]``."""
    out = []
    for term in expr:
        choices = []
        for x in term.tensors:
            if x.kind is TensorKind.ANTISYM:
                p, q, r, s = x.indices
                choices.append([(Tensor(TensorKind.BARE, (p, q, r, s)), 1),
                                (Tensor(TensorKind.BARE, (p, q, s, r)), -1)])
            else:
                choices.append([(x, 1)])
        for combo in itertools.product(*choices):
            sign = math.prod(s for _, s in combo)
            out.append(Term(term.coeff * sign, [x for x, _ in combo], term.ops))
    return Expression(out)


def simplify(expr: Iterable[Term]) -> Expression:
    """Canonicalize, sort, merge, antisymmetrize, then settle once more."""
    merged = merge_terms(sort_terms(canonicalize(expr)))
    fused = antisymmetrize(merged)
    return merge_terms(sort_terms(canonicalize(fused)))
