"""Algebraic data model: orbital indices, fermion operators, tensor factors,
terms and expressions.

Every value is immutable.  A :class:`Term` stands for

    coefficient * prod(tensors) * <HF| ops |HF>

with an implicit sum over every index occurring twice (a dummy).
"""
from __future__ import annotations

import enum
import string
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional


class Space(enum.Enum):
    OCC = "occ"
    VIR = "vir"
    GEN = "gen"

    def __repr__(self) -> str:
        return f"Space.{self.name}"


class UnknownLetter(ValueError):
    """Raised when an index letter belongs to none of the orbital families."""


_LETTER_SPACE = {
    **{ch: Space.OCC for ch in "ijklmn"},
    **{ch: Space.VIR for ch in "abcd"},
    **{ch: Space.GEN for ch in "pqrs"},
}


def infer_space(letter: str) -> Space:
    """Orbital space implied by an index base letter.

    ``i``-``n`` are occupied, ``a``-``d`` virtual and ``p``-``s`` general.
    """
    try:
        return _LETTER_SPACE[letter]
    except KeyError:
        raise UnknownLetter(f"no default orbital space for letter {letter!r}") from None


def intersect(s1: Space, s2: Space) -> Optional[Space]:
    """Intersection of two orbital spaces; ``None`` when they are disjoint."""
    if s1 is s2:
        return s1
    if s1 is Space.GEN:
        return s2
    if s2 is Space.GEN:
        return s1
    return None


@dataclass(frozen=True)
class Index:
    name: str
    space: Space

    @classmethod
    def of(cls, name: str, space: Optional[Space] = None) -> "Index":
        if space is None:
            space = infer_space(name.rstrip(string.digits))
        return cls(name, space)

    @property
    def inferable(self) -> bool:
        """True when the label alone implies this index's space."""
        return _LETTER_SPACE.get(self.name.rstrip(string.digits)) is self.space

    def __repr__(self) -> str:
        return self.name if self.inferable else f"{self.name}:{self.space.value}"


class OpKind(enum.Enum):
    CRE = "c"
    ANN = "a"


@dataclass(frozen=True)
class FermionOp:
    kind: OpKind
    index: Index

    @property
    def is_creation(self) -> bool:
        return self.kind is OpKind.CRE

    def __repr__(self) -> str:
        return f"{self.kind.value}({self.index!r})"


def cre(index: Index | str) -> FermionOp:
    return FermionOp(OpKind.CRE, index if isinstance(index, Index) else Index.of(index))


def ann(index: Index | str) -> FermionOp:
    return FermionOp(OpKind.ANN, index if isinstance(index, Index) else Index.of(index))


class TensorKind(enum.Enum):
    # value is (text name, sort rank)
    DELTA = ("d", 0)
    ONE = ("h", 1)
    BARE = ("V", 2)
    ANTISYM = ("A", 3)
    AMP = ("t", 4)

    @property
    def symbol(self) -> str:
        return self.value[0]

    @property
    def rank(self) -> int:
        return self.value[1]


_ARITY = {TensorKind.DELTA: 2, TensorKind.ONE: 2, TensorKind.BARE: 4, TensorKind.ANTISYM: 4}


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class Tensor:
    """A tensor factor.

    For amplitudes ``indices`` holds the lower (occupied) labels followed by
    the upper (virtual) labels and ``nlower`` says where the split is.
    """

    kind: TensorKind
    indices: tuple[Index, ...]
    nlower: int = 0

    def __post_init__(self) -> None:
        want = _ARITY.get(self.kind)
        if want is not None and len(self.indices) != want:
            raise ArityError(f"{self.kind.symbol} takes {want} indices, got {len(self.indices)}")
        if self.kind is TensorKind.AMP:
            if not 0 <= self.nlower <= len(self.indices):
                raise ArityError("amplitude split out of range")
        elif self.nlower:
            raise ArityError("only amplitudes have lower/upper index groups")

    @property
    def lower(self) -> tuple[Index, ...]:
        return self.indices[: self.nlower]

    @property
    def upper(self) -> tuple[Index, ...]:
        return self.indices[self.nlower:]

    def sort_key(self) -> tuple:
        return (self.kind.rank, self.nlower, len(self.indices), tuple(i.name for i in self.indices),
                tuple(i.space.value for i in self.indices))

    def substitute(self, mapping: Mapping[Index, Index]) -> "Tensor":
        return replace(self, indices=tuple(mapping.get(i, i) for i in self.indices))

    def __repr__(self) -> str:
        return render_tensor(self, annotate=set())


def h(p, q) -> Tensor:
    return Tensor(TensorKind.ONE, _idx(p, q))


def V(p, q, r, s) -> Tensor:
    return Tensor(TensorKind.BARE, _idx(p, q, r, s))


def A(p, q, r, s) -> Tensor:
    return Tensor(TensorKind.ANTISYM, _idx(p, q, r, s))


def delta(p, q) -> Tensor:
    return Tensor(TensorKind.DELTA, _idx(p, q))


def t(lower: Iterable = (), upper: Iterable = ()) -> Tensor:
    lo, up = _idx(*lower), _idx(*upper)
    return Tensor(TensorKind.AMP, lo + up, len(lo))


def _idx(*items) -> tuple[Index, ...]:
    return tuple(i if isinstance(i, Index) else Index.of(i) for i in items)


def _coeff_text(c: Fraction) -> str:
    return f"+{c}" if c >= 0 else str(c)


def render_tensor(tensor: Tensor, annotate: set) -> str:
    """Text form of one tensor factor.

    Labels in ``annotate`` get their ``:space`` suffix and are removed from
    the set, so a label is annotated at its first occurrence only.
    """

    def lab(i: Index) -> str:
        if i in annotate:
            annotate.discard(i)
            return f"{i.name}:{i.space.value}"
        return i.name

    if tensor.kind is TensorKind.AMP:
        lo = ",".join(lab(i) for i in tensor.lower)
        up = ",".join(lab(i) for i in tensor.upper)
        return f"t[{lo}=>{up}]"
    return f"{tensor.kind.symbol}[{','.join(lab(i) for i in tensor.indices)}]"


def _factor_key(x: Tensor) -> tuple:
    return (x.kind.rank,) if x.kind is TensorKind.AMP else x.sort_key()


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    tensors: tuple[Tensor, ...] = ()
    ops: tuple[FermionOp, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        # integrals and deltas form a multiset, sorted so == compares multisets;
        # amplitudes keep their written (bra to ket) order
        object.__setattr__(self, "tensors", tuple(sorted(self.tensors, key=_factor_key)))
        object.__setattr__(self, "ops", tuple(self.ops))

    def indices(self) -> Iterator[Index]:
        """Every index occurrence, tensors first, then operators left to right."""
        for tensor in self.tensors:
            yield from tensor.indices
        for op in self.ops:
            yield op.index

    def counts(self) -> Counter:
        return Counter(self.indices())

    def dummies(self) -> set[Index]:
        return {i for i, n in self.counts().items() if n == 2}

    def free(self) -> set[Index]:
        return {i for i, n in self.counts().items() if n == 1}

    def names(self) -> set[str]:
        return {i.name for i in self.indices()}

    def substitute(self, mapping: Mapping[Index, Index]) -> "Term":
        return Term(
            self.coeff,
            tuple(x.substitute(mapping) for x in self.tensors),
            tuple(FermionOp(o.kind, mapping.get(o.index, o.index)) for o in self.ops),
        )

    def scaled(self, factor) -> "Term":
        return replace(self, coeff=self.coeff * factor)

    def body(self) -> str:
        """Serialized factors and operators without the coefficient."""
        annotate = {i for i in self.indices() if not i.inferable}
        parts = [render_tensor(x, annotate) for x in self.tensors]
        for op in self.ops:
            label = op.index.name
            if op.index in annotate:
                annotate.discard(op.index)
                label = f"{label}:{op.index.space.value}"
            parts.append(f"{op.kind.value}({label})")
        return " ".join(parts)

    def serialize(self) -> str:
        body = self.body()
        return f"{_coeff_text(self.coeff)} {body}" if body else _coeff_text(self.coeff)

    def __repr__(self) -> str:
        return f"Term({self.serialize()!r})"


def serialize(term: Term) -> str:
    """Deterministic text form: coefficient, sorted tensors, operator string."""
    return term.serialize()


class Expression:
    """An ordered sum of terms."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        self.terms: tuple[Term, ...] = tuple(terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, k):
        return self.terms[k]

    def __eq__(self, other) -> bool:
        if isinstance(other, Expression):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.terms)

    def __add__(self, other: "Expression") -> "Expression":
        return Expression(self.terms + tuple(other))

    def __repr__(self) -> str:
        return f"Expression({[t.serialize() for t in self.terms]!r})"
