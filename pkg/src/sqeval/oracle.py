"""Brute-force numeric checks on a small Fock space.

Operator strings are applied to the reference determinant as bitstrings
(bit k set means spin-orbital k is occupied; the lowest ``n_occ`` bits form
the reference).  Operator-free expressions are contracted with
``numpy.einsum`` over random tensors carrying the integral symmetries.
The two routes share nothing but the tensors, so agreement certifies a
derivation.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .model import Expression, FermionOp, Index, OpKind, Space, Tensor, TensorKind, Term

DEFAULT_BUDGET = 10**7
MAX_ORBITALS = 16


class ScaleExceeded(RuntimeError):
    pass


class BasisError(ValueError):
    pass


def default_budget() -> int:
    value = os.environ.get("SQ_EVAL_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


@dataclass(frozen=True)
class OrbitalBasis:
    n_occ: int
    n_virt: int

    def __post_init__(self):
        if self.n_occ < 1 or self.n_virt < 1:
            raise BasisError("need at least one occupied and one virtual spin-orbital")
        if self.n_occ + self.n_virt > MAX_ORBITALS:
            raise BasisError(f"at most {MAX_ORBITALS} spin-orbitals are supported")

    @property
    def n(self) -> int:
        return self.n_occ + self.n_virt

    @property
    def reference(self) -> int:
        return (1 << self.n_occ) - 1

    def orbitals(self, space: Space) -> range:
        if space is Space.OCC:
            return range(self.n_occ)
        if space is Space.VIR:
            return range(self.n_occ, self.n)
        return range(self.n)

    def block(self, space: Space) -> slice:
        r = self.orbitals(space)
        return slice(r.start, r.stop)


FockState = dict  # determinant bitstring -> amplitude


def act(det: int, kind: OpKind, orbital: int) -> Optional[tuple[int, int]]:
    """(sign, new determinant) for one operator on one determinant, or None."""
    bit = 1 << orbital
    occupied = bool(det & bit)
    if occupied == (kind is OpKind.CRE):
        return None
    sign = -1 if bin(det & (bit - 1)).count("1") % 2 else 1
    return sign, det ^ bit


def apply_op(state: FockState, op: Union[FermionOp, OpKind], orbital: int) -> FockState:
    kind = op.kind if isinstance(op, FermionOp) else op
    out: FockState = {}
    for det, amp in state.items():
        res = act(det, kind, orbital)
        if res is None:
            continue
        sign, new = res
        out[new] = out.get(new, 0) + sign * amp
    return {d: a for d, a in out.items() if a != 0}


@dataclass(frozen=True)
class NumericTensors:
    h: np.ndarray
    V: np.ndarray
    amplitudes: Mapping[tuple[int, int], np.ndarray] = field(default_factory=dict)

    @property
    def A(self) -> np.ndarray:
        return self.V - self.V.transpose(0, 1, 3, 2)

    def array(self, x: Tensor) -> np.ndarray:
        if x.kind is TensorKind.ONE:
            return self.h
        if x.kind is TensorKind.BARE:
            return self.V
        if x.kind is TensorKind.ANTISYM:
            return self.A
        if x.kind is TensorKind.DELTA:
            return np.eye(self.h.shape[0])
        shape = (x.nlower, len(x.indices) - x.nlower)
        try:
            return self.amplitudes[shape]
        except KeyError:
            raise KeyError(f"no numeric amplitude of shape {shape}") from None

    def with_amplitude(self, nlower: int, nupper: int, values: np.ndarray) -> "NumericTensors":
        amps = dict(self.amplitudes)
        amps[(nlower, nupper)] = np.asarray(values, dtype=float)
        return replace(self, amplitudes=amps)


def _symmetrize(x: np.ndarray, perms: list[tuple[int, ...]]) -> np.ndarray:
    # sorting the orbit before summing makes every image add in the same order
    stack = np.sort(np.stack([x.transpose(p) for p in perms]), axis=0)
    return stack.sum(axis=0) / len(perms)


def random_tensors(seed: int, basis: OrbitalBasis, max_rank: int = 2) -> NumericTensors:
    """Seeded uniform(-1, 1) tensors with exact h and V symmetries.

    Amplitudes are drawn for every (lower, upper) shape up to ``max_rank``
    indices each, with no symmetry imposed.
    """
    rng = np.random.default_rng(seed)
    n = basis.n
    h = _symmetrize(rng.uniform(-1, 1, (n, n)), [(0, 1), (1, 0)])
    V = _symmetrize(rng.uniform(-1, 1, (n,) * 4),
                    [(0, 1, 2, 3), (2, 3, 0, 1), (1, 0, 3, 2), (3, 2, 1, 0)])
    amps = {}
    for lo in range(max_rank + 1):
        for up in range(max_rank + 1):
            amps[(lo, up)] = rng.uniform(-1, 1, (n,) * (lo + up))
    return NumericTensors(h, V, amps)


class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = default_budget() if limit is None else limit
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise ScaleExceeded(f"oracle budget of {self.limit} assignments exceeded")


def _resolve_free(term: Term, free: Optional[Mapping[str, int]]) -> dict[Index, int]:
    free = free or {}
    out = {}
    for idx in term.free():
        if idx.name not in free:
            raise ValueError(f"free index {idx.name!r} needs an orbital assignment")
        out[idx] = free[idx.name]
    return out


def _tensor_product(term: Term, tensors: NumericTensors, assign: Mapping[Index, int]) -> float:
    value = 1.0
    for x in term.tensors:
        value *= tensors.array(x)[tuple(assign[i] for i in x.indices)]
    return value


def _term_input_value(term: Term, tensors: NumericTensors, basis: OrbitalBasis,
                      assign: dict[Index, int], budget: _Budget) -> float:
    ops = term.ops
    loose = sorted({i for x in term.tensors for i in x.indices} - {op.index for op in ops} - set(assign),
                   key=lambda i: i.name)
    total = 0.0

    def walk(k: int, det: int, sign: int) -> None:
        nonlocal total
        if k < 0:
            if det != basis.reference:
                return
            for orbs in itertools.product(*(basis.orbitals(i.space) for i in loose)):
                budget.spend()
                assign.update(zip(loose, orbs))
                total += sign * _tensor_product(term, tensors, assign)
            for i in loose:
                assign.pop(i, None)
            return
        op = ops[k]
        bound = op.index in assign
        choices = (assign[op.index],) if bound else basis.orbitals(op.index.space)
        for orb in choices:
            budget.spend()
            res = act(det, op.kind, orb)
            if res is None:
                continue
            if not bound:
                assign[op.index] = orb
            walk(k - 1, res[1], sign * res[0])
            if not bound:
                del assign[op.index]

    walk(len(ops) - 1, basis.reference, 1)
    return float(term.coeff) * total


def numeric_input_value(expr: Iterable[Term], tensors: NumericTensors, basis: OrbitalBasis,
                        free: Optional[Mapping[str, int]] = None, budget: Optional[int] = None) -> float:
    """Value of an expression with operators, by applying each string to the
    reference determinant for every dummy assignment."""
    meter = _Budget(budget)
    total = 0.0
    for term in expr:
        total += _term_input_value(term, tensors, basis, _resolve_free(term, free), meter)
    return total


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _term_symbolic_value(term: Term, tensors: NumericTensors, basis: OrbitalBasis,
                         fixed: Mapping[Index, int], budget: _Budget) -> float:
    if term.ops:
        raise ValueError(f"term still carries operators: {term.serialize()}")
    letters: dict[Index, str] = {}
    operands, subscripts = [], []
    for x in term.tensors:
        key = []
        sub = ""
        for i in x.indices:
            if i in fixed:
                key.append(fixed[i])
            else:
                key.append(basis.block(i.space))
                if i not in letters:
                    letters[i] = _LETTERS[len(letters)]
                sub += letters[i]
        operands.append(tensors.array(x)[tuple(key)])
        subscripts.append(sub)
    size = 1
    for i in letters:
        size *= len(basis.orbitals(i.space))
    budget.spend(size)
    if not operands:
        return float(term.coeff)
    value = np.einsum(",".join(subscripts) + "->", *operands)
    return float(term.coeff) * float(value)


def numeric_symbolic_value(expr: Iterable[Term], tensors: NumericTensors, basis: OrbitalBasis,
                           free: Optional[Mapping[str, int]] = None, budget: Optional[int] = None) -> float:
    """Value of an operator-free expression by direct tensor contraction."""
    meter = _Budget(budget)
    total = 0.0
    for term in expr:
        total += _term_symbolic_value(term, tensors, basis, _resolve_free(term, free), meter)
    return total


@dataclass
class Trial:
    seed: int
    free: dict
    input_value: float
    derived_value: float

    @property
    def diff(self) -> float:
        return abs(self.input_value - self.derived_value)


@dataclass
class Report:
    trials: list[Trial]
    tol: float

    @property
    def max_diff(self) -> float:
        return max((t.diff for t in self.trials), default=0.0)

    @property
    def passed(self) -> bool:
        return all(t.diff <= self.tol for t in self.trials)

    def table(self) -> str:
        lines = ["seed\tfree\tinput\tderived\t|diff|\tresult"]
        for t in self.trials:
            free = ",".join(f"{k}={v}" for k, v in sorted(t.free.items())) or "-"
            verdict = "pass" if t.diff <= self.tol else "FAIL"
            lines.append(f"{t.seed}\t{free}\t{t.input_value:.15g}\t{t.derived_value:.15g}"
                         f"\t{t.diff:.3e}\t{verdict}")
        lines.append(f"# max |diff| {self.max_diff:.3e} tol {self.tol:g}: "
                     + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _free_labels(*exprs: Iterable[Term]) -> dict[str, Space]:
    out = {}
    for expr in exprs:
        for term in expr:
            for i in term.free():
                out[i.name] = i.space
    return dict(sorted(out.items()))


def check_equivalence(source: Expression, derived: Expression, basis: OrbitalBasis,
                      trials: int = 5, tol: float = 1e-10, seed: int = 0,
                      budget: Optional[int] = None) -> Report:
    """Compare the operator-string value of ``source`` with the contracted
    value of ``derived`` on ``trials`` random tensor sets (seeds ``seed``,
    ``seed + 1``, ...), for every assignment of free indices."""
    labels = _free_labels(source, derived)
    rows = []
    for k in range(trials):
        tensors = random_tensors(seed + k, basis)
        for orbs in itertools.product(*(basis.orbitals(sp) for sp in labels.values())):
            free = dict(zip(labels, orbs))
            rows.append(Trial(
                seed + k,
                free,
                numeric_input_value(source, tensors, basis, free, budget),
                numeric_symbolic_value(derived, tensors, basis, free, budget),
            ))
    return Report(rows, tol)
