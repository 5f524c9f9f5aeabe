from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from sqeval.dsl import parse
from sqeval.model import Expression, FermionOp, OpKind, Space, Term
from sqeval.oracle import (
    BasisError,
    OrbitalBasis,
    ScaleExceeded,
    apply_op,
    check_equivalence,
    default_budget,
    numeric_input_value,
    numeric_symbolic_value,
    random_tensors,
)
from sqeval.pipeline import evaluate
from sqeval.presets import preset

from identities import anticommutator_violations
from strategies import operator_terms

FIXTURES = Path(__file__).parent / "fixtures"
BASIS = OrbitalBasis(2, 2)


def fixture(name):
    return parse((FIXTURES / f"{name}.sq").read_text())


def test_apply_op_examples():
    assert apply_op({0b11: 1}, OpKind.ANN, 0) == {0b10: 1}
    assert apply_op({0b11: 1}, OpKind.ANN, 1) == {0b01: -1}
    assert apply_op({0b10: 1}, OpKind.ANN, 0) == {}


def test_apply_op_on_empty_state():
    assert apply_op({}, OpKind.CRE, 3) == {}


def test_basis_validation():
    with pytest.raises(BasisError):
        OrbitalBasis(0, 2)
    with pytest.raises(BasisError):
        OrbitalBasis(9, 8)
    assert OrbitalBasis(2, 3).reference == 0b11


def test_random_tensors_deterministic():
    x, y = random_tensors(5, BASIS), random_tensors(5, BASIS)
    assert np.array_equal(x.h, y.h) and np.array_equal(x.V, y.V)
    assert all(np.array_equal(x.amplitudes[k], y.amplitudes[k]) for k in x.amplitudes)
    assert not np.array_equal(x.h, random_tensors(6, BASIS).h)


def test_random_tensors_exact_symmetry():
    x = random_tensors(3, OrbitalBasis(2, 3))
    assert np.all(x.h - x.h.T == 0)
    assert np.all(x.V - x.V.transpose(2, 3, 0, 1) == 0)
    assert np.all(x.V - x.V.transpose(1, 0, 3, 2) == 0)
    assert np.all(x.V - x.V.transpose(3, 2, 1, 0) == 0)
    assert np.all(np.abs(x.h) <= 1) and np.all(np.abs(x.V) <= 1)


def test_reference_overlap_is_one():
    x = random_tensors(0, BASIS)
    assert numeric_input_value(parse("1"), x, BASIS) == 1.0


def test_excitation_has_zero_expectation():
    x = random_tensors(0, BASIS)
    for a in BASIS.orbitals(Space.VIR):
        for i in range(BASIS.n_occ):
            value = numeric_input_value(parse("c(a) a(i)"), x, BASIS, {"a": a, "i": i})
            assert value == 0.0


def test_occupied_trace():
    x = random_tensors(1, BASIS)
    assert numeric_symbolic_value(parse("h[m,m]"), x, BASIS) == x.h[0, 0] + x.h[1, 1]


def test_empty_expression_is_zero():
    assert numeric_symbolic_value(Expression(), random_tensors(0, BASIS), BASIS) == 0.0


def test_delta_evaluates_to_identity():
    x = random_tensors(0, BASIS)
    assert numeric_symbolic_value(parse("d[i,j]"), x, BASIS, {"i": 0, "j": 0}) == 1.0
    assert numeric_symbolic_value(parse("d[i,j]"), x, BASIS, {"i": 0, "j": 1}) == 0.0


def test_symbolic_rejects_operators():
    with pytest.raises(ValueError):
        numeric_symbolic_value(parse("h[p,q] c(p) a(q)"), random_tensors(0, BASIS), BASIS)


def test_missing_free_assignment():
    with pytest.raises(ValueError):
        numeric_symbolic_value(parse("h[i,j]"), random_tensors(0, BASIS), BASIS)


def test_anion_h1_seed_42():
    x = random_tensors(42, BASIS)
    source = numeric_input_value(parse(preset("anion-h1")), x, BASIS)
    derived = numeric_symbolic_value(parse("t[=>b] t[=>a] h[a,b] + t[=>a] t[=>a] h[m,m]"), x, BASIS)
    assert abs(source - derived) <= 1e-10


def test_cis_h1_seed_42():
    x = random_tensors(42, BASIS)
    source = numeric_input_value(parse(preset("cis-h1")), x, BASIS)
    derived = numeric_symbolic_value(fixture("cis_h1"), x, BASIS)
    assert abs(source - derived) <= 1e-10


def test_check_cis_h2_passes():
    report = check_equivalence(parse(preset("cis-h2")), fixture("cis_h2"), BASIS, trials=5, tol=1e-10)
    assert report.passed
    assert len(report.trials) == 5


def test_check_detects_sign_flip():
    flipped = Expression([t.scaled(-1) for t in fixture("cis_h1")])
    report = check_equivalence(parse(preset("cis-h1")), flipped, BASIS)
    assert not report.passed
    assert report.max_diff > 1e-3
    assert "FAIL" in report.table()


def test_check_is_reflexive():
    expr = parse("h[i,j] t[i=>a] t[j=>a] + 1/2 A[m,n,m,n]")
    report = check_equivalence(expr, expr, BASIS)
    assert report.passed and report.max_diff == 0.0


def test_check_enumerates_free_indices():
    report = check_equivalence(parse("h[p,q] c(p) a(i)"), evaluate(parse("h[p,q] c(p) a(i)")),
                               BASIS, trials=2)
    assert report.passed
    assert len(report.trials) == 2 * BASIS.n * BASIS.n_occ


@pytest.mark.parametrize("n", range(1, 9))
def test_anticommutators_exact(n):
    assert anticommutator_violations(n) == []


@pytest.mark.parametrize("n_occ,n_virt", [(1, 1), (2, 2), (3, 1), (2, 5)])
def test_number_operator_counts_electrons(n_occ, n_virt):
    basis = OrbitalBasis(n_occ, n_virt)
    total = 0
    for p in range(basis.n):
        state = apply_op(apply_op({basis.reference: 1}, OpKind.ANN, p), OpKind.CRE, p)
        total += state.get(basis.reference, 0)
    assert total == n_occ


def _conjugate(term):
    flip = {OpKind.CRE: OpKind.ANN, OpKind.ANN: OpKind.CRE}
    ops = tuple(FermionOp(flip[op.kind], op.index) for op in reversed(term.ops))
    return Term(term.coeff, term.tensors, ops)


@settings(max_examples=150, deadline=None)
@given(operator_terms(max_ops=6))
def test_hermiticity(term):
    x = random_tensors(9, BASIS)
    free = {i.name: BASIS.orbitals(i.space)[-1] for i in term.free()}
    a = numeric_input_value([term], x, BASIS, free)
    b = numeric_input_value([_conjugate(term)], x, BASIS, free)
    assert abs(a - b) <= 1e-12


def test_budget_exceeded():
    with pytest.raises(ScaleExceeded):
        numeric_input_value(parse(preset("cid-h2")), random_tensors(0, BASIS), BASIS, budget=100)
    with pytest.raises(ScaleExceeded):
        numeric_symbolic_value(parse("A[m,n,m,n]"), random_tensors(0, BASIS), BASIS, budget=3)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("SQ_EVAL_BUDGET", "50")
    assert default_budget() == 50
    with pytest.raises(ScaleExceeded):
        check_equivalence(parse(preset("cis-h1")), fixture("cis_h1"), BASIS, trials=1)
    monkeypatch.delenv("SQ_EVAL_BUDGET")
    assert default_budget() == 10**7
