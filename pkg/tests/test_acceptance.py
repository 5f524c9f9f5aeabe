"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line; the lines are repeated in the pytest
terminal summary.
"""
import random
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sqeval.canon import simplify
from sqeval.dsl import parse
from sqeval.engine import Stats, fixpoint, measure, potential
from sqeval.model import Expression, FermionOp, Index, OpKind, Space, Term
from sqeval.oracle import OrbitalBasis, check_equivalence, numeric_symbolic_value, random_tensors
from sqeval.pipeline import evaluate
from sqeval.presets import PRESETS

from acceptance_log import record
from identities import anticommutator_violations
from strategies import scalar_terms

FIXTURES = Path(__file__).parent / "fixtures"
BASIS = OrbitalBasis(2, 2)


def fixture(name):
    return simplify(parse((FIXTURES / f"{name}.sq").read_text()))


def timed(name):
    start = time.perf_counter()
    out = evaluate(parse(PRESETS[name]))
    return out, time.perf_counter() - start


def texts(expr):
    return sorted(t.serialize() for t in expr)


def test_criterion_1_cis_one_electron():
    out, secs = timed("cis-h1")
    want = simplify(parse("- t[j=>a] t[i=>a] h[i,j] + t[i=>b] t[i=>a] h[a,b] + t[i=>a] t[i=>a] h[m,m]"))
    ok = len(out) == 3 and texts(out) == texts(want) and secs < 1
    record("criterion 1 cis-h1", ok, f"{len(out)} terms, set-equal {texts(out) == texts(want)}, {secs:.3f} s")
    assert ok


def test_criterion_2_cis_two_electron():
    out, secs = timed("cis-h2")
    trace = simplify(parse("1/2 t[i=>a] t[i=>a] A[m,n,m,n]"))[0]
    ok = len(out) == 4 and trace in list(out) and trace.coeff == Fraction(1, 2) and secs < 5
    record("criterion 2 cis-h2", ok, f"{len(out)} terms, 1/2 trace present {trace in list(out)}, {secs:.3f} s")
    assert ok


def test_criterion_3a_cid_one_electron():
    out, secs = timed("cid-h1")
    ok = len(out) == 20 and secs < 60
    record("criterion 3a cid-h1", ok, f"{len(out)} terms (want 20), {secs:.3f} s")
    assert ok


@pytest.mark.xfail(strict=True, reason="stated count of 48 conflicts with the 40 terms of the "
                                       "published CID two-electron result; see decisions ledger")
def test_criterion_3b_cid_two_electron():
    out, secs = timed("cid-h2")
    ok = len(out) == 48 and secs < 60
    record("criterion 3b cid-h2", ok,
           f"{len(out)} terms (stated 48; published equation has 40, set-equal "
           f"{texts(out) == texts(fixture('cid_h2'))}), {secs:.3f} s")
    assert ok


@pytest.mark.parametrize("name", ["anion-h1", "anion-h2", "cation-h1", "cation-h2"])
def test_criterion_4_anion_cation(name):
    out, secs = timed(name)
    want = fixture(name.replace("-", "_"))
    ok = len(out) == 2 and texts(out) == texts(want) and secs < 1
    record(f"criterion 4 {name}", ok, f"{len(out)} terms, set-equal {texts(out) == texts(want)}, {secs:.3f} s")
    assert ok


@pytest.mark.parametrize("name", list(PRESETS))
def test_criterion_5_oracle(name):
    source = parse(PRESETS[name])
    report = check_equivalence(source, evaluate(source), BASIS, trials=5, tol=1e-10)
    seeds = {t.seed for t in report.trials}
    ok = report.passed and len(seeds) == 5
    record(f"criterion 5 {name}", ok, f"max |diff| {report.max_diff:.2e} over {len(report.trials)} rows")
    assert ok


def test_criterion_6_anticommutators():
    bad = [v for n in range(1, 9) for v in anticommutator_violations(n)]
    record("criterion 6 anticommutators", not bad, f"{len(bad)} violations over 1..8 spin-orbitals")
    assert not bad


def _random_string(rng):
    letters = {Space.OCC: "ijkl", Space.VIR: "abcd", Space.GEN: "pqrs"}
    pool = [Index(c, sp) for sp, cs in letters.items() for c in cs] * 2
    rng.shuffle(pool)
    n = rng.randint(1, 12)
    return Term(1, [], [FermionOp(rng.choice(list(OpKind)), i) for i in pool[:n]])


def test_criterion_7_termination():
    rng = random.Random(7)
    failures = []
    # every rewrite lowers the potential by at least one, so no chain is
    # longer than potential(input); each split round adds one idle sweep
    for _ in range(500):
        term = _random_string(rng)
        top = potential(term, 12)

        def hook(parent, children):
            for child in children:
                if not measure(child) < measure(parent):
                    failures.append((parent, child))

        stats = Stats()
        out = fixpoint([term], stats, on_step=hook)
        if any(t.ops for t in out) or stats.iterations > 2 * top + 1:
            failures.append((term, None))
    record("criterion 7 termination", not failures,
           f"500 strings, {len(failures)} non-decreasing steps or bound overruns; "
           "measure is (operators, general operators, M) lexicographic")
    assert not failures


def test_criterion_8_koopmans():
    worst = 0.0
    ref = simplify(parse("h[m,m] + 1/2 A[m,n,m,n]"))
    derived = evaluate(parse(PRESETS["cation-h1"])) + evaluate(parse(PRESETS["cation-h2"]))
    for seed in range(5):
        base = random_tensors(seed, BASIS)
        e0 = numeric_symbolic_value(ref, base, BASIS)
        for i in BASIS.orbitals(Space.OCC):
            unit = np.zeros(BASIS.n)
            unit[i] = 1.0
            tensors = base.with_amplitude(1, 0, unit)
            occ = BASIS.orbitals(Space.OCC)
            eps = tensors.h[i, i] + sum(tensors.A[i, m, i, m] for m in occ)
            diff = numeric_symbolic_value(derived, tensors, BASIS) - e0
            worst = max(worst, abs(diff + eps))
    ok = worst <= 1e-10
    record("criterion 8 Koopmans", ok, f"max residual {worst:.2e} over 5 seeds x 2 orbitals")
    assert ok


def test_criterion_9_canonicalizer_values():
    worst = [0.0]
    count = [0]
    tensors = random_tensors(3, BASIS)

    @settings(max_examples=200, deadline=None, derandomize=True,
              suppress_health_check=list(HealthCheck))
    @given(st.lists(scalar_terms(), min_size=1, max_size=4))
    def run(terms):
        expr = Expression(terms)
        free = {i.name: BASIS.orbitals(i.space)[0] for t in expr for i in t.free()}
        before = numeric_symbolic_value(expr, tensors, BASIS, free)
        after = numeric_symbolic_value(simplify(expr), tensors, BASIS, free)
        count[0] += 1
        worst[0] = max(worst[0], abs(after - before))

    run()
    ok = worst[0] <= 1e-12
    record("criterion 9 canonicalizer", ok, f"{count[0]} expressions, max |diff| {worst[0]:.2e}")
    assert ok
