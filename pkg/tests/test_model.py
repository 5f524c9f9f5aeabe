from fractions import Fraction

import pytest

from sqeval.model import (
    A,
    Index,
    Space,
    Term,
    UnknownLetter,
    ann,
    cre,
    h,
    infer_space,
    intersect,
    serialize,
    t,
)


@pytest.mark.parametrize("letter,space", [
    ("i", Space.OCC), ("n", Space.OCC), ("b", Space.VIR), ("d", Space.VIR),
    ("r", Space.GEN), ("p", Space.GEN),
])
def test_infer_space(letter, space):
    assert infer_space(letter) is space


@pytest.mark.parametrize("letter", ["e", "o", "x", "z"])
def test_infer_space_unknown(letter):
    with pytest.raises(UnknownLetter):
        infer_space(letter)


def test_index_of_strips_ordinal():
    assert Index.of("m1") == Index("m1", Space.OCC)


@pytest.mark.parametrize("s1,s2,out", [
    (Space.OCC, Space.VIR, None),
    (Space.VIR, Space.OCC, None),
    (Space.GEN, Space.OCC, Space.OCC),
    (Space.VIR, Space.GEN, Space.VIR),
    (Space.VIR, Space.VIR, Space.VIR),
    (Space.GEN, Space.GEN, Space.GEN),
])
def test_intersect(s1, s2, out):
    assert intersect(s1, s2) is out


def test_serialize_examples():
    assert serialize(Term(1, [h("i", "j")])) == "+1 h[i,j]"
    assert serialize(Term(Fraction(-1, 2), [A("m", "n", "m", "n")])) == "-1/2 A[m,n,m,n]"


def test_serialize_orders_tensors_by_kind_then_labels():
    term = Term(1, [t("i", "a"), h("j", "i")], [cre("j"), ann("a")])
    assert serialize(term) == "+1 h[j,i] t[i=>a] c(j) a(a)"


def test_structurally_equal_terms_serialize_identically():
    x = Term(Fraction(2, 4), [h("p", "q"), A("i", "j", "a", "b")], [cre("p")])
    y = Term(Fraction(1, 2), [A("i", "j", "a", "b"), h("p", "q")], [cre("p")])
    assert x == y
    assert serialize(x) == serialize(y)


def test_amplitude_order_is_kept():
    x = Term(1, [t("j", "b"), t("i", "a")])
    y = Term(1, [t("i", "a"), t("j", "b")])
    assert x != y
    assert serialize(x) == "+1 t[j=>b] t[i=>a]"


def test_non_inferable_labels_annotated_once():
    e = Index("e", Space.VIR)
    term = Term(1, [h(e, e), t("m", [e])])
    assert serialize(term) == "+1 h[e:vir,e] t[m=>e]"


def test_dummy_and_free_from_counts():
    term = Term(1, [h("p", "q")], [cre("p"), ann("i")])
    assert term.dummies() == {Index.of("p")}
    assert term.free() == {Index.of("q"), Index.of("i")}
