import itertools
import random

import pytest
from hypothesis import given, strategies as st

from bdd_census import (
    Bdd, Constant, DomainError, TruthTable, canonical_encode, canonicalize, compact_truth_table,
    evaluate, make_bdd, to_truth_table, validate,
)
from bdd_census.core import FALSE, TRUE
from bruteforce import IDENTITY, NEGATION, XNOR, XOR


def test_identity_is_valid():
    assert validate(IDENTITY) == []
    assert IDENTITY.size == 3


def test_equal_children_rejected():
    b = Bdd(1, ((2, 1, FALSE, FALSE),), 2)
    assert any("equal children" in p for p in validate(b))


def test_duplicate_triple_rejected():
    # both index-1 nodes are (F, T); the root prevents any other violation
    b = make_bdd(2, [(2, 3, 4), (1, FALSE, TRUE), (1, FALSE, TRUE)])
    problems = validate(b)
    assert any("duplicate triple" in p for p in problems)
    assert not any("equal children" in p for p in problems)


@pytest.mark.parametrize("b, fragment", [
    (Bdd(2, ((2, 1, FALSE, TRUE),), 2), "differs from k"),
    (Bdd(1, ((2, 1, FALSE, 7),), 2), "does not exist"),
    (Bdd(2, ((2, 2, 3, TRUE), (3, 2, FALSE, TRUE)), 2), "does not decrease"),
    (Bdd(2, ((2, 2, FALSE, TRUE), (3, 1, FALSE, TRUE)), 2), "in-degree 0"),
    (Bdd(1, ((2, 1, FALSE, TRUE),), 9), "not an internal node"),
    (Bdd(1, ((1, 1, FALSE, TRUE),), 1), "collides with a sink"),
    (Bdd(0, (), 2), "must be an integer >= 1"),
])
def test_violations_are_reported(b, fragment):
    assert any(fragment in p for p in validate(b))


def test_evaluate():
    assert evaluate(IDENTITY, (1,)) == 1
    assert evaluate(IDENTITY, (0,)) == 0
    assert evaluate(XOR, (1, 1)) == 0
    assert [evaluate(XOR, a) for a in itertools.product((0, 1), repeat=2)] == [0, 1, 1, 0]
    with pytest.raises(DomainError):
        evaluate(XOR, (1,))


def test_truth_tables():
    assert to_truth_table(IDENTITY).to_tuple() == (0, 1)
    assert to_truth_table(NEGATION).to_tuple() == (1, 0)
    assert to_truth_table(XOR).to_tuple() == (0, 1, 1, 0)
    assert to_truth_table(XNOR).to_tuple() == (1, 0, 0, 1)


def test_truth_table_bit_order():
    # f = x2 (root index 2, x1 ignored): entries 2 and 3 have x2 = 1
    b = Bdd(2, ((2, 2, FALSE, TRUE),), 2)
    assert to_truth_table(b).to_tuple() == (0, 0, 1, 1)
    lo, hi = TruthTable.from_bits((0, 1, 1, 0)).cofactors()
    assert lo.to_tuple() == (0, 1) and hi.to_tuple() == (1, 0)


def test_truth_table_guards():
    with pytest.raises(DomainError):
        TruthTable.from_bits((0, 1, 1))
    with pytest.raises(DomainError):
        TruthTable(1, 0b100)
    big = Bdd(25, ((2, 25, FALSE, TRUE),), 2)
    with pytest.raises(DomainError):
        to_truth_table(big)


def test_constant_has_no_bdd():
    assert compact_truth_table(TruthTable.from_bits((0, 0, 0, 0))) == Constant(False)
    assert compact_truth_table(TruthTable.from_bits((1, 1))) == Constant(True)


def test_canonical_encoding_ignores_table_order_and_ids():
    shuffled = Bdd(2, ((9, 1, TRUE, FALSE), (5, 2, 7, 9), (7, 1, FALSE, TRUE)), 5)
    assert validate(shuffled) == []
    assert canonical_encode(shuffled) == canonical_encode(XOR)
    assert canonicalize(shuffled) == XOR


def test_two_size_three_encodings_at_k1():
    assert canonical_encode(IDENTITY) != canonical_encode(NEGATION)


@given(k=st.integers(1, 6), data=st.data())
def test_evaluate_matches_truth_table(k, data):
    bits = data.draw(st.integers(0, (1 << (1 << k)) - 1))
    b = compact_truth_table(TruthTable(k, bits))
    if isinstance(b, Constant):
        return
    t = to_truth_table(b)
    for a in range(1 << b.k):
        assignment = [(a >> (b.k - 1 - i)) & 1 for i in range(b.k)]
        assert evaluate(b, assignment) == t[a]


def test_permuted_tables_encode_equal():
    rng = random.Random(3)
    for _ in range(50):
        b = compact_truth_table(TruthTable(5, rng.getrandbits(32)))
        if isinstance(b, Constant):
            continue
        nodes = list(b.nodes)
        rng.shuffle(nodes)
        assert canonical_encode(Bdd(b.k, tuple(nodes), b.root)) == canonical_encode(b)
