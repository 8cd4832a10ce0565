import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongclones.core import (
    ArityError,
    BitTuple,
    CloneFingerprint,
    PartialFunction,
    Relation,
    RelationPair,
    SymmetricPartialFunction,
    code_count,
    decode_function,
    decode_tuple,
    encode_function,
    encode_tuple,
    expand_symmetric,
    is_restriction,
)
from strongclones.ops import substitute

from oracles import all_partial, naive_restriction, table_of


def partial_functions(max_arity=3):
    return st.integers(1, max_arity).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1),
                            st.integers(0, (1 << (1 << n)) - 1))
    ).map(lambda t: PartialFunction(t[0], t[1], t[2] & t[1]))


# --- tuples --------------------------------------------------------------

def test_msb_first():
    assert encode_tuple((1, 0, 0)) == 4
    assert decode_tuple(1, 3) == (0, 0, 1)


@given(st.integers(1, 24).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_bittuple_roundtrip(nb):
    n, bits = nb
    t = BitTuple(n, bits)
    assert BitTuple.of(t.entries()) == t


def test_bittuple_rejects():
    with pytest.raises(ValueError):
        BitTuple(2, 4)
    with pytest.raises(ArityError):
        BitTuple(25, 0)


def test_bittuple_select():
    t = BitTuple.of((1, 0, 1, 1))
    assert t.select((2, 1, 1)).entries() == (0, 1, 1)


# --- relations -----------------------------------------------------------

def test_relation_basics():
    rho = Relation.from_tuples(2, ["00", "01", (1, 0)])
    assert len(rho) == 3
    assert (0, 1) in rho and (1, 1) not in rho and "10" in rho
    assert Relation.full(2).complement() == Relation.empty(2)
    assert rho.product(Relation.from_tuples(1, ["1"])) == Relation.from_tuples(3, ["001", "011", "101"])
    assert rho.dual() == Relation.from_tuples(2, ["11", "10", "01"])
    assert rho.select([2, 1]) == rho


def test_relation_matrix_matches_codes():
    rho = Relation.from_tuples(3, ["001", "110"])
    assert rho.matrix.tolist() == [[0, 0, 1], [1, 1, 0]]


@given(st.integers(0, 15), st.integers(0, 15))
def test_relation_pair_validation(a, b):
    ante, cons = Relation(2, a), Relation(2, b)
    if b & ~a:
        with pytest.raises(ValueError):
            RelationPair(ante, cons)
    else:
        assert RelationPair(ante, cons).consequent == cons


# --- partial functions ---------------------------------------------------

def test_encode_identity_and_empty():
    ident = encode_function(1, {(0,): 0, (1,): 1})
    assert ident == PartialFunction.projection(1, 1)
    empty = encode_function(2, {})
    assert empty == PartialFunction.empty(2) and empty.domain == 0


def test_encode_tau_domain():
    pts = ["0000", "1000", "0100", "0010", "0001", "1111"]
    f = encode_function(4, {p: int(p == "1111") for p in pts})
    assert len(f) == 6


def test_encode_errors():
    with pytest.raises(ArityError):
        encode_function(2, {(0,): 1})
    with pytest.raises(ValueError):
        encode_function(1, [((0,), 0), ((0,), 1)])
    with pytest.raises(ArityError):
        encode_function(25, {})


def test_values_outside_domain_rejected():
    with pytest.raises(ValueError):
        PartialFunction(1, 0b01, 0b10)


def test_code_bijection_exhaustive():
    for n in (1, 2, 3):
        seen = set()
        for c in range(code_count(n)):
            f = PartialFunction.from_code(n, c)
            assert f.code == c
            assert encode_function(n, decode_function(f)) == f
            seen.add(f)
        assert len(seen) == 3 ** (1 << n)


def test_code_counts():
    # 9 arity-1 codes: each of the 2 points is undefined, 0 or 1
    assert [code_count(n) for n in (1, 2, 3)] == [9, 81, 6561]


def test_is_restriction_examples():
    g = PartialFunction.from_callable(2, lambda x, y: x & y)
    assert is_restriction(PartialFunction.empty(2), g)
    assert is_restriction(g, g)
    xi1 = encode_function(4, {p: int(p == "1111") for p in ["0000", "1000", "0100", "0010", "0001", "1111"]})
    parity = PartialFunction.from_callable(4, lambda *x: sum(x) % 2)
    assert not is_restriction(xi1, parity)
    with pytest.raises(ArityError):
        is_restriction(PartialFunction.empty(1), g)


@given(partial_functions(), st.data())
def test_is_restriction_matches_oracle(f, data):
    g = data.draw(partial_functions().filter(lambda g: g.arity == f.arity))
    assert is_restriction(f, g) == naive_restriction(f, g)
    assert is_restriction(f.restrict(data.draw(st.integers(0, 255))), f)


def test_call_and_table():
    f = PartialFunction.from_callable(2, lambda x, y: x | y)
    assert f(0, 1) == 1 and f(0, 0) == 0
    assert table_of(f) == f.table()
    with pytest.raises(KeyError):
        PartialFunction.empty(1)(0)


# --- symmetric functions -------------------------------------------------

def test_expand_symmetric_examples():
    xi1 = expand_symmetric(SymmetricPartialFunction(4, (0, 0, None, None, 1)))
    assert sorted(f"{p:04b}" for p in xi1.points()) == sorted(["0000", "1000", "0100", "0010", "0001", "1111"])
    assert xi1.values == 1 << 0b1111
    assert SymmetricPartialFunction(3, (None,) * 4).expand() == PartialFunction.empty(3)
    f = SymmetricPartialFunction(2, (0, None, 1)).expand()
    assert f.table() == {(0, 0): 0, (1, 1): 1}


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.sampled_from([None, 0, 1]), min_size=n + 1, max_size=n + 1),
    st.permutations(range(n)))))
def test_symmetric_expansion_is_permutation_invariant(data):
    wts, perm = data
    f = SymmetricPartialFunction(len(perm), tuple(wts)).expand()
    assert substitute(f, f.arity, list(perm)) == f
    assert SymmetricPartialFunction.from_function(f).expand() == f


def test_from_function_rejects_asymmetric():
    with pytest.raises(ValueError):
        SymmetricPartialFunction.from_function(PartialFunction.projection(2, 1))


# --- fingerprints --------------------------------------------------------

def test_fingerprint_set_algebra():
    a = CloneFingerprint.from_functions(2, [PartialFunction.projection(2, 1), PartialFunction.empty(1)])
    b = CloneFingerprint.from_functions(2, [PartialFunction.empty(1)])
    assert b.issubset(a) and not a.issubset(b)
    assert (a & b) == b and (a | b) == a
    assert (a - b).count() == 1
    assert PartialFunction.projection(2, 1) in a
    assert CloneFingerprint.full(2).count() == 9 + 81
    assert sorted(f.code for f in a) == sorted([PartialFunction.projection(2, 1).code, 0])


def test_fingerprint_digest_stable():
    fp = CloneFingerprint.from_functions(1, [PartialFunction.projection(1, 1)])
    d = fp.digest()
    assert d.startswith("arity 1: count 1 hash ")
    assert d == CloneFingerprint.from_functions(1, [PartialFunction.projection(1, 1)]).digest()
    assert len(fp.arity_hash(1)) == 16


def test_fingerprint_total_part():
    fp = CloneFingerprint.from_functions(1, all_partial(1))
    assert fp.total_part().count() == 4
    assert all(f.is_total for f in fp.total_part())


def test_fingerprint_rejects_wrong_shape():
    with pytest.raises(ValueError):
        CloneFingerprint(1, [np.zeros(8, dtype=bool)])
