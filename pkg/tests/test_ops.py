import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongclones.core import ArityError, PartialFunction, is_restriction
from strongclones.families import rho_1, rho_c
from strongclones.ops import (
    GeneratorSet,
    clone_closure_bounded,
    compose,
    delta,
    nabla,
    pin_first,
    restrictions,
    star,
    str_closure,
    substitute,
    tau,
    zeta,
)
from strongclones.preserve import pol_fingerprint, ppol_fingerprint

from oracles import all_partial, all_total, from_table, is_monotone, naive_compose, table_of

AND = PartialFunction.from_callable(2, lambda x, y: x & y)
OR = PartialFunction.from_callable(2, lambda x, y: x | y)
NOT = PartialFunction.from_callable(1, lambda x: 1 - x)
ID = PartialFunction.projection(1, 1)
DOM1 = from_table(1, {(1,): 1})


def pf(n):
    return st.tuples(st.integers(0, (1 << (1 << n)) - 1), st.integers(0, (1 << (1 << n)) - 1)).map(
        lambda t: PartialFunction(n, t[0], t[1] & t[0]))


any_pf = st.integers(1, 3).flatmap(pf)


# --- composition ---------------------------------------------------------

def test_compose_projection_intersects_domains():
    g = from_table(2, {(0, 0): 1, (0, 1): 0, (1, 1): 1})
    h = from_table(2, {(0, 0): 0, (1, 1): 0, (1, 0): 1})
    out = compose(PartialFunction.projection(2, 1), [g, h])
    assert out.table() == {(0, 0): 1, (1, 1): 1}


def test_compose_and_of_identity():
    assert compose(AND, [ID, ID]) == ID


def test_compose_domain_rule():
    assert compose(DOM1, [ID]).table() == {(1,): 1}


def test_compose_arity_errors():
    with pytest.raises(ArityError):
        compose(AND, [ID])
    with pytest.raises(ArityError):
        compose(AND, [ID, AND])


@settings(max_examples=150)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    pf(n), st.integers(1, 3).flatmap(lambda m: st.lists(pf(m), min_size=n, max_size=n)))))
def test_compose_matches_oracle(data):
    f, gs = data
    assert compose(f, gs) == naive_compose(f, gs)


@settings(max_examples=100)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    pf(n), st.integers(1, 3).flatmap(lambda m: st.lists(pf(m), min_size=n, max_size=n)))))
def test_compose_agrees_with_maltsev_form(data):
    # f(g_1..g_n) rebuilt from substitutions and star alone
    f, gs = data
    m = gs[0].arity
    h, labels = f, [("slot", i) for i in range(f.arity)]
    for i, g in enumerate(gs):
        pos = labels.index(("slot", i))
        order = [pos] + [j for j in range(len(labels)) if j != pos]
        h = substitute(h, len(labels), [order.index(j) for j in range(len(labels))])
        labels = [labels[j] for j in order]
        h = star(h, g)
        labels = [("var", v) for v in range(m)] + labels[1:]
    assert substitute(h, m, [v for _, v in labels]) == compose(f, gs)


# --- Maltsev operations --------------------------------------------------

def test_unary_is_fixed_by_zeta_tau_delta():
    for f in all_partial(1):
        assert zeta(f) == tau(f) == delta(f) == f


def test_delta_and_nabla_examples():
    assert delta(AND) == ID
    assert nabla(ID) == PartialFunction.projection(2, 2)


def test_zeta_tau_on_ternary():
    f = PartialFunction.projection(3, 1)
    assert zeta(f) == PartialFunction.projection(3, 2)
    assert tau(f) == PartialFunction.projection(3, 2)
    assert tau(PartialFunction.projection(3, 3)) == PartialFunction.projection(3, 3)


@given(any_pf)
def test_delta_nabla_inverse(f):
    assert delta(nabla(f)) == f


def test_delta_nabla_inverse_exhaustive_sample():
    for i, f in enumerate(all_partial(3)):
        if i % 10 == 0:
            assert delta(nabla(f)) == f


@given(any_pf)
def test_zeta_has_order_n(f):
    g = f
    for _ in range(f.arity):
        g = zeta(g)
    assert g == f
    assert tau(tau(f)) == f


def test_star_examples():
    g = from_table(2, {(0, 1): 1, (1, 1): 0})
    assert star(ID, g) == g
    assert star(DOM1, ID) == DOM1
    for f in all_partial(1):
        for a in (0, 1):
            assert delta(star(pin_first(f, a), PartialFunction.constant(1, a))) == f


@given(any_pf, any_pf)
def test_star_domain(f, g):
    h = star(f, g)
    n, m = f.arity, g.arity
    tf, tg, th = table_of(f), table_of(g), table_of(h)
    for x in itertools.product((0, 1), repeat=n + m - 1):
        head, tail = x[:m], x[m:]
        ok = head in tg and (tg[head],) + tail in tf
        assert (x in th) == ok
        if ok:
            assert th[x] == tf[(tg[head],) + tail]


# --- restrictions and Str ------------------------------------------------

def test_str_closure_examples():
    assert str_closure([PartialFunction.empty(2)]) == {PartialFunction.empty(2)}
    s = str_closure([ID])
    assert s == {ID, from_table(1, {(0,): 0}), from_table(1, {(1,): 1}), PartialFunction.empty(1)}


def test_str_closure_of_and_by_scan():
    s = str_closure([AND])
    scan = {g for g in all_partial(2) if is_restriction(g, AND)}
    assert s == scan and len(s) == 16
    assert str_closure(s) == s


@settings(max_examples=50)
@given(st.lists(any_pf, max_size=4))
def test_str_closure_idempotent(fs):
    s = str_closure(fs)
    assert str_closure(s) == s


def test_str_closure_guard():
    from strongclones.core import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        str_closure([PartialFunction.total(4, 0)], limit=100)


def test_restrictions_count():
    assert len(list(restrictions(AND))) == 16


# --- pinning -------------------------------------------------------------

def test_pin_first_examples():
    f = pin_first(ID, 0)
    assert f.table() == {(0, 0): 0, (0, 1): 1}
    assert pin_first(PartialFunction.empty(2), 1) == PartialFunction.empty(3)
    with pytest.raises(ValueError):
        pin_first(ID, 2)


@settings(max_examples=100)
@given(any_pf, st.sampled_from([0, 1]))
def test_pin_first_below_nabla(f, a):
    assert is_restriction(pin_first(f, a), nabla(f))


@pytest.mark.parametrize("a", [0, 1])
def test_pinning_constants_on_rho_c(a):
    # c_a is a total member of pPol rho_C, so f in X iff f_a in X
    X = ppol_fingerprint([rho_c()], 3)
    assert PartialFunction.constant(1, a) in X
    for n in (1, 2):
        for f in all_partial(n):
            assert (f in X) == (pin_first(f, a) in X)


# --- bounded closure -----------------------------------------------------

def test_closure_and_or():
    fp = clone_closure_bounded(GeneratorSet("lattice", (AND, OR)), 2)
    totals = set(fp.total_part())
    want = {f for n in (1, 2) for f in all_total(n)
            if is_monotone(f) and f(*([0] * n)) == 0 and f(*([1] * n)) == 1}
    assert totals == want
    assert totals == {ID, PartialFunction.projection(2, 1), PartialFunction.projection(2, 2), AND, OR}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_closure_of_projections(k):
    fp = clone_closure_bounded([PartialFunction.projection(1, 1)], k)
    want = {PartialFunction.projection(n, i) for n in range(1, k + 1) for i in range(1, n + 1)}
    assert set(fp.total_part()) == want


def test_closure_of_negation():
    fp = clone_closure_bounded([NOT], 1)
    assert set(fp.total_part()) == {ID, NOT}


def test_unaries_generate_omega1():
    unaries = list(all_total(1))
    fp = clone_closure_bounded(unaries, 3)
    assert fp.total_part() == pol_fingerprint([rho_1()], 3)


def test_closure_contains_generators_and_is_closed():
    from strongclones.intervals import closure_violation
    fp = clone_closure_bounded([from_table(2, {(0, 1): 1, (1, 0): 0})], 2)
    assert from_table(2, {(0, 1): 1, (1, 0): 0}) in fp
    # closed under the five operations; restrictions are not added
    bad = closure_violation(fp)
    assert bad is None or bad[0] == "restrict"


def test_closure_errors():
    with pytest.raises(ArityError):
        clone_closure_bounded([AND], 1)
    with pytest.raises(ArityError):
        clone_closure_bounded([ID], 5)
    with pytest.raises(ValueError):
        GeneratorSet("empty", ())
