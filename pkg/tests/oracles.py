"""Slow, direct implementations used as test oracles.

Everything here works on plain tuples and dicts and shares no code with the
package beyond the value types.
"""
import itertools

from strongclones.core import PartialFunction, Relation


def points(n):
    return list(itertools.product((0, 1), repeat=n))


def table_of(f: PartialFunction) -> dict:
    out = {}
    for x in points(f.arity):
        code = int("".join(map(str, x)), 2)
        if (f.domain >> code) & 1:
            out[x] = (f.values >> code) & 1
    return out


def from_table(n, table) -> PartialFunction:
    dom = val = 0
    for x, v in table.items():
        code = int("".join(map(str, x)), 2)
        dom |= 1 << code
        val |= v << code
    return PartialFunction(n, dom, val)


def all_partial(n):
    pts = points(n)
    for choice in itertools.product((None, 0, 1), repeat=len(pts)):
        yield from_table(n, {x: v for x, v in zip(pts, choice) if v is not None})


def all_total(n):
    pts = points(n)
    for vals in itertools.product((0, 1), repeat=len(pts)):
        yield from_table(n, dict(zip(pts, vals)))


def members(rho: Relation):
    return [x for x in points(rho.arity) if (rho.members >> int("".join(map(str, x)), 2)) & 1]


def naive_preserves(f: PartialFunction, ante: Relation, cons: Relation | None = None) -> bool:
    """Every h x n matrix with columns in ante and rows in dom f maps into cons."""
    cons = ante if cons is None else cons
    t = table_of(f)
    cons_set = set(members(cons))
    for cols in itertools.product(members(ante), repeat=f.arity):
        rows = [tuple(c[i] for c in cols) for i in range(ante.arity)]
        if all(r in t for r in rows) and tuple(t[r] for r in rows) not in cons_set:
            return False
    return True


def naive_compose(f, gs):
    tf = table_of(f)
    tgs = [table_of(g) for g in gs]
    m = gs[0].arity
    out = {}
    for x in points(m):
        if all(x in t for t in tgs):
            y = tuple(t[x] for t in tgs)
            if y in tf:
                out[x] = tf[y]
    return from_table(m, out)


def naive_restriction(f, g) -> bool:
    tf, tg = table_of(f), table_of(g)
    return all(x in tg and tg[x] == v for x, v in tf.items())


def is_monotone(f) -> bool:
    t = table_of(f)
    return all(t[x] <= t[y] for x in t for y in t if all(a <= b for a, b in zip(x, y)))
