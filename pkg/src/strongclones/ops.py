"""Function algebra on partial functions.

General composition with its domain rule, the five Maltsev operations
(zeta, tau, Delta, nabla, star), restriction closure, first-slot pinning and a
bounded-arity clone closure.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    ArityError,
    BudgetExceeded,
    CloneFingerprint,
    MAX_ARITY,
    PartialFunction,
    check_arity,
    iter_bits,
)


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    members: tuple[PartialFunction, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("generator set must be nonempty")


def substitute(f: PartialFunction, m: int, mapping: Sequence[int]) -> PartialFunction:
    """h(x_1..x_m) := f(x_{mapping[0]}, ..., x_{mapping[n-1]}) with 0-based variable indices.

    A point is in dom h iff its image under the substitution is in dom f.
    """
    n = f.arity
    if len(mapping) != n:
        raise ArityError(f"mapping must have {n} entries")
    check_arity(m)
    if any(not 0 <= v < m for v in mapping):
        raise ArityError("mapping refers to a variable outside the new arity")
    domain = values = 0
    for q in range(1 << m):
        p = 0
        for v in mapping:
            p = (p << 1) | ((q >> (m - 1 - v)) & 1)
        if (f.domain >> p) & 1:
            domain |= 1 << q
            values |= ((f.values >> p) & 1) << q
    return PartialFunction(m, domain, values)


def compose(f: PartialFunction, gs: Sequence[PartialFunction]) -> PartialFunction:
    """F = f(g_1, ..., g_n).

    dom F = { x in the intersection of the dom g_i : (g_1(x), ..., g_n(x)) in dom f }.
    """
    if len(gs) != f.arity:
        raise ArityError(f"{f.arity}-ary function composed with {len(gs)} functions")
    m = gs[0].arity
    if any(g.arity != m for g in gs):
        raise ArityError("inner functions must share one arity")
    common = (1 << (1 << m)) - 1
    for g in gs:
        common &= g.domain
    domain = values = 0
    for x in iter_bits(common):
        y = 0
        for g in gs:
            y = (y << 1) | ((g.values >> x) & 1)
        if (f.domain >> y) & 1:
            domain |= 1 << x
            values |= ((f.values >> y) & 1) << x
    return PartialFunction(m, domain, values)


def zeta(f: PartialFunction) -> PartialFunction:
    """(zeta f)(x_1..x_n) = f(x_2, ..., x_n, x_1)."""
    n = f.arity
    if n == 1:
        return f
    return substitute(f, n, list(range(1, n)) + [0])


def tau(f: PartialFunction) -> PartialFunction:
    """(tau f)(x_1..x_n) = f(x_2, x_1, x_3, ..., x_n)."""
    n = f.arity
    if n == 1:
        return f
    return substitute(f, n, [1, 0] + list(range(2, n)))


def delta(f: PartialFunction) -> PartialFunction:
    """(Delta f)(x_1..x_{n-1}) = f(x_1, x_1, x_2, ..., x_{n-1})."""
    n = f.arity
    if n == 1:
        return f
    return substitute(f, n - 1, [0] + list(range(n - 1)))


def nabla(f: PartialFunction) -> PartialFunction:
    """(nabla f)(x_1..x_{n+1}) = f(x_2, ..., x_{n+1})."""
    return substitute(f, f.arity + 1, list(range(1, f.arity + 1)))


def star(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """(f * g)(x_1..x_{n+m-1}) = f(g(x_1..x_m), x_{m+1}, ..., x_{n+m-1})."""
    n, m = f.arity, g.arity
    arity = n + m - 1
    if arity > MAX_ARITY:
        raise ArityError(f"star result arity {arity} exceeds {MAX_ARITY}")
    tail = n - 1
    domain = values = 0
    for head in iter_bits(g.domain):
        y_top = ((g.values >> head) & 1) << tail
        base = head << tail
        for t in range(1 << tail):
            y = y_top | t
            if (f.domain >> y) & 1:
                x = base | t
                domain |= 1 << x
                values |= ((f.values >> y) & 1) << x
    return PartialFunction(arity, domain, values)


def pin_first(f: PartialFunction, a: int) -> PartialFunction:
    """f_a: dom f_a = {(a, x) : x in dom f}, f_a(a, x) = f(x)."""
    if a not in (0, 1):
        raise ValueError("a must be 0 or 1")
    n = f.arity
    if n + 1 > MAX_ARITY:
        raise ArityError("no arity headroom for pin_first")
    shift = a << n
    domain = values = 0
    for p in iter_bits(f.domain):
        domain |= 1 << (shift | p)
        values |= ((f.values >> p) & 1) << (shift | p)
    return PartialFunction(n + 1, domain, values)


def restrictions(f: PartialFunction) -> Iterable[PartialFunction]:
    """All g <= f of the same arity (2^|dom f| of them)."""
    pts = f.points()
    for r in range(len(pts) + 1):
        for sub in itertools.combinations(pts, r):
            mask = 0
            for p in sub:
                mask |= 1 << p
            yield f.restrict(mask)


def str_closure(fs: Iterable[PartialFunction], limit: int = 1_000_000) -> frozenset[PartialFunction]:
    """Str{X}: every restriction of every member."""
    fs = list(fs)
    bound = sum(1 << len(f) for f in fs)
    if bound > limit:
        raise BudgetExceeded(f"restriction closure may reach {bound} functions (limit {limit})")
    out: set[PartialFunction] = set()
    for f in fs:
        out.update(restrictions(f))
    return frozenset(out)


def _sort_key(f: PartialFunction):
    return (f.arity, f.code)


def clone_closure_bounded(gen: GeneratorSet | Iterable[PartialFunction], k: int,
                          limit: int = 2_000_000) -> CloneFingerprint:
    """Least set of partial functions of arity <= k containing the generators and
    all projections, closed under zeta, tau, Delta, nabla and star wherever the
    result has arity <= k.

    Results of arity above k are discarded, so this is the arity-k truncation of
    the closure, not necessarily the arity-k slice of the generated clone.
    """
    members = gen.members if isinstance(gen, GeneratorSet) else tuple(gen)
    if not 1 <= k <= 4:
        raise ArityError("clone_closure_bounded supports 1 <= k <= 4")
    for g in members:
        if g.arity > k:
            raise ArityError(f"generator of arity {g.arity} above the bound k={k}")

    seeds = set(members)
    for n in range(1, k + 1):
        seeds.update(PartialFunction.projection(n, i) for i in range(1, n + 1))

    known: set[PartialFunction] = set()
    by_arity: dict[int, list[PartialFunction]] = {n: [] for n in range(1, k + 1)}
    queue: deque[PartialFunction] = deque()

    def add(h: PartialFunction):
        if h.arity <= k and h not in known:
            if len(known) >= limit:
                raise BudgetExceeded(f"closure exceeded {limit} functions")
            known.add(h)
            queue.append(h)

    for s in sorted(seeds, key=_sort_key):
        add(s)

    while queue:
        f = queue.popleft()
        by_arity[f.arity].append(f)
        for h in (zeta(f), tau(f), delta(f)):
            add(h)
        if f.arity < k:
            add(nabla(f))
        # each pair is combined when the later of the two is dequeued
        for m in range(1, k - f.arity + 2):
            for g in by_arity[m]:
                add(star(f, g))
                add(star(g, f))
    return CloneFingerprint.from_functions(k, known)
