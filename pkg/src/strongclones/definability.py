"""Quantifier-free primitive-positive definability via maximal admissible index tuples.

For an irredundant t-ary relation rho and a set Sigma, pPol(Sigma) is contained
in pPol(rho) iff rho is the conjunction of constraints x_i in sigma (i an index
tuple over [t], sigma in Sigma) and every coordinate of [t] occurs in some
used index tuple.

Decision: take for each sigma the *maximal* set of index tuples i with
x_i in sigma for all x in rho.  Every admissible choice is a subset of the
maximal one, its conjunction is a superset of the maximal conjunction (which
contains rho), and its coverage is a subset of the maximal coverage.  So a
witness exists iff the maximal choice works.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import BudgetExceeded, Relation, tuple_str

DEFAULT_INDEX_BUDGET = 200_000_000

IndexTuple = tuple[int, ...]


class NotIrredundantError(ValueError):
    pass


def duplicate_coordinates(rho: Relation) -> list[tuple[int, int]]:
    """1-based pairs (i, j), i < j, with x_i = x_j for every x in rho."""
    t = rho.arity
    cols = rho.matrix.T
    return [(i + 1, j + 1) for i in range(t) for j in range(i + 1, t)
            if np.array_equal(cols[i], cols[j])]


def fictitious_coordinates(rho: Relation) -> list[int]:
    """1-based coordinates i where flipping x_i never leaves rho."""
    t = rho.arity
    out = []
    for i in range(t):
        bit = 1 << (t - 1 - i)
        if all((rho.members >> (c ^ bit)) & 1 for c in rho.codes):
            out.append(i + 1)
    return out


def is_irredundant(rho: Relation) -> bool:
    if len(rho) == 0:
        raise ValueError("irredundancy is only defined here for nonempty relations")
    return not duplicate_coordinates(rho) and not fictitious_coordinates(rho)


def irredundant_core(rho: Relation) -> tuple[Relation, list[int]]:
    """Drop fictitious coordinates and later copies of duplicated ones.

    Returns the reduced relation and the kept 1-based coordinates.  Whether the
    reduction preserves a definability answer is not claimed.
    """
    drop = set(fictitious_coordinates(rho))
    for i, j in duplicate_coordinates(rho):
        if i not in drop:
            drop.add(j)
    keep = [c for c in range(1, rho.arity + 1) if c not in drop]
    if not keep:
        raise NotIrredundantError("relation has no essential coordinate")
    return rho.select(keep), keep


def maximal_gamma(rho: Relation, sigma: Relation, budget: int = DEFAULT_INDEX_BUDGET,
                  workers: int = 1) -> list[IndexTuple]:
    """All 1-based index tuples i in [t]^s with x_i in sigma for every x in rho.

    Index tuples are grown one position at a time; a prefix is dropped as soon
    as some x in rho projects outside the corresponding projection of sigma.
    ``budget`` bounds the nominal search space t^s.
    """
    t, s = rho.arity, sigma.arity
    if t ** s > budget:
        raise BudgetExceeded(f"{t}^{s} index tuples exceed budget {budget}")
    if len(sigma) == 0:
        return [] if len(rho) else _all_tuples(t, s)
    xs = rho.matrix.T  # (t, |rho|): coordinate c of every member
    prefix_tables = []
    for l in range(1, s + 1):
        tab = np.zeros(1 << l, dtype=bool)
        tab[np.asarray(sigma.codes, dtype=np.int64) >> (s - l)] = True
        prefix_tables.append(tab)

    firsts = np.arange(t, dtype=np.int64)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        parts = np.array_split(firsts, workers)
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda p: _grow(p, xs, prefix_tables, t, s), parts))
    else:
        results = [_grow(firsts, xs, prefix_tables, t, s)]
    out = [tuple(int(v) + 1 for v in row) for res in results for row in res]
    out.sort()
    return out


def _grow(firsts, xs, tables, t, s):
    idx = firsts[:, None]
    pat = xs[firsts]  # (N, |rho|)
    ok = tables[0][pat].all(axis=1)
    idx, pat = idx[ok], pat[ok]
    for l in range(1, s):
        n = idx.shape[0]
        if n == 0:
            break
        new_idx = np.empty((n * t, l + 1), dtype=np.int64)
        new_idx[:, :l] = np.repeat(idx, t, axis=0)
        new_idx[:, l] = np.tile(np.arange(t), n)
        new_pat = (np.repeat(pat, t, axis=0) << 1) | xs[new_idx[:, l]]
        ok = tables[l][new_pat].all(axis=1)
        idx, pat = new_idx[ok], new_pat[ok]
    return idx


def _all_tuples(t, s):
    import itertools
    return [tuple(x) for x in itertools.product(range(1, t + 1), repeat=s)]


def conjunction(t: int, witness: dict[Relation, Sequence[IndexTuple]]) -> Relation:
    """{x in 2^t : x_i in sigma for every i in witness[sigma]}."""
    codes = np.arange(1 << t, dtype=np.int64)
    keep = np.ones(codes.size, dtype=bool)
    for sigma, tuples in witness.items():
        for i in tuples:
            proj = np.zeros(codes.size, dtype=np.int64)
            for c in i:
                proj = (proj << 1) | ((codes >> (t - c)) & 1)
            keep &= sigma.table[proj]
    mask = 0
    for c in np.flatnonzero(keep):
        mask |= 1 << int(c)
    return Relation(t, mask)


def covered(t: int, witness: dict[Relation, Sequence[IndexTuple]]) -> set[int]:
    return {c for tuples in witness.values() for i in tuples for c in i}


@dataclass(frozen=True)
class DefinabilityVerdict:
    """Outcome of a definability query.

    When ``definable`` is true, ``witness`` maps each source relation to its
    index tuples and re-evaluates to the target.  Otherwise at least one defect
    is present: ``extra_tuple`` (a tuple of the least definable superset outside
    the target) and/or ``uncovered`` (coordinates used by no admissible tuple).
    """

    target: Relation
    definable: bool
    witness: dict = field(default_factory=dict, compare=False)
    extra_tuple: int | None = None
    uncovered: tuple[int, ...] = ()
    reduced: bool = False

    def defect(self) -> str:
        if self.definable:
            return ""
        parts = []
        if self.extra_tuple is not None:
            parts.append(f"tuple {tuple_str(self.extra_tuple, self.target.arity)} satisfies every "
                         "admissible constraint but is not in the target")
        if self.uncovered:
            parts.append("coordinates " + ",".join(map(str, self.uncovered)) + " uncovered")
        return "; ".join(parts)

    def to_json(self, names: dict[Relation, str] | None = None) -> dict:
        names = names or {}
        out = {"definable": self.definable, "target_arity": self.target.arity}
        if self.definable:
            out["witness"] = [
                {"source": names.get(s, str(s)), "index_tuples": [list(i) for i in tuples]}
                for s, tuples in self.witness.items() if tuples]
        else:
            out["extra_tuple"] = (None if self.extra_tuple is None
                                  else tuple_str(self.extra_tuple, self.target.arity))
            out["uncovered"] = list(self.uncovered)
            out["defect"] = self.defect()
        if self.reduced:
            out["reduced"] = True
            out["note"] = "target was reduced to its irredundant core; the answer is not guaranteed"
        return out


def qfpp_definable(rho: Relation, sigmas: Iterable[Relation], budget: int = DEFAULT_INDEX_BUDGET,
                   workers: int = 1, reduce_redundant: bool = False) -> DefinabilityVerdict:
    """Decide whether rho is a quantifier-free pp-definition over ``sigmas``."""
    sigmas = list(dict.fromkeys(sigmas))
    reduced = False
    if not is_irredundant(rho):
        if not reduce_redundant:
            raise NotIrredundantError(f"target relation {rho} is not irredundant")
        rho, _ = irredundant_core(rho)
        reduced = True
    t = rho.arity
    witness = {s: maximal_gamma(rho, s, budget, workers) for s in sigmas}
    lub = conjunction(t, witness)
    if not rho.issubset(lub):
        raise AssertionError("maximal conjunction lost a tuple of the target")
    uncovered = tuple(sorted(set(range(1, t + 1)) - covered(t, witness)))
    extra = lub.members & ~rho.members
    if extra == 0 and not uncovered:
        return DefinabilityVerdict(rho, True, witness, reduced=reduced)
    extra_tuple = (extra & -extra).bit_length() - 1 if extra else None
    return DefinabilityVerdict(rho, False, witness, extra_tuple, uncovered, reduced)


def ppol_leq_verdicts(lower: Iterable[Relation], upper: Iterable[Relation],
                      **kw) -> list[DefinabilityVerdict]:
    lower = list(lower)
    return [qfpp_definable(rho, lower, **kw) for rho in upper]


def ppol_leq(lower: Iterable[Relation], upper: Iterable[Relation], **kw) -> bool:
    """pPol(lower) is contained in pPol(upper): every relation of ``upper`` is
    qfpp-definable from ``lower``."""
    lower = list(lower)
    return all(qfpp_definable(rho, lower, **kw).definable for rho in upper)


def ppol_equal(a: Iterable[Relation], b: Iterable[Relation], **kw) -> bool:
    a, b = list(a), list(b)
    return ppol_leq(a, b, **kw) and ppol_leq(b, a, **kw)


def _admissible(rho: Relation, sigma: Relation, tuples: Sequence[IndexTuple]) -> bool:
    if not tuples:
        return True
    idx = np.asarray(tuples, dtype=np.int64) - 1  # (N, s)
    xs = rho.matrix.T  # (t, |rho|)
    codes = np.zeros((idx.shape[0], xs.shape[1]), dtype=np.int64)
    for c in range(idx.shape[1]):
        codes = (codes << 1) | xs[idx[:, c]]
    return bool(sigma.table[codes].all())


def revalidate(verdict: DefinabilityVerdict) -> bool:
    """Recheck a verdict from its stored witness alone.

    Every stored index tuple must be admissible.  A positive verdict must
    reconstruct the target and cover every coordinate; a negative one must
    exhibit its extra tuple inside the conjunction and its uncovered
    coordinates outside the used index tuples.
    """
    rho, w = verdict.target, verdict.witness
    t = rho.arity
    if not all(_admissible(rho, s, tuples) for s, tuples in w.items()):
        return False
    lub = conjunction(t, w)
    cov = covered(t, w)
    if verdict.definable:
        return lub == rho and cov == set(range(1, t + 1))
    if verdict.extra_tuple is None and not verdict.uncovered:
        return False
    if verdict.extra_tuple is not None:
        if not (lub.members >> verdict.extra_tuple) & 1 or verdict.extra_tuple in rho:
            return False
    return not (set(verdict.uncovered) & cov)
