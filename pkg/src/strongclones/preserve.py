"""Preservation of relations and relation pairs, and bounded-arity fingerprints
of pPol / Pol / cPol.

A partial function f of arity n preserves the pair (rho, rho') when every
h x n matrix whose columns lie in rho and whose rows lie in dom f is mapped by
f (row-wise) into rho'.  Rows and columns may repeat.  Preserving the relation
rho is preserving (rho, rho).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import (
    ArityError,
    BudgetExceeded,
    CloneFingerprint,
    PartialFunction,
    Relation,
    RelationPair,
    SymmetricPartialFunction,
    code_count,
    code_tables,
    tuple_str,
)

DEFAULT_MATRIX_BUDGET = 50_000_000
DEFAULT_MULTISET_BUDGET = 5_000_000
CHUNK = 1 << 14


@dataclass(frozen=True)
class Violation:
    """A matrix witnessing non-preservation.

    ``rows`` are point codes of f (one per coordinate of the relation),
    ``columns`` are member codes of the antecedent, ``output`` is f applied row-wise.
    """

    arity: int
    rows: tuple[int, ...]
    columns: tuple[int, ...]
    output: int

    def describe(self, h: int) -> str:
        lines = [" ".join(tuple_str(r, self.arity)) + f" | {(self.output >> (h - 1 - i)) & 1}"
                 for i, r in enumerate(self.rows)]
        return "\n".join(lines)


def _bit_table(mask: int, size: int) -> np.ndarray:
    raw = mask.to_bytes((size + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].astype(bool)


def _function_tables(f: PartialFunction) -> tuple[np.ndarray, np.ndarray]:
    size = 1 << f.arity
    return _bit_table(f.domain, size), _bit_table(f.values, size)


def _index_chunks(base: int, length: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """All tuples in [0, base)^length as (B, length) arrays, in lexicographic order."""
    total = base ** length
    for start in range(0, total, chunk):
        t = np.arange(start, min(start + chunk, total), dtype=np.int64)
        idx = np.empty((t.size, length), dtype=np.int64)
        for j in range(length - 1, -1, -1):
            t, idx[:, j] = np.divmod(t, base)
        yield idx


def _rows_from_columns(rho: Relation, idx: np.ndarray) -> np.ndarray:
    """Row points of the matrices whose j-th column is member idx[:, j] of rho."""
    bits = rho.matrix  # (r, h)
    n = idx.shape[1]
    rows = np.zeros((idx.shape[0], rho.arity), dtype=np.int64)
    for j in range(n):
        rows |= bits[idx[:, j]] << (n - 1 - j)
    return rows


def _pack(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a 0/1 array into codes, first entry most significant."""
    h = bits.shape[-1]
    out = np.zeros(bits.shape[:-1], dtype=np.int64)
    for r in range(h):
        out |= bits[..., r].astype(np.int64) << (h - 1 - r)
    return out


def find_violation(f: PartialFunction, antecedent: Relation, consequent: Relation | None = None,
                   budget: int = DEFAULT_MATRIX_BUDGET) -> Violation | None:
    """Search for a matrix with columns in ``antecedent``, rows in dom f and image
    outside ``consequent`` (defaults to the antecedent).

    Enumerates whichever side is smaller: the |dom f|^h row tuples or the
    |rho|^n column tuples.  Both enumerations are exhaustive.
    """
    consequent = antecedent if consequent is None else consequent
    if consequent.arity != antecedent.arity:
        raise ArityError("antecedent and consequent arities differ")
    n, h = f.arity, antecedent.arity
    d, r = len(f), len(antecedent)
    if d == 0 or r == 0:
        return None
    by_rows, by_cols = d ** h, r ** n
    if min(by_rows, by_cols) > budget:
        raise BudgetExceeded(f"matrix enumeration needs min({by_rows}, {by_cols}) > {budget} steps")
    dom_t, val_t = _function_tables(f)
    ante_t, cons_t = antecedent.table, consequent.table
    if by_rows <= by_cols:
        pts = np.asarray(f.points(), dtype=np.int64)
        shifts = np.arange(n - 1, -1, -1)
        for idx in _index_chunks(d, h):
            rows = pts[idx]  # (B, h)
            ok = np.ones(rows.shape[0], dtype=bool)
            for j, s in enumerate(shifts):
                ok &= ante_t[_pack((rows >> s) & 1)]
            if not ok.any():
                continue
            out = _pack(val_t[rows].astype(np.int64))
            bad = ok & ~cons_t[out]
            if bad.any():
                b = int(np.flatnonzero(bad)[0])
                return _violation(f, antecedent, rows[b], int(out[b]))
    else:
        for idx in _index_chunks(r, n):
            rows = _rows_from_columns(antecedent, idx)
            ok = dom_t[rows].all(axis=1)
            if not ok.any():
                continue
            out = _pack(val_t[rows].astype(np.int64))
            bad = ok & ~cons_t[out]
            if bad.any():
                b = int(np.flatnonzero(bad)[0])
                return _violation(f, antecedent, rows[b], int(out[b]))
    return None


def _violation(f, rho, rows, out) -> Violation:
    n, h = f.arity, rho.arity
    rows = tuple(int(x) for x in rows)
    cols = tuple(
        sum(((rows[i] >> (n - 1 - j)) & 1) << (h - 1 - i) for i in range(h)) for j in range(n))
    return Violation(n, rows, cols, out)


def preserves(f: PartialFunction, rho: Relation, budget: int = DEFAULT_MATRIX_BUDGET) -> bool:
    return find_violation(f, rho, rho, budget) is None


def preserves_pair(f: PartialFunction, q: RelationPair, budget: int = DEFAULT_MATRIX_BUDGET) -> bool:
    return find_violation(f, q.antecedent, q.consequent, budget) is None


def preserves_all(f: PartialFunction, rels: Iterable[Relation]) -> bool:
    return all(preserves(f, rho) for rho in rels)


# ---------------------------------------------------------------------------
# symmetric fast path
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int) -> np.ndarray:
    """All vectors of ``parts`` non-negative integers summing to ``total`` (stars and bars)."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    slots = total + parts - 1
    count = comb(slots, parts - 1)
    bars = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(slots), parts - 1)),
                       dtype=np.int64, count=count * (parts - 1)).reshape(count, parts - 1)
    edges = np.hstack([np.full((count, 1), -1), bars, np.full((count, 1), slots)])
    return np.diff(edges, axis=1) - 1


def multiset_count(n: int, rho: Relation) -> int:
    r = len(rho)
    return comb(n + r - 1, r - 1) if r else 0


def symmetric_violation(sf: SymmetricPartialFunction, rho: Relation,
                        budget: int = DEFAULT_MULTISET_BUDGET):
    """Column multiset (member code -> multiplicity) of a violating matrix, or None.

    For a symmetric f the image of a matrix only depends on the multiset of its
    columns: that multiset fixes every row's weight.
    """
    r = len(rho)
    if r == 0:
        return None
    count = multiset_count(sf.arity, rho)
    if count > budget:
        raise BudgetExceeded(f"{count} column multisets exceed budget {budget}")
    defined = np.array([v is not None for v in sf.by_weight])
    value = np.array([v or 0 for v in sf.by_weight], dtype=np.int64)
    counts = _compositions(sf.arity, r)  # (count, r)
    weights = counts @ rho.matrix  # (count, h)
    ok = defined[weights].all(axis=1)
    out = _pack(value[weights])
    bad = ok & ~rho.table[out]
    if bad.any():
        b = int(np.flatnonzero(bad)[0])
        return {c: int(k) for c, k in zip(rho.codes, counts[b]) if k}
    return None


def preserves_symmetric(sf: SymmetricPartialFunction, rho: Relation,
                        budget: int = DEFAULT_MULTISET_BUDGET) -> bool:
    return symmetric_violation(sf, rho, budget) is None


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------

def _matrix_rows(rho: Relation, n: int, budget: int) -> Iterator[np.ndarray]:
    r = len(rho)
    if r ** n > budget:
        raise BudgetExceeded(f"{r}^{n} matrices exceed budget {budget}")
    if r == 0:
        return
    chunk = max(256, CHUNK // max(1, (1 << (1 << n)) // 256))
    for idx in _index_chunks(r, n, chunk):
        yield _rows_from_columns(rho, idx)


def _outputs(rows: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Image codes of each matrix under each total function w: shape (len(w), B)."""
    h = rows.shape[1]
    out = np.zeros((w.size, rows.shape[0]), dtype=np.int64)
    for i in range(h):
        out |= ((w[:, None] >> rows[None, :, i]) & 1) << (h - 1 - i)
    return out


@lru_cache(maxsize=256)
def _failure_table(n: int, antecedent: Relation, consequent: Relation,
                   budget: int = DEFAULT_MATRIX_BUDGET) -> np.ndarray:
    """fail[w, D] is True iff the partial function with domain D (bitset over the
    2^n points) and values w restricted to D violates the pair.

    A violation only looks at the rows used by the matrix, so it suffices to
    record, for each total value vector w, the row sets of violating matrices
    and close them upward.
    """
    if n > 3:
        raise BudgetExceeded("full failure tables are built for arity <= 3 only")
    size = 1 << n
    w = np.arange(1 << size, dtype=np.int64)
    fail = np.zeros((w.size, 1 << size), dtype=bool)
    cons_t = consequent.table
    for rows in _matrix_rows(antecedent, n, budget):
        rowset = np.zeros(rows.shape[0], dtype=np.int64)
        for i in range(rows.shape[1]):
            rowset |= np.int64(1) << rows[:, i]
        bad = ~cons_t[_outputs(rows, w)]
        wi, bi = np.nonzero(bad)
        fail[wi, rowset[bi]] = True
    for p in range(size):
        bit = 1 << p
        with_bit = np.arange(1 << size)[(np.arange(1 << size) & bit) != 0]
        fail[:, with_bit] |= fail[:, with_bit ^ bit]
    fail.flags.writeable = False
    return fail


@lru_cache(maxsize=256)
def _total_failure(n: int, antecedent: Relation, consequent: Relation,
                   budget: int = DEFAULT_MATRIX_BUDGET) -> np.ndarray:
    """bad[w] for every total n-ary function with truth table w."""
    size = 1 << n
    nw = 1 << size
    if nw * max(1, len(antecedent)) ** n > 40 * budget:
        raise BudgetExceeded(f"total scan of arity {n} against {len(antecedent)} members too large")
    w = np.arange(nw, dtype=np.int64)
    bad = np.zeros(nw, dtype=bool)
    cons_t = consequent.table
    for rows in _matrix_rows(antecedent, n, budget):
        for start in range(0, nw, 4096):
            ws = w[start:start + 4096]
            bad[start:start + 4096] |= (~cons_t[_outputs(rows, ws)]).any(axis=1)
    bad.flags.writeable = False
    return bad


def _pair_fingerprint(q: RelationPair, k: int) -> CloneFingerprint:
    arrays = []
    for n in range(1, k + 1):
        fail = _failure_table(n, q.antecedent, q.consequent)
        dom, val = code_tables(n)
        arrays.append(~fail[val, dom])
    return CloneFingerprint(k, arrays)


def _check_k(k: int) -> None:
    if not 1 <= k <= 3:
        raise BudgetExceeded("exhaustive fingerprints are limited to 1 <= k <= 3; "
                             "use separate() for targeted arity-4 searches")


def cpol_fingerprint(pairs: Iterable[RelationPair], k: int) -> CloneFingerprint:
    _check_k(k)
    fp = CloneFingerprint.full(k)
    for q in pairs:
        fp = fp & _pair_fingerprint(q, k)
    return fp


def ppol_fingerprint(rels: Iterable[Relation], k: int) -> CloneFingerprint:
    """Exact arity-<=k slice of pPol of the relation set."""
    return cpol_fingerprint((RelationPair.diagonal(rho) for rho in rels), k)


def total_polymorphisms(rels: Iterable[Relation], n: int) -> np.ndarray:
    """Boolean array over truth tables w (2^(2^n)) marking the n-ary members of Pol."""
    ok = np.ones(1 << (1 << n), dtype=bool)
    for rho in rels:
        ok &= ~_total_failure(n, rho, rho)
    return ok


def pol_fingerprint(rels: Iterable[Relation], k: int) -> CloneFingerprint:
    """Arity-<=k slice of Pol (total functions only)."""
    _check_k(k)
    rels = list(rels)
    arrays = []
    for n in range(1, k + 1):
        size = 1 << n
        dom, val = code_tables(n)
        arr = np.zeros(code_count(n), dtype=bool)
        total = dom == (1 << size) - 1
        arr[total] = total_polymorphisms(rels, n)[val[total]]
        arrays.append(arr)
    return CloneFingerprint(k, arrays)


def invariant_under_clone(sigma: Relation, clone_rels: Iterable[Relation], max_members: int = 4) -> bool:
    """Whether every member of Pol(clone_rels) preserves sigma.

    With m = |sigma| it suffices to apply the m-ary members to the one matrix
    whose columns are the members of sigma: any other matrix with columns in
    sigma is obtained from that one by repeating and permuting columns, which
    the clone absorbs by identifying and adding variables.
    """
    m = len(sigma)
    if m == 0:
        return True
    if m > max_members:
        raise BudgetExceeded(f"relation with {m} members exceeds invariance budget {max_members}")
    poly = np.flatnonzero(total_polymorphisms(list(clone_rels), m))
    idx = np.arange(m, dtype=np.int64)[None, :]
    rows = _rows_from_columns(sigma, idx)
    out = _outputs(rows, poly.astype(np.int64))
    return bool(sigma.table[out].all())


# ---------------------------------------------------------------------------
# relation pairs preserved by one function
# ---------------------------------------------------------------------------

def output_profile(f: PartialFunction, h: int) -> list[tuple[int, int]]:
    """Distinct (column set, output) over all h-row matrices with rows in dom f.

    Column sets are bitsets over the 2^h tuple codes.
    """
    n = f.arity
    pts = np.asarray(f.points(), dtype=np.int64)
    if pts.size == 0:
        return []
    _, val_t = _function_tables(f)
    found: set[tuple[int, int]] = set()
    for idx in _index_chunks(pts.size, h):
        rows = pts[idx]
        colset = np.zeros(rows.shape[0], dtype=object)
        for j in range(n):
            col = _pack((rows >> (n - 1 - j)) & 1)
            colset = colset | np.left_shift(1, col.astype(object))
        out = _pack(val_t[rows].astype(np.int64))
        found.update(zip((int(c) for c in colset), (int(o) for o in out)))
    return sorted(found)


def output_set(f: PartialFunction, rho: Relation) -> Relation:
    """{ f(M) : columns of M in rho, rows in dom f }."""
    mask = 0
    for colset, out in output_profile(f, rho.arity):
        if colset & ~rho.members == 0:
            mask |= 1 << out
    return Relation(rho.arity, mask)


def preserved_pairs(f: PartialFunction, h: int) -> list[RelationPair]:
    """All pairs (rho, rho') of arity h preserved by f: those with output_set(f, rho) within rho'."""
    if h > 3:
        raise BudgetExceeded("preserved_pairs enumerates pairs of arity <= 3 only")
    profile = output_profile(f, h)
    size = 1 << h
    result = []
    for rho_mask in range(1 << size):
        need = 0
        for colset, out in profile:
            if colset & ~rho_mask == 0:
                need |= 1 << out
        if need & ~rho_mask:
            continue
        free = rho_mask & ~need
        sub = free
        while True:
            result.append(RelationPair(Relation(h, rho_mask), Relation(h, need | sub)))
            if sub == 0:
                break
            sub = (sub - 1) & free
    return result


# ---------------------------------------------------------------------------
# targeted separation search
# ---------------------------------------------------------------------------

def separate(inside: Sequence[Relation], outside: Sequence[Relation], n: int,
             budget: int = DEFAULT_MATRIX_BUDGET) -> PartialFunction | None:
    """An n-ary partial function in pPol(inside) but not in pPol(outside), or None.

    Since pPol is restriction closed, a separating f can be cut down to the rows
    of one violating matrix for some relation of ``outside``; so only functions
    whose domain is such a row set are examined, with early exit.
    """
    seen: set[tuple[int, int]] = set()
    for rho in outside:
        h = rho.arity
        for rows in _matrix_rows(rho, n, budget):
            for row in rows:
                pts = sorted(set(int(x) for x in row))
                dom = sum(1 << p for p in pts)
                for bits in range(1 << len(pts)):
                    values = sum(((bits >> i) & 1) << p for i, p in enumerate(pts))
                    key = (dom, values)
                    if key in seen:
                        continue
                    seen.add(key)
                    out = 0
                    for i, p in enumerate(row):
                        out |= ((values >> int(p)) & 1) << (h - 1 - i)
                    if rho.table[out]:
                        continue
                    f = PartialFunction(n, dom, values)
                    if all(preserves(f, s) for s in inside):
                        return f
    return None
