"""Finite intervals of strong partial clones built from intersections of pPol's.

Elements are pPol(U) for unions U of basis relations.  Equality and order
between elements are decided on the relational side (two-sided qfpp
definability); arity-3 fingerprints are only used to bucket candidates and to
cross-check the order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import BudgetExceeded, CloneFingerprint, PartialFunction, Relation, RelationPair, code_tables
from .definability import DefinabilityVerdict, is_irredundant, qfpp_definable
from .families import CloneCatalogEntry, basis_family, catalog_entry, clone_catalog
from .ops import delta, nabla, star, tau, zeta
from .preserve import cpol_fingerprint, invariant_under_clone, pol_fingerprint, ppol_fingerprint, total_polymorphisms

FINGERPRINT_ARITY = 3

ASSUMPTION = ("completeness: every element of the interval is assumed to be an intersection "
              "of pPol's of the basis relations")
NOT_COMPUTED = "the interval of all (not necessarily strong) partial clones is not computed"


@dataclass(frozen=True)
class IntervalElement:
    basis: tuple[str, ...]
    relations: tuple[Relation, ...]
    fingerprint: CloneFingerprint = field(compare=False)
    unions: tuple[tuple[str, ...], ...] = field(default=(), compare=False)
    total_part: str | None = None

    @property
    def label(self) -> str:
        return "pPol{" + ", ".join(self.basis) + "}" if self.basis else "pPol{}"


@dataclass
class LatticeReport:
    elements: list[IntervalElement]
    leq: list[list[bool]]
    basis_names: list[str]
    merges: list[dict] = field(default_factory=list)
    separations: dict[tuple[int, int], str] = field(default_factory=dict)
    clone: str | None = None
    family: str | None = None
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.elements)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.elements:
            key = e.total_part or "?"
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))

    def bottom(self) -> int:
        for a in range(len(self.elements)):
            if all(self.leq[a][b] for b in range(len(self.elements))):
                return a
        raise ValueError("no bottom element")

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (a, b) with a strictly below b and nothing strictly between."""
        n = len(self.elements)
        lt = [[self.leq[a][b] and a != b for b in range(n)] for a in range(n)]
        return [(a, b) for a in range(n) for b in range(n)
                if lt[a][b] and not any(lt[a][c] and lt[c][b] for c in range(n))]

    def to_json(self) -> dict:
        return {
            "schema": "strongclones.interval/1",
            "clone": self.clone,
            "family": self.family,
            "assumptions": [ASSUMPTION],
            "not_computed": [NOT_COMPUTED],
            "notes": self.notes,
            "size": len(self.elements),
            "counts_by_total_part": self.counts(),
            "elements": [
                {"index": i, "basis": list(e.basis), "total_part": e.total_part,
                 "merged_unions": [list(u) for u in e.unions],
                 "fingerprint_counts": [e.fingerprint.count(n) for n in range(1, e.fingerprint.max_arity + 1)]}
                for i, e in enumerate(self.elements)],
            "covers": [list(c) for c in self.covers()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False)


def _named(basis, names) -> tuple[list[str], list[Relation]]:
    if isinstance(basis, Mapping):
        return list(basis), list(basis.values())
    rels = list(basis)
    if names is None:
        names = [f"r{i}" for i in range(len(rels))]
    return list(names), rels


def intersection_closure(basis: Mapping[str, Relation] | Sequence[Relation],
                         names: Sequence[str] | None = None, max_basis: int = 12) -> LatticeReport:
    """One element per distinct pPol(U), U ranging over all subsets of the basis."""
    names, rels = _named(basis, names)
    if len(rels) > max_basis:
        raise BudgetExceeded(f"basis of {len(rels)} relations exceeds {max_basis}")
    for nm, rho in zip(names, rels):
        if not is_irredundant(rho):
            raise ValueError(f"basis relation {nm} is not irredundant")
    single = [ppol_fingerprint([rho], FINGERPRINT_ARITY) for rho in rels]
    full = CloneFingerprint.full(FINGERPRINT_ARITY)

    reps: list[dict] = []
    buckets: dict[str, list[int]] = {}
    merges = []
    order = sorted(range(1 << len(rels)), key=lambda m: (bin(m).count("1"), m))
    for mask in order:
        members = [i for i in range(len(rels)) if mask >> i & 1]
        urels = [rels[i] for i in members]
        unames = tuple(names[i] for i in members)
        fp = full
        for i in members:
            fp = fp & single[i]
        key = fp.digest()
        hit = None
        for idx in buckets.get(key, []):
            rep = reps[idx]
            down = [qfpp_definable(r, rep["rels"]) for r in urels]
            if not all(v.definable for v in down):
                continue
            up = [qfpp_definable(r, urels) for r in rep["rels"]]
            if all(v.definable for v in up):
                hit = idx
                merges.append({"union": unames, "into": rep["names"],
                               "verdicts": down + up, "union_rels": urels, "rep_rels": rep["rels"]})
                break
        if hit is None:
            buckets.setdefault(key, []).append(len(reps))
            reps.append({"names": unames, "rels": urels, "fp": fp, "unions": [unames]})
        else:
            reps[hit]["unions"].append(unames)

    elements = [IntervalElement(r["names"], tuple(r["rels"]), r["fp"], tuple(r["unions"])) for r in reps]
    leq, separations = _order(elements)
    return LatticeReport(elements, leq, names, merges, separations)


def _first_failure(lower: Sequence[Relation], upper: Sequence[Relation]) -> DefinabilityVerdict | None:
    for rho in upper:
        v = qfpp_definable(rho, lower)
        if not v.definable:
            return v
    return None


def _order(elements: Sequence[IntervalElement]):
    n = len(elements)
    leq = [[False] * n for _ in range(n)]
    separations: dict[tuple[int, int], str] = {}
    for a in range(n):
        for b in range(n):
            if a == b:
                leq[a][b] = True
                continue
            fail = _first_failure(elements[a].relations, elements[b].relations)
            if fail is None:
                leq[a][b] = True
                if not elements[a].fingerprint.issubset(elements[b].fingerprint):
                    raise AssertionError(f"definability and fingerprints disagree on {a} <= {b}")
            else:
                separations[(a, b)] = fail.defect()
    return leq, separations


def _restrict_report(report: LatticeReport, keep: list[int], elements=None) -> LatticeReport:
    remap = {old: new for new, old in enumerate(keep)}
    elements = elements if elements is not None else [report.elements[i] for i in keep]
    leq = [[report.leq[a][b] for b in keep] for a in keep]
    seps = {(remap[a], remap[b]): d for (a, b), d in report.separations.items() if a in remap and b in remap}
    return LatticeReport(elements, leq, report.basis_names, report.merges, seps,
                         report.clone, report.family, list(report.notes))


_INVARIANCE_CACHE: dict[tuple[Relation, tuple[Relation, ...]], bool] = {}


def _invariant(sigma: Relation, clone_rels: tuple[Relation, ...], max_members: int) -> bool:
    key = (sigma, clone_rels)
    if key not in _INVARIANCE_CACHE:
        _INVARIANCE_CACHE[key] = invariant_under_clone(sigma, clone_rels, max_members)
    return _INVARIANCE_CACHE[key]


def filter_above(report: LatticeReport, clone: CloneCatalogEntry, max_members: int = 4) -> LatticeReport:
    """Keep the elements containing the total clone (all their relations are invariant under it)."""
    rels = tuple(clone.defining_relations)
    keep = [i for i, e in enumerate(report.elements)
            if all(_invariant(s, rels, max_members) for s in e.relations)]
    out = _restrict_report(report, keep)
    out.clone = clone.name
    return out


def catalog_above(clone: CloneCatalogEntry, max_members: int = 4) -> tuple[list[CloneCatalogEntry], list[str]]:
    """Catalog clones containing ``clone``.

    Entries whose relations are too large for the invariance test and are not
    refuted at arity 3 are returned separately as undetermined.
    """
    above, skipped = [], []
    rels = tuple(clone.defining_relations)
    for e in clone_catalog():
        try:
            if all(_invariant(s, rels, max_members) for s in e.defining_relations):
                above.append(e)
        except BudgetExceeded:
            # refuted if some arity <= 3 polymorphism of the clone escapes e
            if _pol(rels).issubset(_pol(e.defining_relations)):
                skipped.append(e.name)
    return above, skipped


_POL_CACHE: dict[tuple[Relation, ...], CloneFingerprint] = {}


def _pol(rels: Iterable[Relation]) -> CloneFingerprint:
    key = tuple(rels)
    if key not in _POL_CACHE:
        _POL_CACHE[key] = pol_fingerprint(key, FINGERPRINT_ARITY)
    return _POL_CACHE[key]


class ClassificationError(RuntimeError):
    pass


def check_separated(candidates: Sequence[CloneCatalogEntry]) -> None:
    fps = [_pol(c.defining_relations) for c in candidates]
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            if fps[i] == fps[j]:
                raise ClassificationError(
                    f"{candidates[i].name} and {candidates[j].name} agree at arity <= {FINGERPRINT_ARITY}")


def classify_total_part(elem: IntervalElement, candidates: Sequence[CloneCatalogEntry],
                        check: bool = True) -> str:
    """Name of the unique candidate whose arity-3 total slice equals the element's."""
    if check:
        check_separated(candidates)
    tp = elem.fingerprint.total_part()
    hits = [c.name for c in candidates if _pol(c.defining_relations) == tp]
    if len(hits) != 1:
        raise ClassificationError(f"{elem.label}: {len(hits)} matching candidates {hits}")
    return hits[0]


def classify_report(report: LatticeReport, candidates: Sequence[CloneCatalogEntry]) -> LatticeReport:
    check_separated(candidates)
    elements = [IntervalElement(e.basis, e.relations, e.fingerprint, e.unions,
                                classify_total_part(e, candidates, check=False))
                for e in report.elements]
    return _restrict_report(report, list(range(len(elements))), elements)


def interval_report(clone_name: str, family: str) -> LatticeReport:
    """Closure over a basis family, filtered above a catalog clone, with total parts classified."""
    clone = catalog_entry(clone_name)
    rels = tuple(clone.defining_relations)
    # pPol(U) contains the clone iff every relation of U is invariant under it,
    # so filtering the basis first gives the same elements as filtering afterwards
    basis = {n: r for n, r in basis_family(family).items() if _invariant(r, rels, 4)}
    report = intersection_closure(basis)
    report.clone = clone.name
    candidates, skipped = catalog_above(clone)
    report = classify_report(report, candidates)
    report.family = family
    if skipped:
        report.notes.append("catalog clones not tested for containment (relations too large): "
                            + ", ".join(skipped))
    return report


def count_exact(report: LatticeReport, name: str) -> int:
    return sum(1 for e in report.elements if e.total_part == name)


# ---------------------------------------------------------------------------
# transfer construction  X_D = Str(D) u (X n T)
# ---------------------------------------------------------------------------


def str_fingerprint(clone_rels: Iterable[Relation], k: int) -> CloneFingerprint:
    """Arity-<=k slice of Str(Pol(clone_rels)): restrictions of total members."""
    clone_rels = list(clone_rels)
    arrays = []
    for n in range(1, k + 1):
        size = 1 << n
        dom, val = code_tables(n)
        totals = np.flatnonzero(total_polymorphisms(clone_rels, n))
        ok = np.zeros((1 << size, 1 << size), dtype=bool)  # [values, domain] with values within domain
        doms = np.arange(1 << size)
        for w in totals:
            ok[w & doms, doms] = True
        arrays.append(ok[val, dom])
    return CloneFingerprint(k, arrays)


class ClosureViolation(AssertionError):
    pass


def closure_violation(fp: CloneFingerprint):
    """First failure of closure under zeta, tau, Delta, nabla, star (within the
    arity bound) and restriction, as (operation, inputs, result), or None."""
    k = fp.max_arity
    funcs = {n: list(fp.functions(n)) for n in range(1, k + 1)}
    for n, fs in funcs.items():
        for f in fs:
            for name, op in (("zeta", zeta), ("tau", tau), ("delta", delta)):
                h = op(f)
                if h not in fp:
                    return (name, (f,), h)
            if n < k:
                h = nabla(f)
                if h not in fp:
                    return ("nabla", (f,), h)
            for p in f.points():
                h = f.restrict(f.domain & ~(1 << p))
                if h not in fp:
                    return ("restrict", (f,), h)
    for n in range(1, k + 1):
        for m in range(1, k - n + 2):
            for f in funcs[n]:
                for g in funcs[m]:
                    h = star(f, g)
                    if h not in fp:
                        return ("star", (f, g), h)
    return None


def transfer(x_fp: CloneFingerprint, d: CloneCatalogEntry,
             t_pair: RelationPair | None = None, k: int = FINGERPRINT_ARITY,
             validate: bool = True) -> CloneFingerprint:
    """Arity-<=k slice of Str(D) u (X n cPol(t_pair)).

    The default pair is ({0}, empty): partial functions undefined at the all-zero point.
    """
    if t_pair is None:
        zero = Relation.from_tuples(1, ["0"])
        t_pair = RelationPair(zero, Relation.empty(1))
    if len(t_pair.consequent) != 0:
        raise ValueError("transfer expects a pair with empty consequent")
    x_fp = x_fp.truncate(k)
    out = str_fingerprint(d.defining_relations, k) | (x_fp & cpol_fingerprint([t_pair], k))
    if validate:
        bad = closure_violation(out)
        if bad is not None:
            op, args, res = bad
            raise ClosureViolation(f"{op} of {', '.join(map(str, args))} gives {res}, not in the result")
    return out


# ---------------------------------------------------------------------------
# DOT output
# ---------------------------------------------------------------------------


def export_dot(report: LatticeReport, name: str = "interval") -> str:
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=box, fontsize=10];"]
    for i, e in enumerate(report.elements):
        label = e.label + (f"\\n{e.total_part}" if e.total_part else "")
        lines.append(f'  n{i} [label="{label}"];')
    for a, b in report.covers():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
