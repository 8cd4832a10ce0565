"""Named relations and partial functions, and the catalog of total clones used here."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable

from .core import ArityError, PartialFunction, Relation, SymmetricPartialFunction, check_arity

# ---------------------------------------------------------------------------
# relations for T_{0,2}
# ---------------------------------------------------------------------------


def rho_02() -> Relation:
    """{(0,0), (0,1), (1,0)}."""
    return Relation.from_tuples(2, ["00", "01", "10"])


def _conjunction(n: int, pairs: Iterable[tuple[int, int]], base: Relation) -> Relation:
    pairs = list(pairs)
    return Relation.from_predicate(
        n, lambda x: all((x[i], x[j]) in base for i, j in pairs))


def r02_c(n: int) -> Relation:
    """rho_02 along the n-cycle: rho_02(x_i, x_{i+1 mod n}) for every i."""
    _check_n(n)
    return _conjunction(n, [(i, (i + 1) % n) for i in range(n)], rho_02())


def r02_k(n: int) -> Relation:
    """rho_02 on every ordered pair of distinct coordinates (at most one 1)."""
    _check_n(n)
    return _conjunction(n, [(i, j) for i in range(n) for j in range(n) if i != j], rho_02())


def r02(n: int) -> Relation:
    """r02_c(n) x r02_k(n), a 2n-ary relation."""
    return r02_c(n).product(r02_k(n))


def _check_n(n: int) -> None:
    if not 2 <= n <= 10:
        raise ArityError(f"n must be in [2, 10], got {n}")


# ---------------------------------------------------------------------------
# lambda relations and the monsters
# ---------------------------------------------------------------------------


def lambda_k(k: int) -> Relation:
    """lambda_k(y, x_1..x_k) = y or not x_1 or ... or not x_k."""
    check_arity(k + 1)
    forbidden = (1 << k) - 1  # (0, 1, ..., 1)
    return Relation(k + 1, Relation.full(k + 1).members & ~(1 << forbidden))


def lambda_iJ(n: int, i: int, J: Iterable[int]) -> Relation:
    """x_i or OR_{j in J} not x_j, as an n-ary relation (1-based indices)."""
    J = frozenset(J)
    if not 1 <= i <= n or any(not 1 <= j <= n for j in J):
        raise ArityError("indices out of range")
    return Relation.from_predicate(n, lambda x: x[i - 1] == 1 or any(x[j - 1] == 0 for j in J))


def lambda_gamma(n: int, gamma: Iterable[tuple[int, Iterable[int]]]) -> Relation:
    rel = Relation.full(n)
    for i, J in gamma:
        rel = rel & lambda_iJ(n, i, J)
    return rel


def gamma_m(m: int) -> list[tuple[int, frozenset[int]]]:
    """The condition set of the m-th monster, in a fixed order."""
    if m < 3:
        raise ValueError("m must be at least 3")
    out = [(1, frozenset(range(2, m + 2)))]
    rest = range(2, m + 2)
    for i in rest:
        for j1, j2 in combinations([j for j in rest if j != i], 2):
            out.append((i, frozenset({1, j1, j2})))
    return out


def r_lambda(m: int) -> Relation:
    """The (m+1)-ary monster relation."""
    return lambda_gamma(m + 1, gamma_m(m))


def r_lambda_lambda() -> Relation:
    return Relation.from_tuples(3, ["000", "001", "010", "111"])


# ---------------------------------------------------------------------------
# the 4-ary relations for C_01, Omega_1 and L
# ---------------------------------------------------------------------------


def _from_columns(rows: list[str]) -> Relation:
    """Relation whose members are the columns of a matrix given row by row."""
    h = len(rows)
    return Relation.from_tuples(h, ["".join(r[c] for r in rows) for c in range(len(rows[0]))])


def rho_c() -> Relation:
    return _from_columns(["0001", "0011", "0101", "0111"])


def rho_1() -> Relation:
    return _from_columns(["000111", "001011", "010101", "011001"])


def rho_l() -> Relation:
    return _from_columns(["00001111", "00110011", "01010101", "01101001"])


def linear_quadruples() -> Relation:
    """{(x,x,y,y), (x,y,x,y), (x,y,y,x)}: the three-pattern form of L's relation."""
    out = set()
    for x in (0, 1):
        for y in (0, 1):
            out |= {(x, x, y, y), (x, y, x, y), (x, y, y, x)}
    return Relation.from_tuples(4, out)


# ---------------------------------------------------------------------------
# tau_p^k and xi_j
# ---------------------------------------------------------------------------


def n_kp(k: int, p: int) -> int:
    return (2 * k - 1) * p + 1


def tau(k: int, p: int) -> SymmetricPartialFunction:
    """1 on the all-ones tuple, 0 on tuples with at most p ones, undefined elsewhere."""
    if k < 2 or p < 1:
        raise ValueError("need k >= 2 and p >= 1")
    n = n_kp(k, p)
    if n > 64:
        raise ArityError(f"symmetric arity {n} above 64")
    by_weight = [0 if w <= p else None for w in range(n + 1)]
    by_weight[n] = 1
    return SymmetricPartialFunction(n, tuple(by_weight))


def p_seq(j: int) -> int:
    if j < 1:
        raise ValueError("j must be positive")
    p = 1
    for i in range(2, j + 1):
        p = n_kp(i, p)
    return p


def xi(j: int) -> SymmetricPartialFunction:
    return tau(j + 1, p_seq(j))


# ---------------------------------------------------------------------------
# relations behind the appendix intervals
# ---------------------------------------------------------------------------

APPENDIX_RELATIONS: dict[str, list[str]] = {
    "P0": ["0"],
    "P1": ["1"],
    "P01": ["01"],
    "Ple": ["00", "01", "11"],
    "P0le": ["000", "001", "011"],
    "P1le": ["100", "101", "111"],
    "P01le": ["0100", "0101", "0111"],
    "Plambda": ["01", "10"],
    "P0lambda": ["001", "010"],
    "P1lambda": ["101", "110"],
    "P01lambda": ["0101", "0110"],
}

BASIS_FAMILIES: dict[str, list[str]] = {
    "t0t1": ["P0", "P1", "P01"],
    "le": ["P0", "P1", "P01", "Ple", "P0le", "P1le", "P01le"],
    "lambda": ["P0", "P1", "P01", "Plambda", "P0lambda", "P1lambda", "P01lambda"],
    "all": list(APPENDIX_RELATIONS),
}


def appendix_relation(name: str) -> Relation:
    try:
        tuples = APPENDIX_RELATIONS[name]
    except KeyError:
        raise KeyError(f"unknown appendix relation {name!r}; known: {sorted(APPENDIX_RELATIONS)}") from None
    return Relation.from_tuples(len(tuples[0]), tuples)


def basis_family(name: str) -> dict[str, Relation]:
    try:
        names = BASIS_FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown basis family {name!r}; known: {sorted(BASIS_FAMILIES)}") from None
    return {n: appendix_relation(n) for n in names}


# ---------------------------------------------------------------------------
# total clone catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CloneCatalogEntry:
    name: str
    defining_relations: tuple[Relation, ...]
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "defining_relations", tuple(self.defining_relations))
        if not self.defining_relations and self.name != "O":
            raise ValueError(f"catalog entry {self.name} needs defining relations")


def singleton(a: int) -> Relation:
    return Relation.from_tuples(1, [(a,)])


def t_a_mu(a: int, mu: int) -> Relation:
    """2^mu minus the constant tuple (b,...,b) with b != a."""
    b = 1 - a
    const = ((1 << mu) - 1) if b else 0
    return Relation(mu, Relation.full(mu).members & ~(1 << const))


def le_relation() -> Relation:
    return Relation.from_tuples(2, ["00", "01", "11"])


def neq_relation() -> Relation:
    return Relation.from_tuples(2, ["01", "10"])


def _base_entries() -> dict[str, tuple[tuple[Relation, ...], str]]:
    r0, r1 = singleton(0), singleton(1)
    lam = r_lambda_lambda()
    entries = {
        "O": ((), "all total functions"),
        "T0": ((r0,), "0-preserving"),
        "T1": ((r1,), "1-preserving"),
        "M": ((le_relation(),), "monotone"),
        "S": ((neq_relation(),), "self-dual"),
        "L": ((rho_l(),), "linear, via the 4-ary parity relation"),
        "Lambda": ((lam,), "generated by and, c0, c1"),
        "V": ((lam.dual(),), "generated by or, c0, c1; dual of Lambda"),
        "C01": ((rho_c(),), "projections and constants"),
        "Omega1": ((rho_1(),), "functions with at most one essential variable"),
    }
    for a in (0, 1):
        for mu in range(2, 5):
            entries[f"T{a},{mu}"] = ((t_a_mu(a, mu),), f"finite approximant mu={mu}")
    return entries


_INTERSECTIONS = {
    "T0∩T1": ("T0", "T1"),
    "Lambda∩T1": ("Lambda", "T1"),
    "V∩T0": ("V", "T0"),
    "M∩T0": ("M", "T0"),
    "M∩T1": ("M", "T1"),
    "M∩T0∩T1": ("M", "T0", "T1"),
    "S∩T0∩T1": ("S", "T0", "T1"),
}

ALIASES = {
    "T0nT1": "T0∩T1", "LambdanT1": "Lambda∩T1", "VnT0": "V∩T0", "MnT0": "M∩T0",
    "MnT1": "M∩T1", "MnT0nT1": "M∩T0∩T1", "SnT0nT1": "S∩T0∩T1",
}


def clone_catalog() -> list[CloneCatalogEntry]:
    base = _base_entries()
    out = [CloneCatalogEntry(name, rels, notes) for name, (rels, notes) in base.items()]
    for name, parts in _INTERSECTIONS.items():
        rels: list[Relation] = []
        for p in parts:
            for rho in base[p][0]:
                if rho not in rels:
                    rels.append(rho)
        out.append(CloneCatalogEntry(name, rels, "intersection of " + ", ".join(parts)))
    return out


def catalog_entry(name: str) -> CloneCatalogEntry:
    name = ALIASES.get(name, name)
    for e in clone_catalog():
        if e.name == name:
            return e
    raise KeyError(f"unknown clone {name!r}")


# ---------------------------------------------------------------------------
# named objects for file generation
# ---------------------------------------------------------------------------


def named_object(name: str, n: int | None = None, m: int | None = None, k: int | None = None,
                 p: int | None = None, j: int | None = None):
    """Relation or partial function by family name (used by gen-family)."""
    def need(v, label):
        if v is None:
            raise ValueError(f"{name} needs --{label}")
        return v

    makers = {
        "rho02": lambda: rho_02(),
        "r02_c": lambda: r02_c(need(n, "n")),
        "r02_k": lambda: r02_k(need(n, "n")),
        "r02": lambda: r02(need(n, "n")),
        "lambda_k": lambda: lambda_k(need(k, "k")),
        "rlambda": lambda: r_lambda(need(m, "m")),
        "rlambda_dual": lambda: r_lambda(need(m, "m")).dual(),
        "rlambda_lambda": lambda: r_lambda_lambda(),
        "rho_c": lambda: rho_c(),
        "rho_1": lambda: rho_1(),
        "rho_l": lambda: rho_l(),
        "tau": lambda: tau(need(k, "k"), need(p, "p")).expand(),
        "xi": lambda: xi(need(j, "j")).expand(),
    }
    if name in makers:
        return makers[name]()
    if name in APPENDIX_RELATIONS:
        return appendix_relation(name)
    raise KeyError(f"unknown family {name!r}; known: {sorted(makers) + sorted(APPENDIX_RELATIONS)}")


FAMILY_NAMES = ["rho02", "r02_c", "r02_k", "r02", "lambda_k", "rlambda", "rlambda_dual",
                "rlambda_lambda", "rho_c", "rho_1", "rho_l", "tau", "xi", *APPENDIX_RELATIONS]


def all_permutations_preserve(f: PartialFunction) -> bool:
    """Whether f is invariant under every coordinate permutation (slow; for checks)."""
    from .ops import substitute
    return all(substitute(f, f.arity, list(perm)) == f for perm in permutations(range(f.arity)))
