"""Value types: Boolean tuples, relations, partial functions, relation pairs,
symmetric partial functions and bounded-arity clone fingerprints.

Bit order convention (used everywhere, including the file formats): a tuple
``(x_1, ..., x_n)`` is encoded as the integer whose most significant of the
``n`` bits is ``x_1``.  So ``(1, 0, 0)`` is ``4`` and ``(0, 0, 1)`` is ``1``.
A point of an ``n``-ary function and a member of an ``n``-ary relation use the
same encoding.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_ARITY = 24


class ArityError(ValueError):
    """Arity out of range or inconsistent between operands."""


class BudgetExceeded(RuntimeError):
    """A search would exceed its configured work budget."""


def check_arity(n: int, what: str = "arity") -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_ARITY:
        raise ArityError(f"{what} must be in [1, {MAX_ARITY}], got {n!r}")


def encode_tuple(bits: Sequence[int]) -> int:
    code = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"tuple entries must be 0 or 1, got {b!r}")
        code = (code << 1) | int(b)
    return code


def decode_tuple(code: int, length: int) -> tuple[int, ...]:
    return tuple((code >> (length - 1 - i)) & 1 for i in range(length))


def tuple_str(code: int, length: int) -> str:
    return format(code, f"0{length}b") if length else ""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class BitTuple:
    length: int
    bits: int

    def __post_init__(self):
        check_arity(self.length, "tuple length")
        if not 0 <= self.bits < (1 << self.length):
            raise ValueError(f"bits {self.bits} out of range for length {self.length}")

    @classmethod
    def of(cls, entries: Sequence[int]) -> "BitTuple":
        return cls(len(entries), encode_tuple(entries))

    def entries(self) -> tuple[int, ...]:
        return decode_tuple(self.bits, self.length)

    def __getitem__(self, i: int) -> int:
        """0-based access to x_{i+1}."""
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> (self.length - 1 - i)) & 1

    def select(self, index: Sequence[int]) -> "BitTuple":
        """Sub-tuple x_i for a 1-based index tuple i (repetitions allowed)."""
        return BitTuple.of([self[i - 1] for i in index])

    def __str__(self) -> str:
        return tuple_str(self.bits, self.length)


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """An ``arity``-ary Boolean relation stored as a bitset over all 2^arity tuples."""

    arity: int
    members: int

    def __post_init__(self):
        check_arity(self.arity)
        if not 0 <= self.members < (1 << (1 << self.arity)):
            raise ValueError("membership bitset wider than 2^arity")

    @classmethod
    def from_tuples(cls, arity: int, tuples: Iterable) -> "Relation":
        """Build from tuples given as sequences of bits, strings like '0101', or codes."""
        check_arity(arity)
        mask = 0
        for t in tuples:
            if isinstance(t, str):
                if len(t) != arity or set(t) - {"0", "1"}:
                    raise ValueError(f"bad tuple string {t!r} for arity {arity}")
                code = int(t, 2)
            elif isinstance(t, (int, np.integer)):
                code = int(t)
                if not 0 <= code < (1 << arity):
                    raise ValueError(f"tuple code {code} out of range")
            else:
                t = tuple(t)
                if len(t) != arity:
                    raise ArityError(f"tuple {t} has length {len(t)}, expected {arity}")
                code = encode_tuple(t)
            mask |= 1 << code
        return cls(arity, mask)

    @classmethod
    def full(cls, arity: int) -> "Relation":
        check_arity(arity)
        return cls(arity, (1 << (1 << arity)) - 1)

    @classmethod
    def empty(cls, arity: int) -> "Relation":
        return cls(arity, 0)

    @classmethod
    def from_predicate(cls, arity: int, pred) -> "Relation":
        check_arity(arity)
        mask = 0
        for code in range(1 << arity):
            if pred(decode_tuple(code, arity)):
                mask |= 1 << code
        return cls(arity, mask)

    @cached_property
    def codes(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.members))

    def tuples(self) -> list[tuple[int, ...]]:
        return [decode_tuple(c, self.arity) for c in self.codes]

    @cached_property
    def table(self) -> np.ndarray:
        """Boolean lookup array indexed by tuple code."""
        t = np.zeros(1 << self.arity, dtype=bool)
        if self.codes:
            t[np.fromiter(self.codes, dtype=np.int64)] = True
        t.flags.writeable = False
        return t

    @cached_property
    def matrix(self) -> np.ndarray:
        """Members as rows of a (|rho| x arity) 0/1 array, in code order."""
        codes = np.fromiter(self.codes, dtype=np.int64, count=len(self.codes))
        shifts = np.arange(self.arity - 1, -1, -1)
        m = ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int64)
        m.flags.writeable = False
        return m

    def __len__(self) -> int:
        return popcount(self.members)

    def __contains__(self, t) -> bool:
        if isinstance(t, BitTuple):
            if t.length != self.arity:
                return False
            code = t.bits
        elif isinstance(t, (int, np.integer)):
            code = int(t)
        elif isinstance(t, str):
            code = int(t, 2)
        else:
            t = tuple(t)
            if len(t) != self.arity:
                return False
            code = encode_tuple(t)
        return bool((self.members >> code) & 1)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.tuples())

    def issubset(self, other: "Relation") -> bool:
        return self.arity == other.arity and self.members & ~other.members == 0

    def __le__(self, other: "Relation") -> bool:
        return self.issubset(other)

    def __and__(self, other: "Relation") -> "Relation":
        _same_arity(self, other)
        return Relation(self.arity, self.members & other.members)

    def __or__(self, other: "Relation") -> "Relation":
        _same_arity(self, other)
        return Relation(self.arity, self.members | other.members)

    def complement(self) -> "Relation":
        return Relation(self.arity, Relation.full(self.arity).members & ~self.members)

    def product(self, other: "Relation") -> "Relation":
        """Relational product: x in self and y in other  <=>  (x, y) in product."""
        arity = self.arity + other.arity
        check_arity(arity)
        mask = 0
        for a in self.codes:
            for b in other.codes:
                mask |= 1 << ((a << other.arity) | b)
        return Relation(arity, mask)

    def dual(self) -> "Relation":
        """Swap 0 and 1 in every tuple."""
        flip = (1 << self.arity) - 1
        mask = 0
        for c in self.codes:
            mask |= 1 << (c ^ flip)
        return Relation(self.arity, mask)

    def select(self, index: Sequence[int]) -> "Relation":
        """{x_i : x in self} for a 1-based index tuple i."""
        arity = len(index)
        check_arity(arity)
        mask = 0
        for c in self.codes:
            code = 0
            for i in index:
                code = (code << 1) | ((c >> (self.arity - i)) & 1)
            mask |= 1 << code
        return Relation(arity, mask)

    def __str__(self) -> str:
        return "{" + ", ".join(tuple_str(c, self.arity) for c in self.codes) + "}"


def _same_arity(a, b) -> None:
    if a.arity != b.arity:
        raise ArityError(f"arity mismatch: {a.arity} vs {b.arity}")


@dataclass(frozen=True)
class RelationPair:
    """A pair (antecedent, consequent) with consequent contained in antecedent."""

    antecedent: Relation
    consequent: Relation

    def __post_init__(self):
        _same_arity(self.antecedent, self.consequent)
        if not self.consequent.issubset(self.antecedent):
            raise ValueError("consequent must be a subset of the antecedent")

    @property
    def arity(self) -> int:
        return self.antecedent.arity

    @classmethod
    def diagonal(cls, rho: Relation) -> "RelationPair":
        return cls(rho, rho)


# ---------------------------------------------------------------------------
# Partial functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class PartialFunction:
    """An ``arity``-ary partial Boolean function.

    ``domain`` and ``values`` are bitsets over the 2^arity points; bit ``p`` of
    ``values`` is the value at point ``p`` and must be 0 outside the domain.
    """

    arity: int
    domain: int
    values: int

    def __post_init__(self):
        check_arity(self.arity)
        size = 1 << self.arity
        if not 0 <= self.domain < (1 << size):
            raise ValueError("domain bitset wider than 2^arity")
        if self.values & ~self.domain:
            raise ValueError("values set outside the domain")

    # constructors -----------------------------------------------------------

    @classmethod
    def empty(cls, arity: int) -> "PartialFunction":
        """c_empty: the function with empty domain."""
        return cls(arity, 0, 0)

    @classmethod
    def total(cls, arity: int, truth_table: int) -> "PartialFunction":
        check_arity(arity)
        full = (1 << (1 << arity)) - 1
        return cls(arity, full, truth_table & full)

    @classmethod
    def from_callable(cls, arity: int, fn) -> "PartialFunction":
        """Total function from a callable on 0/1 tuples."""
        check_arity(arity)
        values = 0
        for p in range(1 << arity):
            if fn(*decode_tuple(p, arity)):
                values |= 1 << p
        return cls.total(arity, values)

    @classmethod
    def projection(cls, arity: int, i: int) -> "PartialFunction":
        """e_i^n with 1-based i."""
        if not 1 <= i <= arity:
            raise ArityError(f"projection index {i} out of range for arity {arity}")
        return cls.from_callable(arity, lambda *x: x[i - 1])

    @classmethod
    def constant(cls, arity: int, a: int) -> "PartialFunction":
        return cls.from_callable(arity, lambda *x: a)

    @classmethod
    def from_code(cls, arity: int, code: int) -> "PartialFunction":
        """Inverse of :attr:`code`."""
        check_arity(arity)
        size = 1 << arity
        if not 0 <= code < 3 ** size:
            raise ValueError(f"code {code} out of range for arity {arity}")
        domain = values = 0
        for p in range(size):
            code, d = divmod(code, 3)
            if d:
                domain |= 1 << p
                if d == 2:
                    values |= 1 << p
        return cls(arity, domain, values)

    # accessors --------------------------------------------------------------

    @property
    def code(self) -> int:
        """Base-3 code: digit of point p at weight 3^p; 0 = undefined, 1 = value 0, 2 = value 1."""
        code = 0
        for p in reversed(range(1 << self.arity)):
            d = 0
            if (self.domain >> p) & 1:
                d = 2 if (self.values >> p) & 1 else 1
            code = code * 3 + d
        return code

    @property
    def is_total(self) -> bool:
        return self.domain == (1 << (1 << self.arity)) - 1

    def points(self) -> list[int]:
        return list(iter_bits(self.domain))

    def __len__(self) -> int:
        return popcount(self.domain)

    def defined(self, point: int) -> bool:
        return bool((self.domain >> point) & 1)

    def at(self, point: int) -> int:
        if not (self.domain >> point) & 1:
            raise KeyError(f"point {tuple_str(point, self.arity)} not in domain")
        return (self.values >> point) & 1

    def __call__(self, *x: int) -> int:
        if len(x) != self.arity:
            raise ArityError(f"expected {self.arity} arguments, got {len(x)}")
        return self.at(encode_tuple(x))

    def table(self) -> dict[tuple[int, ...], int]:
        return {decode_tuple(p, self.arity): (self.values >> p) & 1 for p in self.points()}

    def restrict(self, points: int) -> "PartialFunction":
        """Restriction to the intersection of the domain with the point bitset ``points``."""
        dom = self.domain & points
        return PartialFunction(self.arity, dom, self.values & dom)

    def __str__(self) -> str:
        body = ", ".join(f"{tuple_str(p, self.arity)}->{(self.values >> p) & 1}" for p in self.points())
        return f"<{self.arity}-ary: {body}>"


def encode_function(arity: int, table: Mapping | Iterable) -> PartialFunction:
    """Build a partial function from an explicit point -> value table.

    ``table`` is a mapping or an iterable of ``(point, value)`` pairs; points are
    0/1 sequences (or strings like ``'011'``) of length ``arity``.
    """
    check_arity(arity)
    items = table.items() if isinstance(table, Mapping) else table
    domain = values = 0
    for point, value in items:
        if isinstance(point, str):
            pt = tuple(int(ch) for ch in point)
        else:
            pt = tuple(point)
        if len(pt) != arity:
            raise ArityError(f"point {point!r} does not have arity {arity}")
        p = encode_tuple(pt)
        if (domain >> p) & 1:
            raise ValueError(f"point {point!r} mapped twice")
        if value not in (0, 1):
            raise ValueError(f"value must be 0 or 1, got {value!r}")
        domain |= 1 << p
        values |= int(value) << p
    return PartialFunction(arity, domain, values)


def decode_function(f: PartialFunction) -> dict[tuple[int, ...], int]:
    return f.table()


def is_restriction(f: PartialFunction, g: PartialFunction) -> bool:
    """f <= g: dom f within dom g and the values agree on dom f."""
    _same_arity(f, g)
    return f.domain & ~g.domain == 0 and (f.values ^ g.values) & f.domain == 0


# ---------------------------------------------------------------------------
# Symmetric partial functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricPartialFunction:
    """Totally symmetric partial function given by its value at each Hamming weight.

    ``by_weight[w]`` is ``None`` (undefined), 0 or 1 for every tuple with ``w`` ones.
    """

    arity: int
    by_weight: tuple

    def __post_init__(self):
        if self.arity < 1:
            raise ArityError("arity must be positive")
        if len(self.by_weight) != self.arity + 1:
            raise ValueError(f"need {self.arity + 1} weight entries, got {len(self.by_weight)}")
        if any(v not in (None, 0, 1) for v in self.by_weight):
            raise ValueError("weight entries must be None, 0 or 1")

    def expand(self) -> PartialFunction:
        check_arity(self.arity)
        domain = values = 0
        for p in range(1 << self.arity):
            v = self.by_weight[popcount(p)]
            if v is not None:
                domain |= 1 << p
                values |= v << p
        return PartialFunction(self.arity, domain, values)

    def domain_size(self) -> int:
        from math import comb
        return sum(comb(self.arity, w) for w, v in enumerate(self.by_weight) if v is not None)

    @classmethod
    def from_function(cls, f: PartialFunction) -> "SymmetricPartialFunction":
        """Compress a permutation-invariant partial function; raises if it is not symmetric."""
        by_weight: list = [None] * (f.arity + 1)
        seen = [False] * (f.arity + 1)
        for p in range(1 << f.arity):
            w = popcount(p)
            v = (f.values >> p) & 1 if (f.domain >> p) & 1 else None
            if not seen[w]:
                by_weight[w], seen[w] = v, True
            elif by_weight[w] != v:
                raise ValueError("function is not totally symmetric")
        return cls(f.arity, tuple(by_weight))


def expand_symmetric(sf: SymmetricPartialFunction) -> PartialFunction:
    return sf.expand()


# ---------------------------------------------------------------------------
# Clone fingerprints
# ---------------------------------------------------------------------------

def code_count(n: int) -> int:
    return 3 ** (1 << n)


_CODE_TABLES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def code_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (domain, values) of bitsets for every base-3 code of arity ``n``."""
    if n not in _CODE_TABLES:
        if n > 4:
            raise BudgetExceeded(f"code tables only for arity <= 4, got {n}")
        size = 1 << n
        codes = np.arange(code_count(n), dtype=np.int64)
        dom = np.zeros_like(codes)
        val = np.zeros_like(codes)
        rest = codes.copy()
        for p in range(size):
            d = rest % 3
            rest //= 3
            dom |= (d > 0).astype(np.int64) << p
            val |= (d == 2).astype(np.int64) << p
        dom.flags.writeable = False
        val.flags.writeable = False
        _CODE_TABLES[n] = (dom, val)
    return _CODE_TABLES[n]


def total_code_mask(n: int) -> np.ndarray:
    dom, _ = code_tables(n)
    return dom == (1 << (1 << n)) - 1


class CloneFingerprint:
    """Exact membership bitsets for the partial functions of arity 1..k in some class.

    ``per_arity[n - 1]`` is a boolean array indexed by base-3 function code.
    Instances are treated as immutable.
    """

    __slots__ = ("max_arity", "per_arity")

    def __init__(self, max_arity: int, per_arity: Sequence[np.ndarray]):
        if len(per_arity) != max_arity:
            raise ValueError("need one bitset per arity")
        arrays = []
        for n, a in enumerate(per_arity, start=1):
            a = np.asarray(a, dtype=bool)
            if a.shape != (code_count(n),):
                raise ValueError(f"arity {n} bitset must have {code_count(n)} entries")
            a = a.copy()
            a.flags.writeable = False
            arrays.append(a)
        self.max_arity = max_arity
        self.per_arity = tuple(arrays)

    @classmethod
    def full(cls, k: int) -> "CloneFingerprint":
        return cls(k, [np.ones(code_count(n), dtype=bool) for n in range(1, k + 1)])

    @classmethod
    def empty(cls, k: int) -> "CloneFingerprint":
        return cls(k, [np.zeros(code_count(n), dtype=bool) for n in range(1, k + 1)])

    @classmethod
    def from_functions(cls, k: int, fs: Iterable[PartialFunction]) -> "CloneFingerprint":
        arrays = [np.zeros(code_count(n), dtype=bool) for n in range(1, k + 1)]
        for f in fs:
            if f.arity > k:
                raise ArityError(f"function arity {f.arity} above fingerprint arity {k}")
            arrays[f.arity - 1][f.code] = True
        return cls(k, arrays)

    def __contains__(self, f: PartialFunction) -> bool:
        return f.arity <= self.max_arity and bool(self.per_arity[f.arity - 1][f.code])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CloneFingerprint):
            return NotImplemented
        return self.max_arity == other.max_arity and all(
            np.array_equal(a, b) for a, b in zip(self.per_arity, other.per_arity))

    def __hash__(self) -> int:
        return hash(self.digest())

    def _combine(self, other: "CloneFingerprint", op) -> "CloneFingerprint":
        if self.max_arity != other.max_arity:
            raise ArityError("fingerprints of different arity bounds")
        return CloneFingerprint(self.max_arity, [op(a, b) for a, b in zip(self.per_arity, other.per_arity)])

    def __and__(self, other):
        return self._combine(other, np.logical_and)

    def __or__(self, other):
        return self._combine(other, np.logical_or)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a & ~b)

    def issubset(self, other: "CloneFingerprint") -> bool:
        return all(not np.any(a & ~b) for a, b in zip(self.per_arity, other.per_arity))

    def __le__(self, other):
        return self.issubset(other)

    def truncate(self, k: int) -> "CloneFingerprint":
        return CloneFingerprint(k, self.per_arity[:k])

    def total_part(self) -> "CloneFingerprint":
        return CloneFingerprint(self.max_arity, [a & total_code_mask(n) for n, a in enumerate(self.per_arity, 1)])

    def count(self, n: int | None = None) -> int:
        if n is None:
            return sum(int(a.sum()) for a in self.per_arity)
        return int(self.per_arity[n - 1].sum())

    def codes(self, n: int) -> np.ndarray:
        return np.flatnonzero(self.per_arity[n - 1])

    def functions(self, n: int) -> Iterator[PartialFunction]:
        dom, val = code_tables(n)
        for c in self.codes(n):
            yield PartialFunction(n, int(dom[c]), int(val[c]))

    def __iter__(self) -> Iterator[PartialFunction]:
        for n in range(1, self.max_arity + 1):
            yield from self.functions(n)

    def arity_hash(self, n: int) -> str:
        packed = np.packbits(self.per_arity[n - 1]).tobytes()
        return hashlib.blake2b(packed, digest_size=8).hexdigest()

    def digest(self) -> str:
        """Stable textual digest: per-arity member count and 64-bit hash."""
        return "\n".join(f"arity {n}: count {self.count(n)} hash {self.arity_hash(n)}"
                         for n in range(1, self.max_arity + 1))

    def __repr__(self) -> str:
        counts = ", ".join(str(self.count(n)) for n in range(1, self.max_arity + 1))
        return f"CloneFingerprint(k={self.max_arity}, counts=[{counts}])"
