"""Text formats.

``.rel``::

    arity 3
    001
    010

``.pfn``::

    arity 2
    00 -> 0
    11 -> 1

Blank lines and lines starting with ``#`` are ignored.  Tuples are written
x_1 first.
"""
from __future__ import annotations

from pathlib import Path

from .core import MAX_ARITY, PartialFunction, Relation, tuple_str


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + msg)
        self.line = line


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _header(lines, source):
    try:
        lineno, first = next(lines)
    except StopIteration:
        raise FormatError("empty file, expected 'arity <n>'", None, source) from None
    parts = first.split()
    if len(parts) != 2 or parts[0] != "arity" or not parts[1].isdigit():
        raise FormatError(f"expected 'arity <n>', got {first!r}", lineno, source)
    n = int(parts[1])
    if not 1 <= n <= MAX_ARITY:
        raise FormatError(f"arity {n} outside [1, {MAX_ARITY}]", lineno, source)
    return n


def _bits(s: str, n: int, lineno: int, source):
    if len(s) != n or set(s) - {"0", "1"}:
        raise FormatError(f"expected {n} characters over {{0,1}}, got {s!r}", lineno, source)
    return int(s, 2)


def parse_relation(text: str, source: str | None = None) -> Relation:
    lines = _content_lines(text)
    n = _header(lines, source)
    mask = 0
    for lineno, line in lines:
        mask |= 1 << _bits(line, n, lineno, source)
    return Relation(n, mask)


def format_relation(rho: Relation) -> str:
    out = [f"arity {rho.arity}"]
    out += [tuple_str(c, rho.arity) for c in rho.codes]
    return "\n".join(out) + "\n"


def parse_function(text: str, source: str | None = None) -> PartialFunction:
    lines = _content_lines(text)
    n = _header(lines, source)
    domain = values = 0
    for lineno, line in lines:
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise FormatError(f"expected '<point> -> <0|1>', got {line!r}", lineno, source)
        p = _bits(lhs.strip(), n, lineno, source)
        v = rhs.strip()
        if v not in ("0", "1"):
            raise FormatError(f"value must be 0 or 1, got {v!r}", lineno, source)
        if (domain >> p) & 1:
            raise FormatError(f"point {lhs.strip()} mapped twice", lineno, source)
        domain |= 1 << p
        values |= int(v) << p
    return PartialFunction(n, domain, values)


def format_function(f: PartialFunction) -> str:
    out = [f"arity {f.arity}"]
    out += [f"{tuple_str(p, f.arity)} -> {(f.values >> p) & 1}" for p in f.points()]
    return "\n".join(out) + "\n"


def read_relation(path) -> Relation:
    path = Path(path)
    return parse_relation(path.read_text(), str(path))


def read_function(path) -> PartialFunction:
    path = Path(path)
    return parse_function(path.read_text(), str(path))


def write_relation(rho: Relation, path) -> None:
    Path(path).write_text(format_relation(rho))


def write_function(f: PartialFunction, path) -> None:
    Path(path).write_text(format_function(f))
