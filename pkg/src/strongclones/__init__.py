"""Strong partial clones on {0,1}: relations, partial functions, preservation,
qfpp-definability and finite interval enumeration."""
from .core import (
    ArityError,
    BitTuple,
    BudgetExceeded,
    CloneFingerprint,
    PartialFunction,
    Relation,
    RelationPair,
    SymmetricPartialFunction,
)
from .definability import DefinabilityVerdict, ppol_equal, ppol_leq, qfpp_definable
from .intervals import IntervalElement, LatticeReport, interval_report
from .preserve import find_violation, pol_fingerprint, ppol_fingerprint, preserves

__all__ = [
    "ArityError", "BitTuple", "BudgetExceeded", "CloneFingerprint", "PartialFunction", "Relation",
    "RelationPair", "SymmetricPartialFunction", "DefinabilityVerdict", "ppol_equal", "ppol_leq",
    "qfpp_definable", "IntervalElement", "LatticeReport", "interval_report", "find_violation",
    "pol_fingerprint", "ppol_fingerprint", "preserves",
]
