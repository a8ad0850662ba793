"""Built-in reference curves.

Labels follow the standard naming for the four rank-graded conductors plus
two CM workhorses.  Ranks are the known analytic/algebraic ranks; CM
annotations must agree with :func:`bsdlab.curves.cm_detect` (the test suite
cross-checks both, together with trace spot values from the published
tables).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from .curves import CMClass, CurveQ, cm_detect, derive_invariants
from .errors import NotFoundError


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    coefficients: Tuple[int, int, int, int, int]
    known_rank: int
    cm: CMClass

    def curve(self) -> CurveQ:
        return derive_invariants(*self.coefficients, label=self.label)


_RAW = [
    # label, (a1, a2, a3, a4, a6), rank, CM discriminant (None = no CM)
    ("11a3", (0, -1, 1, 0, 0), 0, None),
    ("37a1", (0, 0, 1, -1, 0), 1, None),
    ("389a1", (0, 1, 1, -2, 0), 2, None),
    ("5077a1", (0, 0, 1, -7, 6), 3, None),
    ("cm-j1728", (0, 0, 0, -1, 0), 0, -4),
    ("cm-j0", (0, 0, 0, 0, 1), 0, -3),
]

ENTRIES = {
    label: CatalogEntry(label, coeffs, rank, CMClass(d is not None, d))
    for label, coeffs, rank, d in _RAW
}


def labels():
    return list(ENTRIES)


def lookup(label: str) -> CatalogEntry:
    entry = ENTRIES.get(label)
    if entry is None:
        raise NotFoundError(f"no catalog curve named {label!r}")
    return entry


def curve_for(label: str) -> CurveQ:
    return lookup(label).curve()


def rank_for_label(label: str) -> Optional[int]:
    entry = ENTRIES.get(label)
    return None if entry is None else entry.known_rank


def self_check():
    """Invariants that must hold for every entry; used by tests and the CLI."""
    for entry in ENTRIES.values():
        c = entry.curve()
        if cm_detect(c) != entry.cm:
            raise AssertionError(f"CM annotation mismatch for {entry.label}")
    return True
