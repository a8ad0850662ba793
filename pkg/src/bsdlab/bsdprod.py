"""Partial products P_x = prod_{p <= x, good} N_p / p and rank fits.

log P_x is accumulated as a compensated sum of log(N_p / p) over good primes
in ascending order, snapshotted at a checkpoint schedule.  Growth like
r * log log x is read off by ordinary least squares of log P against
log log x.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import catalog
from .errors import (
    InsufficientDataError,
    PreconditionError,
    SingularFitError,
)
from .primes import loglog

DEFAULT_X_MIN = 1000
CSV_HEADER = "x,logP,loglogx"


@dataclass(frozen=True, eq=False)
class PartialProductSeries:
    """Checkpointed log P_x values for one curve."""

    curve_label: str
    checkpoints: List[Tuple[int, float, float]]  # (x, logP, loglogx)
    prime_count: int  # good primes accumulated up to the last checkpoint
    bad_primes_excluded: List[int] = field(default_factory=list)

    def logP_at(self, x: int) -> float:
        for cx, lp, _ in self.checkpoints:
            if cx == x:
                return lp
        raise PreconditionError(f"no checkpoint at x = {x} for {self.curve_label}")


@dataclass(frozen=True)
class RankFit:
    slope: float
    intercept: float
    residual_rms: float
    window: Tuple[int, int]


def default_checkpoints(x_max: int) -> List[int]:
    """Powers of two from 128 up to x_max, closed with x_max itself."""
    cps = []
    c = 128
    while c < x_max:
        cps.append(c)
        c *= 2
    cps.append(x_max)
    return cps


def accumulate_logP(records, checkpoints: Sequence[int], label: str = "") -> PartialProductSeries:
    """Compensated accumulation of log(N_p / p) snapshotted at checkpoints.

    ``records`` must be ascending in p (as produced by ``trace_scan``); bad
    primes contribute nothing and are reported in ``bad_primes_excluded``.
    """
    cps = list(checkpoints)
    if any(b >= a for a, b in zip(cps[1:], cps[:-1])):
        raise PreconditionError("checkpoints must be strictly ascending")
    if any(r2.p <= r1.p for r1, r2 in zip(records, records[1:])):
        raise PreconditionError("records must be strictly ascending in p")

    bad = [r.p for r in records if not r.good]
    s = 0.0
    comp = 0.0
    out = []
    k = 0
    nterms = 0
    for r in records:
        while k < len(cps) and cps[k] < r.p:
            out.append((cps[k], s, loglog(cps[k])))
            k += 1
        if k == len(cps):
            break
        if r.good:
            y = math.log(r.n_p / r.p) - comp
            t = s + y
            comp = (t - s) - y
            s = t
            nterms += 1
    while k < len(cps):
        out.append((cps[k], s, loglog(cps[k])))
        k += 1
    return PartialProductSeries(label, out, nterms, bad)


def rank_fit(series: PartialProductSeries, x_min: int = DEFAULT_X_MIN) -> RankFit:
    """OLS slope of log P against log log x over checkpoints with x >= x_min."""
    pts = [(x, lp, llx) for x, lp, llx in series.checkpoints if x >= x_min]
    if len(pts) < 2:
        raise InsufficientDataError(
            f"need at least 2 checkpoints with x >= {x_min}, have {len(pts)}"
        )
    t = np.array([llx for _, _, llx in pts])
    y = np.array([lp for _, lp, _ in pts])
    tbar = t.mean()
    span = float(((t - tbar) ** 2).sum())
    if span == 0.0:
        raise SingularFitError("all checkpoints share one abscissa")
    slope = float(((t - tbar) * (y - y.mean())).sum() / span)
    intercept = float(y.mean() - slope * tbar)
    resid = y - (intercept + slope * t)
    rms = float(np.sqrt((resid ** 2).mean()))
    return RankFit(slope, intercept, rms, (int(pts[0][0]), int(pts[-1][0])))


def compare_curves(series_list: Sequence[PartialProductSeries], x: int) -> List[dict]:
    """Order curves by log P at a common checkpoint, largest first.

    Ties (exactly equal values) are kept adjacent in ascending label order
    and flagged.  Known catalog ranks are attached when the label matches.
    """
    rows = []
    for s in series_list:
        rows.append(
            {
                "label": s.curve_label,
                "logP": s.logP_at(x),
                "known_rank": catalog.rank_for_label(s.curve_label),
            }
        )
    rows.sort(key=lambda r: (-r["logP"], r["label"]))
    values = [r["logP"] for r in rows]
    for r in rows:
        r["tied"] = values.count(r["logP"]) > 1
    return rows


def series_to_csv(series: PartialProductSeries) -> str:
    lines = [CSV_HEADER]
    for x, lp, llx in series.checkpoints:
        lines.append(f"{x},{lp:.17g},{llx:.17g}")
    return "\n".join(lines) + "\n"


def series_from_csv(text: str, label: str = "") -> PartialProductSeries:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise PreconditionError(f"expected header {CSV_HEADER!r}")
    cps = []
    for ln in lines[1:]:
        try:
            xs, lps, llxs = ln.split(",")
            cps.append((int(xs), float(lps), float(llxs)))
        except ValueError:
            raise PreconditionError(f"malformed series row: {ln!r}") from None
    return PartialProductSeries(label, cps, 0, [])
