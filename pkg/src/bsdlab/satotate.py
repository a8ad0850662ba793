"""Frobenius-angle statistics: semicircle law, KS distances, ensembles.

The reference measure is (2/pi) sin^2(theta) dtheta on [0, pi] with CDF
(theta - sin(theta) cos(theta)) / pi; the uniform measure on [0, pi] is the
comparison law for the ordinary angles of CM curves.  ``birch_ensemble``
aggregates the angle of every nonsingular y^2 = x^3 + Ax + B over F_p by
isomorphism class, so the whole ensemble costs O(p^2) instead of O(p^3).
"""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ._kernels import impl
from ._threads import worker_count
from .curves import ApRecord
from .errors import (
    ConfigurationError,
    DataCorruptionError,
    DomainError,
    InsufficientDataError,
    PreconditionError,
)

REF_ST = "sato-tate"
REF_UNIFORM = "uniform"
DEFAULT_BINS = 50
BIRCH_MIN_P = 5
BIRCH_MAX_P = 20000
HIST_CSV_HEADER = "bin_lo,bin_hi,count"


@dataclass(frozen=True, eq=False)
class ThetaSample:
    """Angles in [0, pi] plus a tag describing where they came from."""

    values: np.ndarray
    source: str = ""


@dataclass(frozen=True)
class KSReport:
    statistic: float
    n: int
    reference: str

    def to_json_obj(self):
        return {"statistic": self.statistic, "n": self.n, "reference": self.reference}


@dataclass(frozen=True, eq=False)
class Histogram:
    """Counts over equal-width bins of [0, pi]."""

    edges: np.ndarray  # length bins + 1
    counts: np.ndarray  # int64, length bins

    def to_csv(self) -> str:
        lines = [HIST_CSV_HEADER]
        for i in range(len(self.counts)):
            lines.append(f"{self.edges[i]:.17g},{self.edges[i + 1]:.17g},{int(self.counts[i])}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class ThetaReport:
    """Distribution summary for one curve's scan."""

    cm: bool
    reports: List[KSReport]
    histogram: Histogram
    supersingular_density: Optional[float]
    n_good: int


@dataclass(frozen=True, eq=False)
class BirchResult:
    p: int
    ensemble_size: int
    singular_count: int
    histogram: Histogram
    ks: KSReport


def st_cdf(theta: float) -> float:
    """CDF of the semicircle angle measure on [0, pi]."""
    if theta < 0.0 or theta > math.pi:
        raise DomainError(f"theta = {theta} outside [0, pi]")
    return (theta - math.sin(theta) * math.cos(theta)) / math.pi


def uniform_cdf(theta: float) -> float:
    """CDF of the uniform measure on [0, pi]."""
    if theta < 0.0 or theta > math.pi:
        raise DomainError(f"theta = {theta} outside [0, pi]")
    return theta / math.pi


def _cdf_array(values: np.ndarray, reference: str) -> np.ndarray:
    if reference == REF_ST:
        return (values - np.sin(values) * np.cos(values)) / np.pi
    if reference == REF_UNIFORM:
        return values / np.pi
    raise DomainError(f"unknown reference {reference!r}")


def ks_statistic(sample: ThetaSample, reference: str = REF_ST) -> KSReport:
    """Two-sided KS distance between the sample and the reference CDF."""
    values = np.asarray(sample.values, dtype=np.float64)
    n = len(values)
    if n == 0:
        raise InsufficientDataError("empty sample")
    if np.any(values < 0.0) or np.any(values > math.pi):
        raise DomainError("sample values must lie in [0, pi]")
    srt = np.sort(values)
    f = _cdf_array(srt, reference)
    i = np.arange(1, n + 1, dtype=np.float64)
    d_plus = float(np.max(i / n - f))
    d_minus = float(np.max(f - (i - 1.0) / n))
    return KSReport(max(d_plus, d_minus), n, reference)


def _weighted_ks(values: np.ndarray, weights: np.ndarray, reference: str) -> KSReport:
    # KS for samples with integer multiplicities, identical to expanding the
    # sample and running ks_statistic (tests enforce the equivalence).
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = weights[order].astype(np.float64)
    total = float(w.sum())
    if total <= 0:
        raise InsufficientDataError("empty weighted sample")
    hi = np.cumsum(w) / total
    lo = hi - w / total
    f = _cdf_array(v, reference)
    d = max(float(np.max(hi - f)), float(np.max(f - lo)))
    return KSReport(d, int(round(total)), reference)


def histogram(values: np.ndarray, bins: int = DEFAULT_BINS, weights=None) -> Histogram:
    """Fixed-width histogram over [0, pi]; values exactly pi go in the last bin."""
    if bins < 1:
        raise ConfigurationError(f"bins must be >= 1, got {bins}")
    edges = np.linspace(0.0, math.pi, bins + 1)
    idx = np.minimum((np.asarray(values) * bins / math.pi).astype(np.int64), bins - 1)
    if weights is None:
        counts = np.bincount(idx, minlength=bins).astype(np.int64)
    else:
        counts = np.round(np.bincount(idx, weights=weights, minlength=bins)).astype(np.int64)
    return Histogram(edges, counts)


def good_angles(records: List[ApRecord]) -> np.ndarray:
    return np.array([r.theta_p for r in records if r.good], dtype=np.float64)


def supersingular_density(records: List[ApRecord]) -> float:
    """Fraction of good primes with supersingular reduction."""
    good = [r for r in records if r.good]
    if not good:
        raise InsufficientDataError("no good primes in scan")
    return sum(1 for r in good if r.supersingular) / len(good)


def theta_distribution_report(records: List[ApRecord], cm: bool, bins: int = DEFAULT_BINS) -> ThetaReport:
    """KS summary of a scan: semicircle reference for generic curves, uniform
    over the ordinary angles (plus the supersingular density) for CM ones."""
    angles = good_angles(records)
    if len(angles) == 0:
        raise InsufficientDataError("no good primes in scan")
    hist = histogram(angles, bins)
    if not cm:
        ks = ks_statistic(ThetaSample(angles, "good primes"), REF_ST)
        return ThetaReport(False, [ks], hist, None, len(angles))
    ordinary = np.array(
        [r.theta_p for r in records if r.good and not r.supersingular], dtype=np.float64
    )
    if len(ordinary) == 0:
        raise InsufficientDataError("no ordinary primes in scan")
    ks = ks_statistic(ThetaSample(ordinary, "ordinary primes"), REF_UNIFORM)
    return ThetaReport(True, [ks], hist, supersingular_density(records), len(angles))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, math.isqrt(n) + 1):
        if n % q == 0:
            return False
    return True


def _fixed_p_traces(p: int, amod: np.ndarray, bmod: np.ndarray) -> np.ndarray:
    out = np.empty(len(amod), dtype=np.int64)
    if len(amod) == 0:
        return out
    nw = worker_count()
    from .curves import _chunk_bounds

    chunks = _chunk_bounds(np.full(len(amod), p, dtype=np.int64), nw * 4)
    if nw == 1 or len(chunks) == 1:
        impl.ap_fixed_p_range(p, amod, bmod, out, 0, len(amod))
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=nw) as ex:
            jobs = [
                ex.submit(impl.ap_fixed_p_range, p, amod, bmod, out, lo, hi)
                for lo, hi in chunks
            ]
            for j in jobs:
                j.result()
    return out


def birch_ensemble(p: int, bins: int = DEFAULT_BINS) -> BirchResult:
    """Angle distribution over every nonsingular y^2 = x^3 + Ax + B mod p.

    Curves are grouped by j-invariant: one representative trace per generic
    j (each class and its quadratic twist account for (p-1)/2 equations
    apiece, with opposite trace signs), and the j = 0 / j = 1728 families
    are enumerated directly.  The singular locus 4A^3 + 27B^2 = 0 is counted
    exactly from the character table.
    """
    if not (BIRCH_MIN_P <= p <= BIRCH_MAX_P):
        raise ConfigurationError(f"p must lie in [{BIRCH_MIN_P}, {BIRCH_MAX_P}], got {p}")
    if not _is_prime(p):
        raise PreconditionError(f"p = {p} is not prime")

    chi = impl.chi_table(p)
    a_all = np.arange(p, dtype=np.int64)
    a3 = (a_all * a_all % p) * a_all % p

    # Singular pairs: for each A, number of B with 27 B^2 = -4 A^3.
    inv27 = pow(27, p - 2, p)
    rhs = ((p - 4 * a3 % p) % p) * inv27 % p
    singular = p + int(chi[rhs].sum())
    ensemble_size = p * p - singular

    # Generic j: representative (A, B) = (3k, 2k), k = j / (1728 - j).
    js = [j for j in range(p) if j != 0 and j != 1728 % p]
    ks = np.array([j * pow((1728 - j) % p, p - 2, p) % p for j in js], dtype=np.int64)
    rep_a = (3 * ks % p).astype(np.uint64)
    rep_b = (2 * ks % p).astype(np.uint64)
    t_generic = _fixed_p_traces(p, rep_a, rep_b)

    # j = 0 (A = 0) and j = 1728 (B = 0) families, one trace per equation.
    units = np.arange(1, p, dtype=np.uint64)
    zeros = np.zeros(p - 1, dtype=np.uint64)
    t_j0 = _fixed_p_traces(p, zeros, units)
    t_j1728 = _fixed_p_traces(p, units, zeros)

    traces = np.concatenate([t_generic, -t_generic, t_j0, t_j1728])
    weights = np.concatenate(
        [
            np.full(2 * len(js), (p - 1) // 2, dtype=np.int64),
            np.ones(2 * (p - 1), dtype=np.int64),
        ]
    )
    if np.any(traces * traces > 4 * p):
        raise DataCorruptionError(f"|a_p| bound violated in ensemble at p = {p}")
    if int(weights.sum()) != ensemble_size:
        raise DataCorruptionError(
            f"class multiplicities ({int(weights.sum())}) disagree with the "
            f"singular-locus count ({ensemble_size}) at p = {p}"
        )

    angles = np.arccos(np.clip(traces / (2.0 * math.sqrt(p)), -1.0, 1.0))
    hist = histogram(angles, bins, weights=weights)
    ks_rep = _weighted_ks(angles, weights, REF_ST)
    return BirchResult(p, ensemble_size, singular_count=singular, histogram=hist, ks=ks_rep)
