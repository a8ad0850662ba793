"""Weierstrass curves over Q: exact invariants, reduction types, traces.

Coefficients are arbitrary Python integers, so every invariant is exact.
Trace computation has two independent engines: a full-enumeration point
count (slow, any p) and a quadratic-character sum on the short model
(p >= 5, good reduction only).  They must agree; the test suite enforces it.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from ._kernels import impl
from ._threads import worker_count
from .errors import (
    ConfigurationError,
    DataCorruptionError,
    PreconditionError,
    RangeError,
    SingularCurveError,
)

BRUTEFORCE_MAX_P = 100_000

# The thirteen j-invariants of curves over Q with complex multiplication,
# keyed by the discriminant of the CM order.
CM_J_INVARIANTS = {
    0: -3,
    1728: -4,
    -3375: -7,
    8000: -8,
    -32768: -11,
    54000: -12,
    287496: -16,
    -884736: -19,
    -12288000: -27,
    16581375: -28,
    -884736000: -43,
    -147197952000: -67,
    -262537412640768000: -163,
}


class ReductionType(Enum):
    GOOD = "Good"
    MULTIPLICATIVE = "Multiplicative"
    ADDITIVE = "Additive"


@dataclass(frozen=True)
class CurveQ:
    """A nonsingular long Weierstrass model with its exact invariants."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j_num: int
    j_den: int
    label: Optional[str] = None

    @property
    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def name(self) -> str:
        return self.label or ",".join(str(a) for a in self.coefficients)


@dataclass(frozen=True)
class ApRecord:
    """Per-prime scan record; arithmetic fields are None at bad primes."""

    p: int
    reduction: ReductionType
    a_p: Optional[int]
    n_p: Optional[int]
    theta_p: Optional[float]
    supersingular: Optional[bool]

    @property
    def good(self) -> bool:
        return self.reduction is ReductionType.GOOD


@dataclass(frozen=True)
class CMClass:
    is_cm: bool
    cm_discriminant: Optional[int]


def derive_invariants(a1, a2, a3, a4, a6, label=None) -> CurveQ:
    """Exact b-, c-invariants, discriminant and j for integer coefficients.

    Raises :class:`SingularCurveError` when the discriminant vanishes.
    """
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    # Two free identities; violation means a typo in the formulas above.
    if 4 * b8 != b2 * b6 - b4 * b4 or 1728 * disc != c4 ** 3 - c6 ** 2:
        raise AssertionError("invariant identities failed (internal error)")
    if disc == 0:
        raise SingularCurveError(f"singular model: {(a1, a2, a3, a4, a6)}")
    j = Fraction(c4 ** 3, disc)
    return CurveQ(
        a1, a2, a3, a4, a6,
        b2, b4, b6, b8, c4, c6, disc,
        j.numerator, j.denominator, label,
    )


def reduction_type(curve: CurveQ, p: int) -> ReductionType:
    """Good iff p does not divide disc; else split by whether p | c4."""
    if p < 2:
        raise PreconditionError(f"p must be a prime, got {p}")
    if curve.disc % p != 0:
        return ReductionType.GOOD
    if curve.c4 % p != 0:
        return ReductionType.MULTIPLICATIVE
    return ReductionType.ADDITIVE


def ap_bruteforce(curve: CurveQ, p: int) -> int:
    """Trace via full point enumeration of the long model over F_p.

    Works at any good prime (including 2 and 3) but costs O(p^2); guarded
    at p <= 100000.
    """
    if p > BRUTEFORCE_MAX_P:
        raise ConfigurationError(f"bruteforce point count capped at p <= {BRUTEFORCE_MAX_P}")
    if reduction_type(curve, p) is not ReductionType.GOOD:
        raise PreconditionError(f"p = {p} is a bad prime for {curve.name}")
    a1, a2, a3, a4, a6 = (a % p for a in curve.coefficients)
    y = np.arange(p, dtype=np.int64)
    affine = 0
    block = max(1, (1 << 22) // max(p, 1))
    for start in range(0, p, block):
        x = np.arange(start, min(start + block, p), dtype=np.int64)
        rhs = ((x * x % p) * x + a2 * (x * x % p)) % p
        rhs = (rhs + a4 * x % p + a6) % p
        # y^2 + (a1 x + a3) y - rhs == 0; count roots y per x
        coef = (a1 * x + a3) % p
        yy = y[None, :]
        lhs = (yy * yy + coef[:, None] * yy) % p
        affine += int((lhs == rhs[:, None]).sum())
    n_p = affine + 1  # the point at infinity
    a_p = p + 1 - n_p
    if a_p * a_p > 4 * p:
        raise DataCorruptionError(f"|a_p| bound violated at p = {p}")
    return a_p


def _short_model_residues(curve: CurveQ, p: int):
    # y^2 = x^3 + A x + B with A = -27 c4, B = -54 c6 (valid for p >= 5).
    return (-27 * curve.c4) % p, (-54 * curve.c6) % p


def ap_legendre(curve: CurveQ, p: int) -> int:
    """Trace via the quadratic-character sum over the short model.

    Requires p >= 5 and good reduction; route p in {2, 3} to
    :func:`ap_bruteforce`.
    """
    if p in (2, 3):
        raise PreconditionError("short-model character sum needs p >= 5; use ap_bruteforce")
    if p < 5:
        raise PreconditionError(f"p must be a prime >= 5, got {p}")
    if p > impl.MAX_KERNEL_PRIME:
        raise ConfigurationError(f"character-sum kernel capped at p < 2^31, got {p}")
    if reduction_type(curve, p) is not ReductionType.GOOD:
        raise PreconditionError(f"p = {p} is a bad prime for {curve.name}")
    amod, bmod = _short_model_residues(curve, p)
    ps = np.array([p], dtype=np.uint64)
    am = np.array([amod], dtype=np.uint64)
    bm = np.array([bmod], dtype=np.uint64)
    out = np.empty(1, dtype=np.int64)
    impl.ap_batch_range(ps, am, bm, out, 0, 1)
    a_p = int(out[0])
    if a_p * a_p > 4 * p:
        raise DataCorruptionError(f"|a_p| bound violated at p = {p}")
    return a_p


def theta_of(p: int, a_p: int) -> float:
    """Frobenius angle arccos(a_p / (2 sqrt(p))), clamped at the endpoints.

    Accepts |a_p| up to ceil(2 sqrt(p)); anything larger is corrupt data.
    """
    if a_p * a_p > 4 * p:
        r = math.isqrt(4 * p)
        ceil_bound = r if r * r == 4 * p else r + 1
        if abs(a_p) > ceil_bound:
            raise DataCorruptionError(f"a_p = {a_p} beyond the |a_p| <= 2 sqrt(p) bound at p = {p}")
        return 0.0 if a_p > 0 else math.pi
    c = a_p / (2.0 * math.sqrt(p))
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    return math.acos(c)


def is_supersingular(p: int, a_p: int) -> bool:
    """Supersingular test from the trace: a_p = 0 for p >= 5, p | a_p else."""
    if p >= 5:
        return a_p == 0
    return a_p % p == 0


def cm_detect(curve: CurveQ) -> CMClass:
    """Match the exact j-invariant against the thirteen CM values."""
    if curve.j_den != 1:
        return CMClass(False, None)
    d = CM_J_INVARIANTS.get(curve.j_num)
    if d is None:
        return CMClass(False, None)
    return CMClass(True, d)


def _bad_primes(curve: CurveQ, ps: np.ndarray) -> np.ndarray:
    """Boolean mask over ps marking primes dividing the discriminant."""
    d = abs(curve.disc)
    if d < 2 ** 62:
        return (d % ps) == 0
    return np.fromiter((d % int(p) == 0 for p in ps), dtype=bool, count=len(ps))


def _mod_array(value: int, ps: np.ndarray) -> np.ndarray:
    """value mod p for each p, exact for arbitrary-size ``value``."""
    if -(2 ** 62) < value < 2 ** 62:
        return (value % ps).astype(np.uint64)
    return np.fromiter((value % int(p) for p in ps), dtype=np.uint64, count=len(ps))


def _chunk_bounds(weights: np.ndarray, nchunks: int):
    # Split [0, n) into runs of roughly equal total weight.
    n = len(weights)
    if n == 0:
        return []
    if nchunks <= 1:
        return [(0, n)]
    w = np.cumsum(weights, dtype=np.float64)
    targets = w[-1] * np.arange(1, nchunks) / nchunks
    cuts = np.searchsorted(w, targets).tolist()
    bounds = sorted({0, n, *(c for c in cuts if 0 < c < n)})
    return list(zip(bounds[:-1], bounds[1:]))


def _ap_good_batch(curve: CurveQ, ps: np.ndarray) -> np.ndarray:
    """Character-sum traces for an ascending array of good primes >= 5."""
    n = len(ps)
    out = np.empty(n, dtype=np.int64)
    if n == 0:
        return out
    if int(ps[-1]) > impl.MAX_KERNEL_PRIME:
        raise ConfigurationError("character-sum kernel capped at p < 2^31")
    psu = ps.astype(np.uint64)
    amod = _mod_array(-27 * curve.c4, ps)
    bmod = _mod_array(-54 * curve.c6, ps)
    nw = worker_count()
    chunks = _chunk_bounds(ps, nw * 4)
    if nw == 1 or len(chunks) == 1:
        for lo, hi in chunks:
            impl.ap_batch_range(psu, amod, bmod, out, lo, hi)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=nw) as ex:
            jobs = [
                ex.submit(impl.ap_batch_range, psu, amod, bmod, out, lo, hi)
                for lo, hi in chunks
            ]
            for j in jobs:
                j.result()
    return out


def trace_scan(curve: CurveQ, x_max: int, table, cache_dir=None) -> list:
    """All :class:`ApRecord` for primes <= x_max, ascending.

    Bad primes are flagged with ``None`` arithmetic fields, never a silent
    zero.  Results are independent of the worker count bit for bit.  When
    ``cache_dir`` is given, traces are read from / written through the
    binary cache (see :mod:`bsdlab.cache`).
    """
    if x_max > table.limit:
        raise RangeError(f"x_max = {x_max} exceeds table limit {table.limit}")
    ps = table.primes_upto(x_max)
    aps, good = _scan_arrays(curve, ps, x_max, cache_dir)
    records = []
    for i in range(len(ps)):
        p = int(ps[i])
        if not good[i]:
            records.append(ApRecord(p, reduction_type(curve, p), None, None, None, None))
            continue
        a = int(aps[i])
        if a * a > 4 * p:
            raise DataCorruptionError(f"|a_p| bound violated at p = {p}")
        records.append(
            ApRecord(p, ReductionType.GOOD, a, p + 1 - a, theta_of(p, a), is_supersingular(p, a))
        )
    return records


def _scan_arrays(curve: CurveQ, ps: np.ndarray, x_max: int, cache_dir):
    """(a_p, good) arrays for the primes ``ps``; handles the cache protocol."""
    from . import cache as _cache

    if cache_dir is not None:
        hit = _cache.load(curve.coefficients, x_max, cache_dir)
        if hit is not None:
            cps, caps, cflags, cached_xmax = hit
            if cached_xmax >= x_max:
                _cache._warn(f"hit for {curve.name} (cached xmax={cached_xmax})")
                keep = cps <= x_max
                return caps[keep], (cflags[keep] & _cache.FLAG_GOOD) != 0
            ncached = len(cps)
            if np.array_equal(cps, ps[:ncached]):
                # extend: keep the cached prefix, compute only the tail
                _cache._warn(
                    f"extending {curve.name} from xmax={cached_xmax} to {x_max}"
                )
                aps = np.zeros(len(ps), dtype=np.int64)
                good = np.zeros(len(ps), dtype=bool)
                aps[:ncached] = caps
                good[:ncached] = (cflags & _cache.FLAG_GOOD) != 0
                tail_aps, tail_good = _compute_arrays(curve, ps[ncached:])
                aps[ncached:] = tail_aps
                good[ncached:] = tail_good
                _store(curve, ps, aps, good, x_max, cache_dir)
                return aps, good

    aps, good = _compute_arrays(curve, ps)
    if cache_dir is not None:
        _store(curve, ps, aps, good, x_max, cache_dir)
    return aps, good


def _store(curve, ps, aps, good, x_max, cache_dir):
    from . import cache as _cache

    flags = np.where(good, _cache.FLAG_GOOD, 0).astype(np.uint8)
    ss = good & (aps == 0)
    for i in np.flatnonzero(good & (ps < 5)):
        ss[i] = is_supersingular(int(ps[i]), int(aps[i]))
    flags |= np.where(ss, _cache.FLAG_SUPERSINGULAR, 0).astype(np.uint8)
    _cache.store(curve.coefficients, ps, aps, flags, x_max, cache_dir)


def _compute_arrays(curve: CurveQ, ps: np.ndarray):
    """Dispatch traces: character sums for good p >= 5, enumeration for 2, 3."""
    n = len(ps)
    aps = np.zeros(n, dtype=np.int64)
    good = ~_bad_primes(curve, ps)
    small = ps < 5
    for i in np.flatnonzero(small & good):
        aps[i] = ap_bruteforce(curve, int(ps[i]))
    sel = np.flatnonzero(good & ~small)
    if len(sel):
        # good primes >= 5 form a contiguous-by-index subsequence only after
        # selection; compute on the packed array, scatter back by index
        aps[sel] = _ap_good_batch(curve, ps[sel])
    return aps, good
