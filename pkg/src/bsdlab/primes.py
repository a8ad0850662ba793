"""Segmented prime sieve with O(1) membership, and prime-reciprocal sums.

The sieve works in fixed-size blocks of odd numbers so peak memory is
O(sqrt(limit) + segment) plus the output itself.  Membership queries go
through a packed bitmap over the odd integers.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import impl
from .errors import ConfigurationError, DomainError, RangeError

MAX_SIEVE_LIMIT = 2 ** 40
DEFAULT_SEGMENT = 1 << 20


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Ascending primes up to ``limit`` plus a packed odd-number bitmap."""

    limit: int
    primes: np.ndarray = field(repr=False)
    _odd_bits: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.primes)

    def is_prime(self, n: int) -> bool:
        """O(1) membership test for 0 <= n <= limit."""
        if n < 0 or n > self.limit:
            raise RangeError(f"{n} outside table range [0, {self.limit}]")
        if n == 2:
            return True
        if n < 2 or n % 2 == 0:
            return False
        k = n >> 1
        return bool((self._odd_bits[k >> 3] >> (k & 7)) & 1)

    def primes_upto(self, x: int) -> np.ndarray:
        """View of all primes <= x (requires x <= limit)."""
        if x > self.limit:
            raise RangeError(f"{x} exceeds table limit {self.limit}")
        cut = int(np.searchsorted(self.primes, x, side="right"))
        return self.primes[:cut]

    def count_upto(self, x: int) -> int:
        return len(self.primes_upto(x))


def _base_primes(r: int) -> np.ndarray:
    # Plain sieve up to r; only used for the O(sqrt(limit)) base set.
    mask = np.ones(r + 1, dtype=bool)
    mask[:2] = False
    for q in range(2, math.isqrt(r) + 1):
        if mask[q]:
            mask[q * q :: q] = False
    return np.flatnonzero(mask).astype(np.int64)


def sieve_primes(limit: int, segment: int = DEFAULT_SEGMENT) -> PrimeTable:
    """Sieve all primes <= limit into a :class:`PrimeTable`.

    ``segment`` is the block width in integers; it is rounded to a multiple
    of 16 so each block packs to whole bytes of the odd bitmap.
    """
    if limit < 0:
        raise ConfigurationError(f"limit must be >= 0, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        raise ConfigurationError(
            f"limit {limit} exceeds the sieve guard {MAX_SIEVE_LIMIT}"
        )
    segment = max(16, (int(segment) // 16) * 16)

    n_odd = (limit + 1) // 2  # odd numbers 1, 3, ..., <= limit
    if limit < 2:
        return PrimeTable(
            limit,
            np.empty(0, dtype=np.int64),
            np.zeros((n_odd + 7) // 8, dtype=np.uint8),
        )

    base = _base_primes(math.isqrt(limit))
    odd_base = [int(p) for p in base if p % 2 == 1]

    prime_chunks = []
    bit_chunks = []
    block = segment // 2  # odd numbers per block, multiple of 8
    for s in range(0, n_odd, block):
        e = min(s + block, n_odd)
        mask = np.ones(e - s, dtype=bool)
        if s == 0:
            mask[0] = False  # the number 1
        for p in odd_base:
            # first odd multiple of p that is >= max(p^2, 2s+1)
            m = max(p * p, ((2 * s + 1 + p - 1) // p) * p)
            if m % 2 == 0:
                m += p
            k = (m >> 1) - s
            if k < len(mask):
                mask[k::p] = False  # consecutive odd multiples differ by 2p
        prime_chunks.append((2 * (np.flatnonzero(mask).astype(np.int64) + s) + 1))
        bit_chunks.append(np.packbits(mask, bitorder="little"))

    odd_primes = np.concatenate(prime_chunks) if prime_chunks else np.empty(0, np.int64)
    primes = np.concatenate([np.array([2], dtype=np.int64), odd_primes])
    primes = primes[primes <= limit]
    bits = np.concatenate(bit_chunks)[: (n_odd + 7) // 8]
    return PrimeTable(limit, primes, bits)


def loglog(x) -> float:
    """log(log(x)); requires x > 1."""
    if x <= 1:
        raise DomainError(f"loglog needs x > 1, got {x}")
    return math.log(math.log(x))


def mertens_sum(table: PrimeTable, x) -> float:
    """Compensated sum of 1/p over primes p <= x, in ascending order."""
    if x > table.limit:
        raise RangeError(f"{x} exceeds table limit {table.limit}")
    ps = table.primes_upto(x)
    if len(ps) == 0:
        return 0.0
    return float(impl.kahan_sum(1.0 / ps))
