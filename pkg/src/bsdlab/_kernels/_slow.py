"""Pure-Python/numpy twin of the compiled kernels.

Integer kernels here may use any correct method (they are exact); the
floating-point kernels replicate the compiled versions operation for
operation so that both backends yield bit-identical doubles.  Any change to
``_fast.pyx`` needs the mirror change here.
"""

import math

import numpy as np

MAX_KERNEL_PRIME = 2 ** 31 - 1

_X_BLOCK = 1 << 20  # bounds temporary arrays during a character sum


def chi_table(p):
    """Quadratic-character lookup table for an odd prime p as an int8 array."""
    chi = np.full(p, -1, dtype=np.int8)
    chi[0] = 0
    half = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    chi[(half * half) % p] = 1
    return chi


def _char_sum(chi, p, a, b):
    # sum_x chi(x^3 + a x + b) over x = 0..p-1, blockwise to bound memory.
    total = 0
    for start in range(0, p, _X_BLOCK):
        x = np.arange(start, min(start + _X_BLOCK, p), dtype=np.int64)
        f = (x * x % p) * x % p
        f += a * x % p
        f %= p
        f += b
        f %= p
        total += int(chi[f].sum())
    return total


def ap_batch_range(primes, amod, bmod, out, lo, hi):
    """Trace of Frobenius on y^2 = x^3 + A x + B for primes[lo:hi]."""
    for i in range(lo, hi):
        p = int(primes[i])
        chi = chi_table(p)
        out[i] = -_char_sum(chi, p, int(amod[i]), int(bmod[i]))


def ap_fixed_p_range(p, amod, bmod, out, lo, hi):
    """Traces for many short Weierstrass equations at one odd prime p."""
    p = int(p)
    chi = chi_table(p)
    for i in range(lo, hi):
        out[i] = -_char_sum(chi, p, int(amod[i]), int(bmod[i]))


def kahan_sum(xs):
    """Compensated (Kahan) sum of ``xs`` in array order."""
    s = 0.0
    comp = 0.0
    for i in range(len(xs)):
        y = xs[i] - comp
        t = s + y
        comp = (t - s) - y
        s = t
    return float(s)


def _st_inverse(u):
    # Mirror of the compiled bisection, including the early stop.
    if u <= 0.0:
        return 0.0
    lo = 0.0
    hi = math.pi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        f = (mid - math.sin(mid) * math.cos(mid)) / math.pi
        if abs(f - u) <= 1e-12:
            return mid
        if f < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_st_batch(u, out):
    """Semicircle-measure angles for an array of uniforms (test/bench hook)."""
    for i in range(len(u)):
        out[i] = _st_inverse(u[i])


def mc_replica_noncm(u, invp, csc, cp_counts, out):
    """One generic-curve replica; see the compiled twin for the contract."""
    n = len(u)
    ncp = len(cp_counts)
    k = 0
    s = 0.0
    comp = 0.0
    while k < ncp and cp_counts[k] == 0:
        out[k] = 0.0
        k += 1
    for i in range(n):
        theta = _st_inverse(u[i])
        w = invp[i] - csc[i] * math.cos(theta)
        if w <= -1.0:
            raise ValueError("positivity violated: 1 + x_i <= 0")
        y = math.log1p(w) - comp
        t = s + y
        comp = (t - s) - y
        s = t
        while k < ncp and cp_counts[k] == i + 1:
            out[k] = s
            k += 1
    if k != ncp:
        raise ValueError("checkpoint counts exceed prime count")


def mc_replica_cm(coins, angles, invp, csc, cp_counts, out):
    """One CM replica; see the compiled twin for the contract."""
    n = len(coins)
    ncp = len(cp_counts)
    k = 0
    s = 0.0
    comp = 0.0
    while k < ncp and cp_counts[k] == 0:
        out[k] = 0.0
        k += 1
    for i in range(n):
        if coins[i] < 0.5:
            w = invp[i]
        else:
            w = invp[i] - csc[i] * math.cos(angles[i] * math.pi)
        if w <= -1.0:
            raise ValueError("positivity violated: 1 + x_i <= 0")
        y = math.log1p(w) - comp
        t = s + y
        comp = (t - s) - y
        s = t
        while k < ncp and cp_counts[k] == i + 1:
            out[k] = s
            k += 1
    if k != ncp:
        raise ValueError("checkpoint counts exceed prime count")
