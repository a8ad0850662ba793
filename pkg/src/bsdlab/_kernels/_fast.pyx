# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled hot loops: quadratic-character trace sums, inverse-CDF sampling,
compensated accumulation.

Every function here has a drop-in twin in ``_slow``.  Integer kernels must
agree exactly; floating-point kernels must perform the same operations in the
same order so both backends produce bit-identical results.  Any change here
needs the mirror change there.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memset
from libc.math cimport sin, cos, log1p, fabs, M_PI

import numpy as np

# The chi table is one byte per residue, so scans are bounded by memory long
# before this limit matters; it also keeps every intermediate inside 64 bits.
MAX_KERNEL_PRIME = 2 ** 31 - 1


cdef void _fill_chi(signed char *chi, unsigned long long p) noexcept nogil:
    # chi[t] = quadratic character of t mod p (0 at t = 0).
    # Squares enumerated incrementally: x^2 = (x-1)^2 + (2x - 1), no multiply.
    cdef unsigned long long x, half
    cdef unsigned long long s = 0, inc = 1
    memset(chi, 0xFF, p)            # 0xFF is -1 as signed char: non-residue
    chi[0] = 0
    half = (p - 1) >> 1
    for x in range(half):
        s += inc
        if s >= p:
            s -= p
        inc += 2
        chi[s] = 1


cdef long long _char_sum(const signed char *chi, unsigned long long p,
                         unsigned long long a, unsigned long long b) noexcept nogil:
    # sum_x chi(x^3 + a x + b), x = 0..p-1, via forward differences:
    #   f(x+1) - f(x) = 3x^2 + 3x + 1 + a, second difference 6x + 6, third 6.
    # Each state variable stays < p with one conditional subtract per step.
    cdef unsigned long long f = b
    cdef unsigned long long d1 = (1 + a) % p
    cdef unsigned long long six = 6 % p
    cdef unsigned long long d2 = six
    cdef long long acc = 0
    cdef unsigned long long i
    for i in range(p):
        acc += chi[f]
        f += d1
        if f >= p:
            f -= p
        d1 += d2
        if d1 >= p:
            d1 -= p
        d2 += six
        if d2 >= p:
            d2 -= p
    return acc


def chi_table(p):
    """Quadratic-character lookup table for an odd prime p as an int8 array."""
    cdef unsigned long long pp = p
    arr = np.empty(p, dtype=np.int8)
    cdef signed char[::1] view = arr
    with nogil:
        _fill_chi(&view[0], pp)
    return arr


def ap_batch_range(unsigned long long[::1] primes,
                   unsigned long long[::1] amod,
                   unsigned long long[::1] bmod,
                   long long[::1] out,
                   Py_ssize_t lo, Py_ssize_t hi):
    """Trace of Frobenius on y^2 = x^3 + A x + B for primes[lo:hi].

    ``amod``/``bmod`` hold A mod p and B mod p per prime; results go to
    ``out[lo:hi]``.  Primes must be ascending, odd, and below 2^31.
    """
    if hi <= lo:
        return
    cdef unsigned long long pmax = primes[hi - 1]
    cdef signed char *chi
    cdef Py_ssize_t i
    with nogil:
        chi = <signed char *> malloc(pmax)
        if chi == NULL:
            with gil:
                raise MemoryError("chi table allocation failed")
        for i in range(lo, hi):
            _fill_chi(chi, primes[i])
            out[i] = -_char_sum(chi, primes[i], amod[i], bmod[i])
        free(chi)


def ap_fixed_p_range(unsigned long long p,
                     unsigned long long[::1] amod,
                     unsigned long long[::1] bmod,
                     long long[::1] out,
                     Py_ssize_t lo, Py_ssize_t hi):
    """Traces for many short Weierstrass equations at one odd prime p."""
    if hi <= lo:
        return
    cdef signed char *chi
    cdef Py_ssize_t i
    with nogil:
        chi = <signed char *> malloc(p)
        if chi == NULL:
            with gil:
                raise MemoryError("chi table allocation failed")
        _fill_chi(chi, p)
        for i in range(lo, hi):
            out[i] = -_char_sum(chi, p, amod[i], bmod[i])
        free(chi)


def kahan_sum(double[::1] xs):
    """Compensated (Kahan) sum of ``xs`` in array order."""
    cdef double s = 0.0, comp = 0.0, y, t
    cdef Py_ssize_t i, n = xs.shape[0]
    with nogil:
        for i in range(n):
            y = xs[i] - comp
            t = s + y
            comp = (t - s) - y
            s = t
    return s


cdef double _st_inverse(double u) noexcept nogil:
    # Bisection for F(theta) = u with F(t) = (t - sin t cos t)/pi.
    # Mirrors montecarlo.sample_st_theta exactly, including the early stop.
    cdef double lo = 0.0, hi = M_PI, mid, f
    cdef int i
    if u <= 0.0:
        return 0.0
    for i in range(60):
        mid = 0.5 * (lo + hi)
        f = (mid - sin(mid) * cos(mid)) / M_PI
        if fabs(f - u) <= 1e-12:
            return mid
        if f < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_st_batch(double[::1] u, double[::1] out):
    """Semicircle-measure angles for an array of uniforms (test/bench hook)."""
    cdef Py_ssize_t i, n = u.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _st_inverse(u[i])


def mc_replica_noncm(double[::1] u, double[::1] invp, double[::1] csc,
                     long long[::1] cp_counts, double[::1] out):
    """One generic-curve replica: sum log(1 + 1/p - 2 cos(theta)/sqrt(p)).

    ``u`` holds one uniform per prime, ``invp[i] = 1/p_i``,
    ``csc[i] = 2/sqrt(p_i)``; ``cp_counts[k]`` is the number of leading primes
    included in checkpoint k (ascending).  Snapshots land in ``out``.
    """
    cdef Py_ssize_t n = u.shape[0], ncp = cp_counts.shape[0]
    cdef Py_ssize_t i, k = 0
    cdef double s = 0.0, comp = 0.0, theta, w, y, t
    cdef int bad = 0
    with nogil:
        while k < ncp and cp_counts[k] == 0:
            out[k] = 0.0
            k += 1
        for i in range(n):
            theta = _st_inverse(u[i])
            w = invp[i] - csc[i] * cos(theta)
            if w <= -1.0:
                bad = 1
                break
            y = log1p(w) - comp
            t = s + y
            comp = (t - s) - y
            s = t
            while k < ncp and cp_counts[k] == i + 1:
                out[k] = s
                k += 1
    if bad:
        raise ValueError("positivity violated: 1 + x_i <= 0")
    if k != ncp:
        raise ValueError("checkpoint counts exceed prime count")


def mc_replica_cm(double[::1] coins, double[::1] angles,
                  double[::1] invp, double[::1] csc,
                  long long[::1] cp_counts, double[::1] out):
    """One CM replica: fair coin picks the supersingular branch (exact
    log(1 + 1/p) term), otherwise the angle is uniform on [0, pi]."""
    cdef Py_ssize_t n = coins.shape[0], ncp = cp_counts.shape[0]
    cdef Py_ssize_t i, k = 0
    cdef double s = 0.0, comp = 0.0, w, y, t
    cdef int bad = 0
    with nogil:
        while k < ncp and cp_counts[k] == 0:
            out[k] = 0.0
            k += 1
        for i in range(n):
            if coins[i] < 0.5:
                w = invp[i]
            else:
                w = invp[i] - csc[i] * cos(angles[i] * M_PI)
            if w <= -1.0:
                bad = 1
                break
            y = log1p(w) - comp
            t = s + y
            comp = (t - s) - y
            s = t
            while k < ncp and cp_counts[k] == i + 1:
                out[k] = s
                k += 1
    if bad:
        raise ValueError("positivity violated: 1 + x_i <= 0")
    if k != ncp:
        raise ValueError("checkpoint counts exceed prime count")
