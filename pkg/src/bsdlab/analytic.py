"""Exact and quadrature cross-checks for the angle-measure calculus.

Everything here validates closed forms independently of the samplers: the
semicircle moment integrals by adaptive Simpson quadrature, the alternating
binomial half-sum with exact rationals, and the per-prime increment moments
E[x_i] = 1/p, E[x_i^2] = 1/p + 1/p^2 by integrating against the density.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple

from .errors import DomainError, NonConvergenceError

BigRational = Fraction  # exact rational arithmetic with big integers

DEFAULT_TOL = 1e-12
MIN_TOL = 1e-13
MAX_DEPTH = 60
MOMENT_IDENTITY_MAX_N = 64


@dataclass(frozen=True)
class IntegralCheck:
    name: str
    computed: float
    expected: float

    @property
    def abs_error(self) -> float:
        return abs(self.computed - self.expected)

    def to_json_obj(self):
        return {
            "name": self.name,
            "computed": self.computed,
            "expected": self.expected,
            "abs_error": self.abs_error,
        }


def _simpson(f: Callable[[float], float], a: float, fa: float, b: float, fb: float):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth):
    if depth <= 0:
        raise NonConvergenceError(
            f"quadrature depth guard hit on [{a}, {b}] at tol {tol}"
        )
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    err = left + right - whole
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    half = tol / 2.0
    return _adaptive(f, a, fa, m, fm, lm, flm, left, half, depth - 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, half, depth - 1
    )


def quadrature(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_depth: int = MAX_DEPTH,
) -> float:
    """Adaptive Simpson integral of f over [a, b].

    Subintervals are split until the Richardson error estimate drops below
    the (halved-per-level) tolerance; exceeding ``max_depth`` raises
    :class:`NonConvergenceError`.  ``tol`` below 1e-13 is rejected: the
    error estimator is not trustworthy at that scale in double precision.
    """
    if tol < MIN_TOL:
        raise DomainError(f"tol must be >= {MIN_TOL}, got {tol}")
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _adaptive(f, a, fa, b, fb, m, fm, whole, tol, max_depth)


def st_density(theta: float) -> float:
    """Semicircle angle density (2/pi) sin^2(theta) on [0, pi]."""
    s = math.sin(theta)
    return (2.0 / math.pi) * s * s


def check_st_integrals(tol: float = DEFAULT_TOL) -> List[IntegralCheck]:
    """The four moment integrals of the angle calculus plus the two
    normalized expectations they imply."""
    pi = math.pi
    items = [
        (
            "int 2cos(t)sin^2(t) dt, 0..pi",
            quadrature(lambda t: 2.0 * math.cos(t) * math.sin(t) ** 2, 0.0, pi, tol),
            0.0,
        ),
        (
            "int 2cos^2(t)sin^2(t) dt, 0..pi",
            quadrature(lambda t: 2.0 * (math.cos(t) * math.sin(t)) ** 2, 0.0, pi, tol),
            pi / 4.0,
        ),
        (
            "int cos(t) dt, 0..pi",
            quadrature(math.cos, 0.0, pi, tol),
            0.0,
        ),
        (
            "int 2cos^2(t) dt, 0..pi",
            quadrature(lambda t: 2.0 * math.cos(t) ** 2, 0.0, pi, tol),
            pi,
        ),
        (
            "semicircle mean of cos",
            quadrature(lambda t: math.cos(t) * st_density(t), 0.0, pi, tol),
            0.0,
        ),
        (
            "semicircle mean of cos^2",
            quadrature(lambda t: math.cos(t) ** 2 * st_density(t), 0.0, pi, tol),
            0.25,
        ),
    ]
    return [IntegralCheck(name, computed, expected) for name, computed, expected in items]


def moment_identity(n: int) -> BigRational:
    """Exact value of sum_k (-1)^k C(n, k) / 2^k, which collapses to 2^-n."""
    if not (0 <= n <= MOMENT_IDENTITY_MAX_N):
        raise DomainError(f"n must lie in [0, {MOMENT_IDENTITY_MAX_N}], got {n}")
    total = BigRational(0)
    for k in range(n + 1):
        total += BigRational((-1) ** k * math.comb(n, k), 2 ** k)
    return total


def expected_xi_moments(p: int, tol: float = DEFAULT_TOL) -> Tuple[float, float]:
    """Quadrature values of E[x] and E[x^2] for x = 1/p - 2 cos(theta)/sqrt(p)
    with theta following the semicircle measure; exact values are 1/p and
    1/p + 1/p^2."""
    if p < 2:
        raise DomainError(f"p must be a prime >= 2, got {p}")
    c1 = 1.0 / p
    c2 = 2.0 / math.sqrt(p)

    def x_of(t: float) -> float:
        return c1 - c2 * math.cos(t)

    e1 = quadrature(lambda t: x_of(t) * st_density(t), 0.0, math.pi, tol)
    e2 = quadrature(lambda t: x_of(t) ** 2 * st_density(t), 0.0, math.pi, tol)
    return e1, e2


def xi_moment_checks(ps=(2, 3, 5), tol: float = DEFAULT_TOL) -> List[IntegralCheck]:
    """IntegralCheck rows for E[x_i] and E[x_i^2] at small sample primes."""
    out = []
    for p in ps:
        e1, e2 = expected_xi_moments(p, tol)
        out.append(IntegralCheck(f"xi mean, p={p}", e1, 1.0 / p))
        out.append(IntegralCheck(f"xi second moment, p={p}", e2, 1.0 / p + 1.0 / p ** 2))
    return out


def moment_identity_checks(n_max: int = 20) -> List[IntegralCheck]:
    """IntegralCheck rows for the alternating binomial half-sum, 0..n_max."""
    out = []
    for n in range(n_max + 1):
        value = moment_identity(n)
        target = BigRational(1, 2 ** n)
        out.append(
            IntegralCheck(
                f"alternating binomial half-sum, n={n}",
                float(value),
                float(target),
            )
        )
    return out
