"""Monte Carlo model of log P_x growth.

Each replica draws one angle per prime p <= x_max and accumulates
log(1 + 1/p - 2 cos(theta)/sqrt(p)) with compensated summation, snapshotting
at a checkpoint schedule.  Generic mode draws theta from the semicircle
measure by inverse CDF (bisection, fixed iteration budget, so every replica
consumes a deterministic number of uniforms).  CM mode flips a fair coin per
prime: supersingular gives the exact log(1 + 1/p) term, ordinary draws theta
uniformly.  Replica r uses its own counter-based RNG stream keyed by
(seed, r), which makes results independent of worker scheduling.
"""

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from ._kernels import impl
from ._threads import worker_count
from .errors import ConfigurationError, InsufficientDataError
from .primes import loglog

MODE_NONCM = "noncm"
MODE_CM = "cm"
DEFAULT_BUDGET = 1_000_000_000  # replicas x primes guard


def sample_st_theta(u: float) -> float:
    """Inverse CDF of the semicircle angle measure, by bisection.

    Stops when |F(theta) - u| <= 1e-12 or after 60 halvings of [0, pi];
    u = 0 maps to the infimum 0.  Monotone in u at scales above the
    stopping tolerance.
    """
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


def sample_uniform_theta(u: float) -> float:
    """Uniform angle on [0, pi]."""
    return u * math.pi


@dataclass(frozen=True)
class MCConfig:
    x_max: int
    replicas: int
    mode: str = MODE_NONCM
    seed: int = 0
    moment_orders: Tuple[int, ...] = (1, 2)
    checkpoints: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.mode not in (MODE_NONCM, MODE_CM):
            raise ConfigurationError(f"mode must be {MODE_NONCM!r} or {MODE_CM!r}")
        if self.replicas < 1:
            raise ConfigurationError("replicas must be >= 1")
        if not self.checkpoints:
            raise ConfigurationError("at least one checkpoint is required")
        cps = list(self.checkpoints)
        if any(b <= a for a, b in zip(cps, cps[1:])) or cps != sorted(cps):
            raise ConfigurationError("checkpoints must be strictly ascending")
        if cps[-1] > self.x_max:
            raise ConfigurationError("checkpoints must not exceed x_max")
        if any(n < 1 for n in self.moment_orders):
            raise ConfigurationError("moment orders must be >= 1")


def default_checkpoints(x_max: int) -> Tuple[int, ...]:
    """Half-decade schedule 100, 316, 1000, ... closed with x_max."""
    cps = []
    k = 4
    while True:
        x = round(10 ** (k / 2))
        if x >= x_max:
            break
        cps.append(x)
        k += 1
    cps.append(x_max)
    return tuple(cps)


@dataclass(frozen=True, eq=False)
class MCResult:
    mode: str
    seed: int
    replicas: int
    checkpoints: Tuple[int, ...]
    moment_orders: Tuple[int, ...]
    estimates: np.ndarray = field(repr=False)  # [order, checkpoint]
    standard_errors: np.ndarray = field(repr=False)
    snapshots: np.ndarray = field(repr=False)  # [replica, checkpoint]

    def _cp_index(self, x: int) -> int:
        try:
            return self.checkpoints.index(x)
        except ValueError:
            raise InsufficientDataError(f"no checkpoint at x = {x}") from None

    def moment(self, n: int, x: int) -> float:
        return float(self.estimates[self.moment_orders.index(n), self._cp_index(x)])

    def standard_error(self, n: int, x: int) -> float:
        return float(self.standard_errors[self.moment_orders.index(n), self._cp_index(x)])

    def paired_difference(self, x_lo: int, x_hi: int) -> Tuple[float, float]:
        """Mean and standard error of logP(x_hi) - logP(x_lo) per replica."""
        d = self.snapshots[:, self._cp_index(x_hi)] - self.snapshots[:, self._cp_index(x_lo)]
        se = float(d.std(ddof=1) / math.sqrt(len(d))) if len(d) > 1 else float("nan")
        return float(d.mean()), se

    def to_json_obj(self):
        moments = []
        for i, n in enumerate(self.moment_orders):
            for j, x in enumerate(self.checkpoints):
                moments.append(
                    {
                        "n": int(n),
                        "x": int(x),
                        "estimate": float(self.estimates[i, j]),
                        "se": float(self.standard_errors[i, j]),
                    }
                )
        return {
            "mode": self.mode,
            "seed": int(self.seed),
            "checkpoints": [int(x) for x in self.checkpoints],
            "moments": moments,
        }


def _replica_stream(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed % (1 << 64), index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def simulate_logP(config: MCConfig, table, budget: int = DEFAULT_BUDGET) -> MCResult:
    """Run the replica ensemble described by ``config``.

    Output is bit-for-bit reproducible for a fixed seed, independent of the
    worker count and of which kernel backend runs the inner loop.
    """
    ps = table.primes_upto(config.x_max)
    n = len(ps)
    if config.replicas * n > budget:
        raise ConfigurationError(
            f"replicas x primes = {config.replicas * n} exceeds budget {budget}"
        )
    invp = 1.0 / ps
    csc = 2.0 / np.sqrt(ps)
    cp_counts = np.searchsorted(ps, np.array(config.checkpoints), side="right").astype(np.int64)
    ncp = len(config.checkpoints)
    snaps = np.empty((config.replicas, ncp), dtype=np.float64)

    def run_replica(r: int):
        rng = _replica_stream(config.seed, r)
        out = snaps[r]
        if config.mode == MODE_NONCM:
            u = rng.random(n)
            impl.mc_replica_noncm(u, invp, csc, cp_counts, out)
        else:
            u = rng.random((2, n))
            impl.mc_replica_cm(u[0], u[1], invp, csc, cp_counts, out)

    nw = worker_count()
    if nw == 1:
        for r in range(config.replicas):
            run_replica(r)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=nw) as ex:
            for _ in ex.map(run_replica, range(config.replicas)):
                pass

    orders = tuple(config.moment_orders)
    est = np.empty((len(orders), ncp))
    ses = np.empty((len(orders), ncp))
    for i, nth in enumerate(orders):
        powd = snaps ** nth
        est[i] = powd.mean(axis=0)
        if config.replicas > 1:
            ses[i] = powd.std(axis=0, ddof=1) / math.sqrt(config.replicas)
        else:
            ses[i] = np.nan
    return MCResult(
        config.mode, config.seed, config.replicas,
        tuple(config.checkpoints), orders, est, ses, snaps,
    )


@dataclass(frozen=True)
class MomentFit:
    order: int
    coefficient: float  # leading coefficient of the degree-n fit in loglog x
    lower_coefficients: Tuple[float, ...]
    n_points: int


def moment_report(result: MCResult, x_min: int = 0) -> List[MomentFit]:
    """Leading growth coefficients of the estimated raw moments.

    For each requested order n the estimated E[(log P_x)^n] is fit, across
    checkpoints with x >= x_min, by a degree-n polynomial in t = log log x;
    the coefficient of t^n is reported.  Needs at least max(3, n + 1)
    checkpoints in the window.
    """
    sel = [j for j, x in enumerate(result.checkpoints) if x >= x_min]
    fits = []
    for i, nth in enumerate(result.moment_orders):
        need = max(3, nth + 1)
        if len(sel) < need:
            raise InsufficientDataError(
                f"order {nth} needs {need} checkpoints with x >= {x_min}, have {len(sel)}"
            )
        t = np.array([loglog(result.checkpoints[j]) for j in sel])
        y = result.estimates[i, sel]
        coeffs = np.polynomial.polynomial.polyfit(t, y, deg=nth)
        fits.append(MomentFit(int(nth), float(coeffs[nth]), tuple(float(c) for c in coeffs[:nth]), len(sel)))
    return fits
