"""Prior-information scenarios and the irrep weights they induce.

A machine averaged over all template orientations acts, on the symmetric
subspaces of its registers, through a single scalar weight per total-spin
irrep: the twirled n-copy state of a qubit with Bloch length r carries
eigenvalue

    w_j(n, r) = [(1 - r^2)/4]^(n/2 - j)
                * [((1+r)/2)^(2j+1) - ((1-r)/2)^(2j+1)] / ((2j+1) r)

on every spin-j vector.  The hard-sphere prior (purities drawn with density
3 r^2 dr on [0, 1]) averages this weight in closed form.  Ratios of weights at
consecutive register sizes and their gaps drive the whole error-probability
spectrum, so they get first-class treatment here, in both linear and log form.

Conventions: r = 0 and r = 1 are removable limits, taken analytically
(w_j = 2^-n for all j at r = 0; 0^0 := 1 at r = 1 so only j = n/2 survives).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .angular import SpinLabel, SpinLike, _twice, log_multiplicity_irrep

__all__ = [
    "FixedOverlap",
    "FixedOverlapDim",
    "FixedPurities",
    "HardSphere",
    "LogWeight",
    "Scenario",
    "gauss_legendre_01",
    "hard_sphere_average",
    "log_twirl_weight",
    "log_twirl_weight_hard_sphere",
    "sector_log_weight",
    "twirl_weight",
    "twirl_weight_hard_sphere",
    "twirl_weight_hard_sphere_exact",
    "weight_gap",
    "weight_ratio",
]


@dataclass(frozen=True)
class FixedPurities:
    """Both Bloch lengths known exactly; orientations uniformly random."""

    r1: float
    r2: float

    def __post_init__(self) -> None:
        for name, r in (("r1", self.r1), ("r2", self.r2)):
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {r}")


@dataclass(frozen=True)
class HardSphere:
    """Purities drawn independently with density 3 r^2 dr on [0, 1]."""


@dataclass(frozen=True)
class FixedOverlap:
    """Pure templates with known mutual overlap sin(theta/2), random frame."""

    theta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class FixedOverlapDim:
    """Pure templates with known overlap in dimension d; error equals the
    qubit value, so d matters only to the averaged baseline."""

    theta: float
    d: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")


Scenario = Union[FixedPurities, HardSphere, FixedOverlap, FixedOverlapDim]


@dataclass(frozen=True)
class LogWeight:
    """A signed magnitude kept in log space; sign in {-1, 0, +1}."""

    log_magnitude: float
    sign: int = 1

    @classmethod
    def of(cls, value: float) -> "LogWeight":
        if value == 0.0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(value)), 1 if value > 0 else -1)

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


def _log1mexp(x: float) -> float:
    """log(1 - exp(x)) for x <= 0, stable at both ends."""
    if x >= 0.0:
        if x == 0.0:
            return -math.inf
        raise ValueError("argument must be <= 0")
    if x < -math.log(2.0):
        return math.log1p(-math.exp(x))
    return math.log(-math.expm1(x))


def log_twirl_weight(j: SpinLike, n: int, r: float) -> float:
    """log of the spin-j eigenvalue of the twirled n-copy state; -inf if zero."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"Bloch length must lie in [0, 1], got {r}")
    tj = _twice(j)
    if n < 0 or tj < 0 or tj > n or (n - tj) % 2:
        return -math.inf
    if r == 0.0:
        return -n * math.log(2.0)
    if r == 1.0:
        # 0^0 := 1, so only the maximal spin survives.
        return -math.log(n + 1.0) if tj == n else -math.inf
    a = (tj + 1) * math.log((1.0 + r) / 2.0)
    b = (tj + 1) * math.log((1.0 - r) / 2.0)
    return (
        -math.log(tj + 1.0)
        + ((n - tj) // 2) * math.log((1.0 - r * r) / 4.0)
        + a
        + _log1mexp(b - a)
        - math.log(r)
    )


def twirl_weight(j: SpinLike, n: int, r: float) -> float:
    """Spin-j eigenvalue of the twirled n-copy state at Bloch length r."""
    lg = log_twirl_weight(j, n, r)
    return 0.0 if lg == -math.inf else math.exp(lg)


def twirl_weight_hard_sphere_exact(j: SpinLike, n: int) -> Fraction:
    """Hard-sphere-averaged weight, 6 (n/2-j)! (1+n/2+j)! / (n+3)!, exactly."""
    tj = _twice(j)
    if n < 0 or tj < 0 or tj > n or (n - tj) % 2:
        return Fraction(0)
    return Fraction(
        6 * math.factorial((n - tj) // 2) * math.factorial((n + tj) // 2 + 1),
        math.factorial(n + 3),
    )


def log_twirl_weight_hard_sphere(j: SpinLike, n: int) -> float:
    tj = _twice(j)
    if n < 0 or tj < 0 or tj > n or (n - tj) % 2:
        return -math.inf
    return (
        math.log(6.0)
        + math.lgamma((n - tj) // 2 + 1)
        + math.lgamma((n + tj) // 2 + 2)
        - math.lgamma(n + 4)
    )


def twirl_weight_hard_sphere(j: SpinLike, n: int) -> float:
    lg = log_twirl_weight_hard_sphere(j, n)
    return 0.0 if lg == -math.inf else math.exp(lg)


def _template_r(scenario: Scenario, template: int) -> float:
    if not isinstance(scenario, FixedPurities):
        raise TypeError("per-template Bloch lengths exist only for FixedPurities")
    if template == 1:
        return scenario.r1
    if template == 2:
        return scenario.r2
    raise ValueError("template must be 1 or 2")


def weight_ratio(
    j: SpinLike, n: int, sign: int, scenario: Scenario, template: int = 1,
) -> float:
    """Weight at register size n+1 and spin j +/- 1/2 over the weight at (j, n).

    Zero when the numerator's selection rules fail; also zero, by convention,
    on weightless sectors where the denominator vanishes (r = 1, j < n/2).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    tj = _twice(j)
    if isinstance(scenario, HardSphere):
        if tj < 0 or tj > n or (n - tj) % 2:
            return 0.0
        if sign == -1 and tj == 0:
            return 0.0
        if sign == 1:
            return (2.0 + (n + tj) / 2.0) / (n + 4.0)
        return (1.0 + (n - tj) / 2.0) / (n + 4.0)
    r = _template_r(scenario, template)
    log_den = log_twirl_weight(SpinLabel(tj), n, r)
    if log_den == -math.inf:
        return 0.0
    if tj + sign < 0:
        return 0.0
    log_num = log_twirl_weight(SpinLabel(tj + sign), n + 1, r)
    if log_num == -math.inf:
        return 0.0
    return math.exp(log_num - log_den)


def weight_gap(j: SpinLike, n: int, scenario: Scenario, template: int = 1) -> float:
    """Weight difference at size n+1 across the two branches j +/- 1/2."""
    tj = _twice(j)
    if isinstance(scenario, HardSphere):
        up = twirl_weight_hard_sphere(SpinLabel(tj + 1), n + 1)
        down = twirl_weight_hard_sphere(SpinLabel(tj - 1), n + 1) if tj >= 1 else 0.0
        return up - down
    r = _template_r(scenario, template)
    up = twirl_weight(SpinLabel(tj + 1), n + 1, r)
    down = twirl_weight(SpinLabel(tj - 1), n + 1, r) if tj >= 1 else 0.0
    return up - down


def sector_log_weight(
    s: SpinLike, t: SpinLike, n: int, scenario: Scenario,
) -> LogWeight:
    """log of w_s w_t times both irrep multiplicities: the q-independent part
    of a sector's spectral weight (the full weight adds a factor 2q+1)."""
    ts, tt = _twice(s), _twice(t)
    if isinstance(scenario, FixedPurities):
        log_ws = log_twirl_weight(SpinLabel(ts), n, scenario.r1)
        log_wt = log_twirl_weight(SpinLabel(tt), n, scenario.r2)
    elif isinstance(scenario, HardSphere):
        log_ws = log_twirl_weight_hard_sphere(SpinLabel(ts), n)
        log_wt = log_twirl_weight_hard_sphere(SpinLabel(tt), n)
    else:
        raise TypeError("sector weights exist for the mixed-template scenarios")
    total = (
        log_ws
        + log_wt
        + log_multiplicity_irrep(SpinLabel(ts), n)
        + log_multiplicity_irrep(SpinLabel(tt), n)
    )
    if total == -math.inf:
        return LogWeight(-math.inf, 0)
    return LogWeight(total, 1)


@lru_cache(maxsize=8)
def gauss_legendre_01(count: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(count)
    return (x + 1.0) / 2.0, w / 2.0


def hard_sphere_average(fn: Callable[[float], float], count: int = 64) -> float:
    """Integral of fn against the hard-sphere density 3 r^2 dr on [0, 1]."""
    nodes, weights = gauss_legendre_01(count)
    return math.fsum(
        3.0 * x * x * w * fn(float(x)) for x, w in zip(nodes, weights)
    )


# Vectorized log-weight grids over all spins of one parity class; these feed
# the sector assembly in spectrum.py and must agree with the scalar forms.

def _log_twirl_weight_grid(twoj: np.ndarray, n: int, r: float) -> np.ndarray:
    if r == 0.0:
        return np.full(twoj.shape, -n * math.log(2.0))
    out = np.full(twoj.shape, -math.inf)
    if r == 1.0:
        out[twoj == n] = -math.log(n + 1.0)
        return out
    tj = twoj.astype(np.float64)
    a = (tj + 1.0) * math.log((1.0 + r) / 2.0)
    b = (tj + 1.0) * math.log((1.0 - r) / 2.0)
    diff = b - a
    bracket = np.where(
        diff < -math.log(2.0),
        np.log1p(-np.exp(diff)),
        np.log(-np.expm1(np.minimum(diff, -1e-300))),
    )
    out = (
        -np.log(tj + 1.0)
        + ((n - tj) / 2.0) * math.log((1.0 - r * r) / 4.0)
        + a
        + bracket
        - math.log(r)
    )
    return out


def _log_twirl_weight_hard_sphere_grid(twoj: np.ndarray, n: int) -> np.ndarray:
    from scipy.special import gammaln

    tj = twoj.astype(np.float64)
    return (
        math.log(6.0)
        + gammaln((n - tj) / 2.0 + 1.0)
        + gammaln((n + tj) / 2.0 + 2.0)
        - math.lgamma(n + 4)
    )
