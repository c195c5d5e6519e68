"""Exact half-integer angular momentum bookkeeping for symmetrized qubit registers.

Every spin label in this package is a half-integer and is carried as *twice*
its value in a plain int, so parity constraints and selection rules reduce to
integer arithmetic with no floating point in sight.  Couplings follow the
Condon-Shortley phase convention throughout: the coefficient with maximal
first-spin projection is positive.

Racah sums (Clebsch-Gordan and 6j) run in exact big-integer rationals while
the factorial arguments stay below a size threshold, and switch to log-space
accumulation with explicit sign bookkeeping above it.  Both branches agree to
near machine precision in the overlap region; the tests pin that down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

__all__ = [
    "SpinLabel",
    "classify_sector",
    "clebsch_gordan",
    "log_multiplicity_irrep",
    "log_stretched_coupling_sq",
    "multiplicity_irrep",
    "recoupling_coefficient",
    "sector_labels",
    "wigner6j",
]

SpinLike = Union["SpinLabel", int, float, Fraction]

# Largest factorial argument evaluated in exact integer arithmetic; beyond
# this the Racah sums run in log space.
_EXACT_LIMIT = 30


@dataclass(frozen=True, order=True)
class SpinLabel:
    """A half-integer spin stored as twice its value."""

    twice: int

    @classmethod
    def of(cls, value: SpinLike) -> "SpinLabel":
        if isinstance(value, SpinLabel):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        doubled = 2 * Fraction(value)
        if doubled.denominator != 1:
            raise ValueError(f"not a half-integer spin: {value!r}")
        return cls(int(doubled))

    def __post_init__(self) -> None:
        if self.twice < 0:
            raise ValueError(f"negative spin: {self.twice}/2")

    @property
    def value(self) -> float:
        return self.twice / 2

    def __float__(self) -> float:
        return self.twice / 2

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def _twice(value: SpinLike) -> int:
    """Twice the spin value as an int, accepting projections of either sign."""
    if isinstance(value, SpinLabel):
        return value.twice
    if isinstance(value, int):
        return 2 * value
    doubled = 2 * Fraction(value)
    if doubled.denominator != 1:
        raise ValueError(f"not a half-integer: {value!r}")
    return int(doubled)


def _triangle_ok(ta: int, tb: int, tc: int) -> bool:
    # Triangle inequality plus integer perimeter, in doubled units.
    if (ta + tb + tc) % 2 != 0:
        return False
    return abs(ta - tb) <= tc <= ta + tb


@lru_cache(maxsize=None)
def _log_fac(k: int) -> float:
    return math.lgamma(k + 1)


def _log_int(x: int) -> float:
    """log of a positive int, accurate even when x overflows a double."""
    if x <= 0:
        raise ValueError("log of non-positive integer")
    bits = x.bit_length()
    if bits <= 960:
        return math.log(x)
    shift = bits - 960
    return math.log(x >> shift) + shift * math.log(2.0)


def _fraction_to_float(fr: Fraction) -> float:
    """float(fr) with large numerators/denominators routed through logs."""
    if fr == 0:
        return 0.0
    num, den = fr.numerator, fr.denominator
    sign = 1.0
    if num < 0:
        sign, num = -1.0, -num
    if num.bit_length() < 1000 and den.bit_length() < 1000:
        return sign * (num / den)
    return sign * math.exp(_log_int(num) - _log_int(den))


def _sqrt_fraction(fr: Fraction) -> float:
    if fr < 0:
        raise ValueError("sqrt of negative rational")
    if fr == 0:
        return 0.0
    num, den = fr.numerator, fr.denominator
    if num.bit_length() < 1000 and den.bit_length() < 1000:
        return math.sqrt(num / den)
    return math.exp(0.5 * (_log_int(num) - _log_int(den)))


def _delta_sq(ta: int, tb: int, tc: int) -> Fraction:
    # Triangle factor squared; arguments in doubled units, assumed valid.
    return Fraction(
        math.factorial((ta + tb - tc) // 2)
        * math.factorial((ta - tb + tc) // 2)
        * math.factorial((-ta + tb + tc) // 2),
        math.factorial((ta + tb + tc) // 2 + 1),
    )


def _log_delta_sq(ta: int, tb: int, tc: int) -> float:
    return (
        _log_fac((ta + tb - tc) // 2)
        + _log_fac((ta - tb + tc) // 2)
        + _log_fac((-ta + tb + tc) // 2)
        - _log_fac((ta + tb + tc) // 2 + 1)
    )


def wigner6j(
    j1: SpinLike, j2: SpinLike, j3: SpinLike,
    j4: SpinLike, j5: SpinLike, j6: SpinLike,
) -> float:
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6} via the Racah single-sum form.

    Returns 0.0 whenever any of the four triads violates its triangle or
    parity selection rule.
    """
    t1, t2, t3 = _twice(j1), _twice(j2), _twice(j3)
    t4, t5, t6 = _twice(j4), _twice(j5), _twice(j6)
    triads = ((t1, t2, t3), (t1, t5, t6), (t4, t2, t6), (t4, t5, t3))
    if not all(_triangle_ok(*tri) for tri in triads):
        return 0.0

    # z-sum bounds, in plain (undoubled) integers.
    triad_sums = [(a + b + c) // 2 for a, b, c in triads]
    pair_sums = [
        (t1 + t2 + t4 + t5) // 2,
        (t2 + t3 + t5 + t6) // 2,
        (t3 + t1 + t6 + t4) // 2,
    ]
    z_lo, z_hi = max(triad_sums), min(pair_sums)
    if z_hi < z_lo:
        return 0.0

    largest = max(pair_sums) + 1
    if largest <= _EXACT_LIMIT:
        total = Fraction(0)
        for z in range(z_lo, z_hi + 1):
            num = math.factorial(z + 1)
            den = 1
            for ts in triad_sums:
                den *= math.factorial(z - ts)
            for ps in pair_sums:
                den *= math.factorial(ps - z)
            term = Fraction(num, den)
            total += -term if z % 2 else term
        if total == 0:
            return 0.0
        delta = Fraction(1)
        for tri in triads:
            delta *= _delta_sq(*tri)
        return _fraction_to_float(total) * _sqrt_fraction(delta)

    # Log branch: factor out the largest term magnitude before summing.
    logs, signs = [], []
    for z in range(z_lo, z_hi + 1):
        lg = _log_fac(z + 1)
        for ts in triad_sums:
            lg -= _log_fac(z - ts)
        for ps in pair_sums:
            lg -= _log_fac(ps - z)
        logs.append(lg)
        signs.append(-1.0 if z % 2 else 1.0)
    peak = max(logs)
    acc = math.fsum(s * math.exp(lg - peak) for s, lg in zip(signs, logs))
    if acc == 0.0:
        return 0.0
    log_delta = math.fsum(_log_delta_sq(*tri) for tri in triads)
    return math.copysign(math.exp(peak + 0.5 * log_delta + math.log(abs(acc))), acc)


def clebsch_gordan(
    j1: SpinLike, m1: SpinLike, j2: SpinLike, m2: SpinLike,
    j: SpinLike, m: SpinLike,
) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | j m>, Condon-Shortley phases.

    Returns 0.0 on any selection-rule violation (projection mismatch,
    triangle, parity, or |m| > j).
    """
    tj1, tm1, tj2, tm2 = _twice(j1), _twice(m1), _twice(j2), _twice(m2)
    tj, tm = _twice(j), _twice(m)
    if tm1 + tm2 != tm:
        return 0.0
    if not _triangle_ok(tj1, tj2, tj):
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm) > tj:
        return 0.0
    if (tj1 + tm1) % 2 or (tj2 + tm2) % 2 or (tj + tm) % 2:
        return 0.0

    # k-sum bounds from the Racah closed form.
    k_lo = max(0, (tj2 - tj - tm1) // 2, (tj1 - tj + tm2) // 2)
    k_hi = min(
        (tj1 + tj2 - tj) // 2,
        (tj1 - tm1) // 2,
        (tj2 + tm2) // 2,
    )
    if k_hi < k_lo:
        return 0.0

    largest = (tj1 + tj2 + tj) // 2 + 1
    if largest <= _EXACT_LIMIT:
        total = Fraction(0)
        for k in range(k_lo, k_hi + 1):
            den = (
                math.factorial(k)
                * math.factorial((tj1 + tj2 - tj) // 2 - k)
                * math.factorial((tj1 - tm1) // 2 - k)
                * math.factorial((tj2 + tm2) // 2 - k)
                * math.factorial((tj - tj2 + tm1) // 2 + k)
                * math.factorial((tj - tj1 - tm2) // 2 + k)
            )
            term = Fraction(1, den)
            total += -term if k % 2 else term
        if total == 0:
            return 0.0
        front = (tj + 1) * _delta_sq(tj1, tj2, tj)
        front *= Fraction(
            math.factorial((tj + tm) // 2)
            * math.factorial((tj - tm) // 2)
            * math.factorial((tj1 - tm1) // 2)
            * math.factorial((tj1 + tm1) // 2)
            * math.factorial((tj2 - tm2) // 2)
            * math.factorial((tj2 + tm2) // 2)
        )
        return _fraction_to_float(total) * _sqrt_fraction(front)

    logs, signs = [], []
    for k in range(k_lo, k_hi + 1):
        lg = -(
            _log_fac(k)
            + _log_fac((tj1 + tj2 - tj) // 2 - k)
            + _log_fac((tj1 - tm1) // 2 - k)
            + _log_fac((tj2 + tm2) // 2 - k)
            + _log_fac((tj - tj2 + tm1) // 2 + k)
            + _log_fac((tj - tj1 - tm2) // 2 + k)
        )
        logs.append(lg)
        signs.append(-1.0 if k % 2 else 1.0)
    peak = max(logs)
    acc = math.fsum(s * math.exp(lg - peak) for s, lg in zip(signs, logs))
    if acc == 0.0:
        return 0.0
    log_front = math.log(tj + 1) + _log_delta_sq(tj1, tj2, tj)
    log_front += (
        _log_fac((tj + tm) // 2)
        + _log_fac((tj - tm) // 2)
        + _log_fac((tj1 - tm1) // 2)
        + _log_fac((tj1 + tm1) // 2)
        + _log_fac((tj2 - tm2) // 2)
        + _log_fac((tj2 + tm2) // 2)
    )
    return math.copysign(math.exp(peak + 0.5 * log_front + math.log(abs(acc))), acc)


def multiplicity_irrep(j: SpinLike, n: int) -> int:
    """Number of spin-j irreps in the decomposition of n qubits, exactly.

    Zero when 2j and n have different parity or j > n/2.
    """
    tj = _twice(j)
    if n < 0 or tj < 0 or tj > n or (n - tj) % 2:
        return 0
    half_minus = (n - tj) // 2
    half_plus = (n + tj) // 2 + 1
    num = math.factorial(n) * (tj + 1)
    den = math.factorial(half_minus) * math.factorial(half_plus)
    assert num % den == 0
    return num // den


def log_multiplicity_irrep(j: SpinLike, n: int) -> float:
    """log of multiplicity_irrep, safe for n in the hundreds; -inf when zero."""
    tj = _twice(j)
    if n < 0 or tj < 0 or tj > n or (n - tj) % 2:
        return -math.inf
    return (
        _log_fac(n)
        + math.log(tj + 1)
        - _log_fac((n - tj) // 2)
        - _log_fac((n + tj) // 2 + 1)
    )


def sector_labels(n: int) -> Iterator[tuple[SpinLabel, SpinLabel, SpinLabel]]:
    """All (s, t, q) sectors of the coupled register for training size n.

    s and t run over the n-qubit total spins (same parity as n/2); q runs over
    the couplings of s + 1/2 with t, i.e. from ||t-s| - 1/2| to s + t + 1/2.
    """
    if n < 1:
        raise ValueError("training size must be >= 1")
    for ts in range(n % 2, n + 1, 2):
        for tt in range(n % 2, n + 1, 2):
            tq_lo = abs(abs(tt - ts) - 1)
            tq_hi = ts + tt + 1
            for tq in range(tq_lo, tq_hi + 1, 2):
                yield SpinLabel(ts), SpinLabel(tt), SpinLabel(tq)


def classify_sector(s: SpinLike, t: SpinLike, q: SpinLike) -> str:
    """Which coupled branches exist at (s, t, q).

    "stretched"    -- q = s + t + 1/2; only the raised branch on both sides.
    "single_plus"  -- q = t - s - 1/2 (t > s); the lone vector couples s+1/2
                      on the test side with t-1/2 on the template side.
    "single_minus" -- q = s - t - 1/2 (s > t); mirror image of the above.
    "mixed"        -- interior q; both branches exist and the block is 2x2.
    """
    ts, tt, tq = _twice(s), _twice(t), _twice(q)
    if tq % 2 == 0:
        raise ValueError("q must be half-odd-integer for an s,t sector")
    if tq == ts + tt + 1:
        return "stretched"
    if tt > ts and tq == tt - ts - 1:
        return "single_plus"
    if ts > tt and tq == ts - tt - 1:
        return "single_minus"
    if abs(abs(tt - ts) - 1) <= tq < ts + tt + 1:
        return "mixed"
    raise ValueError(f"q={SpinLabel(tq)} outside the sector range for s={SpinLabel(ts)}, t={SpinLabel(tt)}")


def recoupling_coefficient(
    s: SpinLike, t: SpinLike, q: SpinLike, branch_test: int, branch_template: int,
) -> float:
    """Overlap of the two coupling orders of the register (s) x (1/2) x (t).

    branch_test selects s +/- 1/2 (test qubit absorbed on the s side);
    branch_template selects t +/- 1/2.  Both are +1 or -1.  The value is

        (-1)^(s + 1/2 + t + q)
        * sqrt((2s' + 1)(2t' + 1)) * {t' t 1/2; s' s q}

    and vanishes whenever either coupled vector fails its selection rules.
    The phase is branch independent; the four defined entries form an
    orthogonal 2x2 (or degenerate 1x1) matrix, verified in the tests against
    the raw Clebsch-Gordan contraction of the two coupling orders.
    """
    if branch_test not in (1, -1) or branch_template not in (1, -1):
        raise ValueError("branches must be +1 or -1")
    ts, tt, tq = _twice(s), _twice(t), _twice(q)
    tsp = ts + branch_test
    ttp = tt + branch_template
    if tsp < 0 or ttp < 0:
        return 0.0
    six = wigner6j(
        SpinLabel(ttp), SpinLabel(tt), SpinLabel(1),
        SpinLabel(tsp), SpinLabel(ts), SpinLabel(tq),
    )
    if six == 0.0:
        return 0.0
    phase = -1.0 if ((ts + tt + tq + 1) // 2) % 2 else 1.0
    return phase * math.sqrt((tsp + 1) * (ttp + 1)) * six


def log_stretched_coupling_sq(n: int, k: int, q: SpinLike) -> float:
    """log of the squared weight of total spin q in a stretched coupling.

    A maximally polarized spin-(n+1)/2 register couples with a spin-n/2
    register held at magnetic weight k - n/2 (k raised spins out of n).  The
    squared Clebsch-Gordan coefficient onto total spin q has the closed form

        2 (n-k)! (n+1)! (k + q + 1/2)!
        -----------------------------------------------------
        k! (q - 1/2 - k)! (n - q + 1/2)! (n + q + 3/2)!

    returned as a log; -inf outside the support q >= k + 1/2.  Summed over q
    the squares give 1, which makes this the total-spin distribution used by
    the overlap-scenario spectrum and its moment checks.
    """
    tq = _twice(q)
    if tq % 2 == 0:
        raise ValueError("total spin must be half-odd-integer")
    if n < 0 or k < 0 or k > n:
        return -math.inf
    if (tq - 1) // 2 < k or tq > 2 * n + 1:
        return -math.inf
    return (
        math.log(2.0)
        + _log_fac(n - k)
        + _log_fac(n + 1)
        - _log_fac(k)
        + _log_fac(k + (tq + 1) // 2)
        - _log_fac((tq - 1) // 2 - k)
        - _log_fac(n - (tq - 1) // 2)
        - _log_fac(n + (tq + 3) // 2)
    )
