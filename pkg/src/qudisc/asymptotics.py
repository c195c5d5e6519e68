"""Large-n expansions, fully informed baselines, and moment cross-checks.

The exact minimal error probability computed in :mod:`qudisc.spectrum`
approaches, as the training register grows, the error of an observer who
knows both template states exactly (the optimal two-state measurement,
averaged over the prior).  This module provides

* that baseline for each prior scenario, in closed form, together with
  independent quadrature routes used to validate the closed forms;

* the inverse-training-size expansions of the exact error, packaged as
  :class:`AsymptoticEstimate` so callers can evaluate them at finite n and
  see at a glance which orders are available;

* closed-form moments of the two auxiliary distributions that drive the
  expansions (the empirical polarization of a twirled register, and the
  total spin reached when a maximally polarized register couples to a
  register of definite weight), with brute-force numeric counterparts.

Conventions: purities are Bloch radii in [0, 1]; `theta` is the angle
between the two pure templates, in [0, pi]; dimensions are integers >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .angular import SpinLabel, SpinLike, log_stretched_coupling_sq, _twice
from .priors import (
    FixedOverlap,
    FixedOverlapDim,
    FixedPurities,
    HardSphere,
    Scenario,
    gauss_legendre_01,
)

__all__ = [
    "HARD_SPHERE_HELSTROM",
    "AsymptoticEstimate",
    "helstrom_avg",
    "helstrom_dim_avg",
    "helstrom_dim_avg_quadrature",
    "helstrom_fixed_overlap",
    "helstrom_fixed_purities",
    "helstrom_fixed_purities_quadrature",
    "helstrom_hard_sphere_quadrature",
    "p_asym_dimension_avg",
    "p_asym_fixed_purity",
    "p_asym_hard_sphere",
    "p_asym_overlap",
    "p_asym_overlap_small_angle",
    "polarization_moments_closed",
    "polarization_moments_numeric",
    "total_spin_moments_closed",
    "total_spin_moments_numeric",
    "total_spin_pmf",
]

# Exact prior-averaged two-state bound for uniformly distributed Bloch
# vectors: 1/2 - (3/8)(7/10 - 1/70).
HARD_SPHERE_HELSTROM = Fraction(17, 70)


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Truncated expansion p ~ leading + per_n / n + per_n_sq / n^2.

    `per_n_sq` is None when only the first correction is known.  `note`
    carries a validity warning when the requested regime strains the
    expansion (it never changes the numbers).
    """

    leading: float
    per_n: float
    per_n_sq: float | None = None
    note: str | None = None

    def value(self, n: int) -> float:
        if n < 1:
            raise ValueError("training size must be >= 1")
        out = self.leading + self.per_n / n
        if self.per_n_sq is not None:
            out += self.per_n_sq / n**2
        return out


# ---------------------------------------------------------------------------
# Fully informed baselines


def helstrom_fixed_purities(r1: float, r2: float) -> float:
    """Two-state minimal error for known purities, averaged over directions.

    Closed form 1/2 - ((r1+r2)^3 - |r1-r2|^3) / (24 r1 r2); the removable
    limits at vanishing purity are taken analytically.
    """
    if not (0.0 <= r1 <= 1.0 and 0.0 <= r2 <= 1.0):
        raise ValueError("purities must lie in [0, 1]")
    if r1 == 0.0 and r2 == 0.0:
        return 0.5
    if r1 == 0.0 or r2 == 0.0:
        return 0.5 - max(r1, r2) / 4.0
    return 0.5 - ((r1 + r2) ** 3 - abs(r1 - r2) ** 3) / (24.0 * r1 * r2)


def helstrom_fixed_purities_quadrature(r1: float, r2: float, count: int = 64) -> float:
    """Direction average done by quadrature, as a check on the closed form.

    In the variable u = cos(angle between Bloch vectors) the average is
    1/2 - (1/8) * int_{-1}^{1} sqrt(r1^2 + r2^2 - 2 r1 r2 u) du.  At equal
    purities the integrand has a sqrt kink at u = 1, so the substitution
    u = 1 - 2 z^2 is applied first; it turns the integrand into
    4 z sqrt((r1 - r2)^2 + 4 r1 r2 z^2), smooth for every purity pair.
    """
    nodes, weights = gauss_legendre_01(count)
    acc = math.fsum(
        w * 4.0 * z * math.sqrt((r1 - r2) ** 2 + 4.0 * r1 * r2 * z * z)
        for z, w in zip(nodes, weights)
    )
    return 0.5 - acc / 8.0


def helstrom_hard_sphere_quadrature(count: int = 64) -> float:
    """Purity average of helstrom_fixed_purities over the uniform ball.

    The integrand has a |r1 - r2|^3 crease along the diagonal, so the
    square is split into two triangles (equal by symmetry) where it is a
    polynomial and Gauss-Legendre is exact.
    """
    nodes, weights = gauss_legendre_01(count)
    outer = []
    for x1, w1 in zip(nodes, weights):
        inner = math.fsum(
            w2 * x1 * 3.0 * (x1 * x2) ** 2 * helstrom_fixed_purities(x1, x1 * x2)
            for x2, w2 in zip(nodes, weights)
        )
        outer.append(w1 * 3.0 * x1 * x1 * inner)
    return 2.0 * math.fsum(outer)


def helstrom_fixed_overlap(theta: float) -> float:
    """Two-state minimal error for known pure templates at angle theta."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError("theta must lie in [0, pi]")
    return 0.5 * (1.0 - abs(math.cos(0.5 * theta)))


def helstrom_dim_avg(d: int) -> float:
    """helstrom_fixed_overlap averaged over Haar-random pure pairs in C^d.

    The squared overlap c of two Haar vectors has density (d-1)(1-c)^(d-2),
    and the average evaluates to 1/2 - (d-1)/(2d-1).
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return 0.5 - (d - 1.0) / (2.0 * d - 1.0)


def helstrom_dim_avg_quadrature(d: int, count: int = 64) -> float:
    """Quadrature route for helstrom_dim_avg.

    The per-pair error is (1 - sqrt(1 - c))/2 in the squared overlap c;
    integrating over m = |cos(theta/2)| = sqrt(1 - c), whose density is
    2 (d-1) m^(2d-3), makes the integrand polynomial and Gauss-Legendre
    exact.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    nodes, weights = gauss_legendre_01(count)
    acc = math.fsum(
        w * (0.5 * (1.0 - z)) * 2.0 * (d - 1.0) * z ** (2 * d - 3)
        for z, w in zip(nodes, weights)
    )
    return acc


def helstrom_avg(scenario: Scenario) -> float:
    """Fully informed baseline matched to the scenario's own prior."""
    if isinstance(scenario, FixedPurities):
        return helstrom_fixed_purities(scenario.r1, scenario.r2)
    if isinstance(scenario, HardSphere):
        return float(HARD_SPHERE_HELSTROM)
    if isinstance(scenario, FixedOverlap):
        return helstrom_fixed_overlap(scenario.theta)
    if isinstance(scenario, FixedOverlapDim):
        return helstrom_dim_avg(scenario.d)
    raise TypeError(f"unsupported scenario {scenario!r}")


# ---------------------------------------------------------------------------
# Inverse-training-size expansions


def p_asym_fixed_purity(r1: float, r2: float) -> AsymptoticEstimate:
    """Expansion of the exact error for fixed purities; needs r1, r2 > 0.

    The 1/n coefficient diverges as either purity vanishes (the machine must
    estimate a direction that the training states barely reveal), so zero
    purity is rejected rather than extrapolated.
    """
    if not (0.0 < r1 <= 1.0 and 0.0 < r2 <= 1.0):
        raise ValueError("expansion requires purities in (0, 1]")
    plus = (r1 + r2) ** 3
    minus = abs(r1 - r2) ** 3
    leading = 0.5 - (plus - minus) / (24.0 * r1 * r2)
    per_n = 5.0 * (plus + minus) / (24.0 * r1**2 * r2**2) - (
        (r1 + r2) ** 5 - abs(r1 - r2) ** 5
    ) / (24.0 * r1**3 * r2**3)
    return AsymptoticEstimate(leading=leading, per_n=per_n)


def p_asym_hard_sphere() -> AsymptoticEstimate:
    """Expansion of the exact error under the uniform-ball prior."""
    return AsymptoticEstimate(leading=float(HARD_SPHERE_HELSTROM), per_n=18.0 / 35.0)


def p_asym_overlap(theta: float, n: int | None = None) -> AsymptoticEstimate:
    """Expansion of the exact error for pure templates at known angle theta.

    Valid when n (pi - theta) is large; pass n to have a warning attached
    when n (pi - theta) < 10.  theta = pi (identical templates, overlap
    sin(theta/2) = 1) is rejected: there the error is exactly 1/2 for every
    n and the expansion coefficients blow up.
    """
    if not 0.0 <= theta < math.pi:
        raise ValueError("expansion requires theta in [0, pi)")
    cos = math.cos(theta)
    root = math.sqrt(1.0 + cos)
    leading = 0.5 * (1.0 - abs(math.cos(0.5 * theta)))
    per_n = (3.0 + cos) / (8.0 * math.sqrt(2.0) * root)
    per_n_sq = (1.0 - 60.0 * cos - 5.0 * math.cos(2.0 * theta)) / (
        128.0 * math.sqrt(2.0) * root**3
    )
    note = None
    if n is not None and n * (math.pi - theta) < 10.0:
        note = (
            "expansion assumes n (pi - theta) >> 1; "
            f"here n (pi - theta) = {n * (math.pi - theta):.3g}"
        )
    return AsymptoticEstimate(leading=leading, per_n=per_n, per_n_sq=per_n_sq, note=note)


def p_asym_overlap_small_angle(theta: float) -> AsymptoticEstimate:
    """Small-angle variant theta^2/16 + 1/(4n) - (1 - theta^2/4)/(8 n^2).

    Keeps only the orders that survive as theta -> 0; useful when the
    templates are nearly identical and n is moderate.
    """
    if not 0.0 <= theta < math.pi:
        raise ValueError("expansion requires theta in [0, pi)")
    return AsymptoticEstimate(
        leading=theta * theta / 16.0,
        per_n=0.25,
        per_n_sq=-(1.0 - theta * theta / 4.0) / 8.0,
        note="small-angle form; drops theta-dependent corrections beyond theta^2",
    )


def p_asym_dimension_avg(d: int) -> AsymptoticEstimate:
    """Expansion of the Haar-averaged error for pure templates in C^d."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return AsymptoticEstimate(
        leading=0.5 - (d - 1.0) / (2.0 * d - 1.0),
        per_n=(d - 1.0) ** 2 / (3.0 + 4.0 * d * (d - 2.0)),
    )


# ---------------------------------------------------------------------------
# Moments of the auxiliary distributions


def polarization_moments_closed(n: int, r: float) -> tuple[float, float, float, float]:
    """(mean, variance, 3rd and 4th central moments) of the scaled net weight.

    Measuring each of n twirled copies of a purity-r state along the common
    axis gives k raised outcomes with k ~ Binomial(n, (1+r)/2); the scaled
    net weight 2k/n - 1 estimates r.  Closed forms:

        m1 = r                 m3 = -2 r (1 - r^2) / n^2
        m2 = (1 - r^2) / n     m4 = 3 (1-r^2)^2 / n^2 - (1-r^2)(2-6r^2) / n^3
    """
    if n < 1:
        raise ValueError("training size must be >= 1")
    if not 0.0 <= r <= 1.0:
        raise ValueError("purity must lie in [0, 1]")
    one = 1.0 - r * r
    return (
        r,
        one / n,
        -2.0 * r * one / n**2,
        3.0 * one * one / n**2 - one * (2.0 - 6.0 * r * r) / n**3,
    )


def polarization_moments_numeric(n: int, r: float) -> tuple[float, float, float, float]:
    """Brute-force moments of the scaled net weight from the binomial pmf."""
    if n < 1:
        raise ValueError("training size must be >= 1")
    p = 0.5 * (1.0 + r)
    pmf = [math.comb(n, k) * p**k * (1.0 - p) ** (n - k) for k in range(n + 1)]
    values = [2.0 * k / n - 1.0 for k in range(n + 1)]
    mean = math.fsum(w * v for w, v in zip(pmf, values))
    central = [
        math.fsum(w * (v - mean) ** power for w, v in zip(pmf, values))
        for power in (2, 3, 4)
    ]
    return (mean, central[0], central[1], central[2])


def _weight_index(n: int, net_weight: SpinLike) -> int:
    th = _twice(net_weight)
    if (n + th) % 2 or abs(th) > n:
        raise ValueError("net weight must have the parity of n/2 and |w| <= n/2")
    return (n + th) // 2


def total_spin_pmf(n: int, net_weight: SpinLike) -> tuple[list[SpinLabel], list[float]]:
    """Distribution of the total spin reached by the stretched coupling.

    A maximally polarized spin-(n+1)/2 register coupled with an n-qubit
    register of the given net weight (half the raised-minus-lowered count)
    lands on total spin q with probability given by the squared coupling
    weight.  With k = n/2 + net_weight raised spins the support runs from
    k + 1/2 up to n + 1/2 in integer steps.
    """
    if n < 1:
        raise ValueError("training size must be >= 1")
    k = _weight_index(n, net_weight)
    labels = [SpinLabel(tq) for tq in range(2 * k + 1, 2 * n + 2, 2)]
    probs = [math.exp(log_stretched_coupling_sq(n, k, q)) for q in labels]
    return labels, probs


def _stretched_ratio(n: int, k: int) -> Fraction:
    # Gamma(3/2 + k) Gamma(2 + n) / (Gamma(1 + k) Gamma(3/2 + n)) as an exact
    # rational: the half-integer Gammas cancel pairwise
    num = Fraction(math.factorial(n + 1), math.factorial(k)) * 2 ** (n - k)
    den = 1
    for j in range(k + 1, n + 1):
        den *= 2 * j + 1
    return num / den


def total_spin_moments_closed(
    n: int, net_weight: SpinLike
) -> tuple[float, float, float, float]:
    """(mean, variance, 3rd and 4th central moments) of the total spin.

    Everything is expressible through the single ratio

        B = Gamma(3/2 + k) Gamma(2 + n) / (Gamma(1 + k) Gamma(3/2 + n))

    with k the raised-spin count:  m1 = B - 1/2, and the higher moments are
    polynomials in B.  B is rational, so the heavily cancelling polynomials
    are evaluated in exact arithmetic and rounded once at the end.  At k = n
    the distribution degenerates to the single point n + 1/2 and all central
    moments vanish.
    """
    if n < 1:
        raise ValueError("training size must be >= 1")
    k = _weight_index(n, net_weight)
    h = Fraction(2 * k - n, 2)
    big = _stretched_ratio(n, k)
    m1 = big - Fraction(1, 2)
    m2 = Fraction(1 + n, 2) * (2 + 2 * h + n) - big * big
    m3 = 2 * big**3 - (8 + 2 * h * (5 + 4 * n) + n * (11 + 4 * n)) * big / 4
    m4 = (
        Fraction(1 + n, 4)
        * (4 + 10 * n + 4 * h * h * n + 6 * n**2 + n**3 + 4 * h * (1 + 3 * n + n**2))
        - 3 * big**4
        + (2 + 2 * n + n**2 + 2 * h * (2 + n)) * big * big
    )
    return (float(m1), float(m2), float(m3), float(m4))


def total_spin_moments_numeric(
    n: int, net_weight: SpinLike
) -> tuple[float, float, float, float]:
    """Brute-force moments of the total spin from the coupling pmf.

    The pmf is a ratio of factorials, so the sums run in exact rationals;
    agreement with the closed forms is limited only by the final rounding.
    """
    if n < 1:
        raise ValueError("training size must be >= 1")
    k = _weight_index(n, net_weight)
    pairs = []
    for tq in range(2 * k + 1, 2 * n + 2, 2):
        num = 2 * math.factorial(n - k) * math.factorial(n + 1) * math.factorial(k + (tq + 1) // 2)
        den = (
            math.factorial(k)
            * math.factorial((tq - 1) // 2 - k)
            * math.factorial(n - (tq - 1) // 2)
            * math.factorial(n + (tq + 3) // 2)
        )
        pairs.append((Fraction(tq, 2), Fraction(num, den)))
    norm = sum(p for _, p in pairs)
    mean = sum(p * q for q, p in pairs) / norm
    central = [
        sum(p * (q - mean) ** power for q, p in pairs) / norm for power in (2, 3, 4)
    ]
    return (float(mean), float(central[0]), float(central[1]), float(central[2]))
