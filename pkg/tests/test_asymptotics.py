"""Baselines, large-n expansions, and auxiliary moment formulas.

Closed forms are cross-checked against quadrature or exact-rational
summation rather than against copies of themselves.
"""

import math
from fractions import Fraction

import pytest

from qudisc.asymptotics import (
    HARD_SPHERE_HELSTROM,
    AsymptoticEstimate,
    helstrom_avg,
    helstrom_dim_avg,
    helstrom_dim_avg_quadrature,
    helstrom_fixed_overlap,
    helstrom_fixed_purities,
    helstrom_fixed_purities_quadrature,
    helstrom_hard_sphere_quadrature,
    p_asym_dimension_avg,
    p_asym_fixed_purity,
    p_asym_hard_sphere,
    p_asym_overlap,
    p_asym_overlap_small_angle,
    polarization_moments_closed,
    polarization_moments_numeric,
    total_spin_moments_closed,
    total_spin_moments_numeric,
    total_spin_pmf,
)
from qudisc.priors import FixedOverlap, FixedOverlapDim, FixedPurities, HardSphere


# ---------------------------------------------------------------------------
# Fully informed baselines


def test_hard_sphere_baseline_is_an_exact_rational():
    assert HARD_SPHERE_HELSTROM == Fraction(17, 70)
    assert isinstance(HARD_SPHERE_HELSTROM, Fraction)


def test_hard_sphere_baseline_against_quadrature():
    assert helstrom_hard_sphere_quadrature() == pytest.approx(
        float(Fraction(17, 70)), abs=1e-12
    )


@pytest.mark.parametrize(
    "r1, r2",
    [(0.75, 0.5), (0.9, 0.9), (1.0, 1.0), (1.0, 0.2), (0.3, 0.7), (0.05, 0.05)],
)
def test_fixed_purity_baseline_against_quadrature(r1, r2):
    closed = helstrom_fixed_purities(r1, r2)
    quad = helstrom_fixed_purities_quadrature(r1, r2)
    assert closed == pytest.approx(quad, abs=1e-12)


def test_fixed_purity_baseline_frozen_value():
    assert helstrom_fixed_purities(0.75, 0.5) == pytest.approx(float(Fraction(41, 144)), abs=1e-15)
    assert helstrom_fixed_purities(1.0, 1.0) == pytest.approx(float(Fraction(1, 6)), abs=1e-15)


def test_fixed_purity_baseline_edges():
    assert helstrom_fixed_purities(0.0, 0.0) == 0.5
    # one template maximally mixed: trace distance is r/2, error 1/2 - r/4
    assert helstrom_fixed_purities(0.0, 0.8) == pytest.approx(0.3, abs=1e-15)
    assert helstrom_fixed_purities(0.0, 0.8) == pytest.approx(
        helstrom_fixed_purities_quadrature(0.0, 0.8), abs=1e-12
    )
    with pytest.raises(ValueError):
        helstrom_fixed_purities(1.1, 0.5)


def test_fixed_overlap_baseline():
    assert helstrom_fixed_overlap(0.0) == 0.0
    assert helstrom_fixed_overlap(math.pi) == pytest.approx(0.5, abs=1e-15)
    assert helstrom_fixed_overlap(math.pi / 3) == pytest.approx(
        0.5 * (1.0 - math.sqrt(3.0) / 2.0), abs=1e-15
    )


@pytest.mark.parametrize("d", [2, 3, 5, 7, 11])
def test_dimension_averaged_baseline_against_quadrature(d):
    assert helstrom_dim_avg(d) == pytest.approx(helstrom_dim_avg_quadrature(d), abs=1e-12)


def test_baseline_dispatch_matches_components():
    assert helstrom_avg(FixedPurities(0.75, 0.5)) == helstrom_fixed_purities(0.75, 0.5)
    assert helstrom_avg(HardSphere()) == float(HARD_SPHERE_HELSTROM)
    assert helstrom_avg(FixedOverlap(1.0)) == helstrom_fixed_overlap(1.0)
    # the d scenario's own prior averages over overlaps, so its baseline
    # is the dimension-averaged one, not the fixed-angle one
    assert helstrom_avg(FixedOverlapDim(1.0, 5)) == helstrom_dim_avg(5)


# ---------------------------------------------------------------------------
# Large-n expansions


def test_estimate_evaluation():
    estimate = AsymptoticEstimate(leading=0.25, per_n=1.0, per_n_sq=-2.0)
    assert estimate.value(2) == pytest.approx(0.25 + 0.5 - 0.5, abs=1e-15)
    truncated = AsymptoticEstimate(leading=0.25, per_n=1.0)
    assert truncated.value(4) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        estimate.value(0)


def test_hard_sphere_expansion_coefficients():
    estimate = p_asym_hard_sphere()
    assert estimate.leading == float(Fraction(17, 70))
    assert estimate.per_n == pytest.approx(18.0 / 35.0, abs=1e-15)
    assert estimate.per_n_sq is None


def test_fixed_purity_expansion_leading_term_is_the_baseline():
    for r1, r2 in [(0.75, 0.5), (0.9, 0.9), (1.0, 1.0), (0.2, 0.8)]:
        estimate = p_asym_fixed_purity(r1, r2)
        assert estimate.leading == pytest.approx(helstrom_fixed_purities(r1, r2), abs=1e-14)
        assert estimate.per_n > 0.0


def test_fixed_purity_expansion_rejects_zero_purity():
    with pytest.raises(ValueError):
        p_asym_fixed_purity(0.0, 0.5)
    with pytest.raises(ValueError):
        p_asym_fixed_purity(0.5, 0.0)


def test_fixed_purity_expansion_average_identity():
    """The purity average of the 1/n coefficient is exactly 11/25.

    On the triangle r2 = x r1 the coefficient reduces to
    (10 x^2 - 2 x^4) / (24 r1 x^2 ... ) and the double integral against
    3 r1^2 3 r2^2 evaluates to 11/25 in closed form.  Note this is NOT the
    uniform-ball curve's own 1/n coefficient (18/35): vanishing purities
    keep the expansion from commuting with the prior average, which is why
    the ball scenario carries its own expansion.  The identity still pins
    the coefficient's functional form over the whole purity square."""
    from qudisc.priors import gauss_legendre_01

    nodes, weights = gauss_legendre_01(96)
    acc = 0.0
    for x1, w1 in zip(nodes, weights):
        for x2, w2 in zip(nodes, weights):
            acc += (
                w1 * w2 * 9.0 * x1 * x1 * x2 * x2
                * p_asym_fixed_purity(x1, x2).per_n
            )
    assert acc == pytest.approx(11.0 / 25.0, rel=1e-6)
    assert p_asym_hard_sphere().per_n > 11.0 / 25.0


def test_overlap_expansion_coefficients():
    theta = math.pi / 3
    estimate = p_asym_overlap(theta)
    assert estimate.leading == pytest.approx(helstrom_fixed_overlap(theta), abs=1e-15)
    cos = math.cos(theta)
    assert estimate.per_n == pytest.approx(
        (3.0 + cos) / (8.0 * math.sqrt(2.0) * math.sqrt(1.0 + cos)), abs=1e-15
    )
    assert estimate.per_n_sq is not None


def test_overlap_expansion_warns_near_the_coincidence_point():
    # warning is attached when n (pi - theta) < 10, never changing numbers
    close = p_asym_overlap(math.pi - 0.01, n=100)
    assert close.note is not None
    far = p_asym_overlap(math.pi / 2, n=100)
    assert far.note is None
    assert p_asym_overlap(math.pi / 2).value(50) == pytest.approx(
        p_asym_overlap(math.pi / 2, n=50).value(50), abs=1e-16
    )


def test_overlap_expansion_rejects_identical_templates():
    with pytest.raises(ValueError):
        p_asym_overlap(math.pi)


def test_small_angle_variant_agrees_with_the_generic_one_at_moderate_angles():
    """Both expansions approximate the same curve; at theta around 1 and
    large n they must agree to the orders both keep."""
    theta = 0.3
    generic = p_asym_overlap(theta)
    small = p_asym_overlap_small_angle(theta)
    assert small.leading == pytest.approx(theta * theta / 16.0, abs=1e-15)
    # leading terms agree to O(theta^4)
    assert abs(generic.leading - small.leading) < theta**4
    # 1/n coefficients agree to O(theta^2)
    assert abs(generic.per_n - small.per_n) < theta**2


def test_dimension_averaged_expansion():
    for d in (2, 3, 5):
        estimate = p_asym_dimension_avg(d)
        assert estimate.leading == pytest.approx(helstrom_dim_avg(d), abs=1e-15)
        assert estimate.per_n > 0.0
    assert p_asym_dimension_avg(2).per_n == pytest.approx(1.0 / 3.0, abs=1e-15)


# ---------------------------------------------------------------------------
# Moments of the auxiliary distributions


@pytest.mark.parametrize("n, r", [(5, 0.75), (12, 0.3), (30, 1.0), (9, 0.05)])
def test_polarization_moments_closed_vs_numeric(n, r):
    closed = polarization_moments_closed(n, r)
    numeric = polarization_moments_numeric(n, r)
    for a, b in zip(closed, numeric):
        assert a == pytest.approx(b, rel=1e-10, abs=1e-12)


def test_total_spin_pmf_is_normalized():
    for n, k in [(6, 3), (9, 2), (14, 7)]:
        labels, probs = total_spin_pmf(n, Fraction(2 * k - n, 2))
        assert sum(probs) == pytest.approx(1.0, rel=1e-12)
        assert all(p >= 0.0 for p in probs)
        assert len(labels) == len(probs)
        # the raised register contributes its full spin to the projection,
        # so the support starts at the total weight k + 1/2
        assert labels[0].twice == 2 * k + 1


@pytest.mark.parametrize("n, k", [(8, 4), (15, 5), (50, 25), (21, 0)])
def test_total_spin_moments_closed_vs_numeric(n, k):
    weight = Fraction(2 * k - n, 2)
    closed = total_spin_moments_closed(n, weight)
    numeric = total_spin_moments_numeric(n, weight)
    for a, b in zip(closed, numeric):
        assert a == pytest.approx(b, rel=1e-10, abs=1e-12)
