"""Spin bookkeeping: labels, coupling coefficients, sector enumeration.

The recoupling coefficients are the load-bearing part; they are checked
against an independent contraction of Clebsch-Gordan coefficients over
magnetic quantum numbers, not merely against themselves.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qudisc.angular import (
    SpinLabel,
    classify_sector,
    clebsch_gordan,
    log_multiplicity_irrep,
    log_stretched_coupling_sq,
    multiplicity_irrep,
    recoupling_coefficient,
    sector_labels,
    wigner6j,
)


def halves(lo: int, hi: int):
    """Strategy over SpinLabels with twice-value in [lo, hi]."""
    return st.integers(lo, hi).map(SpinLabel)


# ---------------------------------------------------------------------------
# SpinLabel


def test_label_conversions():
    assert SpinLabel.of(1).twice == 2
    assert SpinLabel.of(0.5).twice == 1
    assert SpinLabel.of(Fraction(3, 2)).twice == 3
    assert SpinLabel.of(SpinLabel(4)).twice == 4
    assert float(SpinLabel(3)) == 1.5


def test_label_rejects_non_half_integers():
    with pytest.raises(ValueError):
        SpinLabel.of(0.3)
    with pytest.raises(ValueError):
        SpinLabel(-1)


def test_label_rendering():
    assert str(SpinLabel(0)) == "0"
    assert str(SpinLabel(2)) == "1"
    assert str(SpinLabel(5)) == "5/2"


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients


KNOWN_CG = [
    # (j1, m1, j2, m2, j, m, value)
    (0.5, 0.5, 0.5, 0.5, 1, 1, 1.0),
    (0.5, 0.5, 0.5, -0.5, 1, 0, 1 / math.sqrt(2)),
    (0.5, 0.5, 0.5, -0.5, 0, 0, 1 / math.sqrt(2)),
    (0.5, -0.5, 0.5, 0.5, 0, 0, -1 / math.sqrt(2)),
    (1, 0, 0.5, 0.5, 1.5, 0.5, math.sqrt(2 / 3)),
    (1, 1, 0.5, -0.5, 1.5, 0.5, 1 / math.sqrt(3)),
    (1, 1, 0.5, -0.5, 0.5, 0.5, math.sqrt(2 / 3)),
    (1, 1, 1, -1, 0, 0, 1 / math.sqrt(3)),
    (1, 0, 1, 0, 0, 0, -1 / math.sqrt(3)),
]


@pytest.mark.parametrize("j1, m1, j2, m2, j, m, expected", KNOWN_CG)
def test_cg_known_values(j1, m1, j2, m2, j, m, expected):
    assert clebsch_gordan(j1, m1, j2, m2, j, m) == pytest.approx(expected, abs=1e-14)


def test_cg_selection_rules():
    assert clebsch_gordan(1, 1, 1, 1, 1, 1) == 0.0  # projection mismatch
    assert clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0  # triangle violation
    assert clebsch_gordan(1, 0, 1, 0, 1, 0) == 0.0  # odd-sum parity zero


@given(tj1=st.integers(0, 8), tj2=st.integers(0, 8), data=st.data())
@settings(max_examples=60, deadline=None)
def test_cg_columns_orthonormal(tj1, tj2, data):
    """Fixed (j, m) against (j', m): rows over (m1, m2) are orthonormal."""
    tj = data.draw(st.integers(abs(tj1 - tj2), tj1 + tj2).filter(
        lambda t: (t - tj1 - tj2) % 2 == 0))
    tjp = data.draw(st.integers(abs(tj1 - tj2), tj1 + tj2).filter(
        lambda t: (t - tj1 - tj2) % 2 == 0))
    tm = data.draw(st.integers(-tj, tj).filter(lambda t: (t - tj) % 2 == 0))
    total = 0.0
    for tm1 in range(-tj1, tj1 + 1, 2):
        tm2 = tm - tm1
        if abs(tm2) > tj2:
            continue
        total += (
            clebsch_gordan(Fraction(tj1, 2), Fraction(tm1, 2), Fraction(tj2, 2),
                           Fraction(tm2, 2), Fraction(tj, 2), Fraction(tm, 2))
            * clebsch_gordan(Fraction(tj1, 2), Fraction(tm1, 2), Fraction(tj2, 2),
                             Fraction(tm2, 2), Fraction(tjp, 2), Fraction(tm, 2))
        )
    expected = 1.0 if tj == tjp and abs(tm) <= tj else 0.0
    assert total == pytest.approx(expected, abs=1e-12)


def test_cg_large_spins_stay_finite():
    # log-factorial route; moderate spins must not overflow or lose the phase
    value = clebsch_gordan(20, 3, 20, -3, 1, 0)
    assert math.isfinite(value)
    assert value != 0.0


# ---------------------------------------------------------------------------
# Wigner 6j


def test_6j_triangle_violations_vanish():
    assert wigner6j(1, 1, 3, 1, 1, 1) == 0.0
    assert wigner6j(0.5, 0.5, 0.5, 0.5, 0.5, 0.5) == 0.0  # half-odd triad


def test_6j_with_a_zero_argument():
    # {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1))
    for a, b, c in [(1, 1, 1), (2, 1, 1), (1.5, 1, 0.5), (3, 2, 1)]:
        expected = (-1) ** round(a + b + c) / math.sqrt((2 * b + 1) * (2 * c + 1))
        assert wigner6j(a, b, c, 0, c, b) == pytest.approx(expected, abs=1e-13)


@given(
    tj1=st.integers(0, 6), tj2=st.integers(0, 6), tj4=st.integers(0, 6),
    tj5=st.integers(0, 6), data=st.data(),
)
@settings(max_examples=40, deadline=None)
def test_6j_orthogonality(tj1, tj2, tj4, tj5, data):
    """Sum over j6 of (2j3+1)(2j6+1) {..j3..}{..j6..} pairs is a delta in j3."""
    if (tj1 + tj2) % 2 != (tj4 + tj5) % 2:
        return
    lo3 = max(abs(tj1 - tj2), abs(tj4 - tj5))
    hi3 = min(tj1 + tj2, tj4 + tj5)
    if lo3 > hi3:
        return
    tj3 = data.draw(st.integers(lo3, hi3).filter(lambda t: (t - tj1 - tj2) % 2 == 0))
    tj3p = data.draw(st.integers(lo3, hi3).filter(lambda t: (t - tj1 - tj2) % 2 == 0))
    total = 0.0
    for tj6 in range(max(abs(tj1 - tj5), abs(tj4 - tj2)), min(tj1 + tj5, tj4 + tj2) + 1, 2):
        total += (
            (tj6 + 1)
            * wigner6j(Fraction(tj1, 2), Fraction(tj2, 2), Fraction(tj3, 2),
                       Fraction(tj4, 2), Fraction(tj5, 2), Fraction(tj6, 2))
            * wigner6j(Fraction(tj1, 2), Fraction(tj2, 2), Fraction(tj3p, 2),
                       Fraction(tj4, 2), Fraction(tj5, 2), Fraction(tj6, 2))
        )
    expected = 1.0 / (tj3 + 1) if tj3 == tj3p else 0.0
    assert total == pytest.approx(expected, abs=1e-12)


def test_6j_matches_cg_contraction():
    """Racah route against the recoupling overlap built from CG coefficients.

    <(j1 j2) j12, j3; J J | j1, (j2 j3) j23; J J> equals
    (-1)^(j1+j2+j3+J) sqrt((2 j12 + 1)(2 j23 + 1)) {j1 j2 j12; j3 J j23}.
    """
    cases = [
        (1, 0.5, 0.5, 0.5, 1, 1), (1, 1, 1, 1, 1, 1),
        (1.5, 0.5, 1, 0.5, 1.5, 1), (1, 1, 2, 1, 1, 1), (2, 1, 1, 1, 2, 2),
    ]
    for j1, j2, j12, j3, big_j, j23 in cases:
        tj1, tj2, tj12 = round(2 * j1), round(2 * j2), round(2 * j12)
        tj3, tj23 = round(2 * j3), round(2 * j23)
        tm = round(2 * big_j)
        total = 0.0
        for tm1 in range(-tj1, tj1 + 1, 2):
            for tm2 in range(-tj2, tj2 + 1, 2):
                tm12 = tm1 + tm2
                tm3 = tm - tm12
                if abs(tm12) > tj12 or abs(tm3) > tj3:
                    continue
                tm23 = tm2 + tm3
                if abs(tm23) > tj23:
                    continue
                total += (
                    clebsch_gordan(j1, Fraction(tm1, 2), j2, Fraction(tm2, 2),
                                   j12, Fraction(tm12, 2))
                    * clebsch_gordan(j12, Fraction(tm12, 2), j3, Fraction(tm3, 2),
                                     big_j, Fraction(tm, 2))
                    * clebsch_gordan(j2, Fraction(tm2, 2), j3, Fraction(tm3, 2),
                                     j23, Fraction(tm23, 2))
                    * clebsch_gordan(j1, Fraction(tm1, 2), j23, Fraction(tm23, 2),
                                     big_j, Fraction(tm, 2))
                )
        phase = (-1) ** round(j1 + j2 + j3 + big_j)
        norm = math.sqrt((2 * j12 + 1) * (2 * j23 + 1))
        direct = wigner6j(j1, j2, j12, j3, big_j, j23)
        assert total == pytest.approx(phase * norm * direct, abs=1e-12), (j1, j2, j12)


# ---------------------------------------------------------------------------
# Irrep multiplicities and sector enumeration


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 10])
def test_multiplicities_resolve_the_register(n):
    total = sum(
        multiplicity_irrep(SpinLabel(tj), n) * (tj + 1)
        for tj in range(n % 2, n + 1, 2)
    )
    assert total == 2**n


def test_multiplicity_known_values():
    assert multiplicity_irrep(SpinLabel(4), 4) == 1
    assert multiplicity_irrep(SpinLabel(2), 4) == 3
    assert multiplicity_irrep(SpinLabel(0), 4) == 2
    assert multiplicity_irrep(SpinLabel(1), 5) == 5


def test_log_multiplicity_matches_exact():
    for n in (3, 10, 41):
        for tj in range(n % 2, n + 1, 2):
            exact = multiplicity_irrep(SpinLabel(tj), n)
            assert math.exp(log_multiplicity_irrep(SpinLabel(tj), n)) == pytest.approx(
                exact, rel=1e-12
            )


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_sector_labels_cover_the_coupled_register(n):
    total = 0
    for s, t, q in sector_labels(n):
        assert (n - s.twice) % 2 == 0 and s.twice <= n
        assert (n - t.twice) % 2 == 0 and t.twice <= n
        total += multiplicity_irrep(s, n) * multiplicity_irrep(t, n) * (q.twice + 1)
    # s-register multiplicities count n+1 qubits worth of test absorption:
    # each (s, t) pair spreads over q with one branch or two
    branch_total = 0
    for s, t, q in sector_labels(n):
        branches = 1 if classify_sector(s, t, q) != "mixed" else 2
        branch_total += multiplicity_irrep(s, n) * multiplicity_irrep(t, n) * (q.twice + 1) * branches
    assert branch_total == 2 ** (2 * n + 1)
    assert total < 2 ** (2 * n + 1)


def test_classify_sector_cases():
    assert classify_sector(1, 1, 2.5) == "stretched"
    assert classify_sector(1, 1, 1.5) == "mixed"
    assert classify_sector(1, 1, 0.5) == "mixed"
    assert classify_sector(0, 1, 0.5) == "single_plus"
    assert classify_sector(1, 0, 0.5) == "single_minus"
    with pytest.raises(ValueError):
        classify_sector(1, 1, 1)  # integral q never couples
    with pytest.raises(ValueError):
        classify_sector(1, 1, 3.5)  # beyond the stretched edge


# ---------------------------------------------------------------------------
# Recoupling coefficients


def _recoupling_by_contraction(s, t, q, branch_test, branch_template):
    """<(s 1/2) s', t; q q | s, (1/2 t) t'; q q> summed over projections."""
    ts, tt, tq = round(2 * s), round(2 * t), round(2 * q)
    tsp, ttp = ts + branch_test, tt + branch_template
    if tsp < 0 or ttp < 0:
        return 0.0
    total = 0.0
    for tms in range(-ts, ts + 1, 2):
        for tmx in (-1, 1):
            tmsp = tms + tmx
            if abs(tmsp) > tsp:
                continue
            tmt = tq - tmsp
            if abs(tmt) > tt:
                continue
            tmtp = tmx + tmt
            if abs(tmtp) > ttp:
                continue
            total += (
                clebsch_gordan(Fraction(ts, 2), Fraction(tms, 2), Fraction(1, 2),
                               Fraction(tmx, 2), Fraction(tsp, 2), Fraction(tmsp, 2))
                * clebsch_gordan(Fraction(tsp, 2), Fraction(tmsp, 2), Fraction(tt, 2),
                                 Fraction(tmt, 2), Fraction(tq, 2), Fraction(tq, 2))
                * clebsch_gordan(Fraction(1, 2), Fraction(tmx, 2), Fraction(tt, 2),
                                 Fraction(tmt, 2), Fraction(ttp, 2), Fraction(tmtp, 2))
                * clebsch_gordan(Fraction(ts, 2), Fraction(tms, 2), Fraction(ttp, 2),
                                 Fraction(tmtp, 2), Fraction(tq, 2), Fraction(tq, 2))
            )
    return total


def test_recoupling_matches_cg_contraction():
    cases = []
    for n in (2, 3, 4):
        for s, t, q in sector_labels(n):
            cases.append((s, t, q))
    checked = 0
    for s, t, q in cases:
        for branch_test in (1, -1):
            for branch_template in (1, -1):
                direct = recoupling_coefficient(s, t, q, branch_test, branch_template)
                contracted = _recoupling_by_contraction(
                    float(s), float(t), float(q), branch_test, branch_template
                )
                assert direct == pytest.approx(contracted, abs=1e-12), (s, t, q)
                checked += 1
    assert checked > 100


@given(ts=st.integers(1, 9), tt=st.integers(1, 9), data=st.data())
@settings(max_examples=60, deadline=None)
def test_recoupling_rows_orthonormal(ts, tt, data):
    """On mixed sectors both branches exist on each side and the 2x2 matrix
    of recoupling coefficients is orthogonal."""
    if (ts - tt) % 2:
        return  # register spins always share the parity of n/2
    lo = abs(abs(tt - ts) - 1)
    hi = ts + tt + 1
    tq = data.draw(st.integers(lo, hi).filter(lambda t: (t - lo) % 2 == 0))
    s, t, q = Fraction(ts, 2), Fraction(tt, 2), Fraction(tq, 2)
    if classify_sector(s, t, q) != "mixed":
        return
    for ba in (1, -1):
        for bb in (1, -1):
            total = sum(
                recoupling_coefficient(s, t, q, ba, bt)
                * recoupling_coefficient(s, t, q, bb, bt)
                for bt in (1, -1)
            )
            assert total == pytest.approx(1.0 if ba == bb else 0.0, abs=1e-12)


def test_recoupling_stretched_is_unity():
    # at q = s + t + 1/2 the raised-raised overlap is the whole story
    assert recoupling_coefficient(1.5, 1, 3, 1, 1) == pytest.approx(1.0, abs=1e-12)
    assert recoupling_coefficient(1.5, 1, 3, -1, 1) == 0.0
    assert recoupling_coefficient(1.5, 1, 3, 1, -1) == 0.0


# ---------------------------------------------------------------------------
# Stretched coupling weights


def test_stretched_coupling_is_a_probability():
    """Sum over q of the squared stretched CG weights must be one."""
    for n in (1, 2, 5, 12):
        for k in range(n + 1):
            total = 0.0
            for tq in range(1, 2 * n + 2, 2):
                log_sq = log_stretched_coupling_sq(n, k, Fraction(tq, 2))
                if log_sq != -math.inf:
                    total += math.exp(log_sq)
            assert total == pytest.approx(1.0, rel=1e-12), (n, k)


def test_stretched_coupling_matches_direct_cg():
    """The closed form against an explicit CG with matching quantum numbers."""
    for n, k, tq in [(2, 1, 3), (3, 0, 1), (3, 2, 5), (5, 4, 7), (4, 2, 3)]:
        # spin (n+1)/2 fully raised couples with spin n/2 at weight k - n/2
        j1 = Fraction(n + 1, 2)
        j2 = Fraction(n, 2)
        m2 = Fraction(2 * k - n, 2)
        q = Fraction(tq, 2)
        direct = clebsch_gordan(j1, j1, j2, m2, q, j1 + m2) ** 2
        log_sq = log_stretched_coupling_sq(n, k, q)
        value = 0.0 if log_sq == -math.inf else math.exp(log_sq)
        assert value == pytest.approx(direct, abs=1e-13), (n, k, tq)
