"""
Tests for theta families, stabilization and the two theorem verifiers.
"""

import pytest

from iwasawa.algebra import LambdaRing, project, reduce_to_level
from iwasawa.invariants import invariants, invariants_series, make_with_invariants, q
from iwasawa.sampling import random_element, random_series, random_unit
from iwasawa.theta import (
    PARITY_EVEN,
    PARITY_ODD,
    PROVENANCE_NONORDINARY,
    PROVENANCE_ORDINARY,
    build_nonordinary_family,
    build_ordinary_family,
    ordinary_lp_approx,
    parity_prediction,
    sharp_flat_lp,
    stabilize,
    stabilize_family,
    threshold_level,
    verify_nonordinary_theorem,
    verify_ordinary_theorem,
    verify_three_term,
)
from iwasawa.types import (
    STATUS_ZERO,
    VERDICT_BELOW_THRESHOLD,
    VERDICT_FAIL,
    VERDICT_HYPOTHESIS,
    VERDICT_PASS,
    OrdinarityError,
    ParameterMismatchError,
)

pytestmark = pytest.mark.unit


@pytest.fixture
def ring5_deep():
    """p = 5 with levels up to 3."""
    return LambdaRing.for_levels(5, 20, 3)


def _ordinary_family(ring, rng, n_max, seed=None):
    a_p = random_unit(rng, ring.p, ring.N)
    theta0 = random_element(ring, 0, rng)
    theta1 = random_element(ring, 1, rng)
    return build_ordinary_family(ring, theta0, theta1, a_p, n_max, rng=rng, seed=seed)


# =============================================================================
# Non-ordinary families
# =============================================================================

def test_nonordinary_constant_family(ring3):
    one = ring3.series_constant(1)
    fam = build_nonordinary_family(ring3, one, one, ring3.scalar(0), 3)
    assert fam.provenance == PROVENANCE_NONORDINARY
    assert fam.n_max == 3
    assert fam.theta(0) == ring3.one(0)
    assert fam.theta(1) == ring3.one(1)
    assert fam.theta(2) == -reduce_to_level(ring3.cyclo_phi(1), 2)
    assert fam.theta(3) == -reduce_to_level(ring3.cyclo_phi(2), 3)
    assert invariants(fam.theta(2)).pair() == (0, 2)
    assert invariants(fam.theta(3)).pair() == (0, 6)


def test_nonordinary_family_three_term(ring3, rng):
    for a_p in (0, 3, 6):
        fam = build_nonordinary_family(
            ring3, random_series(ring3, rng), random_series(ring3, rng), ring3.scalar(a_p), 3
        )
        report = verify_three_term(fam)
        assert report.passed
        assert report.checked_levels == [1, 2]


def test_perturbed_family_reports_location(ring3):
    one = ring3.series_constant(1)
    fam = build_nonordinary_family(ring3, one, one, ring3.scalar(0), 3)
    report = verify_three_term(fam.perturbed(2, 0))
    assert not report.passed
    assert report.failed_level == 1
    assert report.failed_index == 0
    assert verify_three_term(fam).passed


def test_zero_family(ring3):
    zero = ring3.series_constant(0)
    fam = build_nonordinary_family(ring3, zero, zero, ring3.scalar(0), 3)
    assert all(t.is_zero() for t in fam.thetas)
    assert verify_three_term(fam).passed


def test_family_builders_check_ordinarity(ring3):
    one = ring3.series_constant(1)
    with pytest.raises(OrdinarityError):
        build_nonordinary_family(ring3, one, one, ring3.scalar(1), 2)
    with pytest.raises(OrdinarityError):
        build_ordinary_family(ring3, ring3.one(0), ring3.one(1), ring3.scalar(3), 2)
    fam = build_nonordinary_family(ring3, one, one, ring3.scalar(0), 2)
    with pytest.raises(OrdinarityError):
        stabilize(fam, 1)


def test_ordinary_builder_checks_seed_levels(ring3):
    with pytest.raises(ParameterMismatchError):
        build_ordinary_family(ring3, ring3.one(1), ring3.one(1), ring3.scalar(1), 2)


def test_parity_prediction_exact_for_zero_trace(ring3, rng):
    l_sharp, l_flat = random_series(ring3, rng), random_series(ring3, rng)
    fam = build_nonordinary_family(ring3, l_sharp, l_flat, ring3.scalar(0), 3)
    for n in (1, 2, 3):
        assert fam.theta(n) == parity_prediction(ring3, n, l_sharp, l_flat)


# =============================================================================
# Ordinary families and stabilization
# =============================================================================

def test_ordinary_family_without_randomness(ring3):
    fam = build_ordinary_family(ring3, ring3.one(0), ring3.one(1), ring3.scalar(1), 3)
    assert fam.provenance == PROVENANCE_ORDINARY
    assert fam.is_ordinary
    assert [t.level for t in fam.thetas] == [0, 1, 2, 3]
    assert verify_three_term(fam).passed


def test_random_ordinary_family_three_term(ring3, rng):
    for _ in range(5):
        assert verify_three_term(_ordinary_family(ring3, rng, 3)).passed


def test_stabilization_is_norm_compatible(ring3, rng):
    fam = _ordinary_family(ring3, rng, 3)
    stabilized = stabilize_family(fam)
    assert stabilized.alpha * stabilized.beta == ring3.scalar(3)
    assert stabilized.is_norm_compatible()
    assert [s.level for s in stabilized.elements] == [1, 2, 3]
    with pytest.raises(ValueError):
        stabilize(fam, 0)


def test_lp_approximations_are_compatible(ring3, rng):
    fam = _ordinary_family(ring3, rng, 3)
    for n in (1, 2):
        assert project(ordinary_lp_approx(fam, n + 1)) == ordinary_lp_approx(fam, n)


def test_ordinary_theorem_never_fails(ring5_deep, rng):
    for trial in range(3):
        report = verify_ordinary_theorem(_ordinary_family(ring5_deep, rng, 3, seed=trial))
        assert report.verdict in (VERDICT_PASS, VERDICT_HYPOTHESIS)
        assert report.extra["three_term"]["passed"]
        assert report.extra["norm_compatible"]
        if report.verdict == VERDICT_PASS:
            n0 = report.extra["n0"]
            assert all(row.mu_theta == 0 for row in report.rows if row.n >= n0)


def test_ordinary_theorem_zero_family(ring3):
    fam = build_ordinary_family(ring3, ring3.zero(0), ring3.zero(1), ring3.scalar(1), 3)
    report = verify_ordinary_theorem(fam)
    assert report.verdict == VERDICT_HYPOTHESIS
    assert report.reason == STATUS_ZERO


def test_ordinary_theorem_divisible_family(ring3):
    theta0 = ring3.element(0, [3])
    theta1 = ring3.element(1, [3, 0, 0])
    fam = build_ordinary_family(ring3, theta0, theta1, ring3.scalar(2), 3)
    report = verify_ordinary_theorem(fam)
    assert report.verdict == VERDICT_HYPOTHESIS
    assert report.reason == "mu-positive"


def test_perturbed_ordinary_family_fails(ring3, rng):
    fam = _ordinary_family(ring3, rng, 3).perturbed(3, 0)
    report = verify_ordinary_theorem(fam)
    assert not report.extra["three_term"]["passed"]
    assert report.extra["three_term"]["failed_level"] == 2
    assert report.verdict == VERDICT_FAIL
    assert report.reason == "three-term"


def test_perturbed_nonordinary_family_fails(ring3, rng):
    l_sharp = make_with_invariants(ring3, 0, 1, rng)
    l_flat = make_with_invariants(ring3, 0, 1, rng)
    a_p = ring3.scalar(0)
    assert verify_nonordinary_theorem(ring3, l_sharp, l_flat, a_p, 3).verdict == VERDICT_PASS
    report = verify_nonordinary_theorem(ring3, l_sharp, l_flat, a_p, 3, perturb=(3, 0))
    assert report.verdict == VERDICT_FAIL
    assert report.reason == "three-term"
    assert report.extra["three_term"]["failed_level"] == 2


# =============================================================================
# Non-ordinary theorem
# =============================================================================

@pytest.mark.parametrize("a_p", [0, 5, 10])
def test_nonordinary_theorem_with_divisible_series(ring5_deep, rng, a_p):
    l_sharp = make_with_invariants(ring5_deep, 1, 3, rng)
    l_flat = make_with_invariants(ring5_deep, 1, 3, rng)
    report = verify_nonordinary_theorem(ring5_deep, l_sharp, l_flat, ring5_deep.scalar(a_p), 3)
    assert report.verdict == VERDICT_PASS, report.to_dict()
    for row in report.rows:
        assert row.mu_theta == 1
        assert row.lambda_theta == 3 + q(row.n, 5)
        assert row.checks["parity_law"]


def test_nonordinary_lambda_staircase(ring5_deep, rng):
    l_sharp = make_with_invariants(ring5_deep, 0, 1, rng)
    l_flat = make_with_invariants(ring5_deep, 0, 1, rng)
    report = verify_nonordinary_theorem(ring5_deep, l_sharp, l_flat, ring5_deep.scalar(0), 3)
    assert report.verdict == VERDICT_PASS
    lambdas = {row.n: row.lambda_theta for row in report.rows}
    assert lambdas == {1: 1, 2: 5, 3: 21}
    assert report.extra["n0_plus"] == 2
    assert report.extra["n0_minus"] == 1


# =============================================================================
# Acceptance-scale runs at p = 5, level 4
# =============================================================================

@pytest.fixture(scope="module")
def ring5_level4():
    return LambdaRing.for_levels(5, 20, 4)


@pytest.mark.slow
@pytest.mark.timeout(600)
def test_three_term_holds_for_random_families(ring5_level4, rng):
    ring = ring5_level4
    for a_p in [0] * 25 + [5] * 25:
        fam = build_nonordinary_family(
            ring, random_series(ring, rng), random_series(ring, rng), ring.scalar(a_p), 4
        )
        assert verify_three_term(fam).passed
    for trial in range(50):
        fam = _ordinary_family(ring, rng, 4, seed=trial)
        assert verify_three_term(fam).passed
    report = verify_three_term(fam.perturbed(4, 0))
    assert not report.passed
    assert report.failed_level == 3


@pytest.mark.slow
@pytest.mark.timeout(600)
def test_ordinary_theorem_at_scale(ring5_level4, rng):
    for trial in range(100):
        report = verify_ordinary_theorem(_ordinary_family(ring5_level4, rng, 4, seed=trial))
        assert report.verdict != VERDICT_FAIL, report.to_dict()


@pytest.mark.slow
@pytest.mark.timeout(600)
@pytest.mark.parametrize("a_p", [0, 5, 10])
@pytest.mark.parametrize("mu_value", [0, 1, 2])
def test_nonordinary_theorem_grid(ring5_level4, rng, mu_value, a_p):
    ring = ring5_level4
    for lam in range(4):
        l_sharp = make_with_invariants(ring, mu_value, lam, rng)
        l_flat = make_with_invariants(ring, mu_value, lam, rng)
        report = verify_nonordinary_theorem(ring, l_sharp, l_flat, ring.scalar(a_p), 4)
        assert report.verdict == VERDICT_PASS, report.to_dict()
        for row in report.rows:
            if row.verdict == VERDICT_BELOW_THRESHOLD:
                continue
            assert row.mu_theta == mu_value
            assert row.lambda_theta == lam + q(row.n, 5)


def test_nonordinary_below_threshold(ring3, rng):
    l_sharp = make_with_invariants(ring3, 0, 3, rng)
    l_flat = make_with_invariants(ring3, 0, 3, rng)
    report = verify_nonordinary_theorem(ring3, l_sharp, l_flat, ring3.scalar(0), 3)
    assert report.verdict == VERDICT_PASS
    first = report.rows[0]
    assert first.n == 1
    assert first.verdict == VERDICT_BELOW_THRESHOLD
    assert first.expected_lambda is None
    assert [row.verdict for row in report.rows[1:]] == [VERDICT_PASS, VERDICT_PASS]
    assert report.extra["n0_minus"] == 3


def test_nonordinary_mu_mismatch(ring3, rng):
    l_sharp = make_with_invariants(ring3, 0, 1, rng)
    l_flat = make_with_invariants(ring3, 1, 1, rng)
    report = verify_nonordinary_theorem(ring3, l_sharp, l_flat, ring3.scalar(0), 3)
    assert report.verdict == VERDICT_HYPOTHESIS
    assert report.reason == "mu-mismatch"
    assert report.rows == []


def test_nonordinary_zero_series(ring3):
    zero = ring3.series_constant(0)
    report = verify_nonordinary_theorem(ring3, zero, zero, ring3.scalar(0), 2)
    assert report.verdict == VERDICT_HYPOTHESIS
    assert report.reason == STATUS_ZERO


def test_nonordinary_rejects_unit_trace(ring3):
    one = ring3.series_constant(1)
    with pytest.raises(OrdinarityError):
        verify_nonordinary_theorem(ring3, one, one, ring3.scalar(2), 2)


def test_threshold_level():
    assert threshold_level(3, 3, PARITY_ODD, 3) == 3
    assert threshold_level(0, 5, PARITY_EVEN, 4) == 2
    assert threshold_level(30, 3, PARITY_ODD, 3) is None


def test_sharp_flat_lp_doubles(ring3):
    assert invariants_series(sharp_flat_lp(ring3.variable())).pair() == (0, 2)
    assert invariants_series(sharp_flat_lp(ring3.series_constant(3))).pair() == (2, 0)


def test_family_to_dict(ring3, rng):
    one = ring3.series_constant(1)
    data = build_nonordinary_family(ring3, one, one, ring3.scalar(0), 2).to_dict()
    assert data["provenance"] == PROVENANCE_NONORDINARY
    assert data["n_max"] == 2
    assert len(data["thetas"]) == 3
    assert "l_sharp" in data and "seed" not in data

    data = _ordinary_family(ring3, rng, 2, seed=7).to_dict()
    assert data["seed"] == 7
    assert "l_sharp" not in data
