"""
Tests for mu/lambda invariants, q_n and the invariant-prescribed draws.
"""

import pytest

from iwasawa.algebra import SIGN_MINUS, SIGN_PLUS, LambdaRing, involution_series, reduce_to_level
from iwasawa.invariants import (
    invariants,
    invariants_series,
    lambda_invariant,
    make_with_invariants,
    mu,
    mu_group_basis,
    q,
)
from iwasawa.sampling import random_element, random_series
from iwasawa.types import (
    STATUS_LAMBDA_TRUNCATED,
    STATUS_ZERO,
    InvariantResult,
    PrecisionExhaustedError,
    TruncationError,
)

pytestmark = pytest.mark.unit


def test_finite_level_examples(ring5):
    assert invariants(ring5.element(1, [5, 5])).pair() == (1, 0)
    assert invariants(ring5.element(2, [0, 0, 0, 1])).pair() == (0, 3)
    assert invariants(ring5.element(1, [0, 25, 0, 0, 5])).pair() == (1, 4)
    assert str(invariants(ring5.element(1, [5, 5]))) == "mu=1 lambda=0"


def test_zero_is_a_marker_not_an_exception(ring5):
    result = invariants(ring5.zero(2))
    assert result.status == STATUS_ZERO
    assert mu(ring5.zero(2)) is None
    assert str(result) == "zero-at-precision"
    with pytest.raises(PrecisionExhaustedError):
        lambda_invariant(ring5.zero(2))
    with pytest.raises(PrecisionExhaustedError):
        result.require()


@pytest.mark.parametrize("p", [3, 5])
def test_cyclotomic_factor_invariants(p):
    ring = LambdaRing.for_levels(p, 20, 4)
    for n in range(1, 5):
        phi = reduce_to_level(ring.cyclo_phi(n), n)
        assert invariants(phi).pair() == (0, p ** n - p ** (n - 1))


def test_q_values():
    assert [q(n, 5) for n in range(5)] == [0, 0, 4, 20, 104]
    assert [q(n, 3) for n in range(5)] == [0, 0, 2, 6, 20]
    with pytest.raises(ValueError):
        q(-1, 5)


def test_omega_pm_invariants():
    ring = LambdaRing.for_levels(5, 20, 4)
    for n in range(1, 5):
        plus = invariants_series(ring.omega_pm(n, SIGN_PLUS))
        minus = invariants_series(ring.omega_pm(n, SIGN_MINUS))
        assert plus.mu == 0 and minus.mu == 0
        matched = plus if (n + 1) % 2 == 0 else minus
        assert matched.pair() == (0, q(n, 5))


def test_series_examples():
    ring = LambdaRing(5, 10, 25)
    P = ring.series([125, 125, 0, 0, 0, 1])
    assert invariants_series(P).pair() == (0, 5)
    unit = ring.series([2, 3, 4])
    assert invariants_series(unit * 5).pair() == (1, 0)


def test_series_lambda_past_truncation():
    ring = LambdaRing(3, 6, 9)
    tail = ring.series([0] * 9 + [1])
    result = invariants_series(tail)
    assert result.status == STATUS_LAMBDA_TRUNCATED
    assert result.mu == 0
    with pytest.raises(TruncationError):
        result.require()
    assert invariants_series(ring.series([0])).status == STATUS_ZERO


def test_basis_invariance(ring5, rng):
    for _ in range(200):
        x = random_element(ring5, int(rng.integers(0, 3)), rng) * 5 ** int(rng.integers(0, 3))
        assert mu_group_basis(x) == mu(x)


def test_make_with_invariants_round_trip(ring5, rng):
    assert invariants_series(make_with_invariants(ring5, 0, 0, rng)).pair() == (0, 0)
    for mu_value, lam in ((2, 3), (1, 0), (0, 24), (5, 7)):
        P = make_with_invariants(ring5, mu_value, lam, rng)
        assert invariants_series(P) == InvariantResult.of(mu_value, lam)


def test_make_with_invariants_bounds(ring5, rng):
    with pytest.raises(ValueError):
        make_with_invariants(ring5, ring5.N, 0, rng)
    with pytest.raises(ValueError):
        make_with_invariants(ring5, 0, ring5.D, rng)


def test_series_and_level_invariants_agree(ring5, rng):
    for _ in range(50):
        lam = int(rng.integers(0, ring5.D))
        P = make_with_invariants(ring5, int(rng.integers(0, 3)), lam, rng)
        for n in range(3):
            if 5 ** n > lam:
                assert invariants(reduce_to_level(P, n)) == invariants_series(P)


def test_involution_preserves_series_invariants(rng):
    ring = LambdaRing(5, 20, 40)
    for _ in range(200):
        P = make_with_invariants(ring, int(rng.integers(0, 3)), int(rng.integers(0, 20)), rng)
        assert invariants_series(involution_series(P)) == invariants_series(P)
    for _ in range(20):
        P = random_series(ring, rng)
        assert invariants_series(involution_series(P)) == invariants_series(P)
