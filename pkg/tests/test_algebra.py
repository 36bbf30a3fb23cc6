"""
Tests for Lambda_n arithmetic and the structural maps.
"""

from math import comb

import pytest

from iwasawa.algebra import (
    SIGN_MINUS,
    SIGN_PLUS,
    FiniteLevelElt,
    LambdaRing,
    SeriesElt,
    element_from_dict,
    from_group_coeffs,
    involution,
    involution_series,
    lift_to_level,
    norm_xi,
    project,
    reduce_to_level,
    to_group_coeffs,
)
from iwasawa.sampling import random_element, random_series
from iwasawa.types import ElementParseError, ParameterMismatchError, TruncationError

pytestmark = pytest.mark.unit


def _ints(x, modulus):
    """Coefficients as symmetric representatives, for readable comparisons."""
    return [c - modulus if c > modulus // 2 else c for c in x.coeffs]


# =============================================================================
# Distinguished elements
# =============================================================================

def test_omega(ring3):
    assert ring3.omega(0).coeffs[:3] == (0, 1, 0)
    assert ring3.omega(1).coeffs[:5] == (0, 3, 3, 1, 0)
    assert [c % 3 for c in ring3.omega(1).coeffs[:4]] == [0, 0, 0, 1]


def test_omega_needs_room(ring3):
    with pytest.raises(TruncationError):
        ring3.omega(4)


def test_cyclo_phi(ring3):
    assert ring3.cyclo_phi(1).coeffs[:4] == (3, 3, 1, 0)
    phi2 = ring3.cyclo_phi(2)
    assert phi2.degree() == 6
    assert [c % 3 for c in phi2.coeffs[:7]] == [0, 0, 0, 0, 0, 0, 1]
    for n in (1, 2, 3):
        assert ring3.cyclo_phi(n).coeffs[0] == 3
    with pytest.raises(ValueError):
        ring3.cyclo_phi(0)


def test_omega_factorizes(ring3, ring5):
    for ring, top in ((ring3, 3), (ring5, 2)):
        for n in range(1, top + 1):
            assert ring.omega(n) == ring.cyclo_phi(n) * ring.omega(n - 1)
            product = ring.omega_pm(n, SIGN_PLUS) * ring.omega_pm(n, SIGN_MINUS) * ring.variable()
            assert product == ring.omega(n)


def test_omega_pm_small_levels(ring3):
    one = ring3.series_constant(1)
    assert ring3.omega_pm(0, SIGN_PLUS) == one
    assert ring3.omega_pm(0, SIGN_MINUS) == one
    assert ring3.omega_pm(1, SIGN_PLUS) == one
    assert ring3.omega_pm(1, SIGN_MINUS) == ring3.cyclo_phi(1)
    assert ring3.omega_pm(2, SIGN_PLUS) == ring3.cyclo_phi(2)
    assert ring3.omega_pm(2, SIGN_MINUS) == ring3.cyclo_phi(1)


# =============================================================================
# Reduction, projection, norm
# =============================================================================

def test_reduce_to_level(ring3):
    for n in range(4):
        assert reduce_to_level(ring3.omega(n), n).is_zero()
    t = reduce_to_level(ring3.variable(), 1)
    assert t.coeffs == (0, 1, 0)
    t_cubed = ring3.series([0, 0, 0, 1])
    assert _ints(reduce_to_level(t_cubed, 1), ring3.modulus) == [0, -3, -3]


def test_project(ring3):
    t_cubed = ring3.element(2, [0, 0, 0, 1])
    assert _ints(project(t_cubed), ring3.modulus) == [0, -3, -3]
    assert project(ring3.one(2) * 7) == ring3.one(1) * 7
    with pytest.raises(ValueError):
        project(ring3.one(0))


def test_norm_xi(ring3):
    assert norm_xi(ring3.one(0)) == reduce_to_level(ring3.cyclo_phi(1), 1)
    assert norm_xi(ring3.zero(1)).is_zero()
    assert norm_xi(ring3.zero(1)).level == 2


def test_project_of_norm_is_multiplication_by_p(ring5, rng):
    for n in range(2):
        for _ in range(100):
            x = random_element(ring5, n, rng)
            assert project(norm_xi(x)) == x * 5


def test_norm_of_project_is_multiplication_by_phi(ring3, rng):
    for n in range(3):
        phi = reduce_to_level(ring3.cyclo_phi(n + 1), n + 1)
        for _ in range(20):
            g = random_element(ring3, n + 1, rng)
            assert norm_xi(project(g)) == phi * g


def test_reduction_is_multiplicative(ring3, rng):
    for _ in range(30):
        P, Q = random_series(ring3, rng, 13), random_series(ring3, rng, 13)
        for n in range(4):
            assert reduce_to_level(P * Q, n) == reduce_to_level(P, n) * reduce_to_level(Q, n)


def test_lift_round_trips(ring3, rng):
    x = random_element(ring3, 1, rng)
    assert project(lift_to_level(x, 2)) == x
    assert x.lift(ring3.D).reduce_to_level(1) == x
    with pytest.raises(ValueError):
        lift_to_level(x, 0)


# =============================================================================
# Involution and group basis
# =============================================================================

def test_involution_examples(ring3):
    assert involution(ring3.one(2) * 5) == ring3.one(2) * 5
    one_plus_t = ring3.element(1, [1, 1])
    assert involution(one_plus_t).coeffs == (1, 2, 1)
    gamma_inverse = involution(ring3.element(2, [1, 1]))
    assert gamma_inverse.coeffs == tuple(comb(8, k) for k in range(9))
    assert gamma_inverse * ring3.element(2, [1, 1]) == ring3.one(2)


def test_involution_is_ring_involution(ring3, rng):
    for n in range(4):
        for _ in range(10):
            x, y = random_element(ring3, n, rng), random_element(ring3, n, rng)
            assert involution(involution(x)) == x
            assert involution(x * y) == involution(x) * involution(y)
            assert involution(x + y) == involution(x) + involution(y)


def test_involution_series():
    ring = LambdaRing(3, 6, 8)
    image = involution_series(ring.variable())
    assert _ints(image, ring.modulus) == [0] + [(-1) ** m for m in range(1, 9)]
    assert involution_series(ring.series_constant(1)) == ring.series_constant(1)


def test_involution_series_is_an_involution(ring3, rng):
    for _ in range(10):
        P = random_series(ring3, rng)
        assert involution_series(involution_series(P)) == P


def test_group_coefficients(ring3, rng):
    t = ring3.element(2, [0, 1])
    coeffs = [int(c) for c in to_group_coeffs(t)]
    assert coeffs[:2] == [ring3.modulus - 1, 1]
    assert not any(coeffs[2:])
    assert [int(c) for c in to_group_coeffs(ring3.one(1))] == [1, 0, 0]
    for _ in range(20):
        x = random_element(ring3, 2, rng)
        assert from_group_coeffs(3, ring3.N, 2, to_group_coeffs(x)) == x


# =============================================================================
# Construction and encoding
# =============================================================================

def test_level_length_is_enforced():
    with pytest.raises(ParameterMismatchError):
        FiniteLevelElt(3, 4, 1, (1, 2))


def test_mixed_levels_raise(ring3):
    with pytest.raises(ParameterMismatchError):
        ring3.one(1) + ring3.one(2)
    with pytest.raises(ParameterMismatchError):
        ring3.series_constant(1) * LambdaRing(3, 12, 9).series_constant(1)


def test_element_encoding(ring3, rng):
    x = random_element(ring3, 2, rng)
    assert element_from_dict(x.to_dict()) == x
    P = random_series(ring3, rng)
    assert element_from_dict(P.to_dict()) == P
    assert isinstance(element_from_dict(P.to_dict()), SeriesElt)


@pytest.mark.parametrize("payload", [
    {"p": 3, "N": 4, "level": 1, "coeffs": []},
    {"p": 3, "N": 4, "level": 1, "coeffs": ["1", "2"]},
    {"p": 3, "N": 4, "level": 1, "coeffs": ["1", "x", "0"]},
    {"p": 3, "N": 4, "level": 1, "coeffs": [1.9, 0, 0]},
    {"p": 3, "N": 4, "level": 1, "coeffs": [None, 0, 0]},
    {"p": 3, "N": 4, "level": 1, "coeffs": [True, 0, 0]},
    {"p": 4, "N": 4, "level": 1, "coeffs": ["1", "0", "0", "0"]},
    {"p": 3, "N": 0, "level": 0, "coeffs": ["1"]},
    {"p": 3, "N": 4, "coeffs": ["1"]},
    {"p": 3, "N": 4, "deg": 2, "coeffs": ["1", "0"]},
    ["not", "an", "object"],
])
def test_element_decoding_rejects_malformed(payload):
    with pytest.raises(ElementParseError):
        element_from_dict(payload)
