"""
mu and lambda invariants.

At level n the reduction mod p of Lambda_n is F_p[T]/(T^{p^n}), so lambda is
the index of the lowest coefficient of x / p^mu that survives mod p. The
polynomial and group bases are related by a unipotent integral matrix, so mu
can be read off either one.
"""

import logging
from typing import Optional

import numpy as np

from .algebra import FiniteLevelElt, LambdaRing, SeriesElt, group_valuations
from .padic import int_valuation
from .sampling import random_residues, random_unit_series
from .types import InvariantResult, PrecisionExhaustedError

logger = logging.getLogger(__name__)


def _scan(coeffs, p: int, N: int):
    """(mu, lambda) of a coefficient vector, or None when every entry vanishes mod p^N."""
    best_mu = N
    best_lam = -1
    for j, c in enumerate(coeffs):
        if not c:
            continue
        v = int_valuation(c, p, N)
        if v < best_mu:
            best_mu, best_lam = v, j
            if v == 0:
                break
    if best_lam < 0:
        return None
    return best_mu, best_lam


def invariants(x: FiniteLevelElt) -> InvariantResult:
    """(mu, lambda) of a finite-level element; lambda < p^n always."""
    found = _scan(x.coeffs, x.p, x.N)
    if found is None:
        return InvariantResult.zero_at_precision()
    return InvariantResult.of(*found)


def mu(x: FiniteLevelElt) -> Optional[int]:
    """mu(x), or None when x is zero at the working precision."""
    return invariants(x).mu


def lambda_invariant(x: FiniteLevelElt) -> int:
    result = invariants(x)
    if result.is_zero:
        raise PrecisionExhaustedError(
            "lambda is undefined for an element that vanishes mod p^N",
            context=f"p={x.p}, N={x.N}, level={x.level}",
        )
    assert result.lam is not None
    return result.lam


def mu_group_basis(x: FiniteLevelElt) -> Optional[int]:
    """mu computed from the coefficients on gamma^0, ..., gamma^{p^n - 1}."""
    vals = group_valuations(x)
    low = min(vals)
    return None if low >= x.N else low


def invariants_series(P: SeriesElt) -> InvariantResult:
    """
    (mu, lambda) of a truncated series.

    A lambda at or beyond the truncation degree cannot be certified and is
    reported as lambda-exceeds-truncation.
    """
    found = _scan(P.coeffs, P.p, P.N)
    if found is None:
        return InvariantResult.zero_at_precision()
    mu_value, lam = found
    if lam >= P.D:
        return InvariantResult.lambda_truncated(mu_value)
    return InvariantResult.of(mu_value, lam)


def q(n: int, p: int) -> int:
    """
    q_n = p^{n-1} - p^{n-2} + ... + p - 1 for n even,
          p^{n-1} - p^{n-2} + ... + p^2 - p for n odd, q_0 = q_1 = 0.
    """
    if n < 0:
        raise ValueError(f"q_n needs n >= 0, got {n}")
    start = 0 if n % 2 == 0 else 1
    return sum((-1) ** (n - 1 - k) * p ** k for k in range(start, n))


def make_with_invariants(
    ring: LambdaRing, mu_value: int, lam: int, rng: np.random.Generator
) -> SeriesElt:
    """
    A random series p^mu * (T^lam + p*r(T)) * u(T) with deg r < lam and u a unit.

    Raises:
        ValueError: if mu >= N or lam is not below the truncation degree
    """
    if not 0 <= mu_value < ring.N:
        raise ValueError(f"mu must lie in [0, {ring.N}), got {mu_value}")
    if not 0 <= lam < ring.D:
        raise ValueError(f"lambda must lie in [0, {ring.D}), got {lam}")
    r = random_residues(rng, ring.p, ring.N, lam)
    distinguished = [ring.p * c for c in r] + [1]
    u = random_unit_series(ring, rng)
    result = ring.series(distinguished) * u * ring.p ** mu_value
    logger.debug(f"drew series with mu={mu_value} lambda={lam} (p={ring.p}, D={ring.D})")
    return result
