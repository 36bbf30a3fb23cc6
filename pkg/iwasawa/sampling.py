"""
Random draws over Z/p^N, Lambda_n and truncated Lambda.

Every draw takes a numpy Generator. Residues are drawn digit by digit in
base p, which is exactly uniform on [0, p^N) for any N.
"""

from typing import List, Optional

import numpy as np

from .algebra import FiniteLevelElt, LambdaRing, SeriesElt
from .padic import PAdicScalar


def _combine_digits(digits: List[int], p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def random_residues(rng: np.random.Generator, p: int, N: int, count: int) -> List[int]:
    """`count` independent uniform residues modulo p^N."""
    if count <= 0:
        return []
    table = rng.integers(0, p, size=(count, N)).tolist()
    return [_combine_digits(row, p) for row in table]


def random_scalar(rng: np.random.Generator, p: int, N: int) -> PAdicScalar:
    return PAdicScalar(p, N, random_residues(rng, p, N, 1)[0])


def random_unit(rng: np.random.Generator, p: int, N: int) -> PAdicScalar:
    """Uniform unit: nonzero lowest digit."""
    low = int(rng.integers(1, p))
    rest = random_residues(rng, p, N - 1, 1)[0] if N > 1 else 0
    return PAdicScalar(p, N, low + p * rest)


def random_element(ring: LambdaRing, level: int, rng: np.random.Generator) -> FiniteLevelElt:
    size = ring.p ** level
    return FiniteLevelElt(ring.p, ring.N, level, tuple(random_residues(rng, ring.p, ring.N, size)))


def random_series(
    ring: LambdaRing, rng: np.random.Generator, degree: Optional[int] = None
) -> SeriesElt:
    """Uniform series of degree <= degree (default: the truncation degree)."""
    top = ring.D if degree is None else min(degree, ring.D)
    return ring.series(random_residues(rng, ring.p, ring.N, top + 1))


def random_unit_series(ring: LambdaRing, rng: np.random.Generator) -> SeriesElt:
    """Series with a unit constant term, i.e. a unit of Lambda."""
    coeffs = random_residues(rng, ring.p, ring.N, ring.D + 1)
    coeffs[0] = random_unit(rng, ring.p, ring.N).value
    return ring.series(coeffs)
