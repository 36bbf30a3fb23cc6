"""
Sharp/flat logarithm matrices.

    C_n = [[a_p, 1], [-Phi_n, 0]]      B = [[a_p, 1], [-p, 0]]
    H_n = C_n C_{n-1} ... C_1

The exact polynomial entries of H_n have degree < p^n, so building H_n as
C_n @ lift(H_{n-1}) at level n loses nothing.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np

from .algebra import (
    SIGN_MINUS,
    SIGN_PLUS,
    FiniteLevelElt,
    LambdaRing,
    SeriesElt,
    lift_to_level,
    reduce_to_level,
)
from .padic import PAdicScalar
from .types import ParameterMismatchError

logger = logging.getLogger(__name__)

Entry = Union[FiniteLevelElt, SeriesElt]


def _grid(a: Entry, b: Entry, c: Entry, d: Entry) -> np.ndarray:
    grid = np.empty((2, 2), dtype=object)
    grid[0, 0], grid[0, 1], grid[1, 0], grid[1, 1] = a, b, c, d
    return grid


@dataclass(frozen=True, eq=False)
class LambdaMatrix2x2:
    """A 2x2 matrix over Lambda_level, or over truncated Lambda when level is None."""
    entries: np.ndarray
    level: Optional[int] = None

    def __post_init__(self):
        if self.entries.shape != (2, 2):
            raise ValueError(f"expected a 2x2 grid, got shape {self.entries.shape}")
        keys = {_key(e) for e in self.entries.flat}
        if len(keys) != 1:
            raise ParameterMismatchError("matrix entries disagree", context=str(sorted(keys)))

    def __getitem__(self, index: Tuple[int, int]) -> Entry:
        return self.entries[index]

    def __matmul__(self, other: "LambdaMatrix2x2") -> "LambdaMatrix2x2":
        if self.level != other.level:
            raise ParameterMismatchError(
                "matrix levels disagree", context=f"{self.level} vs {other.level}"
            )
        return LambdaMatrix2x2(self.entries @ other.entries, self.level)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaMatrix2x2):
            return NotImplemented
        return self.level == other.level and all(
            a == b for a, b in zip(self.entries.flat, other.entries.flat)
        )

    def apply(self, x: Entry, y: Entry) -> Tuple[Entry, Entry]:
        e = self.entries
        return (e[0, 0] * x + e[0, 1] * y, e[1, 0] * x + e[1, 1] * y)

    def det(self) -> Entry:
        e = self.entries
        return e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]

    def reduce_to_level(self, n: int) -> "LambdaMatrix2x2":
        if self.level is not None:
            raise ValueError("matrix is already at a finite level")
        return LambdaMatrix2x2(_grid(*(reduce_to_level(e, n) for e in self.entries.flat)), n)

    def lift_to_level(self, n: int) -> "LambdaMatrix2x2":
        return LambdaMatrix2x2(_grid(*(lift_to_level(e, n) for e in self.entries.flat)), n)

    def congruent(self, other: "LambdaMatrix2x2", exponent: int) -> bool:
        """Entrywise congruence modulo p^exponent (finite-level matrices only)."""
        return all(
            a.congruent(b, exponent) for a, b in zip(self.entries.flat, other.entries.flat)
        )

    def to_dict(self):
        return {
            "level": self.level,
            "entries": [[self.entries[i, j].to_dict() for j in range(2)] for i in range(2)],
        }


def _key(e: Entry) -> tuple:
    if isinstance(e, FiniteLevelElt):
        return (e.p, e.N, "level", e.level)
    return (e.p, e.N, "deg", e.D)


def _check_scalar(ring: LambdaRing, a_p: PAdicScalar):
    if (a_p.p, a_p.N) != (ring.p, ring.N):
        raise ParameterMismatchError(
            "a_p disagrees with the ring", context=f"(p={a_p.p}, N={a_p.N}) vs (p={ring.p}, N={ring.N})"
        )


# =============================================================================
# Matrices
# =============================================================================

def c_matrix(ring: LambdaRing, n: int, a_p: PAdicScalar) -> LambdaMatrix2x2:
    """C_n over truncated Lambda."""
    if n < 1:
        raise ValueError("C_n is defined for n >= 1")
    _check_scalar(ring, a_p)
    return LambdaMatrix2x2(
        _grid(
            ring.series_constant(a_p),
            ring.series_constant(1),
            -ring.cyclo_phi(n),
            ring.series_constant(0),
        )
    )


def b_matrix(ring: LambdaRing, a_p: PAdicScalar) -> LambdaMatrix2x2:
    """B = [[a_p, 1], [-p, 0]]; C_{n+1} reduces to B modulo omega_n."""
    _check_scalar(ring, a_p)
    return LambdaMatrix2x2(
        _grid(
            ring.series_constant(a_p),
            ring.series_constant(1),
            ring.series_constant(-ring.p),
            ring.series_constant(0),
        )
    )


@lru_cache(maxsize=64)
def _h_chain(ring: LambdaRing, a_p: PAdicScalar, n_max: int) -> Tuple[LambdaMatrix2x2, ...]:
    if n_max == 1:
        return (c_matrix(ring, 1, a_p).reduce_to_level(1),)
    shorter = _h_chain(ring, a_p, n_max - 1)
    step = c_matrix(ring, n_max, a_p).reduce_to_level(n_max)
    logger.debug(f"built H_{n_max} for p={ring.p}, a_p={a_p.value}")
    return (*shorter, step @ shorter[-1].lift_to_level(n_max))


def h_matrices(ring: LambdaRing, a_p: PAdicScalar, n_max: int) -> Tuple[LambdaMatrix2x2, ...]:
    """(H_1, ..., H_{n_max}), H_n at level n."""
    if n_max < 1:
        raise ValueError("H_n is defined for n >= 1")
    _check_scalar(ring, a_p)
    ring.check_level(n_max)
    return _h_chain(ring, a_p, n_max)


def h_matrix(ring: LambdaRing, n: int, a_p: PAdicScalar) -> LambdaMatrix2x2:
    """H_n = C_n ... C_1 with entries in Lambda_n."""
    return h_matrices(ring, a_p, n)[-1]


def expected_h_matrix(ring: LambdaRing, n: int) -> LambdaMatrix2x2:
    """
    Closed form of H_n when a_p = 0:
        n even: (-1)^{n/2} diag(omega_n^-, omega_n^+)
        n odd:  (-1)^{(n-1)/2} [[0, omega_n^+], [-omega_n^-, 0]]
    """
    if n < 1:
        raise ValueError("H_n is defined for n >= 1")
    plus = ring.omega_pm(n, SIGN_PLUS).reduce_to_level(n)
    minus = ring.omega_pm(n, SIGN_MINUS).reduce_to_level(n)
    zero = ring.zero(n)
    if n % 2 == 0:
        sign = -1 if (n // 2) % 2 else 1
        return LambdaMatrix2x2(_grid(minus * sign, zero, zero, plus * sign), n)
    sign = -1 if ((n - 1) // 2) % 2 else 1
    return LambdaMatrix2x2(_grid(zero, plus * sign, -minus * sign, zero), n)


def apply_h(
    ring: LambdaRing, n: int, a_p: PAdicScalar, l_sharp: SeriesElt, l_flat: SeriesElt
) -> Tuple[FiniteLevelElt, FiniteLevelElt]:
    """H_n applied to the level-n images of (L_sharp, L_flat)."""
    return h_matrix(ring, n, a_p).apply(reduce_to_level(l_sharp, n), reduce_to_level(l_flat, n))
