"""
Fixed-precision p-adic integers.

Elements of Z_p are stored as residues modulo p^N for a single absolute
precision N. Valuations are capped at N, so the zero residue has valuation N.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

from sympy import isprime, multiplicity

from .types import NonUnitError, OrdinarityError, ParameterMismatchError

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 20


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return p if it is an odd prime, raise ValueError otherwise."""
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise ValueError(f"p must be an odd prime >= 3, got {p!r}")
    return p


def int_valuation(value: int, p: int, cap: int) -> int:
    """ord_p(value) capped at cap; the zero residue gets cap."""
    if value == 0:
        return cap
    return min(int(multiplicity(p, value)), cap)


@dataclass(frozen=True)
class PAdicScalar:
    """A residue class modulo p^N."""
    p: int
    N: int
    value: int = 0

    def __post_init__(self):
        check_prime(self.p)
        if self.N < 1:
            raise ValueError(f"precision must be positive, got {self.N}")
        object.__setattr__(self, "value", self.value % self.p ** self.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    # -------------------------------------------------------------------------
    # Arithmetic
    # -------------------------------------------------------------------------

    def _coerce(self, other) -> "PAdicScalar":
        if isinstance(other, int):
            return PAdicScalar(self.p, self.N, other)
        if not isinstance(other, PAdicScalar):
            return NotImplemented
        if other.p != self.p or other.N != self.N:
            raise ParameterMismatchError(
                "p-adic operands disagree",
                context=f"(p={self.p}, N={self.N}) vs (p={other.p}, N={other.N})",
            )
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdicScalar(self.p, self.N, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdicScalar(self.p, self.N, self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdicScalar(self.p, self.N, other.value - self.value)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PAdicScalar(self.p, self.N, self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self) -> "PAdicScalar":
        return PAdicScalar(self.p, self.N, -self.value)

    def __int__(self) -> int:
        return self.value

    # -------------------------------------------------------------------------
    # Valuation and units
    # -------------------------------------------------------------------------

    def valuation(self) -> int:
        return int_valuation(self.value, self.p, self.N)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> "PAdicScalar":
        return invert_unit(self)

    def __str__(self) -> str:
        return f"{self.value} mod {self.p}^{self.N}"


def add(a: PAdicScalar, b: PAdicScalar) -> PAdicScalar:
    return a + b


def sub(a: PAdicScalar, b: PAdicScalar) -> PAdicScalar:
    return a - b


def mul(a: PAdicScalar, b: PAdicScalar) -> PAdicScalar:
    return a * b


def valuation(a: PAdicScalar) -> int:
    """Largest k <= N with p^k dividing the residue."""
    return a.valuation()


def invert_unit(a: PAdicScalar) -> PAdicScalar:
    """Inverse of a unit modulo p^N."""
    if not a.is_unit():
        raise NonUnitError(f"{a} is not a unit", context=f"p={a.p}")
    return PAdicScalar(a.p, a.N, pow(a.value, -1, a.modulus))


def unit_root(a_p: PAdicScalar) -> PAdicScalar:
    """
    The unit root alpha of X^2 - a_p X + p.

    Newton iteration from the seed alpha = a_p mod p. The derivative at the
    seed is a_p itself, a unit, so every step doubles the precision.

    Raises:
        OrdinarityError: if a_p is divisible by p
    """
    if not a_p.is_unit():
        raise OrdinarityError(
            "unit root requires an ordinary a_p", context=f"a_p={a_p.value}, p={a_p.p}"
        )
    p, modulus = a_p.p, a_p.modulus
    a = a_p.value
    x = a % p
    steps = 0
    while True:
        f = (x * x - a * x + p) % modulus
        if f == 0:
            break
        x = (x - f * pow(2 * x - a, -1, modulus)) % modulus
        steps += 1
    logger.debug(f"unit root of X^2 - {a}X + {p} mod {p}^{a_p.N} after {steps} Newton steps")
    return PAdicScalar(p, a_p.N, x)


def companion_root(a_p: PAdicScalar, alpha: PAdicScalar) -> PAdicScalar:
    """beta = a_p - alpha, the non-unit root; alpha * beta == p."""
    return a_p - alpha
