"""
Finite-level Iwasawa algebras.

Lambda_n = Z_p[G_n] is modelled as Z/p^N[T]/(omega_n) with omega_n = (1+T)^{p^n} - 1,
via gamma -> 1+T. Elements of Lambda = Z_p[[T]] are truncated at a fixed degree D.

Usage:
    from iwasawa.algebra import LambdaRing

    ring = LambdaRing(p=5, N=20, D=125)
    phi = ring.cyclo_phi(2).reduce_to_level(2)
    xi = phi.norm_xi()          # level 3
    assert xi.project() == phi * 5

Coefficients are plain integers reduced modulo p^N, lowest degree first.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Any, Dict, List, Sequence, Tuple, Union

from .padic import DEFAULT_PRECISION, PAdicScalar, check_prime, int_valuation
from .types import ElementParseError, ParameterMismatchError, TruncationError

logger = logging.getLogger(__name__)

Scalar = Union[int, PAdicScalar]


# =============================================================================
# Polynomial kernels (integer coefficient lists, lowest degree first)
# =============================================================================

def _trimmed_len(coeffs: Sequence[int]) -> int:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return n


def _poly_mul(a: Sequence[int], b: Sequence[int], modulus: int, limit: int = 0) -> List[int]:
    """Schoolbook product mod modulus, keeping at most `limit` coefficients if limit > 0."""
    la, lb = _trimmed_len(a), _trimmed_len(b)
    if la == 0 or lb == 0:
        return []
    size = la + lb - 1
    if limit:
        size = min(size, limit)
    out = [0] * size
    for i in range(min(la, size)):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, size - i)
        for j in range(top):
            out[i + j] += ai * b[j]
    return [v % modulus for v in out]


@lru_cache(maxsize=None)
def _omega_coeffs(p: int, n: int, modulus: int) -> Tuple[int, ...]:
    """Coefficients of (1+T)^{p^n} - 1, length p^n + 1."""
    e = p ** n
    coeffs = [comb(e, k) % modulus for k in range(e + 1)]
    coeffs[0] = 0
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _phi_coeffs(p: int, n: int, modulus: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n = sum_{a<p} (1+T)^{a p^{n-1}}, degree p^n - p^{n-1}."""
    step = p ** (n - 1)
    top = (p - 1) * step
    return tuple(
        sum(comb(a * step, k) for a in range(p)) % modulus for k in range(top + 1)
    )


def _rem_omega(coeffs: Sequence[int], p: int, n: int, modulus: int) -> List[int]:
    """Remainder of a polynomial modulo omega_n, padded to length p^n."""
    d = p ** n
    rem = [c % modulus for c in coeffs]
    top = _trimmed_len(rem)
    if top <= d:
        head = rem[:d]
        return head + [0] * (d - len(head))
    w = _omega_coeffs(p, n, modulus)
    for i in range(top - 1, d - 1, -1):
        c = rem[i]
        if not c:
            continue
        base = i - d
        for k in range(1, d):
            wk = w[k]
            if wk:
                rem[base + k] = (rem[base + k] - c * wk) % modulus
        rem[i] = 0
    return rem[:d]


def _to_group(coeffs: Sequence[int], modulus: int) -> List[int]:
    """Polynomial basis {T^j} -> group basis {(1+T)^i}, using T^j = sum_i C(j,i) (-1)^{j-i} (1+T)^i."""
    d = len(coeffs)
    out = [0] * d
    row = [1]
    for j in range(d):
        if j:
            row = [1] + [(row[i - 1] + row[i]) % modulus for i in range(1, j)] + [1]
        aj = coeffs[j]
        if not aj:
            continue
        for i in range(j + 1):
            if (j - i) & 1:
                out[i] -= aj * row[i]
            else:
                out[i] += aj * row[i]
    return [v % modulus for v in out]


def _from_group(coeffs: Sequence[int], modulus: int) -> List[int]:
    """Group basis -> polynomial basis, using (1+T)^i = sum_j C(i,j) T^j."""
    d = len(coeffs)
    out = [0] * d
    row = [1]
    for i in range(d):
        if i:
            row = [1] + [(row[j - 1] + row[j]) % modulus for j in range(1, i)] + [1]
        ci = coeffs[i]
        if not ci:
            continue
        for j in range(i + 1):
            out[j] += ci * row[j]
    return [v % modulus for v in out]


def _scalar_value(c: Scalar, p: int, N: int) -> int:
    if isinstance(c, PAdicScalar):
        if c.p != p or c.N != N:
            raise ParameterMismatchError(
                "scalar disagrees with element", context=f"(p={c.p}, N={c.N}) vs (p={p}, N={N})"
            )
        return c.value
    return int(c)


# =============================================================================
# Truncated power series
# =============================================================================

@dataclass(frozen=True)
class SeriesElt:
    """An element of Z_p[[T]] known up to T^D (coeffs has length D + 1)."""
    p: int
    N: int
    D: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.D < 0:
            raise ValueError(f"truncation degree must be >= 0, got {self.D}")
        modulus = self.p ** self.N
        values = [int(c) % modulus for c in self.coeffs[: self.D + 1]]
        values += [0] * (self.D + 1 - len(values))
        object.__setattr__(self, "coeffs", tuple(values))

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def _check(self, other: "SeriesElt"):
        if (self.p, self.N, self.D) != (other.p, other.N, other.D):
            raise ParameterMismatchError(
                "series operands disagree",
                context=f"(p,N,D)=({self.p},{self.N},{self.D}) vs ({other.p},{other.N},{other.D})",
            )

    def _new(self, coeffs: Sequence[int]) -> "SeriesElt":
        return SeriesElt(self.p, self.N, self.D, tuple(coeffs))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, SeriesElt):
            return NotImplemented
        self._check(other)
        return self._new([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, SeriesElt):
            return NotImplemented
        self._check(other)
        return self._new([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "SeriesElt":
        return self._new([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, PAdicScalar)):
            c = _scalar_value(other, self.p, self.N)
            return self._new([c * a for a in self.coeffs])
        if not isinstance(other, SeriesElt):
            return NotImplemented
        self._check(other)
        return self._new(_poly_mul(self.coeffs, other.coeffs, self.modulus, limit=self.D + 1))

    def __rmul__(self, other):
        if isinstance(other, (int, PAdicScalar)):
            return self * other
        return NotImplemented

    def degree(self) -> int:
        """Index of the last nonzero coefficient, -1 for zero."""
        return _trimmed_len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def reduce_to_level(self, n: int) -> "FiniteLevelElt":
        return reduce_to_level(self, n)

    def involution(self) -> "SeriesElt":
        return involution_series(self)

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "N": self.N, "deg": self.D, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "SeriesElt":
        p, N = _parse_header(d)
        D = _parse_int(d, "deg")
        if D < 0:
            raise ElementParseError(f"degree must be >= 0, got {D}")
        coeffs = _parse_coeffs(d, D + 1)
        return cls(p, N, D, tuple(coeffs))


# =============================================================================
# Finite-level group algebra elements
# =============================================================================

@dataclass(frozen=True)
class FiniteLevelElt:
    """An element of Lambda_n = Z_p[T]/(omega_n); coeffs has length p^level."""
    p: int
    N: int
    level: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        size = self.p ** self.level
        if len(self.coeffs) != size:
            raise ParameterMismatchError(
                f"level {self.level} needs exactly {size} coefficients",
                context=f"got {len(self.coeffs)}",
            )
        modulus = self.p ** self.N
        object.__setattr__(self, "coeffs", tuple(int(c) % modulus for c in self.coeffs))

    @classmethod
    def from_poly(cls, p: int, N: int, level: int, coeffs: Sequence[int]) -> "FiniteLevelElt":
        """Image of an arbitrary polynomial in Lambda_level."""
        return cls(p, N, level, tuple(_rem_omega(coeffs, p, level, p ** N)))

    @classmethod
    def constant(cls, p: int, N: int, level: int, c: Scalar = 1) -> "FiniteLevelElt":
        coeffs = [0] * p ** level
        coeffs[0] = _scalar_value(c, p, N)
        return cls(p, N, level, tuple(coeffs))

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @property
    def size(self) -> int:
        return self.p ** self.level

    def _check(self, other: "FiniteLevelElt"):
        if (self.p, self.N, self.level) != (other.p, other.N, other.level):
            raise ParameterMismatchError(
                "finite-level operands disagree",
                context=f"(p,N,n)=({self.p},{self.N},{self.level}) vs ({other.p},{other.N},{other.level})",
            )

    def _new(self, coeffs: Sequence[int]) -> "FiniteLevelElt":
        return FiniteLevelElt(self.p, self.N, self.level, tuple(coeffs))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, FiniteLevelElt):
            return NotImplemented
        self._check(other)
        return self._new([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, FiniteLevelElt):
            return NotImplemented
        self._check(other)
        return self._new([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "FiniteLevelElt":
        return self._new([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, PAdicScalar)):
            c = _scalar_value(other, self.p, self.N)
            return self._new([c * a for a in self.coeffs])
        if not isinstance(other, FiniteLevelElt):
            return NotImplemented
        self._check(other)
        product = _poly_mul(self.coeffs, other.coeffs, self.modulus)
        return self._new(_rem_omega(product, self.p, self.level, self.modulus))

    def __rmul__(self, other):
        if isinstance(other, (int, PAdicScalar)):
            return self * other
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def congruent(self, other: "FiniteLevelElt", exponent: int) -> bool:
        """True when self == other modulo p^exponent, coefficientwise."""
        self._check(other)
        m = self.p ** min(exponent, self.N)
        return all((a - b) % m == 0 for a, b in zip(self.coeffs, other.coeffs))

    def lift(self, D: int) -> SeriesElt:
        """Canonical lift: the representative of degree < p^level as a series."""
        if D + 1 < self.size:
            raise TruncationError(
                f"truncation degree {D} cannot hold a level-{self.level} lift"
            )
        return SeriesElt(self.p, self.N, D, self.coeffs)

    def project(self) -> "FiniteLevelElt":
        return project(self)

    def norm_xi(self) -> "FiniteLevelElt":
        return norm_xi(self)

    def involution(self) -> "FiniteLevelElt":
        return involution(self)

    def to_group_coeffs(self) -> List[PAdicScalar]:
        return to_group_coeffs(self)

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "N": self.N, "level": self.level, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "FiniteLevelElt":
        p, N = _parse_header(d)
        level = _parse_int(d, "level")
        if level < 0:
            raise ElementParseError(f"level must be >= 0, got {level}")
        coeffs = _parse_coeffs(d, p ** level)
        return cls(p, N, level, tuple(coeffs))


# =============================================================================
# Structural maps
# =============================================================================

def reduce_to_level(P: SeriesElt, n: int) -> FiniteLevelElt:
    """Image of P in Lambda_n: exact remainder of the truncated polynomial modulo omega_n."""
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    return FiniteLevelElt(P.p, P.N, n, tuple(_rem_omega(P.coeffs, P.p, n, P.modulus)))


def project(x: FiniteLevelElt) -> FiniteLevelElt:
    """The natural projection Lambda_{n+1} -> Lambda_n."""
    if x.level < 1:
        raise ValueError("cannot project a level-0 element")
    n = x.level - 1
    return FiniteLevelElt(x.p, x.N, n, tuple(_rem_omega(x.coeffs, x.p, n, x.modulus)))


def norm_xi(x: FiniteLevelElt) -> FiniteLevelElt:
    """
    The norm Lambda_n -> Lambda_{n+1}: Phi_{n+1} times the canonical lift.

    deg(lift) + deg(Phi_{n+1}) < p^{n+1}, so the product needs no reduction.
    """
    n = x.level
    phi = _phi_coeffs(x.p, n + 1, x.modulus)
    product = _poly_mul(x.coeffs, phi, x.modulus)
    size = x.p ** (n + 1)
    return FiniteLevelElt(x.p, x.N, n + 1, tuple(product + [0] * (size - len(product))))


def lift_to_level(x: FiniteLevelElt, level: int) -> FiniteLevelElt:
    """Canonical lift of x into Lambda_level (level >= x.level), same coefficients zero-padded."""
    if level < x.level:
        raise ValueError(f"cannot lift a level-{x.level} element to level {level}")
    size = x.p ** level
    return FiniteLevelElt(x.p, x.N, level, x.coeffs + (0,) * (size - x.size))


def involution(x: FiniteLevelElt) -> FiniteLevelElt:
    """gamma -> gamma^{-1} on Lambda_n, i.e. (1+T) -> (1+T)^{p^n - 1}."""
    group = _to_group(x.coeffs, x.modulus)
    size = len(group)
    flipped = [group[0]] + [group[size - i] for i in range(1, size)]
    return FiniteLevelElt(x.p, x.N, x.level, tuple(_from_group(flipped, x.modulus)))


def involution_series(P: SeriesElt) -> SeriesElt:
    """
    P(T) -> P((1+T)^{-1} - 1), truncated at T^D.

    The coefficient of T^m (m >= 1) is (-1)^m sum_{j=1}^{m} b_j C(m-1, j-1).
    """
    modulus = P.modulus
    b = P.coeffs
    out = [b[0]]
    row = [1]
    for m in range(1, P.D + 1):
        if m > 1:
            row = [1] + [(row[i - 1] + row[i]) % modulus for i in range(1, m - 1)] + [1]
        total = sum(b[j] * row[j - 1] for j in range(1, m + 1) if b[j])
        out.append(-total if m & 1 else total)
    return SeriesElt(P.p, P.N, P.D, tuple(out))


def to_group_coeffs(x: FiniteLevelElt) -> List[PAdicScalar]:
    """Coefficients of x in the basis gamma^0, ..., gamma^{p^n - 1}."""
    return [PAdicScalar(x.p, x.N, c) for c in _to_group(x.coeffs, x.modulus)]


def from_group_coeffs(p: int, N: int, level: int, coeffs: Sequence[Scalar]) -> FiniteLevelElt:
    """Inverse of to_group_coeffs."""
    values = [_scalar_value(c, p, N) % p ** N for c in coeffs]
    return FiniteLevelElt(p, N, level, tuple(_from_group(values, p ** N)))


def group_valuations(x: FiniteLevelElt) -> List[int]:
    return [int_valuation(c, x.p, x.N) for c in _to_group(x.coeffs, x.modulus)]


# =============================================================================
# Ring context
# =============================================================================

SIGN_PLUS = "+"
SIGN_MINUS = "-"


@dataclass(frozen=True)
class LambdaRing:
    """Working parameters (p, N, D) and the distinguished elements omega_n, Phi_n, omega_n^+-."""
    p: int
    N: int = DEFAULT_PRECISION
    D: int = 0

    def __post_init__(self):
        check_prime(self.p)
        if self.N < 1:
            raise ValueError(f"precision must be positive, got {self.N}")
        if self.D < 0:
            raise ValueError(f"truncation degree must be >= 0, got {self.D}")

    @classmethod
    def for_levels(cls, p: int, N: int = DEFAULT_PRECISION, n_max: int = 4) -> "LambdaRing":
        """Smallest truncation that reaches level n_max."""
        return cls(p, N, p ** n_max)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def check_level(self, n: int):
        if n < 0:
            raise ValueError(f"level must be >= 0, got {n}")
        if self.p ** n > self.D:
            raise TruncationError(
                f"truncation degree {self.D} is too small for level {n}",
                context=f"need D >= {self.p ** n}",
            )

    # -------------------------------------------------------------------------
    # Constructors
    # -------------------------------------------------------------------------

    def scalar(self, value: int) -> PAdicScalar:
        return PAdicScalar(self.p, self.N, value)

    def series(self, coeffs: Sequence[Scalar]) -> SeriesElt:
        return SeriesElt(self.p, self.N, self.D, tuple(_scalar_value(c, self.p, self.N) for c in coeffs))

    def series_constant(self, c: Scalar = 1) -> SeriesElt:
        return self.series([c])

    def variable(self) -> SeriesElt:
        return self.series([0, 1])

    def element(self, level: int, coeffs: Sequence[Scalar]) -> FiniteLevelElt:
        """Image in Lambda_level of the polynomial with these coefficients."""
        values = [_scalar_value(c, self.p, self.N) for c in coeffs]
        return FiniteLevelElt.from_poly(self.p, self.N, level, values)

    def zero(self, level: int) -> FiniteLevelElt:
        return FiniteLevelElt.constant(self.p, self.N, level, 0)

    def one(self, level: int) -> FiniteLevelElt:
        return FiniteLevelElt.constant(self.p, self.N, level, 1)

    # -------------------------------------------------------------------------
    # Distinguished elements
    # -------------------------------------------------------------------------

    def omega(self, n: int) -> SeriesElt:
        """omega_n = (1+T)^{p^n} - 1."""
        self.check_level(n)
        return self.series(_omega_coeffs(self.p, n, self.modulus))

    def cyclo_phi(self, n: int) -> SeriesElt:
        """Phi_n = omega_n / omega_{n-1}."""
        if n < 1:
            raise ValueError("Phi_n is defined for n >= 1")
        self.check_level(n)
        return self.series(_phi_coeffs(self.p, n, self.modulus))

    def omega_pm(self, n: int, sign: str) -> SeriesElt:
        """Product of Phi_j over even (sign '+') or odd (sign '-') j in 1..n."""
        if sign not in (SIGN_PLUS, SIGN_MINUS):
            raise ValueError(f"sign must be '+' or '-', got {sign!r}")
        self.check_level(n)
        parity = 0 if sign == SIGN_PLUS else 1
        result = self.series_constant(1)
        for j in range(1, n + 1):
            if j % 2 == parity:
                result = result * self.cyclo_phi(j)
        return result


# =============================================================================
# JSON decoding
# =============================================================================

def _parse_int(d: Dict[str, Any], key: str) -> int:
    value = d.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ElementParseError(f"field {key!r} must be an integer", context=f"got {value!r}")
    return value


def _parse_header(d: Dict[str, Any]) -> Tuple[int, int]:
    if not isinstance(d, dict):
        raise ElementParseError("element encoding must be a JSON object")
    p = _parse_int(d, "p")
    N = _parse_int(d, "N")
    try:
        check_prime(p)
    except ValueError as e:
        raise ElementParseError(str(e))
    if N < 1:
        raise ElementParseError(f"precision must be positive, got {N}")
    return p, N


def _parse_coeffs(d: Dict[str, Any], expected: int) -> List[int]:
    raw = d.get("coeffs")
    if not isinstance(raw, list) or not raw:
        raise ElementParseError("field 'coeffs' must be a non-empty list")
    if len(raw) != expected:
        raise ElementParseError(
            f"expected {expected} coefficients", context=f"got {len(raw)}"
        )
    values = []
    for i, c in enumerate(raw):
        if isinstance(c, bool) or not isinstance(c, (str, int)):
            raise ElementParseError(f"coefficient {i} is not an integer string", context=repr(c))
        try:
            values.append(int(c))
        except (TypeError, ValueError):
            raise ElementParseError(f"coefficient {i} is not an integer string", context=repr(c))
    return values


def element_from_dict(d: Dict[str, Any]) -> Union[FiniteLevelElt, SeriesElt]:
    """Decode {"p", "N", "level"|"deg", "coeffs"}."""
    if isinstance(d, dict) and "level" in d:
        return FiniteLevelElt.from_dict(d)
    if isinstance(d, dict) and "deg" in d:
        return SeriesElt.from_dict(d)
    raise ElementParseError("element encoding needs a 'level' or a 'deg' field")
