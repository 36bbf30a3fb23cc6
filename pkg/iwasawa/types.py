"""
Iwasawa library type definitions.

Result records shared by the invariant calculus, the theta-family
verifiers and the experiment runner, plus the library exception tree.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


# =============================================================================
# Invariant results
# =============================================================================

STATUS_OK = "ok"
STATUS_ZERO = "zero-at-precision"
STATUS_LAMBDA_TRUNCATED = "lambda-exceeds-truncation"


@dataclass(frozen=True)
class InvariantResult:
    """The pair (mu, lambda), or a marker saying why it is unavailable."""
    mu: Optional[int] = None
    lam: Optional[int] = None
    status: str = STATUS_OK

    @classmethod
    def of(cls, mu: int, lam: int) -> "InvariantResult":
        return cls(mu=mu, lam=lam, status=STATUS_OK)

    @classmethod
    def zero_at_precision(cls) -> "InvariantResult":
        return cls(status=STATUS_ZERO)

    @classmethod
    def lambda_truncated(cls, mu: int) -> "InvariantResult":
        return cls(mu=mu, status=STATUS_LAMBDA_TRUNCATED)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @property
    def is_zero(self) -> bool:
        return self.status == STATUS_ZERO

    def pair(self) -> Tuple[int, int]:
        """Return (mu, lambda), raising if the result is a marker."""
        self.require()
        assert self.mu is not None and self.lam is not None
        return (self.mu, self.lam)

    def require(self) -> "InvariantResult":
        """Raise the exception matching a marker result; return self otherwise."""
        if self.status == STATUS_ZERO:
            raise PrecisionExhaustedError("element is zero at the working precision")
        if self.status == STATUS_LAMBDA_TRUNCATED:
            raise TruncationError(
                "lambda is not certified below the truncation degree",
                context=f"mu={self.mu}",
            )
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {"mu": self.mu, "lambda": self.lam, "status": self.status}

    def __str__(self) -> str:
        if self.ok:
            return f"mu={self.mu} lambda={self.lam}"
        return self.status


# =============================================================================
# Verification reports
# =============================================================================

VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_HYPOTHESIS = "hypothesis-not-met"
VERDICT_BEFORE_STABLE = "before-stabilization"
VERDICT_BELOW_THRESHOLD = "below-threshold"


@dataclass
class LevelRow:
    """One line of a staircase table."""
    n: int
    parity: str
    mu_theta: Optional[int] = None
    lambda_theta: Optional[int] = None
    q_n: int = 0
    mu_L: Optional[int] = None
    lambda_L: Optional[int] = None
    expected_lambda: Optional[int] = None
    verdict: str = VERDICT_PASS
    detail: str = ""
    checks: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "parity": self.parity,
            "mu_theta": self.mu_theta,
            "lambda_theta": self.lambda_theta,
            "q_n": self.q_n,
            "mu_L": self.mu_L,
            "lambda_L": self.lambda_L,
            "expected_lambda": self.expected_lambda,
            "verdict": self.verdict,
            "detail": self.detail,
            "checks": dict(self.checks),
        }


@dataclass
class TheoremReport:
    """Outcome of a theorem verifier over one family."""
    theorem: str
    verdict: str = VERDICT_PASS
    reason: str = ""
    rows: List[LevelRow] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.verdict == VERDICT_FAIL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "reason": self.reason,
            "rows": [row.to_dict() for row in self.rows],
            "extra": dict(self.extra),
        }


@dataclass
class ThreeTermReport:
    """Outcome of checking the three-term relation at every admissible level."""
    passed: bool
    checked_levels: List[int] = field(default_factory=list)
    failed_level: Optional[int] = None
    failed_index: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checked_levels": list(self.checked_levels),
            "failed_level": self.failed_level,
            "failed_index": self.failed_index,
        }


# =============================================================================
# Exceptions
# =============================================================================

class IwasawaError(Exception):
    """Base exception for the Iwasawa library."""

    def __init__(self, message: str, context: str = ""):
        super().__init__(message if not context else f"{message} ({context})")
        self.message = message
        self.context = context


class ParameterMismatchError(IwasawaError):
    """Operands disagree on prime, precision, level or truncation degree."""


class NonUnitError(IwasawaError):
    """A unit was required but the value is divisible by p."""


class OrdinarityError(IwasawaError):
    """The operation needs an ordinary (resp. non-ordinary) a_p."""


class TruncationError(IwasawaError):
    """The truncation degree cannot hold or certify the requested data."""


class PrecisionExhaustedError(IwasawaError):
    """Every coefficient vanishes at the working precision."""


class ElementParseError(IwasawaError):
    """A serialized element could not be decoded."""
