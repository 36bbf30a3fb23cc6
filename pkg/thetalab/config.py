"""
Experiment configuration.

Every command builds one ExperimentConfig from its parsed flags. Only
explicit flags are honoured; there are no environment overrides.
"""

import argparse
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

from iwasawa.algebra import LambdaRing
from iwasawa.padic import DEFAULT_PRECISION, check_prime
from iwasawa.types import IwasawaError

DEFAULT_P = 5
DEFAULT_N_MAX = 4
DEFAULT_TRIALS = 100
DEFAULT_SEED = 1

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMATS = (FORMAT_JSON, FORMAT_CSV)

# Fields that only steer where and how fast output is produced; kept out of reports.
_RUNTIME_FIELDS = ("workers", "out", "fmt")


class ConfigError(IwasawaError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    p: int = DEFAULT_P
    precision: int = DEFAULT_PRECISION
    n_max: int = DEFAULT_N_MAX
    trunc: Optional[int] = None
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    a_p: Optional[int] = None
    mu: int = 0
    lam: int = 1
    perturb: Optional[str] = None
    workers: int = 1
    out: Optional[str] = None
    fmt: str = FORMAT_JSON

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "ExperimentConfig":
        defaults = cls()
        values = {
            name: getattr(args, name, getattr(defaults, name))
            for name in asdict(defaults)
        }
        return cls(**values)

    @property
    def D(self) -> int:
        """Truncation degree: --trunc, or p^n_max."""
        return self.trunc if self.trunc is not None else self.p ** self.n_max

    def ring(self) -> LambdaRing:
        return LambdaRing(self.p, self.precision, self.D)

    @property
    def perturbation(self) -> Optional[Tuple[int, int]]:
        """(level, index) of the negative-control perturbation, if any."""
        if self.perturb is None:
            return None
        level, _, index = self.perturb.partition(":")
        try:
            return int(level), int(index)
        except ValueError:
            raise ConfigError(f"perturb must be LEVEL:INDEX, got {self.perturb!r}")

    def validate(self, ordinary: Optional[bool] = None) -> "ExperimentConfig":
        """
        Check the configuration, raising ConfigError on the first problem.

        ordinary=True requires a unit a_p (when given), ordinary=False a non-unit one.
        """
        try:
            check_prime(self.p)
        except ValueError as e:
            raise ConfigError(str(e))
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.mu < 0 or self.lam < 0:
            raise ConfigError("target mu and lambda must be non-negative")
        if self.precision < 2 + self.mu:
            raise ConfigError(
                "precision must be at least 2 + mu", context=f"precision={self.precision}, mu={self.mu}"
            )
        if self.D < self.p ** self.n_max:
            raise ConfigError(
                f"truncation degree {self.D} is below p^n_max = {self.p ** self.n_max}"
            )
        if self.lam >= self.D:
            raise ConfigError(f"lambda must be below the truncation degree {self.D}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        if self.perturbation is not None:
            level, index = self.perturbation
            if self.n_max < 2:
                raise ConfigError("a perturbed family needs n_max >= 2")
            if not 0 <= level <= self.n_max or not 0 <= index < self.p ** level:
                raise ConfigError(
                    f"perturb {self.perturb} is outside theta_0..theta_{self.n_max}",
                    context="index must be below p^level",
                )
        if ordinary is not None and self.a_p is not None:
            is_unit = self.a_p % self.p != 0
            if ordinary and not is_unit:
                raise ConfigError(f"ordinary runs need a unit a_p, got {self.a_p}")
            if not ordinary and is_unit:
                raise ConfigError(f"non-ordinary runs need a_p divisible by p, got {self.a_p}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Report header: everything that determines the results."""
        data = asdict(self)
        for name in _RUNTIME_FIELDS:
            data.pop(name)
        data["trunc"] = self.D
        return data
