"""
Ordinary theorem experiment.

Each trial draws a unit a_p (unless --a-p is fixed), random seeds theta_0 and
theta_1, random lifts up to n_max, and checks mu(theta_n) = 0 and
2 lambda(theta_n) = lambda(L_p mod omega_n) past the stabilization level.
"""

import logging
from typing import Any, Dict

import numpy as np

from iwasawa.sampling import random_element, random_unit
from iwasawa.theta import build_ordinary_family, verify_ordinary_theorem

from ..config import ExperimentConfig
from . import ExperimentModule, register_experiment
from .base import CommandResult, config_schema, run_trials, theorem_result

logger = logging.getLogger(__name__)


COMMANDS = [
    {
        "name": "ordinary",
        "description": "Check the ordinary mu/lambda theorem on random theta families",
        "inputSchema": config_schema(
            "p", "precision", "n_max", "trunc", "trials", "seed", "a_p", "perturb", "workers", "out", "fmt",
        ),
    },
]


def ordinary_trial(index: int, seq: np.random.SeedSequence, config: ExperimentConfig) -> Dict[str, Any]:
    rng = np.random.default_rng(seq)
    ring = config.ring()
    if config.a_p is None:
        a_p = random_unit(rng, ring.p, ring.N)
    else:
        a_p = ring.scalar(config.a_p)
    theta0 = random_element(ring, 0, rng)
    theta1 = random_element(ring, 1, rng)
    fam = build_ordinary_family(ring, theta0, theta1, a_p, config.n_max, rng=rng, seed=index)
    if config.perturbation is not None:
        fam = fam.perturbed(*config.perturbation)
    report = verify_ordinary_theorem(fam).to_dict()
    report["trial"] = index
    report["a_p"] = str(a_p.value)
    return report


def cmd_ordinary(config: ExperimentConfig) -> CommandResult:
    config.validate(ordinary=True)
    logger.info(f"ordinary: {config.trials} trials at p={config.p}, n_max={config.n_max}")
    return theorem_result("ordinary", config, run_trials(ordinary_trial, config))


def execute(config: ExperimentConfig, command: str, args: Dict[str, Any]) -> CommandResult:
    """Execute an ordinary experiment command."""
    if command == "ordinary":
        return cmd_ordinary(config)
    raise ValueError(f"Unknown command: {command}")


register_experiment(ExperimentModule(
    name="ordinary",
    description="Ordinary (unit a_p) theta families",
    commands=COMMANDS,
    execute=execute,
))
