"""
Non-ordinary (sharp/flat) theorem experiment.

Each trial draws L_sharp and L_flat independently with the configured
(mu, lambda), builds theta_n through H_n and checks the lambda staircase
lambda(theta_n) = lambda(L^*) + q_n and the doubled identities.
"""

import logging
from typing import Any, Dict

import numpy as np

from iwasawa.invariants import make_with_invariants
from iwasawa.theta import verify_nonordinary_theorem

from ..config import ExperimentConfig
from . import ExperimentModule, register_experiment
from .base import CommandResult, config_schema, run_trials, theorem_result

logger = logging.getLogger(__name__)


COMMANDS = [
    {
        "name": "nonordinary",
        "description": "Check the sharp/flat lambda staircase on random (L_sharp, L_flat)",
        "inputSchema": config_schema(
            "p", "precision", "n_max", "trunc", "trials", "seed", "a_p", "mu", "lam", "perturb",
            "workers", "out", "fmt",
        ),
    },
]


def nonordinary_trial(index: int, seq: np.random.SeedSequence, config: ExperimentConfig) -> Dict[str, Any]:
    rng = np.random.default_rng(seq)
    ring = config.ring()
    a_p = ring.scalar(config.a_p if config.a_p is not None else 0)
    l_sharp = make_with_invariants(ring, config.mu, config.lam, rng)
    l_flat = make_with_invariants(ring, config.mu, config.lam, rng)
    report = verify_nonordinary_theorem(
        ring, l_sharp, l_flat, a_p, config.n_max, perturb=config.perturbation
    ).to_dict()
    report["trial"] = index
    report["a_p"] = str(a_p.value)
    return report


def cmd_nonordinary(config: ExperimentConfig) -> CommandResult:
    config.validate(ordinary=False)
    logger.info(
        f"nonordinary: {config.trials} trials at p={config.p}, n_max={config.n_max}, "
        f"mu={config.mu}, lambda={config.lam}"
    )
    return theorem_result("nonordinary", config, run_trials(nonordinary_trial, config))


def execute(config: ExperimentConfig, command: str, args: Dict[str, Any]) -> CommandResult:
    """Execute a non-ordinary experiment command."""
    if command == "nonordinary":
        return cmd_nonordinary(config)
    raise ValueError(f"Unknown command: {command}")


register_experiment(ExperimentModule(
    name="nonordinary",
    description="Non-ordinary (a_p divisible by p) sharp/flat families",
    commands=COMMANDS,
    execute=execute,
))
