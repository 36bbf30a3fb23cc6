"""
Lemma suite.

Structural identities of Lambda_n and the invariant calculus, checked on
seeded random draws. Randomized properties work at levels <= 3 (or n_max if
smaller); the fixed identities for omega_n, Phi_n, omega_n^+- and H_n run once
up to n_max.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from iwasawa.algebra import (
    SIGN_MINUS,
    SIGN_PLUS,
    FiniteLevelElt,
    LambdaRing,
    involution,
    involution_series,
    norm_xi,
    project,
    reduce_to_level,
)
from iwasawa.invariants import (
    invariants,
    invariants_series,
    make_with_invariants,
    mu_group_basis,
    q,
)
from iwasawa.sampling import random_element, random_series, random_unit
from iwasawa.sprung import apply_h, expected_h_matrix, h_matrix

from ..config import ExperimentConfig
from . import ExperimentModule, register_experiment
from .base import EXIT_FAIL, EXIT_OK, CommandResult, config_schema, run_trials

logger = logging.getLogger(__name__)

PASS = "pass"
SKIP = "skip"
FAIL = "fail"

SUITE_LEVEL_CAP = 3

COLUMNS = ["property", PASS, FAIL, SKIP, "first_failure"]

COMMANDS = [
    {
        "name": "verify-lemmas",
        "description": "Run the structural lemma suite on seeded random draws",
        "inputSchema": config_schema(
            "p", "precision", "n_max", "trunc", "trials", "seed", "workers", "out", "fmt",
        ),
    },
]

# A check returns None on success, SKIP when its guard is not met, or a failure detail.
Check = Callable[[LambdaRing, np.random.Generator], Optional[str]]


@dataclass
class Property:
    name: str
    check: Check
    description: str = ""


# =============================================================================
# Draw helpers
# =============================================================================

def _level(rng: np.random.Generator, low: int, high: int) -> int:
    return int(rng.integers(low, high + 1))


def _cap(ring: LambdaRing) -> int:
    n = 0
    while ring.p ** (n + 1) <= ring.D:
        n += 1
    return n


def _drawn(ring: LambdaRing, level: int, rng: np.random.Generator, max_mu: int = 2,
           lam_bound: Optional[int] = None) -> FiniteLevelElt:
    """Level-n image of a series with random small mu and lambda < lam_bound (default p^level)."""
    bound = lam_bound if lam_bound is not None else ring.p ** level
    mu_value = _level(rng, 0, min(max_mu, ring.N - 1))
    lam = _level(rng, 0, max(bound - 1, 0))
    return reduce_to_level(make_with_invariants(ring, mu_value, lam, rng), level)


def _mu_or_cap(x: FiniteLevelElt) -> int:
    result = invariants(x)
    return x.N if result.is_zero else result.mu


# =============================================================================
# Randomized properties
# =============================================================================

def check_projection_of_norm(ring, rng):
    n = _level(rng, 0, _cap(ring) - 1)
    x = random_element(ring, n, rng)
    if project(norm_xi(x)) != x * ring.p:
        return f"level {n}"
    return None


def check_norm_of_projection(ring, rng):
    n = _level(rng, 0, _cap(ring) - 1)
    g = random_element(ring, n + 1, rng)
    phi = reduce_to_level(ring.cyclo_phi(n + 1), n + 1)
    if norm_xi(project(g)) != phi * g:
        return f"level {n + 1}"
    return None


def check_involution_automorphism(ring, rng):
    n = _level(rng, 0, _cap(ring))
    x, y = random_element(ring, n, rng), random_element(ring, n, rng)
    if involution(x * y) != involution(x) * involution(y):
        return f"not multiplicative at level {n}"
    if involution(x + y) != involution(x) + involution(y):
        return f"not additive at level {n}"
    if involution(involution(x)) != x:
        return f"not an involution at level {n}"
    return None


def check_reduction_multiplicative(ring, rng):
    n = _level(rng, 0, _cap(ring))
    half = ring.D // 2
    P, Q = random_series(ring, rng, half), random_series(ring, rng, half)
    if reduce_to_level(P * Q, n) != reduce_to_level(P, n) * reduce_to_level(Q, n):
        return f"level {n}"
    return None


def check_basis_invariance(ring, rng):
    n = _level(rng, 0, _cap(ring))
    x = _drawn(ring, n, rng)
    if mu_group_basis(x) != invariants(x).mu:
        return f"level {n}: {mu_group_basis(x)} vs {invariants(x).mu}"
    return None


def check_mu_lambda_multiplicative(ring, rng):
    n = _level(rng, 1, _cap(ring))
    bound = max(ring.p ** n // 2, 1)
    f = _drawn(ring, n, rng, max_mu=1, lam_bound=bound)
    g = _drawn(ring, n, rng, max_mu=1, lam_bound=bound)
    fi, gi, product = invariants(f), invariants(g), invariants(f * g)
    if fi.mu + gi.mu >= ring.N:
        return SKIP
    if not product.ok:
        return f"product is {product.status} at level {n}"
    if product.mu != fi.mu + gi.mu:
        return f"mu {product.mu} != {fi.mu} + {gi.mu} at level {n}"
    if product.lam != fi.lam + gi.lam:
        return f"lambda {product.lam} != {fi.lam} + {gi.lam} at level {n}"
    return None


def check_norm_shifts_lambda(ring, rng):
    n = _level(rng, 0, _cap(ring) - 1)
    theta = _drawn(ring, n, rng)
    before, after = invariants(theta), invariants(norm_xi(theta))
    shift = ring.p ** (n + 1) - ring.p ** n
    if (after.mu, after.lam) != (before.mu, before.lam + shift):
        return f"level {n}: {before} -> {after}"
    return None


def check_projection_mu_bound(ring, rng):
    n = _level(rng, 0, _cap(ring) - 1)
    g = _drawn(ring, n + 1, rng)
    if _mu_or_cap(project(g)) < _mu_or_cap(g):
        return f"level {n + 1}"
    return None


def check_projection_detection(ring, rng):
    n = _level(rng, 0, _cap(ring) - 1)
    theta = _drawn(ring, n + 1, rng, lam_bound=ring.p ** n)
    full, low = invariants(theta), invariants(project(theta))
    if low.ok and low.mu == 0 and full.mu != 0:
        return f"mu(project) = 0 but mu = {full.mu} at level {n + 1}"
    if low != full:
        return f"{full} vs projected {low} at level {n + 1}"
    return None


def check_series_vs_level(ring, rng):
    lam = _level(rng, 0, ring.D - 1)
    P = make_with_invariants(ring, _level(rng, 0, min(2, ring.N - 1)), lam, rng)
    expected = invariants_series(P)
    for n in range(_cap(ring) + 1):
        if ring.p ** n > lam and invariants(reduce_to_level(P, n)) != expected:
            return f"level {n}: {invariants(reduce_to_level(P, n))} vs {expected}"
    return None


def check_congruent_polynomial(ring, rng):
    n = _level(rng, 1, _cap(ring))
    size = ring.p ** n
    P = make_with_invariants(ring, 0, _level(rng, 0, size - 1), rng)
    Q = reduce_to_level(P, n).lift(ring.D) + random_series(ring, rng, size - 1) * ring.p
    if invariants_series(Q) != invariants_series(P):
        return f"level {n}: {invariants_series(Q)} vs {invariants_series(P)}"
    return None


def check_involution_series_invariants(ring, rng):
    lam = _level(rng, 0, max(ring.D // 2 - 1, 0))
    P = make_with_invariants(ring, _level(rng, 0, min(2, ring.N - 1)), lam, rng)
    if invariants_series(involution_series(P)) != invariants_series(P):
        return f"lambda {lam}"
    return None


def check_second_component_law(ring, rng):
    cap = _cap(ring)
    if cap < 2:
        return SKIP
    a_p = ring.scalar(0) if rng.integers(0, 2) == 0 else random_unit(rng, ring.p, ring.N) * ring.p
    l_sharp, l_flat = random_series(ring, rng), random_series(ring, rng)
    for n in range(2, cap + 1):
        first_prev, _ = apply_h(ring, n - 1, a_p, l_sharp, l_flat)
        _, second = apply_h(ring, n, a_p, l_sharp, l_flat)
        if second != -norm_xi(first_prev):
            return f"level {n}, a_p={a_p.value}"
    return None


RANDOMIZED: List[Property] = [
    Property("projection-of-norm", check_projection_of_norm, "project(norm_xi(x)) = p x"),
    Property("norm-of-projection", check_norm_of_projection, "norm_xi(project(g)) = Phi_{n+1} g"),
    Property("involution-automorphism", check_involution_automorphism, "iota is a ring involution"),
    Property("reduction-multiplicative", check_reduction_multiplicative, "reduce(PQ) = reduce(P)reduce(Q)"),
    Property("basis-invariance", check_basis_invariance, "mu agrees in both bases"),
    Property("mu-lambda-multiplicative", check_mu_lambda_multiplicative, "invariants add under products"),
    Property("norm-shifts-lambda", check_norm_shifts_lambda, "lambda(norm_xi(x)) = p^{n+1} - p^n + lambda(x)"),
    Property("projection-mu-bound", check_projection_mu_bound, "mu(project(g)) >= mu(g)"),
    Property("projection-detection", check_projection_detection, "invariants seen through project"),
    Property("series-vs-level", check_series_vs_level, "invariants of P and P mod omega_n agree"),
    Property("congruent-polynomial", check_congruent_polynomial, "P = Q mod (p, omega_n) share invariants"),
    Property("involution-series-invariants", check_involution_series_invariants, "iota preserves invariants"),
    Property("second-component-law", check_second_component_law, "H_n second row is -norm_xi(theta_{n-1})"),
]


# =============================================================================
# Fixed identities (run once over levels 1..n_max)
# =============================================================================

def fixed_checks(ring: LambdaRing, n_max: int) -> Dict[str, Optional[str]]:
    p = ring.p
    outcome: Dict[str, Optional[str]] = {}

    def first_failure(predicate: Callable[[int], bool]) -> Optional[str]:
        bad = [n for n in range(1, n_max + 1) if not predicate(n)]
        return f"levels {bad}" if bad else None

    outcome["omega-factorization"] = first_failure(
        lambda n: ring.omega(n) == ring.cyclo_phi(n) * ring.omega(n - 1)
    )
    outcome["omega-pm-product"] = first_failure(
        lambda n: ring.omega_pm(n, SIGN_PLUS) * ring.omega_pm(n, SIGN_MINUS) * ring.variable()
        == ring.omega(n)
    )
    outcome["cyclotomic-invariants"] = first_failure(
        lambda n: invariants(reduce_to_level(ring.cyclo_phi(n), n)).pair() == (0, p ** n - p ** (n - 1))
    )

    def omega_pm_ok(n: int) -> bool:
        plus = invariants_series(ring.omega_pm(n, SIGN_PLUS))
        minus = invariants_series(ring.omega_pm(n, SIGN_MINUS))
        matched = plus if (n + 1) % 2 == 0 else minus
        return plus.mu == 0 and minus.mu == 0 and matched.ok and matched.lam == q(n, p)

    outcome["omega-pm-invariants"] = first_failure(omega_pm_ok)

    a_p = ring.scalar(p)
    outcome["h-matrix-closed-form"] = first_failure(
        lambda n: h_matrix(ring, n, ring.scalar(0)) == expected_h_matrix(ring, n)
        and h_matrix(ring, n, a_p).congruent(expected_h_matrix(ring, n), 1)
    )
    return outcome


# =============================================================================
# Command
# =============================================================================

def suite_ring(config: ExperimentConfig) -> LambdaRing:
    level = min(config.n_max, SUITE_LEVEL_CAP)
    return LambdaRing(config.p, config.precision, config.p ** level)


def lemma_trial(index: int, seq: np.random.SeedSequence, config: ExperimentConfig) -> Dict[str, Any]:
    rng = np.random.default_rng(seq)
    ring = suite_ring(config)
    results = {}
    for prop in RANDOMIZED:
        detail = prop.check(ring, rng)
        if detail is None:
            results[prop.name] = PASS
        elif detail == SKIP:
            results[prop.name] = SKIP
        else:
            results[prop.name] = f"{FAIL}: {detail}"
    return results


def _summarize(name: str, outcomes: List[str], description: str) -> Dict[str, Any]:
    failures = [o for o in outcomes if o.startswith(FAIL)]
    return {
        "property": name,
        "description": description,
        PASS: outcomes.count(PASS),
        FAIL: len(failures),
        SKIP: outcomes.count(SKIP),
        "first_failure": failures[0][len(FAIL) + 2:] if failures else None,
    }


def cmd_verify_lemmas(config: ExperimentConfig) -> CommandResult:
    config.validate()
    logger.info(f"verify-lemmas: {config.trials} trials at p={config.p}, N={config.precision}")
    trials = run_trials(lemma_trial, config)
    rows = [
        _summarize(prop.name, [t[prop.name] for t in trials], prop.description)
        for prop in RANDOMIZED
    ]
    for name, detail in fixed_checks(config.ring(), config.n_max).items():
        outcome = PASS if detail is None else f"{FAIL}: {detail}"
        rows.append(_summarize(name, [outcome], "fixed identity up to n_max"))
    failed = [row["property"] for row in rows if row[FAIL]]
    for name in failed:
        logger.warning(f"property {name} failed")
    return CommandResult(
        report={
            "command": "verify-lemmas",
            "config": config.to_dict(),
            "properties": rows,
            "passed": not failed,
        },
        exit_code=EXIT_FAIL if failed else EXIT_OK,
        rows=rows,
        columns=list(COLUMNS),
    )


def execute(config: ExperimentConfig, command: str, args: Dict[str, Any]) -> CommandResult:
    """Execute a lemma-suite command."""
    if command == "verify-lemmas":
        return cmd_verify_lemmas(config)
    raise ValueError(f"Unknown command: {command}")


register_experiment(ExperimentModule(
    name="lemmas",
    description="Structural lemma suite",
    commands=COMMANDS,
    execute=execute,
))
