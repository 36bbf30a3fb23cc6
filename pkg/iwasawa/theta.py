"""
Synthetic theta families and theorem verifiers.

A theta family is a sequence theta_0, ..., theta_{n_max} (theta_n in Lambda_n)
satisfying the three-term relation

    project(theta_{n+1}) = a_p * theta_n - norm_xi(theta_{n-1}),   1 <= n < n_max.

Non-ordinary families are generated forward from a pair (L_sharp, L_flat) through
the matrices H_n; ordinary families are generated from (theta_0, theta_1) by
lifting the right-hand side, optionally adding a random multiple of omega_n.

Usage:
    ring = LambdaRing.for_levels(5, 20, 4)
    fam = build_nonordinary_family(ring, l_sharp, l_flat, ring.scalar(0), 4)
    report = verify_nonordinary_theorem(ring, l_sharp, l_flat, ring.scalar(0), 4)
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .algebra import (
    SIGN_MINUS,
    SIGN_PLUS,
    FiniteLevelElt,
    LambdaRing,
    SeriesElt,
    involution,
    involution_series,
    lift_to_level,
    norm_xi,
    project,
    reduce_to_level,
)
from .invariants import invariants, invariants_series, q
from .padic import PAdicScalar, companion_root, invert_unit, unit_root
from .sampling import random_residues
from .sprung import h_matrices
from .types import (
    VERDICT_BEFORE_STABLE,
    VERDICT_BELOW_THRESHOLD,
    VERDICT_FAIL,
    VERDICT_HYPOTHESIS,
    VERDICT_PASS,
    InvariantResult,
    LevelRow,
    OrdinarityError,
    ParameterMismatchError,
    TheoremReport,
    ThreeTermReport,
)

logger = logging.getLogger(__name__)

PROVENANCE_NONORDINARY = "nonordinary-from-sharp-flat"
PROVENANCE_ORDINARY = "ordinary-random"

PARITY_EVEN = "even"
PARITY_ODD = "odd"

THEOREM_ORDINARY = "ordinary"
THEOREM_NONORDINARY = "nonordinary"


def parity_of(n: int) -> str:
    return PARITY_EVEN if n % 2 == 0 else PARITY_ODD


# =============================================================================
# Families
# =============================================================================

@dataclass(frozen=True)
class ThetaFamily:
    """theta_0, ..., theta_{n_max} together with the data that generated them."""
    ring: LambdaRing
    a_p: PAdicScalar
    thetas: List[FiniteLevelElt]
    provenance: str
    seed: Optional[int] = None
    l_sharp: Optional[SeriesElt] = None
    l_flat: Optional[SeriesElt] = None

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def n_max(self) -> int:
        return len(self.thetas) - 1

    @property
    def is_ordinary(self) -> bool:
        return self.a_p.is_unit()

    def theta(self, n: int) -> FiniteLevelElt:
        return self.thetas[n]

    def perturbed(self, level: int, index: int, delta: int = 1) -> "ThetaFamily":
        """Copy with delta added to one coefficient of theta_level (for negative controls)."""
        x = self.thetas[level]
        coeffs = list(x.coeffs)
        coeffs[index] += delta
        thetas = list(self.thetas)
        thetas[level] = FiniteLevelElt(x.p, x.N, x.level, tuple(coeffs))
        return replace(self, thetas=thetas)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "p": self.ring.p,
            "N": self.ring.N,
            "a_p": str(self.a_p.value),
            "n_max": self.n_max,
            "provenance": self.provenance,
            "thetas": [t.to_dict() for t in self.thetas],
        }
        if self.seed is not None:
            data["seed"] = self.seed
        if self.l_sharp is not None and self.l_flat is not None:
            data["l_sharp"] = self.l_sharp.to_dict()
            data["l_flat"] = self.l_flat.to_dict()
        return data


@dataclass(frozen=True)
class StabilizedFamily:
    """The unit-root stabilization of an ordinary family, elements[n-1] at level n."""
    alpha: PAdicScalar
    beta: PAdicScalar
    elements: List[FiniteLevelElt] = field(default_factory=list)

    def element(self, n: int) -> FiniteLevelElt:
        return self.elements[n - 1]

    def is_norm_compatible(self) -> bool:
        return all(
            project(self.elements[i + 1]) == self.elements[i]
            for i in range(len(self.elements) - 1)
        )


def _check_series(ring: LambdaRing, *series: SeriesElt):
    for s in series:
        if (s.p, s.N, s.D) != (ring.p, ring.N, ring.D):
            raise ParameterMismatchError(
                "series disagrees with the ring",
                context=f"(p,N,D)=({s.p},{s.N},{s.D}) vs ({ring.p},{ring.N},{ring.D})",
            )


def build_nonordinary_family(
    ring: LambdaRing,
    l_sharp: SeriesElt,
    l_flat: SeriesElt,
    a_p: PAdicScalar,
    n_max: int,
) -> ThetaFamily:
    """
    theta_n = first component of H_n (L_sharp, L_flat) mod omega_n for n >= 1.

    The second component at level n is -norm_xi(theta_{n-1}); at n = 1 it is
    -Phi_1 * L_sharp(0), which pins theta_0 = L_sharp mod omega_0.

    Raises:
        OrdinarityError: if a_p is a unit
    """
    if a_p.is_unit():
        raise OrdinarityError(
            "sharp/flat families need a non-ordinary a_p", context=f"a_p={a_p.value}, p={a_p.p}"
        )
    _check_series(ring, l_sharp, l_flat)
    thetas = [reduce_to_level(l_sharp, 0)]
    for n, h in enumerate(h_matrices(ring, a_p, n_max), start=1):
        first, _ = h.apply(reduce_to_level(l_sharp, n), reduce_to_level(l_flat, n))
        thetas.append(first)
    logger.debug(f"built non-ordinary family p={ring.p} a_p={a_p.value} n_max={n_max}")
    return ThetaFamily(
        ring=ring,
        a_p=a_p,
        thetas=thetas,
        provenance=PROVENANCE_NONORDINARY,
        l_sharp=l_sharp,
        l_flat=l_flat,
    )


def build_ordinary_family(
    ring: LambdaRing,
    theta0: FiniteLevelElt,
    theta1: FiniteLevelElt,
    a_p: PAdicScalar,
    n_max: int,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
) -> ThetaFamily:
    """
    Extend (theta_0, theta_1) by theta_{n+1} = lift(a_p theta_n - norm_xi(theta_{n-1})) + omega_n r.

    r has degree < p^{n+1} - p^n and is drawn from rng; without rng, r = 0.

    Raises:
        OrdinarityError: if a_p is not a unit
    """
    if not a_p.is_unit():
        raise OrdinarityError(
            "ordinary families need a unit a_p", context=f"a_p={a_p.value}, p={a_p.p}"
        )
    if theta0.level != 0 or theta1.level != 1:
        raise ParameterMismatchError(
            "seeds must sit at levels 0 and 1", context=f"got {theta0.level}, {theta1.level}"
        )
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    ring.check_level(n_max)
    p = ring.p
    thetas = [theta0, theta1]
    for n in range(1, n_max):
        target = thetas[n] * a_p - norm_xi(thetas[n - 1])
        nxt = lift_to_level(target, n + 1)
        if rng is not None:
            r = ring.series(random_residues(rng, p, ring.N, p ** (n + 1) - p ** n))
            nxt = nxt + reduce_to_level(ring.omega(n) * r, n + 1)
        thetas.append(nxt)
    logger.debug(f"built ordinary family p={p} a_p={a_p.value} n_max={n_max}")
    return ThetaFamily(
        ring=ring, a_p=a_p, thetas=thetas, provenance=PROVENANCE_ORDINARY, seed=seed
    )


# =============================================================================
# Stabilization and L-functions
# =============================================================================

def _require_ordinary(fam: ThetaFamily):
    if not fam.is_ordinary:
        raise OrdinarityError(
            "stabilization needs an ordinary family", context=f"a_p={fam.a_p.value}"
        )


def stabilize(fam: ThetaFamily, n: int) -> FiniteLevelElt:
    """alpha^{-(n+1)} (theta_n - alpha^{-1} norm_xi(theta_{n-1}))."""
    _require_ordinary(fam)
    if not 1 <= n <= fam.n_max:
        raise ValueError(f"stabilization level must lie in [1, {fam.n_max}], got {n}")
    alpha_inv = invert_unit(unit_root(fam.a_p))
    inner = fam.theta(n) - norm_xi(fam.theta(n - 1)) * alpha_inv
    scale = PAdicScalar(alpha_inv.p, alpha_inv.N, pow(alpha_inv.value, n + 1, alpha_inv.modulus))
    return inner * scale


def stabilize_family(fam: ThetaFamily) -> StabilizedFamily:
    _require_ordinary(fam)
    alpha = unit_root(fam.a_p)
    return StabilizedFamily(
        alpha=alpha,
        beta=companion_root(fam.a_p, alpha),
        elements=[stabilize(fam, n) for n in range(1, fam.n_max + 1)],
    )


def finite_level_lp(x: FiniteLevelElt) -> FiniteLevelElt:
    """x * iota(x) in Lambda_n."""
    return x * involution(x)


def ordinary_lp_approx(fam: ThetaFamily, n: int) -> FiniteLevelElt:
    """The level-n image of the anticyclotomic L-function: s_n * iota(s_n)."""
    return finite_level_lp(stabilize(fam, n))


def sharp_flat_lp(l_star: SeriesElt) -> SeriesElt:
    """L^* * iota(L^*), truncated."""
    return l_star * involution_series(l_star)


def parity_prediction(
    ring: LambdaRing, n: int, l_sharp: SeriesElt, l_flat: SeriesElt
) -> FiniteLevelElt:
    """
    theta_n predicted for a_p = 0:
        n even: (-1)^{n/2} omega_n^- L_sharp,   n odd: (-1)^{(n-1)/2} omega_n^+ L_flat.
    """
    if n % 2 == 0:
        sign = -1 if (n // 2) % 2 else 1
        factor, l_star = ring.omega_pm(n, SIGN_MINUS), l_sharp
    else:
        sign = -1 if ((n - 1) // 2) % 2 else 1
        factor, l_star = ring.omega_pm(n, SIGN_PLUS), l_flat
    return reduce_to_level(factor, n) * reduce_to_level(l_star, n) * sign


def threshold_level(lam_star: int, p: int, parity: str, n_max: int) -> Optional[int]:
    """Least n in [1, n_max] of the given parity with lam_star < p^n - q_n."""
    first = 2 if parity == PARITY_EVEN else 1
    for n in range(first, n_max + 1, 2):
        if lam_star < p ** n - q(n, p):
            return n
    return None


# =============================================================================
# Verifiers
# =============================================================================

def verify_three_term(fam: ThetaFamily) -> ThreeTermReport:
    """Check the three-term relation exactly at n = 1, ..., n_max - 1."""
    checked = []
    for n in range(1, fam.n_max):
        lhs = project(fam.theta(n + 1))
        rhs = fam.theta(n) * fam.a_p - norm_xi(fam.theta(n - 1))
        checked.append(n)
        if lhs != rhs:
            index = next(i for i, (a, b) in enumerate(zip(lhs.coeffs, rhs.coeffs)) if a != b)
            logger.debug(f"three-term relation fails at n={n}, coefficient {index}")
            return ThreeTermReport(
                passed=False, checked_levels=checked, failed_level=n, failed_index=index
            )
    return ThreeTermReport(passed=True, checked_levels=checked)


def verify_ordinary_theorem(fam: ThetaFamily) -> TheoremReport:
    """
    Past the stabilization level n_0: mu(theta_n) = 0 and 2 lambda(theta_n) = lambda(L_p mod omega_n).

    Hypothesis: the level-n_max approximation of L_p has mu = 0. n_0 is the least
    n >= 2 where the invariants of the stabilized element agree with those at n - 1.
    A family that breaks the three-term relation fails before the hypothesis is examined.
    """
    _require_ordinary(fam)
    report = TheoremReport(theorem=THEOREM_ORDINARY)
    three_term = verify_three_term(fam)
    report.extra["three_term"] = three_term.to_dict()
    if not three_term.passed:
        report.verdict, report.reason = VERDICT_FAIL, "three-term"
        return report

    stabilized = stabilize_family(fam)
    approx_top = finite_level_lp(stabilized.element(fam.n_max))
    top = invariants(approx_top)
    report.extra["alpha"] = str(stabilized.alpha.value)
    report.extra["lp_top"] = top.to_dict()
    report.extra["norm_compatible"] = stabilized.is_norm_compatible()

    if not top.ok:
        report.verdict, report.reason = VERDICT_HYPOTHESIS, top.status
        return report
    if top.mu != 0:
        report.verdict, report.reason = VERDICT_HYPOTHESIS, "mu-positive"
        return report

    stab_inv = [invariants(s) for s in stabilized.elements]
    n0 = None
    for n in range(2, fam.n_max + 1):
        prev, cur = stab_inv[n - 2], stab_inv[n - 1]
        if prev.ok and cur.ok and cur.mu == 0 and prev == cur:
            n0 = n
            break
    report.extra["n0"] = n0
    if n0 is None:
        report.verdict, report.reason = VERDICT_HYPOTHESIS, "not-stabilized"
        return report

    failed = False
    for n in range(1, fam.n_max + 1):
        theta_inv = invariants(fam.theta(n))
        approx_inv = invariants(finite_level_lp(stabilized.element(n)))
        row = LevelRow(
            n=n,
            parity=parity_of(n),
            mu_theta=theta_inv.mu,
            lambda_theta=theta_inv.lam,
            mu_L=approx_inv.mu,
            lambda_L=approx_inv.lam,
        )
        if n < n0:
            row.verdict = VERDICT_BEFORE_STABLE
            report.rows.append(row)
            continue
        if approx_inv.lam is not None and approx_inv.lam % 2 == 0:
            row.expected_lambda = approx_inv.lam // 2
        s_inv = stab_inv[n - 1]
        row.checks = {
            "mu_theta_zero": theta_inv.ok and theta_inv.mu == 0,
            "doubled_lambda": theta_inv.ok and approx_inv.ok
            and 2 * theta_inv.lam == approx_inv.lam,
            "stabilized_mu": s_inv.ok and approx_inv.ok and 2 * s_inv.mu == approx_inv.mu,
            "stabilized_lambda": s_inv.ok and approx_inv.ok and 2 * s_inv.lam == approx_inv.lam,
        }
        if not all(row.checks.values()):
            row.verdict = VERDICT_FAIL
            row.detail = ",".join(k for k, ok in row.checks.items() if not ok)
            failed = True
        report.rows.append(row)

    if failed:
        report.verdict, report.reason = VERDICT_FAIL, "level-check"
    return report


def _series_guarded(result: InvariantResult) -> str:
    return result.status if not result.ok else ""


def verify_nonordinary_theorem(
    ring: LambdaRing,
    l_sharp: SeriesElt,
    l_flat: SeriesElt,
    a_p: PAdicScalar,
    n_max: int,
    perturb: Optional[Tuple[int, int]] = None,
) -> TheoremReport:
    """
    For each level n meeting lambda(L^*) < p^n - q_n (L^* = L_sharp for n even,
    L_flat for n odd):

        mu(theta_n) = mu(L^*)            lambda(theta_n) = lambda(L^*) + q_n
        mu(L^* iota L^*) = 2 mu(theta_n)  lambda(L^* iota L^*) = 2 lambda(L^*)
        theta_n iota(theta_n) has doubled invariants while 2 lambda(theta_n) < p^n

    and at every level theta_n matches the parity prediction, exactly when
    a_p = 0 and modulo p otherwise.

    perturb=(level, index) adds 1 to that coefficient of theta_level before checking,
    as a negative control.

    Raises:
        OrdinarityError: if a_p is a unit
    """
    if a_p.is_unit():
        raise OrdinarityError(
            "the sharp/flat theorem needs a non-ordinary a_p", context=f"a_p={a_p.value}"
        )
    report = TheoremReport(theorem=THEOREM_NONORDINARY)
    inv_sharp, inv_flat = invariants_series(l_sharp), invariants_series(l_flat)
    report.extra["l_sharp"] = inv_sharp.to_dict()
    report.extra["l_flat"] = inv_flat.to_dict()
    for status in (_series_guarded(inv_sharp), _series_guarded(inv_flat)):
        if status:
            report.verdict, report.reason = VERDICT_HYPOTHESIS, status
            return report
    if inv_sharp.mu != inv_flat.mu:
        report.verdict, report.reason = VERDICT_HYPOTHESIS, "mu-mismatch"
        return report

    p, N, D = ring.p, ring.N, ring.D
    fam = build_nonordinary_family(ring, l_sharp, l_flat, a_p, n_max)
    if perturb is not None:
        fam = fam.perturbed(*perturb)
    three_term = verify_three_term(fam)
    report.extra["three_term"] = three_term.to_dict()
    report.extra["n0_plus"] = threshold_level(inv_sharp.lam, p, PARITY_EVEN, n_max)
    report.extra["n0_minus"] = threshold_level(inv_flat.lam, p, PARITY_ODD, n_max)
    exact = a_p.is_zero()

    lp_inv = {
        PARITY_EVEN: invariants_series(sharp_flat_lp(l_sharp)),
        PARITY_ODD: invariants_series(sharp_flat_lp(l_flat)),
    }
    failed = not three_term.passed
    for n in range(1, n_max + 1):
        parity = parity_of(n)
        star = inv_sharp if parity == PARITY_EVEN else inv_flat
        mu_star, lam_star = star.pair()
        q_n = q(n, p)
        theta = fam.theta(n)
        theta_inv = invariants(theta)
        prediction = parity_prediction(ring, n, l_sharp, l_flat)
        parity_ok = theta == prediction if exact else theta.congruent(prediction, 1)
        row = LevelRow(
            n=n,
            parity=parity,
            mu_theta=theta_inv.mu,
            lambda_theta=theta_inv.lam,
            q_n=q_n,
            mu_L=mu_star,
            lambda_L=lam_star,
            checks={"parity_law": parity_ok},
        )
        if lam_star >= p ** n - q_n:
            row.verdict = VERDICT_FAIL if not parity_ok else VERDICT_BELOW_THRESHOLD
            failed = failed or not parity_ok
            report.rows.append(row)
            continue

        row.expected_lambda = lam_star + q_n
        row.checks["mu"] = theta_inv.ok and theta_inv.mu == mu_star
        row.checks["lambda"] = theta_inv.ok and theta_inv.lam == lam_star + q_n
        lp = lp_inv[parity]
        if 2 * lam_star < D and 2 * mu_star < N:
            row.checks["lp_mu"] = lp.ok and theta_inv.ok and lp.mu == 2 * theta_inv.mu
            row.checks["lp_lambda"] = lp.ok and lp.lam == 2 * lam_star
        if theta_inv.ok and 2 * theta_inv.lam < p ** n and 2 * theta_inv.mu < N:
            product = invariants(finite_level_lp(theta))
            row.checks["finite_lp"] = product.ok and product.pair() == (
                2 * theta_inv.mu,
                2 * theta_inv.lam,
            )
        if not all(row.checks.values()):
            row.verdict = VERDICT_FAIL
            row.detail = ",".join(k for k, ok in row.checks.items() if not ok)
            failed = True
        report.rows.append(row)

    if failed:
        report.verdict = VERDICT_FAIL
        report.reason = "three-term" if not three_term.passed else "level-check"
    logger.debug(f"non-ordinary verdict {report.verdict} over {len(report.rows)} levels")
    return report
