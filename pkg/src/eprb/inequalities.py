"""Two-party inequality statistics and setting optimization.

The central quantity is the four-correlation combination
|P(a,b) - P(a,b')| + |P(a',b') + P(a',b)|, bounded by 2 for the local and
setting-constant model classes and reaching 2*sqrt(2) for the singlet
correlation. A correlation oracle here is any callable mapping a setting
pair to a CorrelationEstimate; estimators from the correlation module and
exact closed forms both qualify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .correlation import CorrelationEstimate
from .geometry import UnitVector3, unit_from_angles, unit_from_plane_angle, vector_to_list
from .models import DeterministicModel, evaluate_deterministic

__all__ = [
    "CorrelationOracle",
    "SettingsQuad",
    "ChshReport",
    "chsh_statistic",
    "BellReport",
    "bell_statistic",
    "cross_term",
    "MaximizeResult",
    "maximize_chsh",
]

CorrelationOracle = Callable[[UnitVector3, UnitVector3], CorrelationEstimate]

# Acceptance band in standard errors for the violated/satisfied flags; an
# exact oracle has stderr 0, so the band degenerates to the strict bound.
_BAND = 4.0


@dataclass(frozen=True)
class SettingsQuad:
    """The four measurement directions entering the four-correlation sum."""

    a: UnitVector3
    b: UnitVector3
    a_prime: UnitVector3
    b_prime: UnitVector3

    def to_json(self) -> dict:
        return {
            "a": vector_to_list(self.a),
            "b": vector_to_list(self.b),
            "a_prime": vector_to_list(self.a_prime),
            "b_prime": vector_to_list(self.b_prime),
        }


@dataclass(frozen=True)
class ChshReport:
    """The four-correlation statistic at one settings quad.

    ``violated`` applies the oracle's own uncertainty: the bound counts as
    broken only beyond 4 combined standard errors (strictly above 2 for
    exact oracles).
    """

    s_value: float
    term1: float
    term2: float
    p_ab: CorrelationEstimate
    p_ab_prime: CorrelationEstimate
    p_a_prime_b_prime: CorrelationEstimate
    p_a_prime_b: CorrelationEstimate
    stderr: float
    bound: float
    violated: bool
    quad: SettingsQuad

    def to_json(self) -> dict:
        return {
            "s_value": self.s_value,
            "term1": self.term1,
            "term2": self.term2,
            "correlations": [
                {"pair": "ab", **self.p_ab.to_json()},
                {"pair": "ab_prime", **self.p_ab_prime.to_json()},
                {"pair": "a_prime_b_prime", **self.p_a_prime_b_prime.to_json()},
                {"pair": "a_prime_b", **self.p_a_prime_b.to_json()},
            ],
            "stderr": self.stderr,
            "bound": self.bound,
            "violated": self.violated,
            "quad": self.quad.to_json(),
        }


def chsh_statistic(P: CorrelationOracle, q: SettingsQuad) -> ChshReport:
    """Evaluate the four-correlation statistic at ``q`` using oracle ``P``."""
    est_ab = P(q.a, q.b)
    est_ab_prime = P(q.a, q.b_prime)
    est_apbp = P(q.a_prime, q.b_prime)
    est_apb = P(q.a_prime, q.b)
    term1 = abs(est_ab.value - est_ab_prime.value)
    term2 = abs(est_apbp.value + est_apb.value)
    s_value = term1 + term2
    stderr = math.sqrt(
        est_ab.stderr ** 2
        + est_ab_prime.stderr ** 2
        + est_apbp.stderr ** 2
        + est_apb.stderr ** 2
    )
    return ChshReport(
        s_value=s_value,
        term1=term1,
        term2=term2,
        p_ab=est_ab,
        p_ab_prime=est_ab_prime,
        p_a_prime_b_prime=est_apbp,
        p_a_prime_b=est_apb,
        stderr=stderr,
        bound=2.0,
        violated=s_value > 2.0 + _BAND * stderr,
        quad=q,
    )


@dataclass(frozen=True)
class BellReport:
    """The three-correlation inequality |P(a,b) - P(a,c)| <= 1 + P(b,c),
    reported as the excess of the left side over the right."""

    excess: float
    p_ab: CorrelationEstimate
    p_ac: CorrelationEstimate
    p_bc: CorrelationEstimate
    stderr: float
    violated: bool

    def to_json(self) -> dict:
        return {
            "excess": self.excess,
            "correlations": [
                {"pair": "ab", **self.p_ab.to_json()},
                {"pair": "ac", **self.p_ac.to_json()},
                {"pair": "bc", **self.p_bc.to_json()},
            ],
            "stderr": self.stderr,
            "violated": self.violated,
        }


def bell_statistic(
    P: CorrelationOracle, a: UnitVector3, b: UnitVector3, c: UnitVector3
) -> BellReport:
    """Excess |P(a,b) - P(a,c)| - (1 + P(b,c)); positive means violation."""
    est_ab = P(a, b)
    est_ac = P(a, c)
    est_bc = P(b, c)
    excess = abs(est_ab.value - est_ac.value) - (1.0 + est_bc.value)
    stderr = math.sqrt(
        est_ab.stderr ** 2 + est_ac.stderr ** 2 + est_bc.stderr ** 2
    )
    return BellReport(
        excess=excess,
        p_ab=est_ab,
        p_ac=est_ac,
        p_bc=est_bc,
        stderr=stderr,
        violated=excess > _BAND * stderr,
    )


def cross_term(
    m: DeterministicModel, q: SettingsQuad, lam: Sequence[float]
) -> float:
    """The four-setting outcome-product cross term at one draw.

    (A B at (a,b)) * (A B at (a',b')) - (A B at (a,b')) * (A B at (a',b)).
    Always one of -2, 0, +2 for dichotomic outcomes, and identically 0 when
    outcomes do not depend on the settings, which is the hinge of the
    bound's derivation for the setting-constant class.
    """
    a1, b1 = evaluate_deterministic(m, q.a, q.b, lam)
    a2, b2 = evaluate_deterministic(m, q.a, q.b_prime, lam)
    a3, b3 = evaluate_deterministic(m, q.a_prime, q.b_prime, lam)
    a4, b4 = evaluate_deterministic(m, q.a_prime, q.b, lam)
    return (a1 * b1) * (a3 * b3) - (a2 * b2) * (a4 * b4)


class _BudgetExhausted(Exception):
    pass


class _BudgetedOracle:
    """Memoizing wrapper that charges only distinct setting pairs."""

    def __init__(self, P: CorrelationOracle, budget: int) -> None:
        self._oracle = P
        self._budget = budget
        self._cache: dict = {}
        self.evaluations = 0

    def __call__(self, a: UnitVector3, b: UnitVector3) -> CorrelationEstimate:
        key = (a.x, a.y, a.z, b.x, b.y, b.z)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.evaluations >= self._budget:
            raise _BudgetExhausted
        est = self._oracle(a, b)
        self.evaluations += 1
        self._cache[key] = est
        return est


@dataclass(frozen=True)
class MaximizeResult:
    """Outcome of the settings search: best quad, its report, and the cost."""

    quad: SettingsQuad
    report: ChshReport
    evaluations: int
    grid_s_value: float
    mode: str

    @property
    def s_value(self) -> float:
        return self.report.s_value


def _coplanar_vectors(angles: Sequence[float]) -> list[UnitVector3]:
    return [unit_from_plane_angle(t) for t in angles]


def _full_vectors(angles: Sequence[float]) -> list[UnitVector3]:
    return [
        unit_from_angles(angles[2 * k], angles[2 * k + 1]) for k in range(4)
    ]


def _quad_from_angles(angles: Sequence[float], mode: str) -> SettingsQuad:
    vs = _coplanar_vectors(angles) if mode == "coplanar" else _full_vectors(angles)
    return SettingsQuad(a=vs[0], b=vs[1], a_prime=vs[2], b_prime=vs[3])


def _s_of_quad(P: _BudgetedOracle, q: SettingsQuad) -> float:
    term1 = abs(P(q.a, q.b).value - P(q.a, q.b_prime).value)
    term2 = abs(P(q.a_prime, q.b_prime).value + P(q.a_prime, q.b).value)
    return term1 + term2


def _grid_scan(P: _BudgetedOracle, points: list[UnitVector3]):
    """Best statistic over all quads drawn from ``points``.

    The two absolute terms share no setting once (b, b') is fixed, so each
    is maximized independently over a and a', turning the quartic scan into
    a cubic one. Ties resolve to the lexicographically smallest index
    tuple (ia, ib, ia_prime, ib_prime).
    """
    g = len(points)
    values = [[P(points[i], points[j]).value for j in range(g)] for i in range(g)]
    best = -math.inf
    best_idx: Optional[tuple[int, int, int, int]] = None
    for jb in range(g):
        for jbp in range(g):
            t1_best = -math.inf
            ia_best = 0
            for ia in range(g):
                t1 = abs(values[ia][jb] - values[ia][jbp])
                if t1 > t1_best:
                    t1_best = t1
                    ia_best = ia
            t2_best = -math.inf
            iap_best = 0
            for iap in range(g):
                t2 = abs(values[iap][jbp] + values[iap][jb])
                if t2 > t2_best:
                    t2_best = t2
                    iap_best = iap
            s = t1_best + t2_best
            idx = (ia_best, jb, iap_best, jbp)
            if s > best or (s == best and best_idx is not None and idx < best_idx):
                best = s
                best_idx = idx
    return best, best_idx


def _pattern_search(
    P: _BudgetedOracle,
    angles: list[float],
    s_start: float,
    step: float,
    mode: str,
) -> tuple[list[float], float]:
    """Greedy +/-step coordinate polling with step halving.

    Only strict improvements move; the step halves after any sweep with no
    accepted move and the search ends below 1e-7 or when the oracle budget
    runs out.
    """
    current = list(angles)
    s_current = s_start
    try:
        while step >= 1e-7:
            improved = False
            for k in range(len(current)):
                for direction in (1.0, -1.0):
                    trial = list(current)
                    trial[k] = trial[k] + direction * step
                    s_trial = _s_of_quad(P, _quad_from_angles(trial, mode))
                    if s_trial > s_current:
                        current = trial
                        s_current = s_trial
                        improved = True
                        break
            if not improved:
                step *= 0.5
    except _BudgetExhausted:
        pass
    return current, s_current


def maximize_chsh(
    P: CorrelationOracle, budget: int, mode: str = "coplanar"
) -> MaximizeResult:
    """Search measurement settings for the largest four-correlation sum.

    ``budget`` caps the number of distinct setting pairs sent to the
    oracle (repeat pairs are memoized for free). Coarse grid first, then
    coordinate pattern search from the best grid point; for a fixed oracle
    and budget the outcome is deterministic.

    Coplanar mode searches one angle per setting in the x-z plane; full
    mode searches polar and azimuthal angles per setting.
    """
    budget = int(budget)
    if budget < 100:
        raise ValueError(f"budget must be >= 100 oracle evaluations, got {budget}")
    if mode not in ("coplanar", "full"):
        raise ValueError(f"mode must be coplanar or full, got {mode!r}")

    oracle = _BudgetedOracle(P, budget)

    if mode == "coplanar":
        # Spend at most half the budget on the grid, capped at 24 angles.
        m = min(24, max(2, math.isqrt(budget // 2)))
        grid_angles = [(k * 2.0 * math.pi) / m for k in range(m)]
        points = [unit_from_plane_angle(t) for t in grid_angles]
        grid_s, idx = _grid_scan(oracle, points)
        start = [grid_angles[i] for i in idx]
        step = (2.0 * math.pi) / m
    else:
        n_theta, n_phi = 6, 8
        need = 2 * (n_theta * n_phi) ** 2
        if budget < need:
            raise ValueError(
                f"full mode needs a budget of at least {need}, got {budget}"
            )
        pairs = [
            ((kt * math.pi) / (n_theta - 1), (kp * 2.0 * math.pi) / n_phi)
            for kt in range(n_theta)
            for kp in range(n_phi)
        ]
        points = [unit_from_angles(t, p) for t, p in pairs]
        grid_s, idx = _grid_scan(oracle, points)
        start = []
        for i in idx:
            start.extend(pairs[i])
        step = math.pi / (n_theta - 1)

    best_angles, _ = _pattern_search(oracle, start, grid_s, step, mode)
    quad = _quad_from_angles(best_angles, mode)
    # Accepted states were always evaluated in full, so the report below is
    # served from cache and cannot blow the budget.
    report = chsh_statistic(oracle, quad)
    return MaximizeResult(
        quad=quad,
        report=report,
        evaluations=oracle.evaluations,
        grid_s_value=grid_s,
        mode=mode,
    )
