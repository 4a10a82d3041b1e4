"""Correlation estimators and closed-form correlations.

The measured quantity throughout is the expectation of the product of the
two parties' outcomes at settings (a, b): averaged over hidden-variable
draws for the zoo models, or in closed form for the singlet correlation
-a . b and for draw-independent series pairs.

Monte Carlo estimates inherit the chunked-reduction contract: for a fixed
sampler seed the result is bit-identical at any worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from . import _backend as _k
from ._mc import combine_scalar, combine_vec4, run_chunk_jobs, scalar_job_from_index_fn, vec4_job_from_index_fn
from .errors import ContractViolationError
from .geometry import RiemannPoint, UnitVector3, Z_AXIS, unit_from_plane_angle
from .hidden_variables import LambdaSampler
from .models import (
    AnticorrelatedSeriesPair,
    DeterministicModel,
    QuantumCorrelationModel,
    StochasticModel,
    evaluate_deterministic,
    evaluate_series,
    evaluate_stochastic,
    mean_outcomes,
)

__all__ = [
    "CorrelationEstimate",
    "JointTable",
    "estimate_correlation",
    "estimate_stochastic_correlation",
    "estimate_joint",
    "quantum_correlation",
    "quantum_correlation_complex",
    "series_correlation",
    "make_correlation_oracle",
    "AntipodalContrast",
    "antipodal_contrast",
    "correlation_sweep",
]


@dataclass(frozen=True)
class CorrelationEstimate:
    """A correlation value with its uncertainty.

    ``exact`` marks closed-form evaluations; those carry stderr 0 and n 0.
    """

    value: float
    stderr: float
    n: int
    exact: bool = False

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "n": self.n,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class JointTable:
    """Averaged joint outcome probabilities for one setting pair.

    Entry order is (+,+), (-,-), (+,-), (-,+); entries carry standard
    errors from the same draws.
    """

    p_pp: float
    p_mm: float
    p_pm: float
    p_mp: float
    stderr_pp: float
    stderr_mm: float
    stderr_pm: float
    stderr_mp: float
    n: int

    def total(self) -> float:
        return self.p_pp + self.p_mm + self.p_pm + self.p_mp

    def correlation(self) -> float:
        """Outcome-product expectation implied by the table."""
        return self.p_pp + self.p_mm - self.p_pm - self.p_mp

    def to_json(self) -> dict:
        return {
            "p_pp": {"value": self.p_pp, "stderr": self.stderr_pp},
            "p_mm": {"value": self.p_mm, "stderr": self.stderr_mm},
            "p_pm": {"value": self.p_pm, "stderr": self.stderr_pm},
            "p_mp": {"value": self.p_mp, "stderr": self.stderr_mp},
            "n": self.n,
        }


def _require_n(n: int) -> int:
    n = int(n)
    if n < 2:
        raise ValueError(f"n must be >= 2 to estimate a standard error, got {n}")
    return n


def _raise_bad_probability(bad_index: int, bad_value: float) -> None:
    raise ContractViolationError(
        f"stochastic model produced probability {bad_value!r} outside [0, 1] "
        f"at draw {bad_index}"
    )


def _kernel_parts(reduce_fn, kind, params, a, b, s, n, workers):
    def job(start, count):
        return reduce_fn(
            kind, params, a.x, a.y, a.z, b.x, b.y, b.z,
            s.kind_code, s.dim, s.seed, start, count,
        )

    parts = run_chunk_jobs(job, n, workers=workers)
    # Chunks stop at their first bad draw; scanning in chunk order makes
    # the reported draw the globally first violation, worker count aside.
    for part in parts:
        if part[4] != _k.STATUS_OK:
            _raise_bad_probability(part[5], part[6])
    return [part[:4] for part in parts]


def estimate_correlation(
    m: DeterministicModel,
    a: UnitVector3,
    b: UnitVector3,
    s: LambdaSampler,
    n: int,
    workers: int = 1,
) -> CorrelationEstimate:
    """Mean outcome product of a deterministic model over draws 0..n-1."""
    if not isinstance(m, DeterministicModel):
        raise ValueError(
            f"estimate_correlation needs a deterministic model, got {type(m).__name__}"
        )
    n = _require_n(n)
    if m.kernel_kind is not None:
        parts = _kernel_parts(
            _k.reduce_product, m.kernel_kind, m.kernel_params, a, b, s, n, workers
        )
    else:
        kind_code, dim, seed = s.kind_code, s.dim, s.seed

        def value_at(i: int) -> float:
            lam = _k.lambda_at(kind_code, dim, seed, i)
            alpha, beta = evaluate_deterministic(m, a, b, lam)
            return alpha * beta

        parts = run_chunk_jobs(scalar_job_from_index_fn(value_at), n, workers=workers)
    mean, stderr = combine_scalar(parts, n)
    return CorrelationEstimate(value=mean, stderr=stderr, n=n, exact=False)


def estimate_stochastic_correlation(
    m: StochasticModel,
    a: UnitVector3,
    b: UnitVector3,
    s: LambdaSampler,
    n: int,
    workers: int = 1,
) -> CorrelationEstimate:
    """Mean product of the two parties' per-draw outcome averages."""
    if not isinstance(m, StochasticModel):
        raise ValueError(
            f"estimate_stochastic_correlation needs a stochastic model, "
            f"got {type(m).__name__}"
        )
    n = _require_n(n)
    if m.kernel_kind is not None:
        parts = _kernel_parts(
            _k.reduce_product, m.kernel_kind, m.kernel_params, a, b, s, n, workers
        )
    else:
        kind_code, dim, seed = s.kind_code, s.dim, s.seed

        def value_at(i: int) -> float:
            lam = _k.lambda_at(kind_code, dim, seed, i)
            mean_a, mean_b = mean_outcomes(m, a, b, lam)
            return mean_a * mean_b

        parts = run_chunk_jobs(scalar_job_from_index_fn(value_at), n, workers=workers)
    mean, stderr = combine_scalar(parts, n)
    return CorrelationEstimate(value=mean, stderr=stderr, n=n, exact=False)


def estimate_joint(
    m: StochasticModel,
    a: UnitVector3,
    b: UnitVector3,
    s: LambdaSampler,
    n: int,
    workers: int = 1,
) -> JointTable:
    """Averaged joint probabilities of a factorized stochastic model.

    On a shared draw stream the table reproduces the correlation estimator:
    p_pp + p_mm - p_pm - p_mp agrees with estimate_stochastic_correlation
    to within accumulation roundoff.
    """
    if not isinstance(m, StochasticModel):
        raise ValueError(
            f"estimate_joint needs a stochastic model, got {type(m).__name__}"
        )
    n = _require_n(n)
    if m.kernel_kind in (_k.KIND_COIN, _k.KIND_LINEAR):
        def job(start, count):
            return _k.reduce_joint(
                m.kernel_kind, m.kernel_params, a.x, a.y, a.z, b.x, b.y, b.z,
                s.kind_code, s.dim, s.seed, start, count,
            )

        raw = run_chunk_jobs(job, n, workers=workers)
        for part in raw:
            if part[4] != _k.STATUS_OK:
                _raise_bad_probability(part[5], part[6])
        parts = [part[:4] for part in raw]
    else:
        kind_code, dim, seed = s.kind_code, s.dim, s.seed

        def values_at(i: int):
            lam = _k.lambda_at(kind_code, dim, seed, i)
            p = evaluate_stochastic(m, a, b, lam)
            return (
                p.p1_plus * p.p2_plus,
                p.p1_minus * p.p2_minus,
                p.p1_plus * p.p2_minus,
                p.p1_minus * p.p2_plus,
            )

        parts = run_chunk_jobs(vec4_job_from_index_fn(values_at), n, workers=workers)
    pairs = combine_vec4(parts, n)
    return JointTable(
        p_pp=pairs[0][0], p_mm=pairs[1][0], p_pm=pairs[2][0], p_mp=pairs[3][0],
        stderr_pp=pairs[0][1], stderr_mm=pairs[1][1],
        stderr_pm=pairs[2][1], stderr_mp=pairs[3][1],
        n=n,
    )


def quantum_correlation(a: UnitVector3, b: UnitVector3) -> CorrelationEstimate:
    """The singlet correlation -a . b, exact.

    Identical and antipodal settings short-circuit to -1 and +1 so that the
    perfect-(anti)correlation limits hold exactly even when the float dot
    product of a renormalized vector with itself is off by an ulp.
    """
    if a == b:
        return CorrelationEstimate(value=-1.0, stderr=0.0, n=0, exact=True)
    if a.x == -b.x and a.y == -b.y and a.z == -b.z:
        return CorrelationEstimate(value=1.0, stderr=0.0, n=0, exact=True)
    d = a.dot(b)
    if d > 1.0:
        d = 1.0
    elif d < -1.0:
        d = -1.0
    return CorrelationEstimate(value=-d, stderr=0.0, n=0, exact=True)


def quantum_correlation_complex(z: RiemannPoint, w: RiemannPoint) -> float:
    """The singlet correlation in stereographic coordinates.

    Evaluated from the rational expression in (z, zbar, w, wbar), with the
    point at infinity handled as its own case. Agreement with
    -project(z) . project(w) is a cross-check in the tests, not the
    implementation.
    """
    if z.is_infinite and w.is_infinite:
        return -1.0
    if z.is_infinite or w.is_infinite:
        finite = w if z.is_infinite else z
        m = finite.re * finite.re + finite.im * finite.im
        if math.isinf(m):
            # |z|^2 overflowed: the value is -1 to far below any tolerance.
            return -1.0
        return (1.0 - m) / (1.0 + m)
    zr, zi = z.re, z.im
    wr, wi = w.re, w.im
    mz = zr * zr + zi * zi
    mw = wr * wr + wi * wi
    if math.isinf(mz) and math.isinf(mw):
        return -1.0
    if math.isinf(mz):
        return (1.0 - mw) / (1.0 + mw)
    if math.isinf(mw):
        return (1.0 - mz) / (1.0 + mz)
    # (z + zbar)(w + wbar) - (zbar - z)(wbar - w) + (1 - |z|^2)(1 - |w|^2),
    # written out in real components, over (1 + |z|^2)(1 + |w|^2).
    num = 4.0 * (zr * wr + zi * wi) + (1.0 - mz) * (1.0 - mw)
    den = (1.0 + mz) * (1.0 + mw)
    return -num / den


def series_correlation(
    pair: AnticorrelatedSeriesPair,
    a: UnitVector3,
    b: UnitVector3,
    s: LambdaSampler,
    n: int,
    workers: int = 1,
) -> CorrelationEstimate:
    """Correlation of an anticorrelated series pair.

    The second side is exactly the negation of the first, so every per-draw
    product is -A^2 <= 0. Draw-independent pairs collapse to a closed form
    and come back exact.
    """
    if not isinstance(pair, AnticorrelatedSeriesPair):
        raise ValueError(
            f"series_correlation needs an anticorrelated series pair, "
            f"got {type(pair).__name__}"
        )
    n = _require_n(n)
    if pair.lambda_independent:
        a_val = evaluate_series(pair.alpha, a, b)
        # Negating every coefficient negates the accumulated sum exactly,
        # so A * (-A) is bit-equal to evaluating the second side.
        value = a_val * (-a_val)
        return CorrelationEstimate(value=value, stderr=0.0, n=0, exact=True)

    kind_code, dim, seed = s.kind_code, s.dim, s.seed

    def value_at(i: int) -> float:
        lam = _k.lambda_at(kind_code, dim, seed, i)
        a_val = evaluate_series(pair.alpha_at(lam), a, b)
        return a_val * (-a_val)

    parts = run_chunk_jobs(scalar_job_from_index_fn(value_at), n, workers=workers)
    mean, stderr = combine_scalar(parts, n)
    return CorrelationEstimate(value=mean, stderr=stderr, n=n, exact=False)


def make_correlation_oracle(
    model,
    s: Optional[LambdaSampler] = None,
    n: int = 100000,
    workers: int = 1,
) -> Callable[[UnitVector3, UnitVector3], CorrelationEstimate]:
    """A (a, b) -> CorrelationEstimate closure for any zoo model.

    Routes to the matching estimator; the closed-form models ignore the
    sampler entirely.
    """
    if isinstance(model, QuantumCorrelationModel):
        return quantum_correlation
    if isinstance(model, AnticorrelatedSeriesPair):
        if pair_needs_sampler(model) and s is None:
            raise ValueError("draw-dependent series pair needs a sampler")
        sampler = s if s is not None else LambdaSampler()

        def series_oracle(a: UnitVector3, b: UnitVector3) -> CorrelationEstimate:
            return series_correlation(model, a, b, sampler, n, workers=workers)

        return series_oracle
    if isinstance(model, DeterministicModel):
        if s is None:
            raise ValueError("deterministic models need a sampler")

        def det_oracle(a: UnitVector3, b: UnitVector3) -> CorrelationEstimate:
            return estimate_correlation(model, a, b, s, n, workers=workers)

        return det_oracle
    if isinstance(model, StochasticModel):
        if s is None:
            raise ValueError("stochastic models need a sampler")

        def stoch_oracle(a: UnitVector3, b: UnitVector3) -> CorrelationEstimate:
            return estimate_stochastic_correlation(model, a, b, s, n, workers=workers)

        return stoch_oracle
    raise ValueError(f"no correlation estimator for {type(model).__name__}")


def pair_needs_sampler(pair: AnticorrelatedSeriesPair) -> bool:
    return not pair.lambda_independent


@dataclass(frozen=True)
class AntipodalContrast:
    """Series-pair correlation at antipodal settings next to the quantum value.

    Any anticorrelated series pair gives a nonpositive value at (a, -a)
    while the singlet correlation there is +1; ``contradiction`` records
    that mismatch.
    """

    a: UnitVector3
    series: CorrelationEstimate
    quantum: CorrelationEstimate
    contradiction: bool

    def to_json(self) -> dict:
        return {
            "a": [self.a.x, self.a.y, self.a.z],
            "series": self.series.to_json(),
            "quantum": self.quantum.to_json(),
            "contradiction": self.contradiction,
        }


def antipodal_contrast(
    pair: AnticorrelatedSeriesPair,
    a: UnitVector3,
    s: LambdaSampler,
    n: int,
    workers: int = 1,
) -> AntipodalContrast:
    """Evaluate a series pair against the quantum value at (a, -a)."""
    b = -a
    series = series_correlation(pair, a, b, s, n, workers=workers)
    quantum = quantum_correlation(a, b)
    return AntipodalContrast(
        a=a,
        series=series,
        quantum=quantum,
        contradiction=(series.value <= 0.0 < quantum.value),
    )


def correlation_sweep(
    model,
    steps: int,
    s: Optional[LambdaSampler] = None,
    n: int = 100000,
    workers: int = 1,
) -> list[tuple[float, CorrelationEstimate]]:
    """Correlation curve over the planar angle theta in [0, pi].

    The first setting is fixed at the z-axis; the second sweeps through
    ``steps`` equally spaced angles from it, endpoints included.
    """
    steps = int(steps)
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    oracle = make_correlation_oracle(model, s, n, workers=workers)
    from .geometry import unit_from_plane_angle

    rows = []
    for k in range(steps):
        theta = (k * math.pi) / (steps - 1)
        b = unit_from_plane_angle(theta)
        rows.append((theta, oracle(Z_AXIS, b)))
    return rows
