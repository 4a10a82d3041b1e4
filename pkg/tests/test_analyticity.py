import cmath
import math

import pytest
import sympy

from eprb import (
    INFINITY,
    RiemannPoint,
    Verdict,
    constancy_check,
    pq_nonanalyticity_report,
    quantum_correlation_complex,
    residual_report,
    wirtinger_residual,
)
from eprb.analyticity import DEFAULT_H, DEFAULT_TOL, _disc_grid


def pq_at_infinity(z: complex) -> complex:
    return quantum_correlation_complex(RiemannPoint.from_complex(z), INFINITY)


def sympy_pq_dzbar():
    # symbolic conjugate derivative of (1 - z zbar)/(1 + z zbar)
    z, zb = sympy.symbols("z zbar")
    f = (1 - z * zb) / (1 + z * zb)
    d = sympy.diff(f, zb)
    return sympy.lambdify((z, zb), d, "mpmath")


def test_residual_rejects_bad_arguments():
    with pytest.raises(ValueError, match="finite"):
        wirtinger_residual(lambda z: z, INFINITY, 1e-4)
    for h in (0.0, -1e-4, math.inf):
        with pytest.raises(ValueError, match="step"):
            wirtinger_residual(lambda z: z, RiemannPoint.finite(0.0, 0.0), h)


def test_conjugate_map_has_residual_exactly_one():
    for z in (RiemannPoint.finite(0.0, 0.0), RiemannPoint.finite(1.0, -2.0),
              RiemannPoint.finite(0.3, 0.7)):
        assert wirtinger_residual(lambda w: w.conjugate(), z, 1e-4) == 1.0


def test_real_part_has_residual_exactly_half():
    for z in (RiemannPoint.finite(0.5, 0.5), RiemannPoint.finite(-2.0, 1.0)):
        assert wirtinger_residual(lambda w: w.real, z, 1e-4) == 0.5


def test_analytic_map_residual_shrinks_like_h_squared():
    z = RiemannPoint.finite(0.7, -0.4)
    r1 = abs(wirtinger_residual(lambda w: w**3, z, 1e-3))
    r2 = abs(wirtinger_residual(lambda w: w**3, z, 5e-4))
    assert r1 < 1e-5
    assert 3.8 < r1 / r2 < 4.2  # second-order stencil


def test_identity_map_residual_is_zero():
    z = RiemannPoint.finite(0.3, 0.9)
    assert wirtinger_residual(lambda w: w, z, 1e-4) == 0.0


def test_pq_residual_matches_symbolic_derivative():
    d = sympy_pq_dzbar()
    for zc in (0.3 + 0.1j, -0.5 + 0.4j, 0.9 - 0.2j, 1.0 + 0.0j):
        got = wirtinger_residual(pq_at_infinity, RiemannPoint.from_complex(zc), 1e-4)
        want = complex(d(zc, zc.conjugate()))
        assert abs(got - want) < 5e-7


def test_pq_residual_magnitude_peaks_inside_the_disc():
    # |d/dzbar| = 2r/(1+r^2)^2 peaks at r = 1/sqrt(3)
    r_star = 1.0 / math.sqrt(3.0)
    peak = 2.0 * r_star / (1.0 + r_star * r_star) ** 2
    got = abs(wirtinger_residual(pq_at_infinity, RiemannPoint.finite(r_star, 0.0), 1e-5))
    assert abs(got - peak) < 1e-8
    assert abs(peak - 3.0 * math.sqrt(3.0) / 8.0) < 1e-15


def test_residual_report_verdicts():
    pts = [RiemannPoint.finite(0.2, 0.1), RiemannPoint.finite(-0.4, 0.5)]
    rep = residual_report(lambda w: w**2, pts)
    assert rep.verdict is Verdict.ANALYTIC_WITHIN_TOL
    assert rep.max_residual < DEFAULT_TOL
    rep = residual_report(pq_at_infinity, pts)
    assert rep.verdict is Verdict.NON_ANALYTIC
    assert len(rep.points) == 2


def test_residual_report_validation():
    with pytest.raises(ValueError, match="point"):
        residual_report(lambda w: w, [])
    with pytest.raises(ValueError, match="tolerance"):
        residual_report(lambda w: w, [RiemannPoint.finite(0.0, 0.0)], tol=0.0)


def test_residual_report_json_shape():
    rep = residual_report(lambda w: w, [RiemannPoint.finite(0.25, -1.0)])
    obj = rep.to_json()
    assert set(obj) == {"h", "tol", "max_residual", "verdict", "points"}
    assert obj["verdict"] == "analytic_within_tol"
    assert obj["points"][0]["z"] == {"re": 0.25, "im": -1.0}
    assert obj["h"] == DEFAULT_H


def test_constancy_check_on_a_constant():
    pts = [RiemannPoint.finite(x / 4.0, y / 4.0) for x in range(-2, 3) for y in range(-2, 3)]
    verdict, spread, report = constancy_check(lambda w: 0.75, pts)
    assert verdict is Verdict.ANALYTIC_WITHIN_TOL
    assert spread == 0.0
    assert report.max_residual == 0.0


def test_constancy_check_flags_a_non_flat_real_map():
    pts = [RiemannPoint.finite(x / 4.0, 0.0) for x in range(-2, 3)]
    verdict, spread, _ = constancy_check(pq_at_infinity, pts)
    assert verdict is Verdict.NON_ANALYTIC
    assert spread > 0.1


def test_constancy_check_validation():
    one = [RiemannPoint.finite(0.0, 0.0)]
    with pytest.raises(ValueError, match="two"):
        constancy_check(lambda w: 1.0, one)
    pts = [RiemannPoint.finite(0.0, 0.0), RiemannPoint.finite(0.5, 0.0)]
    with pytest.raises(ValueError, match="not real-valued"):
        constancy_check(lambda w: w + 1j * 1e-6, pts)
    with pytest.raises(ValueError, match="finite"):
        constancy_check(lambda w: 1.0, [RiemannPoint.finite(0.0, 0.0), INFINITY])


def test_disc_grid_stays_inside_the_radius():
    pts = _disc_grid(1.0, 9)
    assert all(p.re ** 2 + p.im ** 2 <= 1.0 + 1e-15 for p in pts)
    assert len(pts) < 81  # corners clipped
    assert RiemannPoint.finite(0.0, 0.0) in pts
    assert RiemannPoint.finite(1.0, 0.0) in pts


def test_pq_nonanalyticity_report_at_infinity():
    rep = pq_nonanalyticity_report(INFINITY, radius=1.0, k=9)
    assert rep.verdict is Verdict.NON_ANALYTIC
    assert rep.max_residual > 0.4


def test_pq_nonanalyticity_report_for_finite_w():
    rep = pq_nonanalyticity_report(RiemannPoint.finite(0.0, 0.0), radius=1.0, k=9)
    assert rep.verdict is Verdict.NON_ANALYTIC


def test_pq_nonanalyticity_report_validation():
    with pytest.raises(ValueError, match="radius"):
        pq_nonanalyticity_report(INFINITY, radius=0.0)
    with pytest.raises(ValueError, match="radius"):
        pq_nonanalyticity_report(INFINITY, radius=math.inf)
    with pytest.raises(ValueError, match="grid"):
        pq_nonanalyticity_report(INFINITY, k=1)


def test_exp_is_analytic_everywhere_sampled():
    pts = [RiemannPoint.finite(0.1 * k, 0.05 * k) for k in range(-5, 6)]
    rep = residual_report(cmath.exp, pts)
    assert rep.verdict is Verdict.ANALYTIC_WITHIN_TOL
