import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eprb import (
    CoinModel,
    ContractViolationError,
    DeterministicEmbedding,
    INFINITY,
    LinearStochasticModel,
    LocalSignModel,
    QuantumCorrelationModel,
    RiemannPoint,
    UnitVector3,
    X_AXIS,
    Z_AXIS,
    antipodal_contrast,
    build_model,
    correlation_sweep,
    cube_sampler,
    delta_coefficients,
    estimate_correlation,
    estimate_joint,
    estimate_stochastic_correlation,
    impose_anticorrelation,
    make_correlation_oracle,
    quantum_correlation,
    quantum_correlation_complex,
    random_coefficients,
    series_correlation,
    sphere_sampler,
    stereographic_project,
    unit_from_plane_angle,
)
from eprb.correlation import pair_needs_sampler
from oracles_ref import linear_joint_quad, sign_curve_quad

angles = st.floats(min_value=0.0, max_value=math.pi)
coords = st.floats(min_value=-3.0, max_value=3.0)


class NoKernelSign(LocalSignModel):
    kernel_kind = None


def test_estimate_correlation_type_check():
    with pytest.raises(ValueError, match="deterministic"):
        estimate_correlation(CoinModel(), Z_AXIS, X_AXIS, sphere_sampler(), 100)
    with pytest.raises(ValueError, match="stochastic"):
        estimate_stochastic_correlation(LocalSignModel(), Z_AXIS, X_AXIS, sphere_sampler(), 100)
    with pytest.raises(ValueError, match="n must be"):
        estimate_correlation(LocalSignModel(), Z_AXIS, X_AXIS, sphere_sampler(), 1)


def test_aligned_sign_model_is_perfectly_anticorrelated():
    est = estimate_correlation(LocalSignModel(), Z_AXIS, Z_AXIS, sphere_sampler(), 5000)
    assert est.value == -1.0
    assert est.stderr == 0.0
    assert est.n == 5000 and not est.exact


def test_sign_model_matches_quadrature_curve():
    s = sphere_sampler(seed=2)
    for theta in (0.4, 1.1, 2.3):
        est = estimate_correlation(
            LocalSignModel(), Z_AXIS, unit_from_plane_angle(theta), s, 40000
        )
        assert abs(est.value - sign_curve_quad(theta)) < 4.0 * est.stderr + 1e-9


def test_kernel_and_python_paths_agree_bitwise():
    s = sphere_sampler(seed=4)
    a, b = Z_AXIS, unit_from_plane_angle(1.0)
    fast = estimate_correlation(LocalSignModel(), a, b, s, 8192)
    slow = estimate_correlation(NoKernelSign(), a, b, s, 8192)
    assert fast.value == slow.value
    assert fast.stderr == slow.stderr


def test_worker_count_is_invisible():
    s = sphere_sampler(seed=6)
    a, b = Z_AXIS, unit_from_plane_angle(0.8)
    one = estimate_correlation(LocalSignModel(), a, b, s, 30000, workers=1)
    many = estimate_correlation(LocalSignModel(), a, b, s, 30000, workers=5)
    assert (one.value, one.stderr) == (many.value, many.stderr)


def test_coin_correlation_is_exactly_zero():
    est = estimate_stochastic_correlation(CoinModel(), Z_AXIS, X_AXIS, sphere_sampler(), 1000)
    assert est.value == 0.0
    assert est.stderr == 0.0


def test_linear_model_correlation_is_one_third_of_quantum():
    s = sphere_sampler(seed=8)
    for a, b in ((Z_AXIS, Z_AXIS), (Z_AXIS, unit_from_plane_angle(1.2))):
        est = estimate_stochastic_correlation(LinearStochasticModel(), a, b, s, 100000)
        want = -a.dot(b) / 3.0
        assert abs(est.value - want) < 4.0 * est.stderr + 1e-9
        assert abs(est.value - want) < 0.02


def test_linear_contract_violation_reports_first_bad_draw():
    a = UnitVector3(0.577350269189626, 0.577350269189626, 0.577350269189626)
    with pytest.raises(ContractViolationError, match="at draw 3"):
        estimate_stochastic_correlation(
            LinearStochasticModel(), a, Z_AXIS, cube_sampler(dim=3, seed=0), 4096
        )
    # the reported draw must not depend on the worker count
    with pytest.raises(ContractViolationError, match="at draw 3"):
        estimate_stochastic_correlation(
            LinearStochasticModel(), a, Z_AXIS, cube_sampler(dim=3, seed=0), 20000,
            workers=6,
        )


def test_embedding_reproduces_deterministic_estimator_bitwise():
    s = sphere_sampler(seed=10)
    a, b = Z_AXIS, unit_from_plane_angle(2.0)
    inner = LocalSignModel()
    direct = estimate_correlation(inner, a, b, s, 10000)
    embedded = estimate_stochastic_correlation(DeterministicEmbedding(inner), a, b, s, 10000)
    assert direct.value == embedded.value
    assert direct.stderr == embedded.stderr


def test_joint_table_linear_aligned():
    t = estimate_joint(LinearStochasticModel(), Z_AXIS, Z_AXIS, sphere_sampler(seed=1), 100000)
    pp, mm, pm, mp = linear_joint_quad((0.0, 0.0, 1.0), (0.0, 0.0, 1.0))
    assert abs(t.p_pp - pp) < 4.0 * t.stderr_pp + 1e-9
    assert abs(t.p_pm - pm) < 4.0 * t.stderr_pm + 1e-9
    assert abs(t.total() - 1.0) < 1e-12
    assert t.n == 100000


def test_joint_table_matches_product_estimator():
    s = sphere_sampler(seed=3)
    a, b = Z_AXIS, unit_from_plane_angle(0.9)
    t = estimate_joint(LinearStochasticModel(), a, b, s, 50000)
    est = estimate_stochastic_correlation(LinearStochasticModel(), a, b, s, 50000)
    assert abs(t.correlation() - est.value) < 1e-12


def test_joint_python_fallback_path():
    # embeddings have no joint kernel; the per-draw path serves them
    s = sphere_sampler(seed=5)
    t = estimate_joint(DeterministicEmbedding(LocalSignModel()), Z_AXIS, X_AXIS, s, 5000)
    assert abs(t.total() - 1.0) < 1e-12
    direct = estimate_correlation(LocalSignModel(), Z_AXIS, X_AXIS, s, 5000)
    assert abs(t.correlation() - direct.value) < 1e-12


def test_joint_worker_invariance():
    s = sphere_sampler(seed=7)
    one = estimate_joint(LinearStochasticModel(), Z_AXIS, X_AXIS, s, 30000, workers=1)
    many = estimate_joint(LinearStochasticModel(), Z_AXIS, X_AXIS, s, 30000, workers=4)
    assert one == many


def test_quantum_correlation_closed_form():
    b = unit_from_plane_angle(1.0)
    est = quantum_correlation(Z_AXIS, b)
    assert est.exact and est.n == 0 and est.stderr == 0.0
    assert est.value == -Z_AXIS.dot(b)


def test_quantum_correlation_exact_limits():
    v = UnitVector3(0.36, 0.48, 0.8)
    assert quantum_correlation(v, v).value == -1.0
    assert quantum_correlation(v, -v).value == 1.0


@given(coords, coords, coords, coords)
def test_complex_correlation_matches_projection(zr, zi, wr, wi):
    z = RiemannPoint.finite(zr, zi)
    w = RiemannPoint.finite(wr, wi)
    got = quantum_correlation_complex(z, w)
    want = -stereographic_project(z).dot(stereographic_project(w))
    assert abs(got - want) < 1e-12
    assert -1.0 - 1e-12 <= got <= 1.0 + 1e-12


def test_complex_correlation_at_infinity():
    assert quantum_correlation_complex(INFINITY, INFINITY) == -1.0
    z = RiemannPoint.finite(0.5, 0.0)
    m = 0.25
    assert quantum_correlation_complex(z, INFINITY) == (1.0 - m) / (1.0 + m)
    assert quantum_correlation_complex(INFINITY, z) == (1.0 - m) / (1.0 + m)
    # overflowing |z|^2 lands on the infinity limit instead of nan:
    # effectively the south pole against the north pole, so +1
    huge = RiemannPoint.finite(1e300, 1e300)
    assert quantum_correlation_complex(huge, RiemannPoint.finite(0.0, 0.0)) == 1.0
    assert quantum_correlation_complex(huge, huge) == -1.0


def test_complex_correlation_antipodal_pair():
    # w = -1/conj(z) is the antipode; correlation must be +1
    z = complex(0.7, -0.3)
    w = -1.0 / z.conjugate()
    got = quantum_correlation_complex(
        RiemannPoint.from_complex(z), RiemannPoint.from_complex(w)
    )
    assert abs(got - 1.0) < 1e-12


def test_series_correlation_closed_form_path():
    pair = impose_anticorrelation(delta_coefficients())
    b = unit_from_plane_angle(0.7)
    est = series_correlation(pair, Z_AXIS, b, sphere_sampler(), 1000)
    assert est.exact and est.n == 0 and est.stderr == 0.0
    assert est.value == -(Z_AXIS.dot(b)) ** 2
    assert est.value <= 0.0


def test_series_correlation_draw_dependent_path():
    base = delta_coefficients()
    pair = impose_anticorrelation(base, generator=lambda lam: base)
    assert pair_needs_sampler(pair)
    b = unit_from_plane_angle(0.7)
    est = series_correlation(pair, Z_AXIS, b, sphere_sampler(), 10000)
    assert not est.exact and est.n == 10000
    # constant generator: every draw contributes the same value
    assert est.stderr == 0.0
    assert abs(est.value - -(Z_AXIS.dot(b)) ** 2) < 1e-14


def test_series_correlation_type_check():
    with pytest.raises(ValueError, match="series"):
        series_correlation(CoinModel(), Z_AXIS, X_AXIS, sphere_sampler(), 100)


def test_oracle_dispatch():
    assert make_correlation_oracle(QuantumCorrelationModel()) is quantum_correlation
    s = sphere_sampler()
    est = make_correlation_oracle(LocalSignModel(), s, n=1000)(Z_AXIS, Z_AXIS)
    assert est.value == -1.0
    est = make_correlation_oracle(CoinModel(), s, n=1000)(Z_AXIS, X_AXIS)
    assert est.value == 0.0
    pair = impose_anticorrelation(delta_coefficients())
    est = make_correlation_oracle(pair)(Z_AXIS, Z_AXIS)
    assert est.value == -1.0
    with pytest.raises(ValueError, match="sampler"):
        make_correlation_oracle(LocalSignModel())
    with pytest.raises(ValueError, match="no correlation estimator"):
        make_correlation_oracle(42)


def test_oracle_dispatch_draw_dependent_pair_needs_sampler():
    base = delta_coefficients()
    pair = impose_anticorrelation(base, generator=lambda lam: base)
    with pytest.raises(ValueError, match="sampler"):
        make_correlation_oracle(pair)
    est = make_correlation_oracle(pair, sphere_sampler(), n=100)(Z_AXIS, Z_AXIS)
    assert abs(est.value - -1.0) < 1e-12


def test_antipodal_contrast_flags_the_contradiction():
    pair = impose_anticorrelation(delta_coefficients())
    report = antipodal_contrast(pair, Z_AXIS, sphere_sampler(), 1000)
    assert report.quantum.value == 1.0
    assert report.series.value == -1.0
    assert report.contradiction
    obj = report.to_json()
    assert obj["a"] == [0.0, 0.0, 1.0]
    assert obj["contradiction"] is True


@settings(max_examples=20)
@given(st.integers(min_value=0, max_value=10**6))
def test_antipodal_contrast_for_random_series(seed):
    pair = impose_anticorrelation(random_coefficients(coeff_seed=seed, degree=3))
    report = antipodal_contrast(pair, unit_from_plane_angle(0.3), sphere_sampler(), 100)
    assert report.series.value <= 0.0
    assert report.contradiction


def test_sweep_grid_and_endpoints():
    rows = correlation_sweep(QuantumCorrelationModel(), steps=5)
    assert len(rows) == 5
    assert rows[0][0] == 0.0
    assert abs(rows[-1][0] - math.pi) < 1e-15
    assert rows[0][1].value == -1.0
    assert rows[-1][1].value == 1.0
    for theta, est in rows:
        assert abs(est.value - -math.cos(theta)) < 1e-12


def test_sweep_validation():
    with pytest.raises(ValueError, match="steps"):
        correlation_sweep(QuantumCorrelationModel(), steps=1)


def test_sweep_accepts_zoo_models():
    rows = correlation_sweep(
        build_model("local_sign"), steps=3, s=sphere_sampler(), n=2000
    )
    assert rows[0][1].value == -1.0  # aligned settings anticorrelate exactly


def test_estimate_json_shapes():
    est = quantum_correlation(Z_AXIS, X_AXIS)
    assert est.to_json() == {"value": -0.0, "stderr": 0.0, "n": 0, "exact": True}
    t = estimate_joint(CoinModel(), Z_AXIS, X_AXIS, sphere_sampler(), 100)
    obj = t.to_json()
    assert set(obj) == {"p_pp", "p_mm", "p_pm", "p_mp", "n"}
    assert obj["p_pp"] == {"value": 0.25, "stderr": 0.0}
