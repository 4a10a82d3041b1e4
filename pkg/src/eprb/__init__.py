"""Simulation and verification toolkit for two-party correlation experiments
under hidden-variable models.

The pieces: measurement-direction geometry on the sphere and the extended
complex plane, reproducible hidden-variable sampling, a model zoo, Monte
Carlo and closed-form correlation estimators, inequality statistics with a
settings maximizer, and finite-difference analyticity diagnostics.
"""

from ._backend import BACKEND_NAME
from .analyticity import (
    ResidualReport,
    Verdict,
    constancy_check,
    pq_nonanalyticity_report,
    residual_report,
    wirtinger_residual,
)
from .correlation import (
    AntipodalContrast,
    CorrelationEstimate,
    JointTable,
    antipodal_contrast,
    correlation_sweep,
    estimate_correlation,
    estimate_joint,
    estimate_stochastic_correlation,
    make_correlation_oracle,
    quantum_correlation,
    quantum_correlation_complex,
    series_correlation,
)
from .errors import ContractViolationError
from .geometry import (
    INFINITY,
    RiemannPoint,
    UnitVector3,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    angle_between,
    inverse_project,
    stereographic_project,
    unit_from_angles,
    unit_from_plane_angle,
)
from .hidden_variables import (
    LambdaSampler,
    MonteCarloEstimate,
    SAMPLER_KINDS,
    cube_sampler,
    integrate,
    sphere_sampler,
)
from .inequalities import (
    BellReport,
    ChshReport,
    MaximizeResult,
    SettingsQuad,
    bell_statistic,
    chsh_statistic,
    cross_term,
    maximize_chsh,
)
from .models import (
    AnticorrelatedSeriesPair,
    CoinModel,
    ConstantNonlocalModel,
    DeterministicEmbedding,
    DeterministicModel,
    FixedOutcomeModel,
    LinearStochasticModel,
    LocalSignModel,
    LocalityClass,
    MODEL_NAMES,
    QuantumCorrelationModel,
    RealAnalyticCoefficients,
    SettingBiasedSignModel,
    SingleProbabilities,
    StochasticModel,
    build_model,
    delta_coefficients,
    evaluate_deterministic,
    evaluate_series,
    evaluate_stochastic,
    impose_anticorrelation,
    mean_outcomes,
    random_coefficients,
    zoo,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "__version__",
    "ContractViolationError",
    "UnitVector3",
    "RiemannPoint",
    "INFINITY",
    "X_AXIS",
    "Y_AXIS",
    "Z_AXIS",
    "stereographic_project",
    "inverse_project",
    "angle_between",
    "unit_from_plane_angle",
    "unit_from_angles",
    "LambdaSampler",
    "MonteCarloEstimate",
    "SAMPLER_KINDS",
    "sphere_sampler",
    "cube_sampler",
    "integrate",
    "LocalityClass",
    "SingleProbabilities",
    "DeterministicModel",
    "StochasticModel",
    "LocalSignModel",
    "CoinModel",
    "LinearStochasticModel",
    "ConstantNonlocalModel",
    "FixedOutcomeModel",
    "SettingBiasedSignModel",
    "DeterministicEmbedding",
    "QuantumCorrelationModel",
    "RealAnalyticCoefficients",
    "AnticorrelatedSeriesPair",
    "evaluate_deterministic",
    "evaluate_stochastic",
    "mean_outcomes",
    "evaluate_series",
    "delta_coefficients",
    "random_coefficients",
    "impose_anticorrelation",
    "build_model",
    "MODEL_NAMES",
    "zoo",
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
    "SettingsQuad",
    "ChshReport",
    "chsh_statistic",
    "BellReport",
    "bell_statistic",
    "cross_term",
    "MaximizeResult",
    "maximize_chsh",
    "Verdict",
    "ResidualReport",
    "wirtinger_residual",
    "residual_report",
    "constancy_check",
    "pq_nonanalyticity_report",
]
