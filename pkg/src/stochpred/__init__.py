"""Bayesian vs classical prediction for Poisson and Ornstein-Uhlenbeck processes.

Exact process simulators, the closed-form predictor families, their
analytic dominance regions and a reproducible Monte Carlo harness that
regenerates the reference L2 error tables.
"""

from ._backend import get_backend, set_backend
from ._rng import RngStream, stream_seed
from .errors import (
    ConfigError,
    DegeneratePathError,
    InvalidParameterError,
    OutOfRangeError,
    TruncationError,
    UndefinedBaselineError,
)
from .harness import (
    ErrorReport,
    ExperimentConfig,
    PredictorSpec,
    ReportRow,
    percentage_variation,
    run_experiment,
    run_ou_experiment,
    run_poisson_experiment,
    sweep_prior,
)
from .ou_continuous import (
    OuSufficientStats,
    bayes_m,
    bayes_predict_theta_unknown,
    bayes_theta,
    bayes_theta_translated_exp,
    dominance_bound_m,
    map_predict_theta_unknown,
    mle_m,
    mle_predict_theta_unknown,
    mle_theta,
    predict_m_known_theta,
)
from .ou_sampled import (
    SampledStats,
    bayes_m_sampled,
    clamp_rho,
    cmap1_m,
    cmap2_m,
    cmle_m,
    dominance_m_sampled,
    mle_m_sampled,
    predict_sampled_m,
    predict_sampled_rho,
    rho_bayes,
    rho_cmle,
    var_mean,
    var_mle_m,
)
from .poisson import (
    Prediction,
    bayes_predict,
    dominance_interval_all_s,
    dominance_interval_at_s,
    exact_risk_poisson,
    map_predict,
    up_predict,
)
from .priors import GammaPrior, GaussianPrior, TranslatedExpPrior
from .simulate import (
    OuPath,
    PoissonPath,
    count_at,
    innovation_variance,
    path_integrals,
    simulate_ou,
    simulate_poisson,
)

__version__ = "0.1.0"
