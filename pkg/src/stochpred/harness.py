"""Reproducible Monte Carlo comparison of predictor families.

An :class:`ExperimentConfig` names a process, its true parameters, the
design grids, a replicate count, a master seed and a list of predictors.
Running it yields an :class:`ErrorReport` with one row per (design point,
predictor): the empirical L2 prediction error

    mean over replicates of (realized future value - prediction)^2,

the empirical L2 estimation error (same, against the true-parameter
conditional expectation instead of the realized value), their Monte Carlo
standard errors, and percentage variations against a designated baseline
predictor.

Common random numbers: all predictors, design points and prior-grid
values at a given replicate index see the same simulated path, so error
differences are far more stable than the raw errors themselves.  Workers
only parallelize path simulation over fixed replicate blocks; every
aggregate is computed from full per-replicate arrays, so reports are
byte-identical for any worker count.

The per-replicate identity ``(Y-p)^2 - (c-p)^2 - (Y-c)^2 = 2 (Y-c)(c-p)``
(with ``c`` the conditional expectation) makes the prediction risk
decompose exactly into estimation risk plus conditional variance; each
row carries the empirical gap and its standard error so the decomposition
can be checked on every cell.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Callable

import numpy as np

from . import _kernels
from .errors import ConfigError, UndefinedBaselineError
from .ou_continuous import (
    OuSufficientStats,
    bayes_predict_theta_unknown,
    map_predict_theta_unknown,
    mle_predict_theta_unknown,
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
)
from .poisson import bayes_predict, map_predict, up_predict
from .priors import GammaPrior, GaussianPrior

PROCESSES = ("poisson", "ou-m-unknown", "ou-theta-unknown", "ou-rho-sampled")

#: predictor name -> required prior parameter names, per process
_ALLOWED: dict[str, dict[str, tuple[str, ...]]] = {
    "poisson": {"up": (), "bayes": ("a", "b"), "map": ("a", "b")},
    "ou-m-unknown": {"mle": (), "mean": (), "cmle": (),
                     "bayes": ("m0", "u2"), "cmap1": ("m0", "u2"), "cmap2": ("m0", "u2")},
    "ou-rho-sampled": {"cmle": (), "bayes": ("rho0", "v2")},
    "ou-theta-unknown": {"mle": (), "bayes": ("theta0", "v2"), "map": ("theta0", "v2")},
}

_LABELS: dict[tuple[str, str], str] = {
    ("poisson", "up"): "UP", ("poisson", "bayes"): "BP", ("poisson", "map"): "MAP",
    ("ou-m-unknown", "mle"): "MLE", ("ou-m-unknown", "mean"): "Mean",
    ("ou-m-unknown", "cmle"): "CMLE", ("ou-m-unknown", "bayes"): "Bayes",
    ("ou-m-unknown", "cmap1"): "CMAP1", ("ou-m-unknown", "cmap2"): "CMAP2",
    ("ou-rho-sampled", "cmle"): "CMLE", ("ou-rho-sampled", "bayes"): "Bayes",
    ("ou-theta-unknown", "mle"): "MLE", ("ou-theta-unknown", "bayes"): "Bayes",
    ("ou-theta-unknown", "map"): "MAP",
}

_GAMMA_FAMILIES = {("poisson", "bayes"), ("poisson", "map")}

_SPEC_RE = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*(?:\(\s*(.*?)\s*\))?\s*$")
_PARAM_RE = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*=\s*([^\s,]+)\s*$")


def _num_str(x: float) -> str:
    xf = float(x)
    if math.isfinite(xf) and xf == int(xf) and abs(xf) < 1e15:
        return str(int(xf))
    return repr(xf)


@dataclass(frozen=True)
class PredictorSpec:
    """One predictor with its prior parameters, e.g. ``bayes(a=1,b=1)``.

    ``custom`` is a test hook: a callable receiving the per-design-point
    context (replicate arrays) and returning the prediction vector; it
    bypasses the name registry and cannot be expressed in config files.
    """

    name: str
    params: tuple[tuple[str, float], ...] = ()
    custom: Callable | None = None

    def param(self, key: str) -> float:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def has_param(self, key: str) -> bool:
        return any(k == key for k, _ in self.params)

    def with_param(self, key: str, value: float) -> "PredictorSpec":
        params = tuple((k, value if k == key else v) for k, v in self.params)
        return dataclasses.replace(self, params=params)

    @property
    def spec_string(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={_num_str(v)}" for k, v in self.params)
        return f"{self.name}({inner})"

    @classmethod
    def parse(cls, text: str) -> "PredictorSpec":
        m = _SPEC_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse predictor spec {text!r}")
        name, body = m.group(1), m.group(2)
        params: list[tuple[str, float]] = []
        if body:
            for part in body.split(","):
                pm = _PARAM_RE.match(part)
                if not pm:
                    raise ValueError(f"cannot parse parameter {part!r} in {text!r}")
                try:
                    params.append((pm.group(1), float(pm.group(2))))
                except ValueError:
                    raise ValueError(f"non-numeric value in {part!r}") from None
        params.sort()
        return cls(name=name, params=tuple(params))


@dataclass(frozen=True)
class ExperimentConfig:
    """Process, truth, design grids, replicate budget and predictor list.

    Grids are kept sorted and deduplicated.  ``s``/``h`` drive the Poisson
    and continuous-record designs (time units); ``n``/``delta``/``big_h``
    drive the sampled OU designs, where ``big_h`` is the prediction
    horizon in time units and must be a multiple of each ``delta``.
    """

    process: str
    replicates: int
    master_seed: int
    predictors: tuple[PredictorSpec, ...]
    baseline: str
    theta: tuple[float, ...] = (1.0,)
    m: float = 0.0
    s: tuple[float, ...] = ()
    h: tuple[float, ...] = ()
    n: tuple[int, ...] = ()
    delta: tuple[float, ...] = ()
    big_h: tuple[float, ...] = ()
    refine: int = 10
    # clamp rho estimates into [0, 1] before powering them up in the
    # rho-sampled predictors; reproducing the reference error tables needs
    # this on (the raw estimator's h-th power has heavy tails at small n)
    clamp_rho: bool = True
    sweep_axis: str | None = None
    sweep_grid: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(sorted(set(float(t) for t in self.theta))))
        object.__setattr__(self, "s", tuple(sorted(set(float(v) for v in self.s))))
        object.__setattr__(self, "h", tuple(sorted(set(float(v) for v in self.h))))
        object.__setattr__(self, "n", tuple(sorted(set(int(v) for v in self.n))))
        object.__setattr__(self, "delta", tuple(sorted(set(float(v) for v in self.delta))))
        object.__setattr__(self, "big_h", tuple(sorted(set(float(v) for v in self.big_h))))
        object.__setattr__(self, "sweep_grid", tuple(float(v) for v in self.sweep_grid))

    # -- validation --------------------------------------------------------

    def validate(self) -> list[str]:
        """Return every violation found (empty list when runnable)."""
        v: list[str] = []
        if self.process not in PROCESSES:
            v.append(f"process must be one of {PROCESSES}, got {self.process!r}")
            return v
        if self.replicates < 1:
            v.append(f"replicates must be >= 1, got {self.replicates}")
        if not 0 <= self.master_seed < 2 ** 64:
            v.append(f"seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if not self.theta:
            v.append("at least one theta value is required")
        if any(t <= 0 for t in self.theta):
            v.append(f"theta values must be > 0, got {self.theta}")
        if not math.isfinite(self.m):
            v.append(f"m must be finite, got {self.m}")
        v.extend(self._validate_design())
        v.extend(self._validate_predictors())
        if self.sweep_axis is not None:
            v.extend(self._validate_sweep(self.sweep_axis, self.sweep_grid))
        return v

    def _validate_design(self) -> list[str]:
        v: list[str] = []
        sampled = self.process in ("ou-m-unknown", "ou-rho-sampled")
        if self.process == "poisson":
            if not self.s:
                v.append("poisson needs at least one s value")
            if not self.h:
                v.append("poisson needs at least one h value")
            for key in ("n", "delta", "big_h"):
                if getattr(self, key):
                    v.append(f"{key} does not apply to the poisson process")
        elif sampled:
            if not self.n:
                v.append(f"{self.process} needs at least one n value")
            if not self.delta:
                v.append(f"{self.process} needs at least one delta value")
            if not self.big_h:
                v.append(f"{self.process} needs at least one H value")
            for d in self.delta:
                for bh in self.big_h:
                    steps = bh / d
                    if abs(steps - round(steps)) > 1e-9 or round(steps) < 1:
                        v.append(f"H={bh} is not a positive multiple of delta={d}")
            for key in ("s", "h"):
                if getattr(self, key):
                    v.append(f"{key} does not apply to {self.process} (use n/delta/H)")
        else:  # ou-theta-unknown
            if not self.s:
                v.append("ou-theta-unknown needs at least one s value")
            if not self.h:
                v.append("ou-theta-unknown needs at least one h value")
            if len(self.delta) != 1:
                v.append("ou-theta-unknown needs exactly one delta (the observation grid)")
            if self.refine < 1:
                v.append(f"refine must be >= 1, got {self.refine}")
            if len(self.delta) == 1:
                d = self.delta[0]
                for val, key in [(x, "s") for x in self.s] + [(x, "h") for x in self.h]:
                    k = val / d
                    if abs(k - round(k)) > 1e-9 or round(k) < 1:
                        v.append(f"{key}={val} is not a positive multiple of delta={d}")
            for key in ("n", "big_h"):
                if getattr(self, key):
                    v.append(f"{key} does not apply to ou-theta-unknown")
        if any(x <= 0 for x in self.s):
            v.append("s values must be > 0")
        if any(x <= 0 for x in self.h):
            v.append("h values must be > 0")
        if any(x < 1 for x in self.n):
            v.append("n values must be >= 1")
        if any(x <= 0 for x in self.delta):
            v.append("delta values must be > 0")
        return v

    def _validate_predictors(self) -> list[str]:
        v: list[str] = []
        if not self.predictors:
            v.append("at least one predictor is required")
            return v
        allowed = _ALLOWED[self.process]
        seen: set[str] = set()
        for spec in self.predictors:
            if spec.custom is not None:
                continue
            if spec.name not in allowed:
                v.append(f"predictor {spec.name!r} is not valid for {self.process} "
                         f"(choose from {sorted(allowed)})")
                continue
            required = allowed[spec.name]
            got = tuple(k for k, _ in spec.params)
            if got != tuple(sorted(required)):
                v.append(f"predictor {spec.spec_string!r} must have exactly the "
                         f"parameters {sorted(required)}")
                continue
            v.extend(f"predictor {spec.spec_string!r}: {msg}"
                     for msg in _prior_violations(self.process, spec.name, dict(spec.params)))
            if spec.spec_string in seen:
                v.append(f"duplicate predictor {spec.spec_string!r}")
            seen.add(spec.spec_string)
        try:
            self._baseline_index()
        except ValueError as exc:
            v.append(str(exc))
        return v

    def _validate_sweep(self, axis: str, grid: tuple[float, ...]) -> list[str]:
        v: list[str] = []
        carriers = [sp for sp in self.predictors if sp.custom is None and sp.has_param(axis)]
        if not carriers:
            v.append(f"sweep axis {axis!r} is not a prior parameter of any configured predictor")
            return v
        if not grid:
            v.append("sweep grid must not be empty")
        for g in grid:
            for sp in carriers:
                params = dict(sp.params)
                params[axis] = g
                for msg in _prior_violations(self.process, sp.name, params):
                    v.append(f"sweep value {axis}={_num_str(g)} invalid for "
                             f"{sp.spec_string!r}: {msg}")
        return v

    def _baseline_index(self) -> int:
        try:
            base = PredictorSpec.parse(self.baseline)
        except ValueError as exc:
            raise ValueError(f"baseline: {exc}") from None
        matches = [i for i, sp in enumerate(self.predictors)
                   if sp.custom is None and sp.spec_string == base.spec_string]
        if len(matches) != 1:
            raise ValueError(f"baseline {self.baseline!r} must match exactly one "
                             f"configured predictor ({len(matches)} matches)")
        return matches[0]


def _prior_violations(process: str, name: str, params: dict[str, float]) -> list[str]:
    v: list[str] = []
    if (process, name) in _GAMMA_FAMILIES:
        if params["a"] <= 0:
            v.append(f"gamma shape a must be > 0, got {params['a']}")
        if params["b"] <= 0:
            v.append(f"gamma rate b must be > 0, got {params['b']}")
        if name == "map" and params["a"] < 1:
            v.append(f"MAP needs a >= 1, got {params['a']}")
    elif name in ("bayes", "cmap1", "cmap2") and "u2" in params:
        if params["u2"] <= 0:
            v.append(f"prior variance u2 must be > 0, got {params['u2']}")
    elif "v2" in params:
        if params["v2"] <= 0:
            v.append(f"prior variance v2 must be > 0, got {params['v2']}")
        if "rho0" in params and not 0 < params["rho0"] < 1:
            v.append(f"rho0 must lie in (0, 1), got {params['rho0']}")
    return v


def _validate_or_raise(config: ExperimentConfig) -> None:
    violations = config.validate()
    if violations:
        raise ConfigError(violations)


# ---------------------------------------------------------------------------
# report containers
# ---------------------------------------------------------------------------

CSV_HEADER = ("process,theta,m,delta,n,S,H,h,predictor,prior_id,prior_params,"
              "pred_err,est_err,pct_pred,pct_est,std_err,N,seed")


@dataclass(frozen=True)
class ReportRow:
    process: str
    theta: float
    m: float | None
    delta: float | None
    n: int | None
    s: float | None
    big_h: float | None
    h: float | None
    predictor: str
    prior_id: str
    prior_params: str
    pred_err: float
    est_err: float
    pct_pred: float
    pct_est: float
    std_err: float
    est_se: float
    cond_var: float
    pythag_gap: float
    pythag_se: float
    replicates: int
    seed: int


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


@dataclass
class ErrorReport:
    """Rows plus, for prior sweeps, analytic dominance markers."""

    rows: list[ReportRow]
    markers: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(",".join(_csv_cell(x) for x in (
                r.process, r.theta, r.m, r.delta, r.n, r.s, r.big_h, r.h,
                r.predictor, r.prior_id, r.prior_params,
                r.pred_err, r.est_err, r.pct_pred, r.pct_est, r.std_err,
                r.replicates, r.seed)))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.csv_text())

    def select(self, **criteria) -> list[ReportRow]:
        out = []
        for r in self.rows:
            if all(getattr(r, k) == v for k, v in criteria.items()):
                out.append(r)
        return out

    def find(self, **criteria) -> ReportRow:
        hits = self.select(**criteria)
        if len(hits) != 1:
            raise KeyError(f"criteria {criteria} matched {len(hits)} rows")
        return hits[0]


def percentage_variation(baseline_err: float, other_err: float) -> float:
    """``100 (other - baseline) / baseline``; needs a positive baseline."""
    if baseline_err <= 0:
        raise UndefinedBaselineError(f"baseline error must be > 0, got {baseline_err}")
    return 100.0 * (other_err - baseline_err) / baseline_err


# ---------------------------------------------------------------------------
# shared evaluation plumbing
# ---------------------------------------------------------------------------

def _prior_of(spec: PredictorSpec, process: str):
    if spec.custom is not None or not spec.params:
        return None
    p = dict(spec.params)
    if (process, spec.name) in _GAMMA_FAMILIES:
        return GammaPrior(p["a"], p["b"])
    if "u2" in p:
        return GaussianPrior(p["m0"], p["u2"])
    if "rho0" in p:
        return GaussianPrior(p["rho0"], p["v2"])
    return GaussianPrior(p["theta0"], p["v2"])


def _prior_columns(spec: PredictorSpec, process: str) -> tuple[str, str]:
    if spec.custom is not None or not spec.params:
        return "", ""
    family = "gamma" if (process, spec.name) in _GAMMA_FAMILIES else "gaussian"
    return family, ";".join(f"{k}={_num_str(v)}" for k, v in spec.params)


def _label_of(spec: PredictorSpec, process: str) -> str:
    if spec.custom is not None:
        return spec.name
    return _LABELS[(process, spec.name)]


def _mean_and_se(x: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(x))
    if x.shape[0] >= 2:
        se = float(np.std(x, ddof=1) / math.sqrt(x.shape[0]))
    else:
        se = float("nan")
    return mean, se


class _CellEvaluator:
    """Evaluates every predictor of one design point against (y, c)."""

    def __init__(self, config: ExperimentConfig, y: np.ndarray, c: np.ndarray):
        self.config = config
        self.y = y
        self.c = c
        self.cond = y - c
        self.cond_var = float(np.mean(self.cond ** 2))

    def measure(self, p: np.ndarray):
        e = self.y - p
        g = self.c - p
        pred_err, pred_se = _mean_and_se(e * e)
        est_err, est_se = _mean_and_se(g * g)
        gap, gap_se = _mean_and_se(2.0 * self.cond * g)
        return pred_err, est_err, pred_se, est_se, gap, gap_se

    def rows(self, design: dict, preds: list[np.ndarray], base_idx: int) -> list[ReportRow]:
        stats = [self.measure(np.broadcast_to(np.asarray(p, dtype=np.float64), self.y.shape))
                 for p in preds]
        base_pred, base_est = stats[base_idx][0], stats[base_idx][1]
        rows = []
        for i, (spec, st) in enumerate(zip(self.config.predictors, stats)):
            pred_err, est_err, pred_se, est_se, gap, gap_se = st
            if i == base_idx:
                pct_pred = pct_est = 0.0
            else:
                pct_pred = percentage_variation(base_pred, pred_err)
                pct_est = percentage_variation(base_est, est_err)
            prior_id, prior_params = _prior_columns(spec, self.config.process)
            rows.append(ReportRow(
                predictor=_label_of(spec, self.config.process),
                prior_id=prior_id, prior_params=prior_params,
                pred_err=pred_err, est_err=est_err,
                pct_pred=pct_pred, pct_est=pct_est,
                std_err=pred_se, est_se=est_se,
                cond_var=self.cond_var, pythag_gap=gap, pythag_se=gap_se,
                replicates=self.config.replicates, seed=self.config.master_seed,
                **design))
        return rows


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------

def run_experiment(config: ExperimentConfig, workers: int = 1) -> ErrorReport:
    _validate_or_raise(config)
    if config.process == "poisson":
        return run_poisson_experiment(config, workers)
    return run_ou_experiment(config, workers)


def run_poisson_experiment(config: ExperimentConfig, workers: int = 1) -> ErrorReport:
    """Empirical L2 errors for the Poisson predictors on the (s, h) grid.

    One long path per replicate covers every window: counts are evaluated
    at all ``s`` and ``s + h`` points of the same trajectory.
    """
    _validate_or_raise(config)
    if config.process != "poisson":
        raise ConfigError([f"run_poisson_experiment needs process=poisson, got {config.process}"])
    base_idx = config._baseline_index()
    rows: list[ReportRow] = []
    time_list = sorted({*config.s, *(s + h for s in config.s for h in config.h)})
    times = np.asarray(time_list, dtype=np.float64)
    col = {t: i for i, t in enumerate(time_list)}
    for theta in config.theta:
        counts = _kernels.poisson_counts(config.master_seed, config.replicates,
                                         theta, times, workers)
        for s in config.s:
            ns = counts[:, col[s]].astype(np.float64)
            for h in config.h:
                y = counts[:, col[s + h]].astype(np.float64)
                c = ns + theta * h
                cell = _CellEvaluator(config, y, c)
                preds = [_poisson_prediction(spec, ns, s, h, theta, y) for spec in config.predictors]
                design = dict(process="poisson", theta=theta, m=None, delta=None,
                              n=None, s=s, big_h=None, h=h)
                rows.extend(cell.rows(design, preds, base_idx))
    return ErrorReport(rows)


def _poisson_prediction(spec, ns, s, h, theta, y):
    if spec.custom is not None:
        return np.asarray(spec.custom(SimpleNamespace(ns=ns, y=y, s=s, h=h, theta=theta)),
                          dtype=np.float64)
    if spec.name == "up":
        return up_predict(ns, s, h).value
    prior = _prior_of(spec, "poisson")
    fn = bayes_predict if spec.name == "bayes" else map_predict
    return fn(ns, s, h, prior).value


def run_ou_experiment(config: ExperimentConfig, workers: int = 1) -> ErrorReport:
    """Empirical L2 errors for the OU predictor families.

    Handles the three OU modes: mean unknown (sampled record), coefficient
    ``rho`` unknown (sampled record, mean known) and rate unknown
    (continuous record approximated on a refined grid).  The estimation
    error is measured against the true-parameter conditional expectation
    ``m + e^{-theta H}(X_n - m)``, mirroring the Poisson definition.
    """
    _validate_or_raise(config)
    if config.process == "ou-theta-unknown":
        return _run_ou_theta(config, workers)
    if config.process not in ("ou-m-unknown", "ou-rho-sampled"):
        raise ConfigError([f"run_ou_experiment needs an OU process, got {config.process}"])
    base_idx = config._baseline_index()
    centered = config.process == "ou-rho-sampled"
    rows: list[ReportRow] = []
    for theta in config.theta:
        for delta in config.delta:
            h_steps = [int(round(bh / delta)) for bh in config.big_h]
            n_steps = max(config.n) + max(h_steps)
            vals = _kernels.ou_paths(config.master_seed, config.replicates,
                                     config.m, theta, delta, n_steps, workers)
            arr = vals - config.m if centered else vals
            cums = np.cumsum(arr, axis=1)
            lag_prod = np.cumsum(arr[:, :-1] * arr[:, 1:], axis=1)
            lag_sq = np.cumsum(arr[:, :-1] ** 2, axis=1)
            for n in config.n:
                stats = SampledStats(
                    n=n, step=delta, x0=arr[:, 0], x_end=arr[:, n],
                    sum_interior=cums[:, n - 1] - arr[:, 0],
                    sum_all=cums[:, n] - arr[:, 0],
                    sum_lag_prod=lag_prod[:, n - 1], sum_lag_sq=lag_sq[:, n - 1])
                for bh, hs in zip(config.big_h, h_steps):
                    y = arr[:, n + hs]
                    if centered:
                        c = math.exp(-theta * bh) * arr[:, n]
                    else:
                        c = config.m + math.exp(-theta * bh) * (arr[:, n] - config.m)
                    cell = _CellEvaluator(config, y, c)
                    preds = [_ou_sampled_prediction(spec, stats, theta, hs, delta,
                                                    centered, y, config.clamp_rho)
                             for spec in config.predictors]
                    design = dict(process=config.process, theta=theta, m=config.m,
                                  delta=delta, n=n, s=n * delta, big_h=bh, h=float(hs))
                    rows.extend(cell.rows(design, preds, base_idx))
    return ErrorReport(rows)


def _ou_sampled_prediction(spec, stats, theta, h_steps, delta, centered, y,
                           clamp: bool = True):
    if spec.custom is not None:
        return np.asarray(spec.custom(SimpleNamespace(stats=stats, theta=theta,
                                                      h_steps=h_steps, step=delta, y=y)),
                          dtype=np.float64)
    prior = _prior_of(spec, "ou-rho-sampled" if centered else "ou-m-unknown")
    if centered:
        r = rho_cmle(stats) if spec.name == "cmle" else rho_bayes(stats, prior)
        if clamp:
            r = clamp_rho(r)
        return predict_sampled_rho(r, stats.x_end, h_steps)
    if spec.name == "mle":
        m_est = mle_m_sampled(stats, theta)
    elif spec.name == "mean":
        m_est = stats.sum_all / stats.n
    elif spec.name == "cmle":
        m_est = cmle_m(stats, theta)
    elif spec.name == "bayes":
        m_est = bayes_m_sampled(stats, theta, prior)
    elif spec.name == "cmap1":
        m_est = cmap1_m(stats, theta, prior)
    else:
        m_est = cmap2_m(stats, theta, prior)
    return predict_sampled_m(m_est, stats.x_end, theta, h_steps, delta)


def _run_ou_theta(config: ExperimentConfig, workers: int = 1) -> ErrorReport:
    base_idx = config._baseline_index()
    delta = config.delta[0]
    fine = delta / config.refine
    rows: list[ReportRow] = []
    for theta in config.theta:
        n_steps = int(round((max(config.s) + max(config.h)) / fine))
        vals = _kernels.ou_paths(config.master_seed, config.replicates,
                                 config.m, theta, fine, n_steps, workers)
        arr = vals - config.m
        cum_x = np.cumsum(0.5 * fine * (arr[:, 1:] + arr[:, :-1]), axis=1)
        sq = arr * arr
        cum_x2 = np.cumsum(0.5 * fine * (sq[:, 1:] + sq[:, :-1]), axis=1)
        del sq
        for s in config.s:
            i_s = int(round(s / fine))
            stats = OuSufficientStats(x0=arr[:, 0], x_end=arr[:, i_s], s=s,
                                      int_x=cum_x[:, i_s - 1], int_x2=cum_x2[:, i_s - 1])
            for h in config.h:
                y = arr[:, i_s + int(round(h / fine))]
                c = math.exp(-theta * h) * arr[:, i_s]
                cell = _CellEvaluator(config, y, c)
                preds = [_ou_theta_prediction(spec, stats, h, y) for spec in config.predictors]
                design = dict(process=config.process, theta=theta, m=config.m,
                              delta=delta, n=None, s=s, big_h=h, h=None)
                rows.extend(cell.rows(design, preds, base_idx))
    return ErrorReport(rows)


def _ou_theta_prediction(spec, stats, h, y):
    if spec.custom is not None:
        return np.asarray(spec.custom(SimpleNamespace(stats=stats, h=h, y=y)),
                          dtype=np.float64)
    if spec.name == "mle":
        return mle_predict_theta_unknown(stats, h)
    prior = _prior_of(spec, "ou-theta-unknown")
    if spec.name == "bayes":
        return bayes_predict_theta_unknown(stats, prior, h)
    return map_predict_theta_unknown(stats, prior, h)


# ---------------------------------------------------------------------------
# prior sweeps
# ---------------------------------------------------------------------------

def sweep_prior(config: ExperimentConfig, axis: str, grid, workers: int = 1) -> ErrorReport:
    """Re-run the experiment for each prior-parameter value on ``grid``.

    Predictors that carry ``axis`` get it replaced; the rest (baselines)
    are re-evaluated unchanged on the same paths, so each grid value forms
    a complete row group.  Analytic dominance markers for the swept axis
    are attached for plotting (see ``ErrorReport.markers``).
    """
    grid = tuple(float(g) for g in grid)
    violations = config.validate()
    violations.extend(config._validate_sweep(axis, grid))
    if violations:
        raise ConfigError(violations)
    base_idx = config._baseline_index()
    rows: list[ReportRow] = []
    for g in grid:
        specs = tuple(sp.with_param(axis, g) if sp.custom is None and sp.has_param(axis)
                      else sp for sp in config.predictors)
        cfg = dataclasses.replace(config, predictors=specs,
                                  baseline=specs[base_idx].spec_string,
                                  sweep_axis=None, sweep_grid=())
        rows.extend(run_experiment(cfg, workers).rows)
    return ErrorReport(rows, markers=_sweep_markers(config, axis))


def _sweep_markers(config: ExperimentConfig, axis: str) -> dict:
    """Dominance boundaries on the swept axis, keyed by design point.

    For Poisson ``a`` sweeps the dominance condition inverts to
    ``|a - b theta| <= b sqrt((1/s + 2/b) theta)`` for the Bayes predictor
    (shifted by +1 for MAP).  For OU ``m0`` sweeps the boundary is
    ``m +- sqrt(threshold on (m - m0)^2)``, with the all-record-length
    variant ``m +- u sqrt(2)``.
    """
    markers: dict = {}
    carriers = [sp for sp in config.predictors if sp.custom is None and sp.has_param(axis)]
    if config.process == "poisson" and axis == "a":
        for name in ("bayes", "map"):
            spec = next((sp for sp in carriers if sp.name == name), None)
            if spec is None:
                continue
            b = spec.param("b")
            shift = 0.0 if name == "bayes" else 1.0
            for theta in config.theta:
                for s in config.s:
                    half = b * math.sqrt((1.0 / s + 2.0 / b) * theta)
                    markers[(name, theta, s)] = {
                        "a_lo": b * theta + shift - half,
                        "a_hi": b * theta + shift + half,
                    }
    elif config.process == "ou-m-unknown" and axis == "m0":
        spec = next(iter(carriers), None)
        if spec is not None:
            u2 = spec.param("u2")
            for theta in config.theta:
                for delta in config.delta:
                    for n in config.n:
                        bound = math.sqrt(dominance_m_sampled(theta, n, delta, u2))
                        bound_all = math.sqrt(2.0 * u2)
                        markers[(spec.name, theta, delta, n)] = {
                            "m0_lo": config.m - bound, "m0_hi": config.m + bound,
                            "m0_lo_all_s": config.m - bound_all,
                            "m0_hi_all_s": config.m + bound_all,
                        }
    return markers
