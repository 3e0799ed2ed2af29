"""Plain-text experiment configs: ``key = value`` lines.

Repeated keys form lists; ``#`` starts a comment; unknown keys are hard
errors.  Schema (R = repeatable):

=============  =====  ====================================================
key            kind   meaning
=============  =====  ====================================================
process        str    poisson | ou-m-unknown | ou-theta-unknown | ou-rho-sampled
replicates     int    Monte Carlo sample size N
seed           int    64-bit master seed; every stream derives from it
baseline       str    predictor spec the percentage variations refer to
predictor   R  str    e.g. ``up``, ``bayes(a=1,b=1)``, ``cmap2(m0=5,u2=1)``
theta       R  float  true rate(s) / intensity(ies)
m              float  true OU mean (default 0)
s           R  float  record lengths (poisson, ou-theta-unknown)
h           R  float  prediction horizons in time units (same processes)
n           R  int    sample sizes (sampled OU)
delta       R  float  sampling steps (sampled OU; single value for ou-theta)
H           R  float  horizons in time units, multiples of delta (sampled OU)
refine         int    quadrature refinement for ou-theta-unknown (default 10)
clamp_rho      bool   on/off; clamp rho estimates into [0,1] in the
                      rho-sampled predictors (default on, matches tables)
sweep_axis     str    prior parameter swept by the ``sweep``/figure presets
sweep_grid  R  float  values of the swept parameter
=============  =====  ====================================================
"""

from __future__ import annotations

from .errors import ConfigError
from .harness import ExperimentConfig, PredictorSpec

_REPEATABLE = {"predictor", "theta", "s", "h", "n", "delta", "H", "sweep_grid"}
_SINGLE = {"process", "replicates", "seed", "baseline", "m", "refine", "clamp_rho",
           "sweep_axis"}
_KNOWN = _REPEATABLE | _SINGLE
_REQUIRED = ("process", "replicates", "seed", "baseline", "predictor", "theta")


def parse_raw(text: str) -> tuple[dict[str, list[str]], list[str]]:
    """Split config text into ``key -> values`` plus syntax violations."""
    raw: dict[str, list[str]] = {}
    violations: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            violations.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _KNOWN:
            violations.append(f"line {lineno}: unknown key {key!r}")
            continue
        if not value:
            violations.append(f"line {lineno}: empty value for {key!r}")
            continue
        raw.setdefault(key, []).append(value)
    for key, values in raw.items():
        if key in _SINGLE and len(values) > 1:
            violations.append(f"key {key!r} given {len(values)} times but takes one value")
    return raw, violations


def _parse_int(raw, key, violations, default=None):
    if key not in raw:
        return default
    try:
        return int(raw[key][0])
    except ValueError:
        violations.append(f"{key} must be an integer, got {raw[key][0]!r}")
        return default


def _parse_float_list(raw, key, violations):
    out = []
    for v in raw.get(key, []):
        try:
            out.append(float(v))
        except ValueError:
            violations.append(f"{key} must be numeric, got {v!r}")
    return tuple(out)


def config_from_raw(raw: dict[str, list[str]],
                    prior_violations: list[str] | None = None) -> ExperimentConfig:
    """Build and fully validate a config; raises ConfigError listing all issues."""
    violations = list(prior_violations or [])
    for key in _REQUIRED:
        if key not in raw:
            violations.append(f"required key {key!r} is missing")
    predictors = []
    for text in raw.get("predictor", []):
        try:
            predictors.append(PredictorSpec.parse(text))
        except ValueError as exc:
            violations.append(str(exc))
    n_values = []
    for v in raw.get("n", []):
        try:
            n_values.append(int(v))
        except ValueError:
            violations.append(f"n must be an integer, got {v!r}")
    m_values = _parse_float_list(raw, "m", violations)
    replicates = _parse_int(raw, "replicates", violations, default=1)
    master_seed = _parse_int(raw, "seed", violations, default=0)
    clamp_rho = True
    if "clamp_rho" in raw:
        val = raw["clamp_rho"][0].strip().lower()
        if val in ("on", "true", "1", "yes"):
            clamp_rho = True
        elif val in ("off", "false", "0", "no"):
            clamp_rho = False
        else:
            violations.append(f"clamp_rho must be on/off, got {val!r}")
    config = ExperimentConfig(
        process=raw.get("process", ["poisson"])[0],
        replicates=1 if replicates is None else replicates,
        master_seed=0 if master_seed is None else master_seed,
        predictors=tuple(predictors),
        baseline=raw.get("baseline", [""])[0],
        theta=_parse_float_list(raw, "theta", violations),
        m=m_values[0] if m_values else 0.0,
        s=_parse_float_list(raw, "s", violations),
        h=_parse_float_list(raw, "h", violations),
        n=tuple(n_values),
        delta=_parse_float_list(raw, "delta", violations),
        big_h=_parse_float_list(raw, "H", violations),
        refine=_parse_int(raw, "refine", violations, default=10),
        clamp_rho=clamp_rho,
        sweep_axis=raw.get("sweep_axis", [None])[0],
        sweep_grid=_parse_float_list(raw, "sweep_grid", violations),
    )
    violations.extend(config.validate())
    if violations:
        raise ConfigError(violations)
    return config


def parse_config_text(text: str) -> ExperimentConfig:
    raw, violations = parse_raw(text)
    return config_from_raw(raw, violations)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())
