"""Bright-soliton collisions in a two-mode picture."""

import json as _json

from ._core import (
    CollisionOutcome,
    ConfigError,
    FragmentationReport,
    InvalidArgument,
    LambdaPair,
    NumericalError,
    TwoModeCoeffs,
    __version__,
    chi_closed_form,
    collision_time,
    compute_coeffs,
    fragmentation_time,
    lambda_analytic,
    lambda_series,
    postcollision_momenta,
    scenario_defaults,
    scenario_names,
    v_of_n,
)
from ._core import run_config as _run_config


def run(config_path, **overrides):
    """Run a config file. Keyword arguments override its keys; returns the manifest dict."""
    text = _run_config(str(config_path), {k: str(v) for k, v in overrides.items()})
    return _json.loads(text)
