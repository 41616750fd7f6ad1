"""Radial basis function interpolation with polynomial tails."""

import json

from ._core import (
    DegenerateInput,
    FitReport,
    InvalidConfiguration,
    InvalidInput,
    Kernel,
    Model,
    NoConvergence,
    ParseError,
    RankDeficientP,
    RbfkitError,
    SingularB,
    SingularSystem,
    condition_estimate,
    fit,
    ptp_determinant_drift,
    radius_neighbors,
)
from ._core import diagnose as _diagnose
from ._core import translation_experiment as _translation_experiment

__all__ = [
    "DegenerateInput",
    "FitReport",
    "InvalidConfiguration",
    "InvalidInput",
    "Kernel",
    "Model",
    "NoConvergence",
    "ParseError",
    "RankDeficientP",
    "RbfkitError",
    "SingularB",
    "SingularSystem",
    "condition_estimate",
    "diagnose",
    "fit",
    "ptp_determinant_drift",
    "radius_neighbors",
    "translation_experiment",
]


def diagnose(points, values=None, **kwargs):
    """Conditioning, determinant and sparsity report as a dict."""
    return json.loads(_diagnose(points, values, **kwargs))


def translation_experiment(points, values=None, **kwargs):
    """Per-offset conditioning records as a list of dicts."""
    return json.loads(_translation_experiment(points, values, **kwargs))
