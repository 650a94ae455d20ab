"""Python access to the clf-kit numerics and verification probes."""

import json

from ._core import (  # noqa: F401
    ConfigError,
    Domain,
    NumericalError,
    area_integral_smooth,
    clf_kernel,
    code_version,
    dS_mass,
    kernel_l2_norm,
    probe_names,
    quasimetric,
    reproduce_monomial,
    validate_config,
)
from ._core import run_probe_json as _run_probe_json


def run_probe(probe, domain="ball", **settings):
    """Run one probe and return its reports as dictionaries."""
    return [json.loads(text) for text in _run_probe_json(probe, domain, settings)]


__all__ = [
    "ConfigError",
    "Domain",
    "NumericalError",
    "area_integral_smooth",
    "clf_kernel",
    "code_version",
    "dS_mass",
    "kernel_l2_norm",
    "probe_names",
    "quasimetric",
    "reproduce_monomial",
    "run_probe",
    "validate_config",
]
