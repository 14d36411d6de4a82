"""Local filters taking entangled two-qubit states to Bell-diagonal form."""

import json

from ._core import (
    Error,
    apply_filter,
    concurrence,
    family_state,
    local_filter,
    wootters,
)
from . import _core

__all__ = [
    "Error",
    "analyze",
    "apply_filter",
    "concurrence",
    "family_closed_form",
    "family_state",
    "local_filter",
    "wootters",
]


def analyze(rho, tau_ratio=None, tol=1.0, label=None):
    """Full pipeline; returns the report as a dict."""
    return json.loads(_core.analyze_json(rho, tau_ratio, tol, label))


def family_closed_form(alpha, p, tau_ratio=None):
    return json.loads(_core.family_json(alpha, list(p), tau_ratio))
