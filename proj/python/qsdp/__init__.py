"""Robust barrier-method SDP solver with simulated quantum oracles."""

import json

from . import _core
from ._core import (
    Instance,
    QsdpError,
    barrier_value,
    case2_central_path,
    gen_case1,
    gen_case2,
    gen_random_wellcond,
    gradient,
    hessian,
    potential,
    schedule,
    slack,
)


def solve(instance, y0, **kwargs):
    """Run the solver. Returns (result dict, list of iteration record dicts)."""
    out = _core.solve(instance, y0, **kwargs)
    return json.loads(out["result"]), [json.loads(r) for r in out["trace"]]


def estimate(instance, y, eta, eps=0.01):
    return json.loads(_core.estimate(instance, y, eta, eps))


__all__ = [
    "Instance",
    "QsdpError",
    "barrier_value",
    "case2_central_path",
    "estimate",
    "gen_case1",
    "gen_case2",
    "gen_random_wellcond",
    "gradient",
    "hessian",
    "potential",
    "schedule",
    "slack",
    "solve",
]
