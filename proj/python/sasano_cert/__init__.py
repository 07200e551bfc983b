"""Python access to the exact verification engine."""

import json

from ._core import (
    InputError,
    VerificationError,
    act_on_params,
    matsuda_row,
    nve_matrix,
    stokes_triviality,
    whittaker_parameters,
)
from . import _core

__all__ = [
    "InputError",
    "VerificationError",
    "act_on_params",
    "matsuda_row",
    "nve_matrix",
    "orbit",
    "prove",
    "prove_markdown",
    "stokes_triviality",
    "verify_seed",
    "whittaker_parameters",
]


def prove(alpha_wasow=False, stop_after=None, precision=20, orbit_depth=1):
    """Run the proof chain and return the report as a dict."""
    return json.loads(_core.prove_json(alpha_wasow, stop_after, precision, orbit_depth))


def prove_markdown(alpha_wasow=False, stop_after=None, precision=20, orbit_depth=1):
    return _core.prove_markdown(alpha_wasow, stop_after, precision, orbit_depth)


def verify_seed(params=None, solution=None):
    """Check a solution; `solution` is a dict {params, components} or None for the seed."""
    text = None if solution is None else json.dumps(solution)
    return json.loads(_core.verify_seed_json(params, text))


def orbit(depth, check_matsuda=True):
    """Return (report dict, list of node dicts)."""
    report, jsonl = _core.orbit_json(depth, check_matsuda)
    return json.loads(report), [json.loads(line) for line in jsonl.splitlines()]
