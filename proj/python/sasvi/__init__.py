"""Safe screening for the Lasso.

Thin layer over the compiled ``_sasvi`` module. Lambdas are absolute
unless a name says ``ratio`` (a fraction of lambda_max).
"""

import json

import numpy as np

from ._sasvi import (
    Anchor,
    Problem,
    SasviError,
    Solution,
    _path_json,
    anchor,
    anchor_at_lambda_max,
    generate_synthetic,
    sasvi_bounds,
    screen,
    solve,
    sure_removal,
)

RULES = ("sasvi", "safe", "dpp", "strong")

__all__ = [
    "Anchor",
    "Problem",
    "RULES",
    "SasviError",
    "Solution",
    "anchor",
    "anchor_at_lambda_max",
    "generate_synthetic",
    "path",
    "sasvi_bounds",
    "screen",
    "solve",
    "sure_removal",
]


def path(problem, rules=RULES, grid=100, lo=0.05, hi=1.0, lambdas=None, margin=1e-6, gap_tol=1e-10,
         baseline=False, fixed_anchor=False):
    """Screen and solve along a lambda grid; returns the run as a dict.

    The dict mirrors the CLI's path JSON plus a ``rejection`` list with one
    row per (rule, lambda).
    """
    if isinstance(rules, str):
        rules = [r.strip() for r in rules.split(",") if r.strip()]
    lambdas = [] if lambdas is None else [float(v) for v in np.asarray(lambdas).ravel()]
    raw = _path_json(problem, list(rules), int(grid), float(lo), float(hi), lambdas, float(margin),
                     float(gap_tol), bool(baseline), bool(fixed_anchor))
    return json.loads(raw)
