"""Exact verification suites for finite period-ring models."""

import json

from ._pcris import (
    PreconditionError,
    nilpotency_bound,
    normalize_exponent,
    run_report_json,
    smith_exponents,
    suite_names,
)

__all__ = [
    "PreconditionError",
    "nilpotency_bound",
    "normalize_exponent",
    "run_report",
    "smith_exponents",
    "suite_names",
]


def run_report(suites, jobs=1, **config):
    """Run the named suites and return the report as a dict.

    Keyword arguments are the CLI options: p, n, m, d, r, c, deg_z, deg_x,
    numerator_bound, seed.
    """
    if isinstance(suites, str):
        suites = [suites]
    config["suites"] = list(suites)
    return json.loads(run_report_json(json.dumps(config), jobs))
