"""Outer generalized inverses A_{T,S}^(2) and perturbation-bound checks.

Matrices are complex 2-D numpy arrays; subspaces are passed as arrays whose
columns span them.
"""

import json as _json

from ._oil import (
    ExistenceError,
    NumericError,
    __version__,
    classical,
    compute,
    delta,
    exists,
    gap_hat,
    op_norm,
    oracle_compute,
    orth,
    perturb_A,
    perturb_all,
    pinv,
    rank,
    stable_bounds,
)
from ._oil import run_campaign as _run_campaign


def run_campaign(config):
    """Run a verification campaign.

    `config` is a dict in the campaign JSON format. Returns (report_text,
    summary_dict, exit_code); the report is CSV or JSON per config["format"].
    """
    report, summary, code = _run_campaign(_json.dumps(config))
    return report, _json.loads(summary), code


__all__ = [
    "ExistenceError",
    "NumericError",
    "__version__",
    "classical",
    "compute",
    "delta",
    "exists",
    "gap_hat",
    "op_norm",
    "oracle_compute",
    "orth",
    "perturb_A",
    "perturb_all",
    "pinv",
    "rank",
    "run_campaign",
    "stable_bounds",
]
