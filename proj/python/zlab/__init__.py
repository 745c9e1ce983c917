"""Zeros of zeta, L(s, psi5) and the family interpolating between them."""

import json

from ._zlab import count, default_config, eval, fe_residual, speiser_compare, trace, zeros
from ._zlab import run as _run


def run(command, **fields):
    """Runs a CLI command in process; fields override the default config."""
    config = json.loads(default_config(command))
    config.update(fields)
    return _run(json.dumps(config))


__all__ = ["count", "eval", "fe_residual", "run", "speiser_compare", "trace", "zeros"]
