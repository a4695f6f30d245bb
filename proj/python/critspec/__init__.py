"""Critical points of Hamiltonian actions on tori and SU(2), via the C++ core."""

import json

from . import _core
from ._core import (
    CritspecError,
    build_module,
    check_invariants,
    minimal_module_dim,
    radon_hurwitz_bound,
    run_command,
    version,
)

__version__ = _core.version()


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def normalize_config(config):
    """Parse and re-serialize a config (dict or JSON text) with all defaults filled in."""
    return json.loads(_core.normalize_config(_text(config)))


def verify(config):
    """Run the operator checks. Returns (exit_code, stdout, stderr)."""
    return _core.verify(_text(config))


def spectrum(config):
    return _core.spectrum(_text(config))


def solve(config):
    """Run a search and write points.json, summary.csv and report.json to the output dir."""
    return _core.solve(_text(config))


__all__ = [
    "CritspecError",
    "build_module",
    "check_invariants",
    "minimal_module_dim",
    "normalize_config",
    "radon_hurwitz_bound",
    "run_command",
    "solve",
    "spectrum",
    "verify",
    "version",
]
