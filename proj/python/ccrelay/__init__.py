"""Cache-aided MIMO relay simulator."""

from fractions import Fraction
import json

from ._core import (
    ConfigError,
    Error,
    FileLibrary,
    SystemParams,
    demodulate,
    gamma_sweep,
    generate_library,
    modulate,
)
from . import _core

__all__ = [
    "ConfigError",
    "Error",
    "FileLibrary",
    "SystemParams",
    "demodulate",
    "gamma_sweep",
    "generate_library",
    "modulate",
    "ndt",
    "run",
]


def ndt(K, t, L, strategy="proposed"):
    """Normalized delivery times (T_UL, T_DL) as Fractions."""
    ul, dl = _core.ndt(K, t, L, strategy)
    return Fraction(*ul), Fraction(*dl)


def run(**options):
    """Runs one experiment; keyword names follow the CLI flags with '_' for '-'.

    run(K=3, L=2, t=1, mode="noisy", snr_db=[0, 30], trials=50)
    """
    args = []
    for key, value in options.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                args.append(flag)
            continue
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        args += [flag, str(value)]
    return json.loads(_core.run_json(args))
