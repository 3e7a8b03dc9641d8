"""Kernel backend selection.

``UNITRATIO_BACKEND=numpy`` forces the pure-numpy kernels; the default is the
numba-compiled set, falling back to numpy when numba cannot be imported.
"""

import importlib
import logging
import os

log = logging.getLogger(__name__)

_NAMES = {"numba": "unitratio._kernels_numba", "numpy": "unitratio._kernels_numpy"}


def load(name=None):
    """Return the kernel module for ``name`` (or the environment's choice)."""
    name = (name or os.environ.get("UNITRATIO_BACKEND", "numba")).lower()
    if name not in _NAMES:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_NAMES)}")
    try:
        return importlib.import_module(_NAMES[name])
    except ImportError:
        if name == "numpy":
            raise
        log.warning("numba unavailable, using numpy kernels")
        return importlib.import_module(_NAMES["numpy"])


kernels = load()
BACKEND = "numba" if kernels.__name__.endswith("numba") else "numpy"
