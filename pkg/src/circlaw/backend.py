"""Kernel backend selection.

The compiled ``_core`` extension is used when importable; otherwise the
pure-Python twins in ``_pycore`` are used. Setting ``CIRCLAW_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pycore

NAME = "python"
core = _pycore

if os.environ.get("CIRCLAW_PURE_PYTHON") != "1":
    try:
        from . import _core as core  # noqa: F811
        NAME = "cython"
    except ImportError:  # extension not built
        pass


def get(name=None):
    """Return the kernel module by name ("cython" or "python"); default is active."""
    if name is None:
        return core
    if name == "python":
        return _pycore
    if name == "cython":
        from . import _core
        return _core
    raise ValueError(f"unknown backend {name!r}")


def available():
    names = ["python"]
    try:
        from . import _core  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return names
