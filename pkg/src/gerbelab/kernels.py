"""Backend selection for the search kernels.

The compiled extension is used when available; otherwise the pure-Python
reference implementation takes over.  Both expose the same three functions
with identical outputs, which the test suite cross-checks.
"""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _speedups as _compiled
except ImportError:
    _compiled = None

_active = _compiled if _compiled is not None else _kernels_py

BACKEND = "compiled" if _compiled is not None else "python"


def backends() -> dict:
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out


def enumerate_tables(prog):
    return _active.enumerate_tables(prog)


def apply_tables(prog, table, r, v):
    return _active.apply_tables(prog, table, r, v)


def orbit_labels(prog, tables):
    return _active.orbit_labels(prog, tables)


def relating_coboundaries(prog, t1, t2, limit=None):
    return _active.relating_coboundaries(prog, t1, t2, limit)
