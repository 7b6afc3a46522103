"""Kernel backend selection.

The compiled core is used when it built successfully; otherwise the
pure-Python twin takes over.  Set QUADGRAPH_BACKEND=python|compiled to force
a choice (read once, at import).
"""

from __future__ import annotations

import os

from . import _pycore

try:
    from . import _core
except ImportError:  # extension not built; the fallback covers everything
    _core = None

_BACKENDS = {"python": _pycore}
if _core is not None:
    _BACKENDS["compiled"] = _core

_forced = os.environ.get("QUADGRAPH_BACKEND")
if _forced is not None and _forced not in _BACKENDS:
    raise ImportError(
        f"QUADGRAPH_BACKEND={_forced!r} not available; "
        f"choices: {sorted(_BACKENDS)}"
    )
DEFAULT_BACKEND = _forced or ("compiled" if _core is not None else "python")


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str | None = None):
    """Return the kernel module for `name` (default: best available)."""
    key = name or DEFAULT_BACKEND
    try:
        return _BACKENDS[key]
    except KeyError:
        raise ValueError(
            f"unknown backend {key!r}; choices: {sorted(_BACKENDS)}"
        ) from None


def build_successors(q, a, c, b, backend=None):
    return get_backend(backend).build_successors(q, a, c, b)


def decompose_successors(succ, backend=None):
    return get_backend(backend).decompose_successors(succ)
