"""Drift estimation for SDEs driven by fractional Brownian motion (H > 1/2)."""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from . import _core
except ImportError:  # pragma: no cover - in-tree builds put _core on sys.path
    from _core import *  # noqa: F401,F403
    import _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "0.1.0"
