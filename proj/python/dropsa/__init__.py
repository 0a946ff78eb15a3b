"""Distributed annealing simulator and exact-analysis toolkit."""

try:
    from dropsa._core import *  # noqa: F401,F403
    from dropsa._core import __doc__ as _core_doc
except ImportError:
    # development layout: extension built next to the package, not inside it
    from _core import *  # noqa: F401,F403
    from _core import __doc__ as _core_doc

__doc__ = _core_doc
