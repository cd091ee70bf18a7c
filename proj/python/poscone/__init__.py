"""Desk-scale laboratory for positive operators on finite sections of l_q."""

try:
    # installed layout: the extension lives inside the package
    from ._poscone import *  # noqa: F401,F403
except ImportError:
    # build-tree layout: the extension sits on PYTHONPATH next to the package
    from _poscone import *  # noqa: F401,F403
