"""Causal execution graph discovery and unification for event logs."""

from ._ucx import *  # noqa: F401,F403
from ._ucx import __doc__  # noqa: F401
