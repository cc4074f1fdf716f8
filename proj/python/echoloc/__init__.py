"""Pointwise Weyl functions, loop tables and echolocation on flat and hyperbolic surfaces."""

from ._echoloc import *  # noqa: F401,F403
from ._echoloc import __version__  # noqa: F401
