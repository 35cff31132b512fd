"""Gaussian continuous-variable simulator for coherent communication
protocols built on conat channels."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
