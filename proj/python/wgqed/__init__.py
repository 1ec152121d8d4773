"""Spontaneous emission of a two-level atom near the mirror of a rectangular waveguide."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
