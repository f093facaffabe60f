"""Simulation and limit-law verification for rescaled weighted random balls."""

from ._ballfields import *  # noqa: F401,F403
from ._ballfields import __doc__  # noqa: F401

__version__ = "0.1.0"
