"""Simulation cost of quantum Markov semigroups."""

from ._core import *  # noqa: F401,F403
from ._core import AssumptionFailure, ConfigError, SolverError  # noqa: F401

__version__ = "0.1.0"
