"""Differentially private linearly-constrained optimization.

Thin wrapper around the C++ core: truncated-Laplace constraint
perturbation, always-feasible private solves, LP/QP solvers, condition
numbers and utility bounds, plus the experiment harnesses.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
