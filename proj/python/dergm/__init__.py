"""Dyadic-independent exponential random graph models.

Exact likelihoods, reproducible sampling, maximum-likelihood fitting, and
numerical checks of permutation equivariance for nodal parametrizations.
"""

from dergm._core import *  # noqa: F401,F403
from dergm._core import __version__  # noqa: F401
