"""Numerics for the limiting spectral law of {UV} = UV + VU for independent
Wigner matrices: the limiting Stieltjes transform and its algebra, the
Schwinger-Dyson machinery over 3x3 matrices, self-adjoint linearizations and
their generalized resolvents, Wigner-pair sampling, and verification harnesses
for the local law, delocalization and the moment/tail toolbox."""

__version__ = "0.1.0"

from . import freelaw, sdcore, wigner, linearize, locallaw, tails

__all__ = ["freelaw", "sdcore", "wigner", "linearize", "locallaw", "tails", "__version__"]
