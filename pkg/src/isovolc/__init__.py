"""Ordinary isogeny graphs over prime fields and the inverse volcano problem.

The package builds the full ell-isogeny graph on the ordinary j-invariants
of F_p, decomposes it into cordilleras, belts and volcanoes with exact
counting audits, and solves the inverse problem: given an abstract volcano,
produce a discriminant, a prime p, and a machine-checked realization
certificate.
"""

from .config import Limits
from .graph import CraterShape, IsogenyGraph, build_graph, decompose

__all__ = ["Limits", "CraterShape", "IsogenyGraph", "build_graph",
           "decompose", "__version__"]

__version__ = "0.1.0"
