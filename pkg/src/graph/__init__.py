"""
Graph module for the prior network and its Laplacian spectrum.
"""

from .network import AdjacencyFormat, Network, build_network
from .spectrum import ZERO_TOL, LaplacianSpectrum, fix_signs, laplacian_spectrum, penalty_quadratic

__all__ = [
    "AdjacencyFormat",
    "Network",
    "build_network",
    "ZERO_TOL",
    "LaplacianSpectrum",
    "fix_signs",
    "laplacian_spectrum",
    "penalty_quadratic",
]
