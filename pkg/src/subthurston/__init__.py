"""Thermodynamic formalism for subsystems of the pillow grid map ``z -> s z``."""
from .geometry import Colour, PillowMap, SplitPoint, TileAddress
from .combinatorics import Subsystem, TileMatrix
from .potential import Potential, constant, coordinate_poly, torus_trig

__version__ = "0.1.0"

__all__ = [
    "Colour", "PillowMap", "SplitPoint", "TileAddress", "Subsystem", "TileMatrix",
    "Potential", "constant", "coordinate_poly", "torus_trig", "__version__",
]
