"""Sharp two-velocity incompressible two-phase flow solver on a 2D MAC grid."""

from .mesh import Mesh, FaceField, EdgeTensorField
from .props import FluidProps

__all__ = ["Mesh", "FaceField", "EdgeTensorField", "FluidProps"]
__version__ = "0.1.0"
