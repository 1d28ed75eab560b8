from .matrix import router as matrix_router
from .polynomial import router as polynomial_router
from .sweep import router as sweep_router
from .systems import router as systems_router

__all__ = (
    "polynomial_router",
    "matrix_router",
    "systems_router",
    "sweep_router",
)
