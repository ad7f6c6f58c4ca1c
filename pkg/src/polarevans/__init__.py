"""Evans functions by polar-coordinate shooting, with an exterior-product baseline."""

from .analysis import ContourSpec, compare_methods, evaluate_contour, scan_real
from .continuation import continue_frames, eigenprojection, kato_continue
from .evans import SchemeConfig, evans_exterior, evans_polar, evaluate
from .systems import SpectralProblem, boussinesq_problem, constant_problem, make_system

__all__ = [
    "ContourSpec",
    "SchemeConfig",
    "SpectralProblem",
    "boussinesq_problem",
    "compare_methods",
    "constant_problem",
    "continue_frames",
    "eigenprojection",
    "evaluate",
    "evaluate_contour",
    "evans_exterior",
    "evans_polar",
    "kato_continue",
    "make_system",
    "scan_real",
]

__version__ = "0.1.0"
