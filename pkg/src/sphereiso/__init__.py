"""Numerical verification of special isoperimetric inequalities for minimal hypersurfaces in spheres."""

__version__ = "0.1.0"

from .geometry import Axis, Hypersurface, make_clifford, make_equator, parse_axis, parse_surface
from .integrate import IntegralEstimate, MonteCarlo, TensorGauss, parse_quad
from .verify import InequalityReport, Verdict, run_checks

__all__ = [
    "Axis",
    "Hypersurface",
    "IntegralEstimate",
    "InequalityReport",
    "MonteCarlo",
    "TensorGauss",
    "Verdict",
    "make_clifford",
    "make_equator",
    "parse_axis",
    "parse_quad",
    "parse_surface",
    "run_checks",
]
