"""Exact algebraic sample points and feasible sign conditions of rational
polynomial families, computed by deformation of critical point systems."""

from .errors import SignSampleError
from .resolution import GeometricResolution
from .sampler import SamplePointSet, SamplerConfig, run
from .signs import expand_equalities, list_conditions
from .slp import Slp, parse, parse_system

__version__ = "0.1.0"

__all__ = [
    "GeometricResolution",
    "SamplePointSet",
    "SamplerConfig",
    "SignSampleError",
    "Slp",
    "expand_equalities",
    "list_conditions",
    "parse",
    "parse_system",
    "run",
]
