"""Exact, law-checked finitely supported Giry monad, convex spaces and the
barycenter adjunction at desk scale."""
from .errors import ConsistencyError, GiryLabError, InputError, PreconditionError, ResourceError
from .finmeas import FinMeasSpace, MeasSet, MeasurableMap, generate_sigma, separate
from .giry import Kernel, MetaProb, Prob, dirac, kleisli_compose, mu, pushforward
from .convex import TWO, AffineMap, IntervalQ, Polytope, RInfty, Semilattice, Simplex
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "BACKEND",
    "ConsistencyError",
    "FinMeasSpace",
    "GiryLabError",
    "InputError",
    "IntervalQ",
    "Kernel",
    "MeasSet",
    "MeasurableMap",
    "MetaProb",
    "Polytope",
    "PreconditionError",
    "Prob",
    "RInfty",
    "ResourceError",
    "Semilattice",
    "Simplex",
    "TWO",
    "dirac",
    "generate_sigma",
    "kleisli_compose",
    "mu",
    "pushforward",
    "separate",
]
