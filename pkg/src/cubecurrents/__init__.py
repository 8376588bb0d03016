"""Cubulations of closed surface groups from rational geodesic currents.

Hyperbolic geometry in the upper half-plane, the standard Fuchsian
representation, intersection numbers of currents with closed geodesics,
Sageev's dual cube complex and marked length spectrum comparisons.
"""

from .currents import WeightedCurrent, intersection_number, pair_with_hyperbolic, self_intersection
from .cubulation import build_wall_set, max_cube_dimension, sageev_fragment, verify_duality
from .fuchsian import FuchsianRep, evaluate, rep_from_matrices, standard_rep
from .kernels import available_backends, backend, use_backend
from .linking import SearchOptions
from .metrics import approximation_experiment, builtin_sequence, delta_estimate, spectrum
from .words import ConjugacyClass, enumerate_classes, parse_word

__version__ = "0.1.0"

__all__ = [
    "ConjugacyClass", "FuchsianRep", "SearchOptions", "WeightedCurrent", "approximation_experiment",
    "available_backends", "backend", "build_wall_set", "builtin_sequence", "delta_estimate",
    "enumerate_classes", "evaluate", "intersection_number", "max_cube_dimension", "pair_with_hyperbolic",
    "parse_word", "rep_from_matrices", "sageev_fragment", "self_intersection", "spectrum",
    "standard_rep", "use_backend", "verify_duality",
]
