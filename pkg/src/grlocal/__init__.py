"""Minimal generators and minimal resolutions over graded local rings."""

from .coeff import CoefficientRing, parse_coefficient_ring
from .errors import GrlocalError, InvariantError, OracleCapError, PreconditionError, TruncationError
from .fileformat import Workspace, load, parse, shipped_rings
from .gmodule import (
    FreeModule,
    GradedModule,
    GradedMorphism,
    HomogeneousVector,
    exchange_step,
    is_minimal,
    kernel_upto,
    minimal_generators,
    minimize,
    nakayama_witness,
)
from .gring import GradedRing, HomogeneousElement, RingPresentation, check_local_axioms
from .monoid import DegreeOrder, Monoid
from .resolve import (
    BettiTable,
    Resolution,
    betti,
    check_resolution,
    cover_lift,
    gldim,
    is_free,
    minimal_resolution,
    pdim,
    projective_cover,
    tor_dims,
)

__all__ = [name for name in dir() if not name.startswith("_")]
