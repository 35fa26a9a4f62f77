"""Green kernel, quadrature and Galerkin assembly of the boundary operators."""

from .assembly import (
    BoundaryOperatorMatrix,
    OperatorKind,
    assemble_Kn,
    assemble_mass,
    assemble_T,
    assemble_TSigma,
    dump_matrix,
    load_matrix,
)
from .kernel import SPEED_OF_LIGHT, WaveContext, green_gradient, green_kernel
from .quadrature import QuadratureRule, collapsed_gauss, sauter_schwab, triangle_rule

__all__ = [
    "SPEED_OF_LIGHT",
    "BoundaryOperatorMatrix",
    "OperatorKind",
    "QuadratureRule",
    "WaveContext",
    "assemble_Kn",
    "assemble_T",
    "assemble_TSigma",
    "assemble_mass",
    "collapsed_gauss",
    "dump_matrix",
    "green_gradient",
    "green_kernel",
    "load_matrix",
    "sauter_schwab",
    "triangle_rule",
]
