"""Reference EFIE solve on the whole metallic surface, without an interface."""

from dataclasses import dataclass

import numpy as np

from ..bem.assembly import assemble_T
from ..bem.quadrature import QuadratureRule
from ..excitation import project_tangential_E
from ..linalg import LuFactor
from ..mesh.core import Region
from ..mesh.spaces import rwg_space
from .farfield import far_field, rcs


@dataclass(frozen=True, eq=False)
class MonolithicSolution:
    space: object
    current: np.ndarray
    pattern: object

    @property
    def rcs_dbsm(self):
        return rcs(self.pattern)


def metal_triangles(mesh, metallize_interface=False):
    """Triangles of the metallic surface: the plus-side copy of the metal, plus the interface if asked.

    A mesh without metal (fictitious interface only) yields the interface
    itself, i.e. a closed PEC body.
    """
    metal = mesh.region_triangles(Region.GD_PLUS)
    if metallize_interface or len(metal) == 0:
        metal = np.concatenate([metal, mesh.region_triangles(Region.SIGMA)])
    return np.sort(metal)


def monolithic_efie(mesh, ctx, wave, quad=None, directions=None, metallize_interface=False, **angles):
    """Solve ``[T] j = -b`` on the metal (open or closed) and radiate ``j``.

    Returns a :class:`MonolithicSolution` with the RWG current and, when
    ``directions`` is given, its far-field pattern.
    """
    quad = quad or QuadratureRule()
    space = rwg_space(mesh, metal_triangles(mesh, metallize_interface))
    T = assemble_T(space, ctx, quad)
    b = project_tangential_E(space, wave, quad)
    j = LuFactor(T.data).solve(-b)
    pattern = None
    if directions is not None:
        pattern = far_field(ctx, directions, electric=[(space, j)], order=quad.regular_order, **angles)
    return MonolithicSolution(space, j, pattern)
