"""The condensed interface problem and its preconditioned variants.

Unknown: RWG coefficients ``E`` of the tangential electric field on the
interface. With ``A+`` and ``A-`` the two admittances and ``U0 = -R+ w``
(``w`` the current on the plus shell when the interface is made
metallic), the interface equation is ``(A+ + A-) E = U0``. Variants:

``Y0``  ``(A+ + A-) E = U0``
``Y1``  ``[T_S] (A+ + A-) E = [T_S] U0``
``Y2``  ``[M]^-1 [T_S] (A+ + A-) E = [M]^-1 [T_S] U0``
``Y3``  ``(A+ + A-) [M]^-1 [T_S] Y = U0``, ``E = [M]^-1 [T_S] Y``

with ``[T_S]`` the single-layer matrix on the interface alone and ``[M]``
the interface mass matrix.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .admittance import assemble_shells, build_admittance
from .bem.assembly import BoundaryOperatorMatrix, assemble_mass, assemble_TSigma
from .bem.quadrature import QuadratureRule
from .excitation import project_tangential_E
from .linalg import GmresConfig, LinearOperator, gmres


class DdmVariant(Enum):
    Y0 = "Y0"
    Y1 = "Y1"
    Y2 = "Y2"
    Y3 = "Y3"

    @classmethod
    def parse(cls, tag):
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).upper())
        except ValueError:
            raise ValueError(f"unknown variant {tag!r}; expected one of y0, y1, y2, y3") from None


class MassSolveError(RuntimeError):
    pass


def mass_solve_operator(mass, method="cg", tol=1e-12):
    """``v -> [M]^-1 v`` by conjugate gradients on the sparse pattern, or by a cached Cholesky factor."""
    m = np.asarray(getattr(mass, "data", mass)).real
    n = m.shape[0]
    if method == "cholesky":
        try:
            factor = sla.cho_factor(m)
        except np.linalg.LinAlgError as err:
            raise MassSolveError(f"mass matrix not positive definite: {err}") from err
        return LinearOperator(n, lambda v: sla.cho_solve(factor, v), "M^-1")
    if method != "cg":
        raise ValueError("method must be 'cg' or 'cholesky'")
    csr = sp.csr_matrix(m)
    # Jacobi preconditioning keeps the iteration count mesh-independent on quasi-uniform meshes
    jac = sp.diags(1.0 / csr.diagonal())

    def apply(v):
        v = np.asarray(v)
        out = np.empty(n, dtype=np.result_type(v.dtype, float))
        parts = (v.real, v.imag) if np.iscomplexobj(v) else (v,)
        res = []
        for part in parts:
            x, info = spla.cg(csr, part, rtol=tol, atol=0.0, maxiter=10 * n, M=jac)
            if info != 0:
                raise MassSolveError(f"CG on the mass matrix did not converge (info={info})")
            res.append(x)
        out[:] = res[0] + 1j * res[1] if len(res) == 2 else res[0]
        return out

    return LinearOperator(n, apply, "M^-1")


@dataclass(eq=False)
class DdmSystem:
    """Interface system with all its cached components.

    ``rhs`` is ``U0 = -R+ w``; ``short_cut`` is ``w`` on the whole plus shell.
    """

    maps: object
    a_plus: object
    a_minus: object
    t_sigma: BoundaryOperatorMatrix
    mass: BoundaryOperatorMatrix
    rhs: np.ndarray
    variant: DdmVariant
    short_cut: np.ndarray = None
    mass_inverse: LinearOperator = None
    shells: object = None
    timings: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.maps.n_interface

    def outer_operator(self):
        return self.a_plus + self.a_minus

    def preconditioner(self):
        """The operator ``P`` and GMRES side for this variant (``None`` for Y0)."""
        ts = LinearOperator.from_matrix(self.t_sigma.data, "T_S")
        if self.variant is DdmVariant.Y0:
            return None, "none"
        if self.variant is DdmVariant.Y1:
            return ts, "left"
        p = self.mass_inverse @ ts
        return p, ("left" if self.variant is DdmVariant.Y2 else "right")


def short_cut_current(maps, wave, shells, quad=None):
    """``w`` solving ``[T+] w = -b`` with ``b_i = int E_inc . theta_i`` on the plus shell."""
    b = project_tangential_E(maps.plus_space, wave, quad)
    return shells.solvers["plus"].solve(-b)


def build_rhs(maps, ctx, wave, quad=None, shells=None):
    """Interface right-hand side ``U0 = -R+ w``."""
    shells = shells or assemble_shells(maps, ctx, quad)
    return -maps.restrict(short_cut_current(maps, wave, shells, quad), "plus")


def build_system(maps, ctx, wave, quad=None, variant="Y2", inner_solver=None, shells=None, mass_method="cg"):
    """Assemble everything for the interface problem (``shells`` may be reused across variants)."""
    quad = quad or QuadratureRule()
    variant = DdmVariant.parse(variant)
    t0 = time.perf_counter()
    shells = shells or assemble_shells(maps, ctx, quad, inner_solver)
    t1 = time.perf_counter()
    a_plus = build_admittance(maps, ctx, quad, "plus", shells=shells)
    a_minus = build_admittance(maps, ctx, quad, "minus", shells=shells)
    w = short_cut_current(maps, wave, shells, quad)
    rhs = -maps.restrict(w, "plus")
    t_sigma = assemble_TSigma(maps, ctx, quad)
    mass = assemble_mass(maps.sigma_space)
    t2 = time.perf_counter()
    timings = dict(shells.timings, shells_total=t1 - t0, interface_and_rhs=t2 - t1)
    return DdmSystem(
        maps, a_plus, a_minus, t_sigma, mass, rhs, variant, w, mass_solve_operator(mass, mass_method), shells, timings
    )


def with_variant(system, variant):
    """The same system under another variant (all matrices shared)."""
    s = DdmSystem(**{f: getattr(system, f) for f in system.__dataclass_fields__})
    s.variant = DdmVariant.parse(variant)
    return s


def solve(system, config=None):
    """Run GMRES on the variant's system; returns ``(E, SolveReport)`` with ``E`` the interface field."""
    config = config or GmresConfig()
    prec, side = system.preconditioner()
    cfg = GmresConfig(config.tolerance, config.max_iterations, config.restart, side)
    return gmres(system.outer_operator(), system.rhs, cfg, precond=prec)


def recover_traces(system, e_tan):
    """Shell currents from the interface field, and the transmission residual.

    Returns a dict with ``plus_current`` and ``minus_current`` (EFIE
    solutions on the full shells), ``sigma_E``, ``u_rhs = R+ w`` and
    ``transmission_residual = |R- u- + R+ u+ + u_rhs| / |u_rhs|``.
    """
    e_tan = np.asarray(e_tan)
    maps = system.maps
    up = system.a_plus.shell_current(e_tan)
    um = system.a_minus.shell_current(e_tan)
    u_rhs = maps.restrict(system.short_cut, "plus")
    gap = maps.restrict(um, "minus") + maps.restrict(up, "plus") + u_rhs
    ref = np.linalg.norm(u_rhs)
    return {
        "plus_current": up,
        "minus_current": um,
        "sigma_E": e_tan,
        "u_rhs": u_rhs,
        "transmission_residual": float(np.linalg.norm(gap) / ref) if ref > 0 else float(np.linalg.norm(gap)),
    }
