"""Interface admittance operators: tangential E on the interface to the rotated magnetic trace.

For one closed shell, the admittance maps interface RWG coefficients ``v``
of the tangential electric field to the restriction of ``u``, the shell
current solving the EFIE ``[T] u = [1/2 Id + K n x] P v``. Everything here
works on RWG (primal) coefficient vectors.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .bem.assembly import assemble_Kn, assemble_mass, assemble_T
from .bem.quadrature import QuadratureRule
from .linalg import GmresConfig, LinearOperator, LuFactor, SingularMatrixError, gmres

# Resonance detection. A cavity resonance shows up as a sharp dip of
# rcond([T]) in k; low-frequency breakdown and fine meshes lower rcond too,
# but smoothly. Below RESONANCE_RCOND the matrix is re-assembled at
# k (1 +- RESONANCE_STEP) and a resonance is reported if rcond(k) is below
# RESONANCE_DIP times both neighbours.
RESONANCE_RCOND = 1e-4
RESONANCE_STEP = 0.02
RESONANCE_DIP = 0.05

# shells larger than this are factored in place, dropping the matrix
LOW_MEMORY_DOFS = 6000


class ResonanceError(RuntimeError):
    """The shell EFIE matrix is (nearly) singular: an interior cavity resonance is suspected."""

    def __init__(self, message, rcond):
        super().__init__(message)
        self.rcond = rcond


class InnerSolveError(RuntimeError):
    pass


def _rcond_of(a):
    try:
        return LuFactor(a, overwrite=True).rcond()
    except SingularMatrixError:
        return 0.0


@dataclass(frozen=True)
class InnerSolver:
    """``kind="direct"`` (LU, default) or ``"gmres"`` with the given tolerance."""

    kind: str = "direct"
    tolerance: float = 1e-8
    max_iterations: int = None

    def __post_init__(self):
        if self.kind not in ("direct", "gmres"):
            raise ValueError("inner solver must be 'direct' or 'gmres'")


def _inner(spec):
    if spec is None or isinstance(spec, InnerSolver):
        return spec or InnerSolver()
    return InnerSolver(str(spec))


class ShellSolver:
    """EFIE matrix of one closed shell with its cached factorization.

    ``reassemble(k)`` (optional) returns ``[T]`` at another wavenumber; it
    enables the resonance check described above.
    """

    def __init__(self, T, inner=None, reassemble=None, resonance_rcond=RESONANCE_RCOND):
        self.inner = _inner(inner)
        self.n = T.data.shape[0]
        self.T = T
        self.lu = None
        self.rcond = None
        self.neighbour_rcond = None
        self.inner_iterations = []
        k = getattr(T, "wavenumber", None)
        if self.inner.kind == "direct":
            in_place = self.n > LOW_MEMORY_DOFS
            try:
                # T is symmetric, so its transpose view is a Fortran-ordered copy of itself
                self.lu = LuFactor(T.data.T if in_place else T.data, overwrite=in_place)
            except SingularMatrixError as err:
                raise ResonanceError(f"interior resonance suspected: EFIE matrix singular ({err})", 0.0) from err
            if in_place:
                self.T = None
            self.rcond = self.lu.rcond()
        elif self.n <= 2000:
            self.rcond = LuFactor(T.data).rcond()
        if self.rcond is not None and self.rcond < resonance_rcond and reassemble is not None and k:
            self.neighbour_rcond = [
                _rcond_of(reassemble(k * (1 + s))) for s in (-RESONANCE_STEP, RESONANCE_STEP)
            ]
            if self.rcond < RESONANCE_DIP * min(self.neighbour_rcond):
                raise ResonanceError(
                    f"interior resonance suspected: rcond([T]) = {self.rcond:.3e} dips below "
                    f"{min(self.neighbour_rcond):.3e} at k(1 +- {RESONANCE_STEP})",
                    self.rcond,
                )

    def solve(self, rhs):
        if self.lu is not None:
            return self.lu.solve(rhs)
        cfg = GmresConfig(self.inner.tolerance, self.inner.max_iterations or self.n, side="none")
        x, rep = gmres(self.T.data, rhs, cfg)
        self.inner_iterations.append(rep.iterations)
        if not rep.converged:
            raise InnerSolveError(f"inner EFIE solve did not converge ({rep.final_residual:.2e} after {rep.iterations})")
        return x


@dataclass
class ShellOperators:
    """Shell matrices for both sides; the minus side reuses the plus side when the shells coincide."""

    maps: object
    solvers: dict
    kn: dict
    mass: dict
    timings: dict = field(default_factory=dict)


def assemble_shells(maps, ctx, quad=None, inner=None, resonance_rcond=RESONANCE_RCOND):
    """Assemble and factor ``[T]`` and the interface columns of ``[1/2 Id + K n x]`` on both shells."""
    quad = quad or QuadratureRule()
    solvers, kn, mass, timings = {}, {}, {}, {}
    for side in ("plus", "minus"):
        space = maps.space(side)
        cols = maps.embedding(side)
        t0 = time.perf_counter()
        if side == "minus" and maps.shells_coincide:
            # same surface, opposite normal: [T-] = [T+] and the double layer flips sign
            solvers[side] = solvers["plus"]
            m = mass["plus"]
            mass[side] = m
            kn[side] = m[:, cols] - kn["plus"]
            timings[side] = time.perf_counter() - t0
            continue
        m = assemble_mass(space).data
        mass[side] = m
        kn[side] = assemble_Kn(space, ctx, quad, columns=cols, mass=m).data
        T = assemble_T(space, ctx, quad)
        t1 = time.perf_counter()

        def reassemble(k, space=space):
            # transpose: Fortran order so the factorization can run in place
            return assemble_T(space, k, quad).data.T

        solvers[side] = ShellSolver(T, inner, reassemble, resonance_rcond)
        timings[side] = t1 - t0
        timings[side + "_factor"] = time.perf_counter() - t1
    return ShellOperators(maps, solvers, kn, mass, timings)


class AdmittanceOperator(LinearOperator):
    """Interface admittance of one side, ``v -> R [T]^-1 [1/2 Id + K n x] P v``."""

    def __init__(self, side, maps, solver, kn_columns):
        if maps.n_interface == 0:
            raise ValueError("interface has no unknowns")
        self.side = side
        self.maps = maps
        self.solver = solver
        self.kn_columns = kn_columns
        super().__init__(maps.n_interface, self._apply_interface, f"A{'+' if side == 'plus' else '-'}")

    @property
    def T_matrix(self):
        return self.solver.T

    def shell_current(self, v0):
        """Full-shell EFIE solution ``u`` for interface data ``v0``."""
        v0 = np.asarray(v0)
        if v0.shape[0] != self.n:
            raise ValueError(f"length mismatch: got {v0.shape[0]}, interface has {self.n}")
        return self.solver.solve(self.kn_columns @ v0)

    def _apply_interface(self, v0):
        return self.maps.restrict(self.shell_current(v0), self.side)


def build_admittance(maps, ctx, quad=None, side="plus", inner_solver=None, shells=None):
    """Admittance operator of ``side``; pass ``shells`` to reuse assembled shell matrices."""
    if maps.n_interface == 0:
        raise ValueError("interface has no unknowns")
    if side not in ("plus", "minus"):
        raise ValueError(f"unknown side {side!r}")
    shells = shells or assemble_shells(maps, ctx, quad, inner_solver)
    return AdmittanceOperator(side, maps, shells.solvers[side], shells.kn[side])


def apply_admittance(op, v0):
    return op.apply(v0)
