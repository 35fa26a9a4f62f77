"""Dense LU, GMRES with left/right preconditioning, and Arnoldi Ritz values."""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla


class LinearOperator:
    """Square linear map given by a function on vectors (or on (N, m) blocks column by column).

    Parameters
    ----------
    n : int
        Dimension.
    apply : callable
        ``apply(v) -> A v`` for a 1-D complex vector.
    """

    def __init__(self, n, apply, name=""):
        self.n = int(n)
        self._apply = apply
        self.name = name

    @classmethod
    def from_matrix(cls, a, name=""):
        a = np.asarray(getattr(a, "data", a))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        return cls(a.shape[0], a.__matmul__, name)

    @classmethod
    def identity(cls, n):
        return cls(n, lambda v: np.array(v, dtype=complex), "identity")

    @property
    def shape(self):
        return (self.n, self.n)

    def apply(self, v):
        v = np.asarray(v)
        if v.shape[0] != self.n:
            raise ValueError(f"dimension mismatch: operator is {self.n}, vector is {v.shape[0]}")
        if v.ndim == 2:
            return np.stack([self._apply(c) for c in v.T], axis=1)
        return self._apply(v)

    __call__ = apply

    def __matmul__(self, other):
        if isinstance(other, LinearOperator):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return LinearOperator(self.n, lambda v: self.apply(other.apply(v)), f"{self.name}*{other.name}")
        return self.apply(other)

    def __add__(self, other):
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return LinearOperator(self.n, lambda v: self.apply(v) + other.apply(v), f"{self.name}+{other.name}")

    def to_dense(self):
        return self.apply(np.eye(self.n, dtype=complex))


def as_operator(a):
    return a if isinstance(a, LinearOperator) else LinearOperator.from_matrix(a)


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a pivot is negligible at working precision; ``pivot`` holds its relative magnitude."""

    def __init__(self, message, pivot):
        super().__init__(message)
        self.pivot = pivot


class LuFactor:
    """Partial-pivoting LU of a dense square matrix, reusable for many right-hand sides.

    ``overwrite=True`` lets LAPACK factor in place (the input must then be a
    Fortran-ordered array the caller no longer needs).
    """

    def __init__(self, a, overwrite=False):
        a = np.asarray(getattr(a, "data", a))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        self.n = a.shape[0]
        self.anorm = np.abs(a).sum(axis=0).max() if self.n else 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            self.lu, self.piv = sla.lu_factor(a, overwrite_a=overwrite, check_finite=False)
        d = np.abs(np.diag(self.lu))
        scale = d.max() if self.n else 1.0
        self.min_pivot = d.min() / scale if scale > 0 else 0.0
        if not self.min_pivot > self.n * np.finfo(float).eps:
            raise SingularMatrixError(f"matrix singular to working precision (relative pivot {self.min_pivot:.3e})", self.min_pivot)

    def solve(self, b):
        return sla.lu_solve((self.lu, self.piv), b, check_finite=False)

    def rcond(self):
        """Reciprocal 1-norm condition number estimate (LAPACK ``gecon``)."""
        gecon = sla.get_lapack_funcs("gecon", (self.lu,))
        rc, info = gecon(self.lu, self.anorm, norm="1")
        if info != 0:
            raise np.linalg.LinAlgError(f"gecon failed (info={info})")
        return float(rc)


def lu_solve(a, b):
    """Solve ``a x = b`` for a single vector or a batch of columns."""
    return LuFactor(a).solve(np.asarray(b))


def backward_error(a, x, b):
    a = np.asarray(getattr(a, "data", a))
    return np.linalg.norm(a @ x - b) / (np.linalg.norm(a, 2) * np.linalg.norm(x))


@dataclass(frozen=True)
class GmresConfig:
    """Outer Krylov settings; ``restart=None`` is full GMRES."""

    tolerance: float = 1e-6
    max_iterations: int = 500
    restart: int = None
    side: str = "left"

    def __post_init__(self):
        if not 0 < self.tolerance < 1:
            raise ValueError("tolerance must be in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.restart is not None and self.restart < 1:
            raise ValueError("restart must be >= 1")
        if self.side not in ("none", "left", "right"):
            raise ValueError("side must be none, left or right")


@dataclass
class SolveReport:
    """Iteration count, relative residuals (entry 0 is the initial guess) and the minimized norm."""

    iterations: int
    residual_history: list
    converged: bool
    residual_norm: str = "unpreconditioned"
    hessenberg: np.ndarray = field(default=None, repr=False)

    @property
    def final_residual(self):
        return self.residual_history[-1]


def _arnoldi_step(apply, V, H, j):
    w = apply(V[:, j])
    # modified Gram-Schmidt, then one reorthogonalization pass
    for _ in range(2):
        for i in range(j + 1):
            c = np.vdot(V[:, i], w)
            H[i, j] += c
            w = w - c * V[:, i]
    h = np.linalg.norm(w)
    H[j + 1, j] = h
    return w, h


def gmres(op, rhs, config=None, precond=None, x0=None):
    """GMRES for ``A x = b`` with an optional preconditioner ``M``.

    ``side="left"`` minimizes ``|M (b - A x)|``; ``"right"`` solves
    ``A M y = b`` and returns ``x = M y``, minimizing ``|b - A x|``.
    Residuals are reported relative to the same norm of ``b`` (resp. ``M b``).
    Returns ``(x, SolveReport)``; non-convergence is reported, not raised.
    """
    config = config or GmresConfig()
    A = as_operator(op)
    b = np.asarray(rhs, dtype=complex)
    n = A.n
    if b.shape != (n,):
        raise ValueError(f"dimension mismatch: operator is {n}, rhs is {b.shape}")
    side = config.side if precond is not None else "none"
    M = as_operator(precond) if precond is not None else None
    if M is not None and M.n != n:
        raise ValueError("preconditioner dimension mismatch")

    if side == "left":
        apply = lambda v: M.apply(A.apply(v))
        resid = lambda x: M.apply(b - A.apply(x))
        norm_name = "left-preconditioned"
    elif side == "right":
        apply = lambda v: A.apply(M.apply(v))
        resid = lambda x: b - A.apply(x)
        norm_name = "unpreconditioned"
    else:
        apply = A.apply
        resid = lambda x: b - A.apply(x)
        norm_name = "unpreconditioned"

    x = np.zeros(n, dtype=complex) if x0 is None else np.array(x0, dtype=complex)
    bnorm = np.linalg.norm(M.apply(b) if side == "left" else b)
    if bnorm == 0:
        return np.zeros(n, dtype=complex), SolveReport(0, [0.0], True, norm_name)
    r = resid(x)
    beta = np.linalg.norm(r)
    history = [beta / bnorm]
    if history[0] <= config.tolerance:
        return x, SolveReport(0, history, True, norm_name)

    m = config.restart or config.max_iterations
    total = 0
    converged = False
    H = None
    while total < config.max_iterations and not converged:
        steps = min(m, config.max_iterations - total, n)
        V = np.zeros((n, steps + 1), dtype=complex)
        H = np.zeros((steps + 1, steps), dtype=complex)
        cs = np.zeros(steps, dtype=complex)
        sn = np.zeros(steps, dtype=complex)
        g = np.zeros(steps + 1, dtype=complex)
        g[0] = beta
        V[:, 0] = r / beta
        R = np.zeros((steps + 1, steps), dtype=complex)
        j_done = 0
        for j in range(steps):
            w, h = _arnoldi_step(apply, V, H, j)
            R[: j + 2, j] = H[: j + 2, j]
            for i in range(j):
                t = cs[i] * R[i, j] + sn[i] * R[i + 1, j]
                R[i + 1, j] = -np.conj(sn[i]) * R[i, j] + np.conj(cs[i]) * R[i + 1, j]
                R[i, j] = t
            rho = np.hypot(abs(R[j, j]), abs(R[j + 1, j]))
            if rho == 0:
                cs[j], sn[j] = 1.0, 0.0
            else:
                cs[j] = R[j, j] / rho
                sn[j] = R[j + 1, j] / rho
                cs[j], sn[j] = np.conj(cs[j]), np.conj(sn[j])
            R[j, j] = rho
            R[j + 1, j] = 0
            g[j + 1] = -np.conj(sn[j]) * g[j]
            g[j] = cs[j] * g[j]
            total += 1
            j_done = j + 1
            history.append(min(abs(g[j + 1]) / bnorm, history[-1]))
            breakdown = h <= 1e-14 * max(beta, 1.0)
            if history[-1] <= config.tolerance or breakdown:
                converged = True
                break
            V[:, j + 1] = w / h
        y = sla.solve_triangular(R[:j_done, :j_done], g[:j_done])
        update = V[:, :j_done] @ y
        x = x + (M.apply(update) if side == "right" else update)
        H = H[: j_done + 1, :j_done]
        if not converged:
            r = resid(x)
            beta = np.linalg.norm(r)
            # true residual of the restarted cycle replaces the recursive estimate
            history[-1] = beta / bnorm
            converged = history[-1] <= config.tolerance
    return x, SolveReport(total, history, converged, norm_name, H)


def arnoldi_ritz(op, v0, steps):
    """Ritz values of ``op`` from ``steps`` Arnoldi iterations started at ``v0``."""
    A = as_operator(op)
    steps = min(steps, A.n)
    V = np.zeros((A.n, steps + 1), dtype=complex)
    H = np.zeros((steps + 1, steps), dtype=complex)
    V[:, 0] = v0 / np.linalg.norm(v0)
    k = steps
    for j in range(steps):
        w, h = _arnoldi_step(A.apply, V, H, j)
        if h <= 1e-14:
            k = j + 1
            break
        V[:, j + 1] = w / h
    return np.linalg.eigvals(H[:k, :k])
