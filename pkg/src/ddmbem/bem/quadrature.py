"""Quadrature on triangles and on pairs of triangles.

Single-triangle rules are returned in barycentric coordinates with weights
summing to one (multiply by the area). Pair rules for coincident,
edge-adjacent and vertex-adjacent triangles follow Sauter and Schwab: the
4D integral over two copies of the reference triangle
``{0 <= x2 <= x1 <= 1}`` is split into simplices mapped onto the unit
hypercube, where the singularity is cancelled by the Jacobian.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    """Orders used by the assemblers.

    Attributes
    ----------
    regular_order : int
        Points per triangle for well-separated pairs (1, 3, 4, 6 or 7).
    singular_order : int
        Gauss-Legendre points per direction of the 4D Sauter-Schwab rules.
    near_order : int
        Points per direction of the collapsed Gauss rule used for close,
        non-touching pairs.
    near_threshold : float
        Pairs with centroid distance below ``near_threshold`` times the
        larger circumradius use the near rule.
    load_order : int
        Points per direction of the collapsed Gauss rule for incident-field
        loads and radiation integrals.
    """

    regular_order: int = 4
    singular_order: int = 4
    near_order: int = 4
    near_threshold: float = 1.5
    load_order: int = 6

    def __post_init__(self):
        if min(self.regular_order, self.singular_order, self.near_order, self.load_order) < 1:
            raise ValueError("quadrature orders must be >= 1")
        if self.regular_order not in _DUNAVANT:
            raise ValueError(f"regular_order must be one of {sorted(_DUNAVANT)}")

    def refined(self, factor=2):
        return QuadratureRule(
            regular_order=7,
            singular_order=self.singular_order * factor,
            near_order=self.near_order * factor,
            near_threshold=self.near_threshold,
            load_order=self.load_order * factor,
        )


def _orbit3(a, b, w):
    c = 1.0 - a - b
    return [(a, b, c, w), (b, c, a, w), (c, a, b, w)]


_DUNAVANT = {
    1: [(1 / 3, 1 / 3, 1 / 3, 1.0)],
    3: _orbit3(2 / 3, 1 / 6, 1 / 3),
    4: [(1 / 3, 1 / 3, 1 / 3, -27 / 48)] + _orbit3(0.6, 0.2, 25 / 48),
    6: _orbit3(0.108103018168070, 0.445948490915965, 0.223381589678011)
    + _orbit3(0.816847572980459, 0.091576213509771, 0.109951743655322),
    7: [(1 / 3, 1 / 3, 1 / 3, 0.225)]
    + _orbit3(0.059715871789770, 0.470142064105115, 0.132394152788506)
    + _orbit3(0.797426985353087, 0.101286507323456, 0.125939180544827),
}


def triangle_rule(npoints):
    """Symmetric rule with ``npoints`` points: barycentrics (Q, 3) and weights (Q,) summing to 1."""
    pts = np.array(_DUNAVANT[npoints])
    return pts[:, :3].copy(), pts[:, 3].copy()


def gauss_legendre01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1), 0.5 * w


@lru_cache(maxsize=None)
def collapsed_gauss(n):
    """Conical-product rule with ``n * n`` points, exact for degree ``2n - 2``.

    Barycentrics (Q, 3) and weights summing to 1.
    """
    u, wu = gauss_legendre01(n)
    # Gauss-Jacobi (alpha=1) in the collapsed direction absorbs the (1 - u) Jacobian
    from scipy.special import roots_jacobi

    t, wt = roots_jacobi(n, 1.0, 0.0)
    s = 0.5 * (t + 1)
    ws = wt / 4.0
    S, U = np.meshgrid(s, u, indexing="ij")
    W = np.outer(ws, wu)
    l1 = S.ravel()
    l2 = ((1 - S) * U).ravel()
    bary = np.stack([1 - l1 - l2, l1, l2], axis=1)
    w = 2 * W.ravel()
    return bary, w / w.sum()


def _cube(n):
    x, w = gauss_legendre01(n)
    g = np.stack(np.meshgrid(x, x, x, x, indexing="ij"), axis=-1).reshape(-1, 4)
    wg = np.einsum("i,j,k,l->ijkl", w, w, w, w).ravel()
    return g[:, 0], g[:, 1], g[:, 2], g[:, 3], wg


@lru_cache(maxsize=None)
def sauter_schwab(kind, n):
    """Sauter-Schwab rule for a pair of reference triangles ``{0 <= x2 <= x1 <= 1}``.

    Parameters
    ----------
    kind : {"identical", "edge", "vertex"}
        ``edge``: the common edge is ``(0,0)-(1,0)`` in both triangles.
        ``vertex``: the common vertex is ``(0,0)`` in both.
    n : int
        Gauss points per direction.

    Returns
    -------
    (Q, 5) array of ``x1, x2, y1, y2, w``; weights sum to 1/4 (the
    measure of the product of two reference triangles).
    """
    xi, e1, e2, e3, w = _cube(n)
    out = []

    def add(x1, x2, y1, y2, jac):
        out.append(np.stack([x1, x2, y1, y2, w * jac], axis=1))

    if kind == "identical":
        jac = xi**3 * e1**2 * e2
        add(xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1), jac)
        add(xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2), jac)
        add(xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2), jac)
        add(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3), jac)
        add(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2), jac)
        add(xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), jac)
    elif kind == "edge":
        add(xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi**3 * e1**2)
        jac = xi**3 * e1**2 * e2
        add(xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), jac)
        add(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3, jac)
        add(xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1, jac)
        add(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2, jac)
    elif kind == "vertex":
        jac = xi**3 * e2
        add(xi, xi * e1, xi * e2, xi * e2 * e3, jac)
        add(xi * e2, xi * e2 * e3, xi, xi * e1, jac)
    else:
        raise ValueError(f"unknown configuration {kind!r}")
    return np.concatenate(out)


def reference_to_physical(p0, p1, p2, x1, x2):
    """Map Sauter-Schwab reference coordinates to a triangle: ``p0 + x1 (p1 - p0) + x2 (p2 - p1)``."""
    return p0 + np.multiply.outer(x1, p1 - p0) + np.multiply.outer(x2, p2 - p1)
