"""Numba loops over triangle pairs for the single- and double-layer Galerkin matrices.

Local basis function ``a`` of a triangle is ``c_a (x - p_a)`` with ``p_a``
the vertex opposite local edge ``a``. Results are scattered into ``out``
through the local-to-global dof tables (``-1`` entries are skipped).
"""

import numba
import numpy as np

INV_4PI = 1.0 / (4.0 * np.pi)

_jit = numba.njit(cache=True, fastmath=False, error_model="numpy")


@_jit
def _pair_kind(ti, si):
    """0 far, 1 vertex, 2 edge, 3 identical; plus the vertex permutations aligning the shared part."""
    shared = 0
    for a in range(3):
        for b in range(3):
            if ti[a] == si[b]:
                shared += 1
    pt = np.arange(3)
    ps = np.arange(3)
    if shared == 2:
        n = 0
        for a in range(3):
            for b in range(3):
                if ti[a] == si[b]:
                    pt[n] = a
                    ps[n] = b
                    n += 1
        pt[2] = 3 - pt[0] - pt[1]
        ps[2] = 3 - ps[0] - ps[1]
    elif shared == 1:
        for a in range(3):
            for b in range(3):
                if ti[a] == si[b]:
                    pt[0] = a
                    ps[0] = b
        pt[1] = (pt[0] + 1) % 3
        pt[2] = (pt[0] + 2) % 3
        ps[1] = (ps[0] + 1) % 3
        ps[2] = (ps[0] + 2) % 3
    return shared, pt, ps


@_jit
def _singular_points(vt, vs, pt, ps, rule, scale):
    n = rule.shape[0]
    xs = np.empty((n, 3))
    ys = np.empty((n, 3))
    w = np.empty(n)
    for q in range(n):
        x1, x2, y1, y2 = rule[q, 0], rule[q, 1], rule[q, 2], rule[q, 3]
        for d in range(3):
            xs[q, d] = vt[pt[0], d] + x1 * (vt[pt[1], d] - vt[pt[0], d]) + x2 * (vt[pt[2], d] - vt[pt[1], d])
            ys[q, d] = vs[ps[0], d] + y1 * (vs[ps[1], d] - vs[ps[0], d]) + y2 * (vs[ps[2], d] - vs[ps[1], d])
        w[q] = rule[q, 4] * scale
    return xs, ys, w


@_jit
def _t_local_paired(xs, ys, w, vt, vs, ct, cs, k):
    """3x3 single-layer block from a list of paired points."""
    s0 = 0j
    sx = np.zeros(3, np.complex128)
    sy = np.zeros(3, np.complex128)
    sxy = 0j
    for q in range(xs.shape[0]):
        d0 = xs[q, 0] - ys[q, 0]
        d1 = xs[q, 1] - ys[q, 1]
        d2 = xs[q, 2] - ys[q, 2]
        r = np.sqrt(d0 * d0 + d1 * d1 + d2 * d2)
        g = -INV_4PI * np.exp(1j * k * r) / r * w[q]
        s0 += g
        sxy += g * (xs[q, 0] * ys[q, 0] + xs[q, 1] * ys[q, 1] + xs[q, 2] * ys[q, 2])
        for d in range(3):
            sx[d] += g * xs[q, d]
            sy[d] += g * ys[q, d]
    return _t_combine(s0, sx, sy, sxy, vt, vs, ct, cs, k)


@_jit
def _t_local_tensor(xt, wt, xsr, ws, vt, vs, ct, cs, k):
    """3x3 single-layer block from tensor-product rules on both triangles."""
    s0 = 0j
    sx = np.zeros(3, np.complex128)
    sy = np.zeros(3, np.complex128)
    sxy = 0j
    for i in range(xt.shape[0]):
        gi = 0j
        gy = np.zeros(3, np.complex128)
        for j in range(xsr.shape[0]):
            d0 = xt[i, 0] - xsr[j, 0]
            d1 = xt[i, 1] - xsr[j, 1]
            d2 = xt[i, 2] - xsr[j, 2]
            r = np.sqrt(d0 * d0 + d1 * d1 + d2 * d2)
            g = -INV_4PI * np.exp(1j * k * r) / r * ws[j]
            gi += g
            gy[0] += g * xsr[j, 0]
            gy[1] += g * xsr[j, 1]
            gy[2] += g * xsr[j, 2]
        s0 += wt[i] * gi
        for d in range(3):
            sx[d] += wt[i] * gi * xt[i, d]
            sy[d] += wt[i] * gy[d]
        sxy += wt[i] * (xt[i, 0] * gy[0] + xt[i, 1] * gy[1] + xt[i, 2] * gy[2])
    return _t_combine(s0, sx, sy, sxy, vt, vs, ct, cs, k)


@_jit
def _t_combine(s0, sx, sy, sxy, vt, vs, ct, cs, k):
    # (1/ik) [k^2 int g (x - p_a).(y - q_b) c_a c_b - int g div_a div_b],  div = 2c
    out = np.zeros((3, 3), np.complex128)
    for a in range(3):
        for b in range(3):
            pa = vt[a]
            qb = vs[b]
            vv = sxy - (pa[0] * sy[0] + pa[1] * sy[1] + pa[2] * sy[2]) - (qb[0] * sx[0] + qb[1] * sx[1] + qb[2] * sx[2])
            vv += (pa[0] * qb[0] + pa[1] * qb[1] + pa[2] * qb[2]) * s0
            out[a, b] = ct[a] * cs[b] * (k * k * vv - 4.0 * s0) / (1j * k)
    return out


@_jit
def _kn_local_paired(xs, ys, w, vt, vs, ct, cs, ns, k):
    """3x3 block of  int f_a(x) . [grad_x g(x, y) x (n(y) x f_b(y))]  from paired points."""
    out = np.zeros((3, 3), np.complex128)
    fa = np.empty((3, 3))
    fb = np.empty((3, 3))
    for q in range(xs.shape[0]):
        d = xs[q] - ys[q]
        r = np.sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
        ikr = 1j * k * r
        h = -INV_4PI * np.exp(ikr) * (ikr - 1.0) / (r * r * r) * w[q]
        dn = d[0] * ns[0] + d[1] * ns[1] + d[2] * ns[2]
        for a in range(3):
            for c in range(3):
                fa[a, c] = ct[a] * (xs[q, c] - vt[a, c])
                fb[a, c] = cs[a] * (ys[q, c] - vs[a, c])
        for a in range(3):
            fan = fa[a, 0] * ns[0] + fa[a, 1] * ns[1] + fa[a, 2] * ns[2]
            for b in range(3):
                dfb = d[0] * fb[b, 0] + d[1] * fb[b, 1] + d[2] * fb[b, 2]
                ff = fa[a, 0] * fb[b, 0] + fa[a, 1] * fb[b, 1] + fa[a, 2] * fb[b, 2]
                out[a, b] += h * (fan * dfb - ff * dn)
    return out


@_jit
def _kn_local_tensor(xt, wt, xsr, ws, vt, vs, ct, cs, ns, k):
    """Tensor-rule version of :func:`_kn_local_paired`.

    With ``f_a = c_a (x - p_a)``, ``f_b = c_b (y - q_b)`` and ``d = x - y``
    the integrand is linear in a few kernel moments over ``y``:
    ``h d``, ``h (d.y)``, ``h (d.n)`` and ``h (d.n) y``.
    """
    out = np.zeros((3, 3), np.complex128)
    nx = ns[0]
    ny = ns[1]
    nz = ns[2]
    for i in range(xt.shape[0]):
        x0 = xt[i, 0]
        x1 = xt[i, 1]
        x2 = xt[i, 2]
        hdy = 0j
        hd = np.zeros(3, np.complex128)
        hdn = 0j
        hdny = np.zeros(3, np.complex128)
        for j in range(xsr.shape[0]):
            y0 = xsr[j, 0]
            y1 = xsr[j, 1]
            y2 = xsr[j, 2]
            d0 = x0 - y0
            d1 = x1 - y1
            d2 = x2 - y2
            r = np.sqrt(d0 * d0 + d1 * d1 + d2 * d2)
            ikr = 1j * k * r
            h = -INV_4PI * np.exp(ikr) * (ikr - 1.0) / (r * r * r) * ws[j]
            dn = d0 * nx + d1 * ny + d2 * nz
            hdy += h * (d0 * y0 + d1 * y1 + d2 * y2)
            hd[0] += h * d0
            hd[1] += h * d1
            hd[2] += h * d2
            hdn += h * dn
            hdny[0] += h * dn * y0
            hdny[1] += h * dn * y1
            hdny[2] += h * dn * y2
        w = wt[i]
        for a in range(3):
            ex = x0 - vt[a, 0]
            ey = x1 - vt[a, 1]
            ez = x2 - vt[a, 2]
            fan = ct[a] * (ex * nx + ey * ny + ez * nz)
            for b in range(3):
                q0 = vs[b, 0]
                q1 = vs[b, 1]
                q2 = vs[b, 2]
                # sum_j h (d.f_b) = c_b [hdy - hd.q_b]
                dfb = hdy - (hd[0] * q0 + hd[1] * q1 + hd[2] * q2)
                # sum_j h (d.n) (f_a.f_b) = c_a c_b (x - p_a).(hdny - hdn q_b)
                ffd = ex * (hdny[0] - hdn * q0) + ey * (hdny[1] - hdn * q1) + ez * (hdny[2] - hdn * q2)
                out[a, b] += w * cs[b] * (fan * dfb - ct[a] * ffd)
    return out


@_jit
def _tensor_pairs(xt, wt, xsr, ws):
    nt = xt.shape[0]
    ns = xsr.shape[0]
    xs = np.empty((nt * ns, 3))
    ys = np.empty((nt * ns, 3))
    w = np.empty(nt * ns)
    for i in range(nt):
        for j in range(ns):
            xs[i * ns + j] = xt[i]
            ys[i * ns + j] = xsr[j]
            w[i * ns + j] = wt[i] * ws[j]
    return xs, ys, w


@_jit
def _is_near(ct_i, cs_j, rad_i, rad_j, thresh):
    d0 = ct_i[0] - cs_j[0]
    d1 = ct_i[1] - cs_j[1]
    d2 = ct_i[2] - cs_j[2]
    lim = thresh * max(rad_i, rad_j)
    return d0 * d0 + d1 * d1 + d2 * d2 < lim * lim


@_jit
def _scatter(out, blk, dt, ds, transpose):
    for a in range(3):
        if dt[a] < 0:
            continue
        for b in range(3):
            if ds[b] < 0:
                continue
            if transpose:
                out[ds[b], dt[a]] += blk[a, b]
            else:
                out[dt[a], ds[b]] += blk[a, b]


@_jit
def assemble_single_layer(
    out, k, symmetric,
    t_idx, t_v, t_dof, t_coef, t_cen, t_rad, t_reg, t_regw, t_near, t_nearw,
    s_idx, s_v, s_dof, s_coef, s_cen, s_rad, s_reg, s_regw, s_near, s_nearw,
    ss_id, ss_edge, ss_vert, near_thresh,
):
    """Single-layer Galerkin matrix; with ``symmetric`` the two sides must be the same space."""
    nt = t_idx.shape[0]
    ns = s_idx.shape[0]
    for i in range(nt):
        j0 = i if symmetric else 0
        for j in range(j0, ns):
            shared, pt, ps = _pair_kind(t_idx[i], s_idx[j])
            vt = t_v[i]
            vs = s_v[j]
            if shared == 0:
                if _is_near(t_cen[i], s_cen[j], t_rad[i], s_rad[j], near_thresh):
                    blk = _t_local_tensor(t_near[i], t_nearw[i], s_near[j], s_nearw[j], vt, vs, t_coef[i], s_coef[j], k)
                else:
                    blk = _t_local_tensor(t_reg[i], t_regw[i], s_reg[j], s_regw[j], vt, vs, t_coef[i], s_coef[j], k)
            else:
                rule = ss_id if shared == 3 else (ss_edge if shared == 2 else ss_vert)
                scale = 4.0 * t_regw[i].sum() * s_regw[j].sum()
                xs, ys, w = _singular_points(vt, vs, pt, ps, rule, scale)
                blk = _t_local_paired(xs, ys, w, vt, vs, t_coef[i], s_coef[j], k)
            _scatter(out, blk, t_dof[i], s_dof[j], False)
            if symmetric and j != i:
                _scatter(out, blk, t_dof[i], s_dof[j], True)


@_jit
def assemble_double_layer(
    out, k,
    t_idx, t_v, t_dof, t_coef, t_cen, t_rad, t_reg, t_regw, t_near, t_nearw,
    s_idx, s_v, s_dof, s_coef, s_cen, s_rad, s_reg, s_regw, s_near, s_nearw, s_nrm,
    ss_edge, ss_vert, near_thresh,
):
    """Principal-value double layer applied to rotated trial functions ``n x f_b``.

    Coincident flat triangles contribute nothing: ``x - y`` and ``n x f_b``
    both lie in the plane, so their cross product is normal to the test
    function.
    """
    nt = t_idx.shape[0]
    ns = s_idx.shape[0]
    for i in range(nt):
        for j in range(ns):
            shared, pt, ps = _pair_kind(t_idx[i], s_idx[j])
            if shared == 3:
                continue
            vt = t_v[i]
            vs = s_v[j]
            if shared == 0:
                if _is_near(t_cen[i], s_cen[j], t_rad[i], s_rad[j], near_thresh):
                    blk = _kn_local_tensor(t_near[i], t_nearw[i], s_near[j], s_nearw[j], vt, vs, t_coef[i], s_coef[j], s_nrm[j], k)
                else:
                    blk = _kn_local_tensor(t_reg[i], t_regw[i], s_reg[j], s_regw[j], vt, vs, t_coef[i], s_coef[j], s_nrm[j], k)
            else:
                rule = ss_edge if shared == 2 else ss_vert
                scale = 4.0 * t_regw[i].sum() * s_regw[j].sum()
                xs, ys, w = _singular_points(vt, vs, pt, ps, rule, scale)
                blk = _kn_local_paired(xs, ys, w, vt, vs, t_coef[i], s_coef[j], s_nrm[j], k)
            _scatter(out, blk, t_dof[i], s_dof[j], False)
