"""Pure numpy implementation of the kernels in ``_ckernels.pyx``.

Same signatures, same operation order; points are processed as vectors and
finished orbits are dropped from the working set as they escape.
"""
import numpy as np

_EXTRA_GUARD = 1e100
_INV_SQRT2 = 0.7071067811865476


def _horner(cre, cim, zr, zi):
    d = len(cre) - 1
    pr = np.full_like(zr, cre[d])
    pi = np.full_like(zr, cim[d])
    qr = np.zeros_like(zr)
    qi = np.zeros_like(zr)
    for k in range(d - 1, -1, -1):
        t = qr * zr - qi * zi + pr
        qi = qr * zi + qi * zr + pi
        qr = t
        t = pr * zr - pi * zi + cre[k]
        pi = pr * zi + pi * zr + cim[k]
        pr = t
    return pr, pi, qr, qi


def _orbits(cre, cim, zr, zi, r2, max_iter):
    """Vectorised orbit loop; returns (escaped, iters, de) arrays."""
    n = zr.shape[0]
    escaped = (zr * zr + zi * zi) > r2
    iters = np.zeros(n, dtype=np.int32)
    fzr = zr.copy()
    fzi = zi.copy()
    fdr = np.ones(n)
    fdi = np.zeros(n)

    idx = np.flatnonzero(~escaped)
    zr_a, zi_a = zr[idx], zi[idx]
    dr_a, di_a = np.ones(idx.size), np.zeros(idx.size)
    step = 0
    while idx.size and step < max_iter:
        pr, pi, qr, qi = _horner(cre, cim, zr_a, zi_a)
        t = qr * dr_a - qi * di_a
        di_a = qr * di_a + qi * dr_a
        dr_a = t
        zr_a, zi_a = pr, pi
        step += 1
        out = (zr_a * zr_a + zi_a * zi_a) > r2
        if out.any():
            j = idx[out]
            escaped[j] = True
            iters[j] = step
            fzr[j], fzi[j], fdr[j], fdi[j] = zr_a[out], zi_a[out], dr_a[out], di_a[out]
            keep = ~out
            idx = idx[keep]
            zr_a, zi_a, dr_a, di_a = zr_a[keep], zi_a[keep], dr_a[keep], di_a[keep]
    iters[idx] = step

    de = np.full(n, np.inf)
    e = np.flatnonzero(escaped)
    if e.size:
        zr_e, zi_e, dr_e, di_e = fzr[e], fzi[e], fdr[e], fdi[e]
        live = np.ones(e.size, dtype=bool)
        for _ in range(2):
            live &= ~((zr_e * zr_e + zi_e * zi_e) > _EXTRA_GUARD)
            if not live.any():
                break
            pr, pi, qr, qi = _horner(cre, cim, zr_e[live], zi_e[live])
            dr_l, di_l = dr_e[live], di_e[live]
            dr_e[live] = qr * dr_l - qi * di_l
            di_e[live] = qr * di_l + qi * dr_l
            zr_e[live], zi_e[live] = pr, pi
        mz = np.sqrt(zr_e * zr_e + zi_e * zi_e)
        md = np.sqrt(dr_e * dr_e + di_e * di_e)
        with np.errstate(divide="ignore"):
            de[e] = np.where(md > 0.0, mz * np.log(mz) / np.where(md > 0.0, md, 1.0), np.inf)
    return escaped, iters, de


def escape_time(cre, cim, zre, zim, radius, max_iter, escaped, iters, de):
    """Escape-time orbits of many starting points under one polynomial.

    ``cre``/``cim`` hold the coefficients lowest degree first.  Results are
    written into ``escaped``, ``iters`` and ``de``.
    """
    cre = np.asarray(cre, dtype=np.float64)
    cim = np.asarray(cim, dtype=np.float64)
    esc, it, dist = _orbits(cre, cim, np.asarray(zre, dtype=np.float64),
                            np.asarray(zim, dtype=np.float64), radius * radius, max_iter)
    np.asarray(escaped)[:] = esc
    np.asarray(iters)[:] = it
    np.asarray(de)[:] = dist


def raymarch(c1re, c1im, radius1, c2re, c2im, radius2, embed, offset,
             origins, direction, t0, t1, max_iter, safety, min_step, hit_eps,
             hit, depth):
    """March orthographic rays; see the compiled kernel for the contract."""
    c1re, c1im, c2re, c2im = (np.asarray(a, dtype=np.float64) for a in (c1re, c1im, c2re, c2im))
    embed = np.asarray(embed, dtype=np.float64)
    offset = np.asarray(offset, dtype=np.float64)
    origins = np.asarray(origins, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    hit = np.asarray(hit)
    depth = np.asarray(depth)
    hit[:] = 0
    depth[:] = np.inf
    r1sq, r2sq = radius1 * radius1, radius2 * radius2

    idx = np.arange(origins.shape[0])
    t = np.array(t0, dtype=np.float64)
    t_end = np.asarray(t1, dtype=np.float64)
    alive = t <= t_end
    idx, t = idx[alive], t[alive]
    while idx.size:
        o = origins[idx]
        px = o[:, 0] + t * direction[0]
        py = o[:, 1] + t * direction[1]
        pz = o[:, 2] + t * direction[2]
        w = [offset[k] + embed[k, 0] * px + embed[k, 1] * py + embed[k, 2] * pz
             for k in range(4)]
        e1, _, de1 = _orbits(c1re, c1im, w[0] + w[3], w[1] - w[2], r1sq, max_iter)
        e2, _, de2 = _orbits(c2re, c2im, w[0] - w[3], w[1] + w[2], r2sq, max_iter)
        de3 = np.maximum(np.where(e1, de1, 0.0), np.where(e2, de2, 0.0)) * _INV_SQRT2
        stop = (~e1 & ~e2) | (de3 < hit_eps)
        hit[idx[stop]] = 1
        depth[idx[stop]] = t[stop]
        go = ~stop
        idx, t, de3 = idx[go], t[go], de3[go]
        step = safety * de3
        t = np.where(step > min_step, t + step, t + min_step)
        alive = t <= t_end[idx]
        idx, t = idx[alive], t[alive]
