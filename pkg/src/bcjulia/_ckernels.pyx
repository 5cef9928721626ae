# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled escape-time and ray-marching kernels.

Arithmetic mirrors :mod:`bcjulia._pykernels` operation for operation so the
two backends agree to the last bit (apart from the libm ``log``).
"""
from libc.math cimport log, sqrt, INFINITY

cdef double _EXTRA_GUARD = 1e100
cdef double _INV_SQRT2 = 0.7071067811865476


cdef inline void _horner(const double* cre, const double* cim, Py_ssize_t d,
                         double zr, double zi,
                         double* pr_out, double* pi_out,
                         double* qr_out, double* qi_out) noexcept nogil:
    # p(z) and p'(z) in one pass
    cdef double pr = cre[d], pi = cim[d], qr = 0.0, qi = 0.0, t
    cdef Py_ssize_t k
    for k in range(d - 1, -1, -1):
        t = qr * zr - qi * zi + pr
        qi = qr * zi + qi * zr + pi
        qr = t
        t = pr * zr - pi * zi + cre[k]
        pi = pr * zi + pi * zr + cim[k]
        pr = t
    pr_out[0] = pr
    pi_out[0] = pi
    qr_out[0] = qr
    qi_out[0] = qi


cdef inline int _orbit(const double* cre, const double* cim, Py_ssize_t d,
                       double zr, double zi, double r2, int max_iter,
                       int* iters_out, double* de_out) noexcept nogil:
    cdef double dr = 1.0, di = 0.0, pr, pi, qr, qi, t, mz, md
    cdef int n = 0, extra
    cdef int esc = (zr * zr + zi * zi) > r2
    while not esc and n < max_iter:
        _horner(cre, cim, d, zr, zi, &pr, &pi, &qr, &qi)
        t = qr * dr - qi * di
        di = qr * di + qi * dr
        dr = t
        zr = pr
        zi = pi
        n += 1
        esc = (zr * zr + zi * zi) > r2
    iters_out[0] = n
    if not esc:
        de_out[0] = INFINITY
        return 0
    for extra in range(2):
        if zr * zr + zi * zi > _EXTRA_GUARD:
            break
        _horner(cre, cim, d, zr, zi, &pr, &pi, &qr, &qi)
        t = qr * dr - qi * di
        di = qr * di + qi * dr
        dr = t
        zr = pr
        zi = pi
    mz = sqrt(zr * zr + zi * zi)
    md = sqrt(dr * dr + di * di)
    if md > 0.0:
        de_out[0] = mz * log(mz) / md
    else:
        de_out[0] = INFINITY
    return 1


def escape_time(const double[::1] cre, const double[::1] cim,
                const double[::1] zre, const double[::1] zim,
                double radius, int max_iter,
                unsigned char[::1] escaped, int[::1] iters, double[::1] de):
    """Escape-time orbits of many starting points under one polynomial.

    ``cre``/``cim`` hold the coefficients lowest degree first.  Results are
    written into ``escaped``, ``iters`` and ``de``.
    """
    cdef Py_ssize_t n = zre.shape[0], i
    cdef Py_ssize_t d = cre.shape[0] - 1
    cdef double r2 = radius * radius
    cdef int it
    cdef double dist
    with nogil:
        for i in range(n):
            escaped[i] = _orbit(&cre[0], &cim[0], d, zre[i], zim[i], r2, max_iter, &it, &dist)
            iters[i] = it
            de[i] = dist


def raymarch(const double[::1] c1re, const double[::1] c1im, double radius1,
             const double[::1] c2re, const double[::1] c2im, double radius2,
             const double[:, ::1] embed, const double[::1] offset,
             const double[:, ::1] origins, const double[::1] direction,
             const double[::1] t0, const double[::1] t1,
             int max_iter, double safety, double min_step, double hit_eps,
             unsigned char[::1] hit, double[::1] depth):
    """March orthographic rays through a 3-D slice of bicomplex space.

    A sample point ``p`` maps to ``w = offset + embed @ p`` in the four real
    coordinates.  The step is ``max(min_step, safety * de)`` where ``de`` is
    the largest exterior distance estimate among the escaping idempotent
    components divided by sqrt(2); a ray hits when no component escapes or
    ``de < hit_eps``.
    """
    cdef Py_ssize_t nrays = origins.shape[0], r
    cdef Py_ssize_t d1 = c1re.shape[0] - 1, d2 = c2re.shape[0] - 1
    cdef double r1sq = radius1 * radius1, r2sq = radius2 * radius2
    cdef double t, px, py, pz, w0, w1, w2, w3, de1, de2, de3
    cdef int e1, e2, it
    with nogil:
        for r in range(nrays):
            hit[r] = 0
            depth[r] = INFINITY
            t = t0[r]
            while t <= t1[r]:
                px = origins[r, 0] + t * direction[0]
                py = origins[r, 1] + t * direction[1]
                pz = origins[r, 2] + t * direction[2]
                w0 = offset[0] + embed[0, 0] * px + embed[0, 1] * py + embed[0, 2] * pz
                w1 = offset[1] + embed[1, 0] * px + embed[1, 1] * py + embed[1, 2] * pz
                w2 = offset[2] + embed[2, 0] * px + embed[2, 1] * py + embed[2, 2] * pz
                w3 = offset[3] + embed[3, 0] * px + embed[3, 1] * py + embed[3, 2] * pz
                e1 = _orbit(&c1re[0], &c1im[0], d1, w0 + w3, w1 - w2, r1sq, max_iter, &it, &de1)
                e2 = _orbit(&c2re[0], &c2im[0], d2, w0 - w3, w1 + w2, r2sq, max_iter, &it, &de2)
                if not e1 and not e2:
                    hit[r] = 1
                    depth[r] = t
                    break
                # distance to K1 x_e K1 is at least max(d1, d2) / sqrt(2)
                de3 = 0.0
                if e1 and de1 > de3:
                    de3 = de1
                if e2 and de2 > de3:
                    de3 = de2
                de3 = de3 * _INV_SQRT2
                if de3 < hit_eps:
                    hit[r] = 1
                    depth[r] = t
                    break
                if safety * de3 > min_step:
                    t = t + safety * de3
                else:
                    t = t + min_step
