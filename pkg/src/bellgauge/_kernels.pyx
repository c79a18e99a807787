# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py.py`` for the reference twin.

Every expression below is ordered exactly as in the Python twin so both
backends produce identical doubles.
"""
import numpy as np

from libc.math cimport cos, sin, sqrt, fabs

cdef double GOLDEN = 0.6180339887498949


def jacobi_eigh(are, aim, double tol, int max_sweeps):
    cdef double[:, ::1] a_r = np.array(are, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] a_i = np.array(aim, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a_r.shape[0]
    cdef double[:, ::1] v_r = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] v_i = np.zeros((n, n), dtype=np.float64)
    cdef Py_ssize_t i, j, k, p, q
    cdef double scale = 0.0, thresh, off
    cdef double xr, xi, r, er, ei, tr, ti, app, aqq, theta, t, c, s
    cdef double kp_r, kp_i, kq_r, kq_i, np_r, np_i, nq_r, nq_i
    cdef int sweeps = 0
    cdef bint converged = False

    for i in range(n):
        for j in range(n):
            scale += a_r[i, j] * a_r[i, j] + a_i[i, j] * a_i[i, j]
    scale = sqrt(scale)
    thresh = tol * (scale if scale > 1.0 else 1.0)

    while True:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a_r[i, j] * a_r[i, j] + a_i[i, j] * a_i[i, j]
        off = sqrt(2.0 * off)
        if off < thresh:
            converged = True
            break
        if sweeps >= max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                xr = a_r[p, q]
                xi = a_i[p, q]
                r = sqrt(xr * xr + xi * xi)
                if r == 0.0:
                    continue
                er = xr / r
                ei = -xi / r
                for k in range(n):
                    tr = a_r[k, q]
                    ti = a_i[k, q]
                    a_r[k, q] = tr * er - ti * ei
                    a_i[k, q] = tr * ei + ti * er
                for k in range(n):
                    tr = a_r[q, k]
                    ti = a_i[q, k]
                    a_r[q, k] = tr * er + ti * ei
                    a_i[q, k] = ti * er - tr * ei
                for k in range(n):
                    tr = v_r[k, q]
                    ti = v_i[k, q]
                    v_r[k, q] = tr * er - ti * ei
                    v_i[k, q] = tr * ei + ti * er
                a_r[p, q] = r
                a_i[p, q] = 0.0
                a_r[q, p] = r
                a_i[q, p] = 0.0
                a_i[q, q] = 0.0

                app = a_r[p, p]
                aqq = a_r[q, q]
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    kp_r = a_r[k, p]
                    kp_i = a_i[k, p]
                    kq_r = a_r[k, q]
                    kq_i = a_i[k, q]
                    np_r = c * kp_r - s * kq_r
                    np_i = c * kp_i - s * kq_i
                    nq_r = s * kp_r + c * kq_r
                    nq_i = s * kp_i + c * kq_i
                    a_r[k, p] = np_r
                    a_i[k, p] = np_i
                    a_r[k, q] = nq_r
                    a_i[k, q] = nq_i
                    a_r[p, k] = np_r
                    a_i[p, k] = -np_i
                    a_r[q, k] = nq_r
                    a_i[q, k] = -nq_i
                a_r[p, p] = app - t * r
                a_r[q, q] = aqq + t * r
                a_r[p, q] = 0.0
                a_r[q, p] = 0.0
                for k in range(n):
                    kp_r = v_r[k, p]
                    kp_i = v_i[k, p]
                    kq_r = v_r[k, q]
                    kq_i = v_i[k, q]
                    v_r[k, p] = c * kp_r - s * kq_r
                    v_i[k, p] = c * kp_i - s * kq_i
                    v_r[k, q] = s * kp_r + c * kq_r
                    v_i[k, q] = s * kp_i + c * kq_i

    diag = [a_r[i, i] for i in range(n)]
    return (diag, np.asarray(v_r).tolist(), np.asarray(v_i).tolist(),
            sweeps, bool(converged))


cdef inline double _chsh(const double* t, const double* x) noexcept nogil:
    cdef double st, a0, a1, a2, c0, c1, c2, b0, b1, b2, d0, d1, d2
    cdef double s0, s1, s2, e0, e1, e2, ts0, ts1, ts2, te0, te1, te2
    st = sin(x[0])
    a0 = st * cos(x[1])
    a1 = st * sin(x[1])
    a2 = cos(x[0])
    st = sin(x[2])
    c0 = st * cos(x[3])
    c1 = st * sin(x[3])
    c2 = cos(x[2])
    st = sin(x[4])
    b0 = st * cos(x[5])
    b1 = st * sin(x[5])
    b2 = cos(x[4])
    st = sin(x[6])
    d0 = st * cos(x[7])
    d1 = st * sin(x[7])
    d2 = cos(x[6])
    s0 = b0 + d0
    s1 = b1 + d1
    s2 = b2 + d2
    e0 = b0 - d0
    e1 = b1 - d1
    e2 = b2 - d2
    ts0 = t[0] * s0 + t[1] * s1 + t[2] * s2
    ts1 = t[3] * s0 + t[4] * s1 + t[5] * s2
    ts2 = t[6] * s0 + t[7] * s1 + t[8] * s2
    te0 = t[0] * e0 + t[1] * e1 + t[2] * e2
    te1 = t[3] * e0 + t[4] * e1 + t[5] * e2
    te2 = t[6] * e0 + t[7] * e1 + t[8] * e2
    return (a0 * ts0 + a1 * ts1 + a2 * ts2) + (c0 * te0 + c1 * te1 + c2 * te2)


def chsh_angles(t, angles):
    cdef double tt[9]
    cdef double x[8]
    cdef int k
    for k in range(9):
        tt[k] = t[k]
    for k in range(8):
        x[k] = angles[k]
    return _chsh(tt, x)


def refine_angles(t, angles, int max_sweeps, double sweep_tol,
                  double half_width, double line_tol):
    cdef double tt[9]
    cdef double x[8]
    cdef int k, sweeps = 0
    cdef long evals = 1
    cdef double best, start, x0, lo, hi, m1, m2, f1, f2, cand
    for k in range(9):
        tt[k] = t[k]
    for k in range(8):
        x[k] = angles[k]
    best = _chsh(tt, x)
    while sweeps < max_sweeps:
        sweeps += 1
        start = fabs(best)
        for k in range(8):
            x0 = x[k]
            lo = x0 - half_width
            hi = x0 + half_width
            m1 = hi - GOLDEN * (hi - lo)
            m2 = lo + GOLDEN * (hi - lo)
            x[k] = m1
            f1 = fabs(_chsh(tt, x))
            x[k] = m2
            f2 = fabs(_chsh(tt, x))
            evals += 2
            while hi - lo > line_tol:
                if f1 >= f2:
                    hi = m2
                    m2 = m1
                    f2 = f1
                    m1 = hi - GOLDEN * (hi - lo)
                    x[k] = m1
                    f1 = fabs(_chsh(tt, x))
                else:
                    lo = m1
                    m1 = m2
                    f1 = f2
                    m2 = lo + GOLDEN * (hi - lo)
                    x[k] = m2
                    f2 = fabs(_chsh(tt, x))
                evals += 1
            x[k] = m1 if f1 >= f2 else m2
            cand = _chsh(tt, x)
            evals += 1
            if fabs(cand) > fabs(best):
                best = cand
            else:
                x[k] = x0
        if fabs(best) - start < sweep_tol:
            break
    return [x[k] for k in range(8)], best, sweeps, evals
