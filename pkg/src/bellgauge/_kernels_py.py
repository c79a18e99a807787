"""Pure-Python hot kernels.

Mirror of ``_kernels.pyx``. Both files perform the same floating-point
operations in the same order so the two backends agree bit for bit; keep
them in lockstep when editing either one.
"""
from math import cos, sin, sqrt

GOLDEN = 0.6180339887498949


def jacobi_eigh(are, aim, tol, max_sweeps):
    """Cyclic complex Jacobi iteration on a Hermitian matrix.

    ``are``/``aim`` are the real and imaginary parts (n x n). Returns
    ``(diag, vre, vim, sweeps, converged)`` where the columns of ``vre + i vim``
    are the eigenvectors belonging to ``diag`` (unsorted).
    """
    a_r = [list(map(float, row)) for row in are]
    a_i = [list(map(float, row)) for row in aim]
    n = len(a_r)
    v_r = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    v_i = [[0.0] * n for _ in range(n)]

    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a_r[i][j] * a_r[i][j] + a_i[i][j] * a_i[i][j]
    scale = sqrt(scale)
    thresh = tol * (scale if scale > 1.0 else 1.0)

    sweeps = 0
    converged = False
    while True:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a_r[i][j] * a_r[i][j] + a_i[i][j] * a_i[i][j]
        off = sqrt(2.0 * off)
        if off < thresh:
            converged = True
            break
        if sweeps >= max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                xr = a_r[p][q]
                xi = a_i[p][q]
                r = sqrt(xr * xr + xi * xi)
                if r == 0.0:
                    continue
                # phase: column q times conj(x)/|x|, row q times x/|x|
                er = xr / r
                ei = -xi / r
                for k in range(n):
                    tr = a_r[k][q]
                    ti = a_i[k][q]
                    a_r[k][q] = tr * er - ti * ei
                    a_i[k][q] = tr * ei + ti * er
                for k in range(n):
                    tr = a_r[q][k]
                    ti = a_i[q][k]
                    a_r[q][k] = tr * er + ti * ei
                    a_i[q][k] = ti * er - tr * ei
                for k in range(n):
                    tr = v_r[k][q]
                    ti = v_i[k][q]
                    v_r[k][q] = tr * er - ti * ei
                    v_i[k][q] = tr * ei + ti * er
                a_r[p][q] = r
                a_i[p][q] = 0.0
                a_r[q][p] = r
                a_i[q][p] = 0.0
                a_i[q][q] = 0.0

                app = a_r[p][p]
                aqq = a_r[q][q]
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
                    kp_r = a_r[k][p]
                    kp_i = a_i[k][p]
                    kq_r = a_r[k][q]
                    kq_i = a_i[k][q]
                    np_r = c * kp_r - s * kq_r
                    np_i = c * kp_i - s * kq_i
                    nq_r = s * kp_r + c * kq_r
                    nq_i = s * kp_i + c * kq_i
                    a_r[k][p] = np_r
                    a_i[k][p] = np_i
                    a_r[k][q] = nq_r
                    a_i[k][q] = nq_i
                    a_r[p][k] = np_r
                    a_i[p][k] = -np_i
                    a_r[q][k] = nq_r
                    a_i[q][k] = -nq_i
                a_r[p][p] = app - t * r
                a_r[q][q] = aqq + t * r
                a_r[p][q] = 0.0
                a_r[q][p] = 0.0
                for k in range(n):
                    kp_r = v_r[k][p]
                    kp_i = v_i[k][p]
                    kq_r = v_r[k][q]
                    kq_i = v_i[k][q]
                    v_r[k][p] = c * kp_r - s * kq_r
                    v_i[k][p] = c * kp_i - s * kq_i
                    v_r[k][q] = s * kp_r + c * kq_r
                    v_i[k][q] = s * kp_i + c * kq_i

    diag = [a_r[i][i] for i in range(n)]
    return diag, v_r, v_i, sweeps, converged


def _unit(theta, phi):
    st = sin(theta)
    return st * cos(phi), st * sin(phi), cos(theta)


def chsh_angles(t, angles):
    """Bilinear CHSH value a.T(b+b') + a'.T(b-b') from 8 spherical angles.

    ``t`` is the 3x3 correlation matrix flattened row-major; ``angles`` holds
    (theta, phi) pairs for a, a', b, b' in that order.
    """
    a0, a1, a2 = _unit(angles[0], angles[1])
    c0, c1, c2 = _unit(angles[2], angles[3])
    b0, b1, b2 = _unit(angles[4], angles[5])
    d0, d1, d2 = _unit(angles[6], angles[7])
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


def refine_angles(t, angles, max_sweeps, sweep_tol, half_width, line_tol):
    """Coordinate ascent of |chsh_angles| with a golden-section search per angle.

    Returns ``(angles, value, sweeps, evaluations)``; ``value`` is signed and
    never decreases in magnitude relative to the starting point.
    """
    t = [float(x) for x in t]
    x = [float(v) for v in angles]
    best = chsh_angles(t, x)
    evals = 1
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        start = abs(best)
        for k in range(8):
            x0 = x[k]
            lo = x0 - half_width
            hi = x0 + half_width
            m1 = hi - GOLDEN * (hi - lo)
            m2 = lo + GOLDEN * (hi - lo)
            x[k] = m1
            f1 = abs(chsh_angles(t, x))
            x[k] = m2
            f2 = abs(chsh_angles(t, x))
            evals += 2
            while hi - lo > line_tol:
                if f1 >= f2:
                    hi = m2
                    m2 = m1
                    f2 = f1
                    m1 = hi - GOLDEN * (hi - lo)
                    x[k] = m1
                    f1 = abs(chsh_angles(t, x))
                else:
                    lo = m1
                    m1 = m2
                    f1 = f2
                    m2 = lo + GOLDEN * (hi - lo)
                    x[k] = m2
                    f2 = abs(chsh_angles(t, x))
                evals += 1
            x[k] = m1 if f1 >= f2 else m2
            cand = chsh_angles(t, x)
            evals += 1
            if abs(cand) > abs(best):
                best = cand
            else:
                x[k] = x0
        if abs(best) - start < sweep_tol:
            break
    return x, best, sweeps, evals
