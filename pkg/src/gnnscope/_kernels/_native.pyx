# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the numeric kernels.

Behaviour (including every tie-break and accumulation order) must match
``gnnscope._kernels._pyfallback``; the cross-backend suite enforces it.
The float-reduction kernels keep their reductions in numpy (operating on
arrays these loops filled) so both backends share numpy's summation
order; the remaining divergence is the fallback's BLAS matmul fusing
multiply-adds where scalar code rounds twice, bounded at the last ulp.

Input arrays are mapped through const memoryviews: callers hand in
write-protected arrays (datasets freeze theirs) and nothing here may
mutate an argument.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fmod, hypot

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.float64_t f64

DEF GOLDEN = 0.6180339887498949
DEF TWO_PI = 6.283185307179586


def pairwise_mixed_sq(cat, cont):
    """Squared distances: categorical mismatch count plus continuous L2^2.

    Accumulation order follows the fallback: categorical columns left to
    right, then continuous columns left to right, so sums are bit-equal.
    """
    cat_a = np.ascontiguousarray(cat, dtype=np.int64)
    cont_a = np.ascontiguousarray(cont, dtype=np.float64)
    cdef const i64[:, ::1] ca = cat_a
    cdef const f64[:, ::1] co = cont_a
    cdef Py_ssize_t n = ca.shape[0]
    cdef Py_ssize_t na = ca.shape[1]
    cdef Py_ssize_t nb = co.shape[1]
    out_a = np.zeros((n, n), dtype=np.float64)
    cdef f64[:, ::1] out = out_a
    cdef Py_ssize_t i, j, c
    cdef double acc, diff
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for c in range(na):
                if ca[i, c] != ca[j, c]:
                    acc = acc + 1.0
            for c in range(nb):
                diff = co[i, c] - co[j, c]
                acc = acc + diff * diff
            out[i, j] = acc
            out[j, i] = acc
    return out_a


def bfs_depths(indptr, indices, sources, max_depth=-1):
    """Multi-source BFS depth to the nearest source; -1 where unreachable."""
    ip = np.ascontiguousarray(indptr, dtype=np.int64)
    ix = np.ascontiguousarray(indices, dtype=np.int64)
    src = np.unique(np.asarray(sources, dtype=np.int64))
    cdef const i64[::1] iptr = ip
    cdef const i64[::1] idx = ix
    cdef const i64[::1] srcv = src
    cdef Py_ssize_t n = iptr.shape[0] - 1
    depth_a = np.full(n, -1, dtype=np.int64)
    queue_a = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] depth = depth_a
    cdef i64[::1] queue = queue_a
    cdef Py_ssize_t head = 0, tail = 0
    cdef Py_ssize_t s, v, w, p
    cdef long limit = max_depth
    for s in range(srcv.shape[0]):
        v = srcv[s]
        if depth[v] < 0:
            depth[v] = 0
            queue[tail] = v
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        if limit >= 0 and depth[v] >= limit:
            continue
        for p in range(iptr[v], iptr[v + 1]):
            w = idx[p]
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                queue[tail] = w
                tail += 1
    return depth_a


def tsne_forces(Y, P):
    """KL gradient/value for a 2D embedding under the Student-t kernel.

    The n^2 tables are filled in C; the reductions (total mass, row sums,
    the matmul, the KL sum) run through numpy exactly as in the fallback.
    """
    Y_a = np.ascontiguousarray(Y, dtype=np.float64)
    P_a = np.ascontiguousarray(P, dtype=np.float64)
    cdef const f64[:, ::1] Yv = Y_a
    cdef const f64[:, ::1] Pv = P_a
    cdef Py_ssize_t n = Yv.shape[0]
    W_a = np.empty((n, n), dtype=np.float64)
    sq_a = np.empty(n, dtype=np.float64)
    cdef f64[:, ::1] W = W_a
    cdef f64[::1] sq = sq_a
    cdef Py_ssize_t i, j
    cdef double dot, d2
    for i in range(n):
        sq[i] = Yv[i, 0] * Yv[i, 0] + Yv[i, 1] * Yv[i, 1]
    for i in range(n):
        for j in range(n):
            if i == j:
                W[i, j] = 0.0
                continue
            dot = Yv[i, 0] * Yv[j, 0] + Yv[i, 1] * Yv[j, 1]
            d2 = (sq[i] + sq[j]) - 2.0 * dot
            if d2 < 0.0:
                d2 = 0.0
            W[i, j] = 1.0 / (1.0 + d2)
    z = float(W_a.sum())
    if z <= 0.0:
        return np.zeros_like(Y_a), 0.0
    cdef double zc = z
    Q_a = np.empty((n, n), dtype=np.float64)
    PQW_a = np.empty((n, n), dtype=np.float64)
    cdef f64[:, ::1] Q = Q_a
    cdef f64[:, ::1] PQW = PQW_a
    cdef double q
    for i in range(n):
        for j in range(n):
            q = W[i, j] / zc
            Q[i, j] = q
            PQW[i, j] = (Pv[i, j] - q) * W[i, j]
    s = PQW_a.sum(axis=1)
    grad = 4.0 * (s[:, None] * Y_a - PQW_a @ Y_a)
    eps = np.finfo(np.float64).tiny
    mask = P_a > 0.0
    kl = float(np.sum(P_a[mask] * np.log(P_a[mask] / np.maximum(Q_a[mask], eps))))
    return grad, kl


def resolve_collisions(pos, radii, epsilon, max_sweeps=200):
    """Gauss-Seidel separation of overlapping discs; see the fallback for
    the visit order and the coincident-center convention, both replicated
    here (the rare coincident branch calls numpy's cos/sin for bit parity).
    """
    pos_a = np.array(pos, dtype=np.float64, order="C")
    rad_a = np.ascontiguousarray(radii, dtype=np.float64)
    bad_a = np.empty(max(pos_a.shape[0], 1), dtype=np.int64)
    cdef f64[:, ::1] P = pos_a
    cdef const f64[::1] R = rad_a
    cdef i64[::1] bad = bad_a
    cdef Py_ssize_t n = P.shape[0]
    cdef double eps = epsilon
    cdef long sweeps = max_sweeps
    cdef Py_ssize_t sweep, i, j, t, nbad
    cdef double dx, dy, d, need, ux, uy, shift, angle
    cdef bint moved
    for sweep in range(sweeps):
        moved = False
        for i in range(n - 1):
            nbad = 0
            for j in range(i + 1, n):
                dx = P[j, 0] - P[i, 0]
                dy = P[j, 1] - P[i, 1]
                d = hypot(dx, dy)
                if d < R[i] + R[j] - eps:
                    bad[nbad] = j
                    nbad += 1
            for t in range(nbad):
                j = bad[t]
                dx = P[j, 0] - P[i, 0]
                dy = P[j, 1] - P[i, 1]
                d = hypot(dx, dy)
                need = R[i] + R[j]
                if d >= need - eps:
                    continue  # an earlier push already separated this pair
                if d <= 1e-12:
                    angle = TWO_PI * fmod(GOLDEN * <double> (i * n + j), 1.0)
                    ux = float(np.cos(angle))
                    uy = float(np.sin(angle))
                else:
                    ux = dx / d
                    uy = dy / d
                shift = 0.5 * (need - d)
                P[i, 0] -= ux * shift
                P[i, 1] -= uy * shift
                P[j, 0] += ux * shift
                P[j, 1] += uy * shift
                moved = True
        if not moved:
            break
    return pos_a


def layout_forces(pos, indptr, indices, k):
    """One spring-layout force pass: repulsion k^2/d, attraction d^2/k."""
    pos_a = np.ascontiguousarray(pos, dtype=np.float64)
    ip = np.ascontiguousarray(indptr, dtype=np.int64)
    ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const f64[:, ::1] P = pos_a
    cdef const i64[::1] iptr = ip
    cdef const i64[::1] idx = ix
    cdef Py_ssize_t n = P.shape[0]
    disp_a = np.zeros((n, 2), dtype=np.float64)
    cdef f64[:, ::1] disp = disp_a
    cdef double kc = k
    cdef Py_ssize_t i, j, p, u
    cdef double dx, dy, d2, rep, accx, accy, d, pull
    for i in range(n):
        accx = 0.0
        accy = 0.0
        for j in range(n):
            dx = P[i, 0] - P[j, 0]
            dy = P[i, 1] - P[j, 1]
            d2 = dx * dx + dy * dy
            if i == j:
                d2 = 1.0
            if d2 < 1e-18:
                d2 = 1e-18
            rep = 0.0 if i == j else (kc * kc) / d2
            accx = accx + rep * dx
            accy = accy + rep * dy
        disp[i, 0] = accx
        disp[i, 1] = accy
    for i in range(n):
        for p in range(iptr[i], iptr[i + 1]):
            u = idx[p]
            dx = P[i, 0] - P[u, 0]
            dy = P[i, 1] - P[u, 1]
            d = hypot(dx, dy)
            if d < 1e-9:
                d = 1e-9
            pull = d / kc
            disp[i, 0] -= pull * dx
            disp[i, 1] -= pull * dy
    return disp_a


def complete_linkage(dist):
    """Agglomerative complete linkage; ties to the lexicographically
    smallest representative pair, exactly as the fallback (first row to
    reach the global minimum, first column to reach the row minimum)."""
    D_a = np.array(dist, dtype=np.float64, order="C")
    cdef f64[:, ::1] D = D_a
    cdef Py_ssize_t n = D.shape[0]
    merges_a = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    heights_a = np.empty(max(n - 1, 0), dtype=np.float64)
    active_a = np.ones(max(n, 1), dtype=np.int64)
    nn_idx_a = np.empty(max(n, 1), dtype=np.int64)
    nn_val_a = np.empty(max(n, 1), dtype=np.float64)
    cdef i64[:, ::1] merges = merges_a
    cdef f64[::1] heights = heights_a
    cdef i64[::1] active = active_a
    cdef i64[::1] nn_idx = nn_idx_a
    cdef f64[::1] nn_val = nn_val_a
    cdef Py_ssize_t i, j, a, b, step, tmp
    cdef double best, m, da, db
    for i in range(n):
        D[i, i] = INFINITY
    for i in range(n):
        best = D[i, 0]
        a = 0
        for j in range(1, n):
            if D[i, j] < best:
                best = D[i, j]
                a = j
        nn_idx[i] = a
        nn_val[i] = best
    for step in range(n - 1):
        best = INFINITY
        a = -1
        for i in range(n):
            if active[i] and nn_val[i] < best:
                best = nn_val[i]
                a = i
        b = nn_idx[a]
        if b < a:
            tmp = a
            a = b
            b = tmp
        merges[step, 0] = a
        merges[step, 1] = b
        heights[step] = best
        # Lance-Williams for the maximum linkage: D(a+b, k) = max(Dak, Dbk).
        for j in range(n):
            da = D[a, j]
            db = D[b, j]
            m = da if da >= db else db
            if j == a:
                m = INFINITY
            D[a, j] = m
            D[j, a] = m
        for j in range(n):
            D[b, j] = INFINITY
            D[j, b] = INFINITY
        active[b] = 0
        if step == n - 2:
            break
        best = D[a, 0]
        j = 0
        for i in range(1, n):
            if D[a, i] < best:
                best = D[a, i]
                j = i
        nn_idx[a] = j
        nn_val[a] = best
        # Rows whose cached neighbour was a or b must rescan: column b left
        # the game and column a only grew, so other caches stay valid.
        for i in range(n):
            if active[i] and i != a and (nn_idx[i] == a or nn_idx[i] == b):
                best = D[i, 0]
                j = 0
                for tmp in range(1, n):
                    if D[i, tmp] < best:
                        best = D[i, tmp]
                        j = tmp
                nn_idx[i] = j
                nn_val[i] = best
    return merges_a, heights_a
