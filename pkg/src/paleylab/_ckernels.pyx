# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend (Cython twin of `_kernels_py`).

Hot loops only: small-matrix Jacobi eigensolves, colex support scans,
clique branch and bound, and batched double character sums.  Signatures and
tie-breaking match the numpy fallback exactly.
"""

from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

import numpy as np

from .errors import BudgetExceeded

BACKEND_NAME = "cython"

DEF MAXDIM = 64


cdef inline double _jacobi_max_abs(double* a, int n, double tol) noexcept nogil:
    """Spectral radius of symmetric n x n `a` (destroyed) via cyclic Jacobi."""
    cdef int i, j, r, sweep
    cdef double apq, app, aqq, tau, t, c, s, off, ai, aj, best
    if n == 1:
        return fabs(a[0])
    for sweep in range(60):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                if fabs(a[i * n + j]) > off:
                    off = fabs(a[i * n + j])
        if off <= tol:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                apq = a[i * n + j]
                if fabs(apq) <= 1e-14:
                    continue
                app = a[i * n + i]
                aqq = a[j * n + j]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for r in range(n):
                    ai = a[i * n + r]
                    aj = a[j * n + r]
                    a[i * n + r] = c * ai - s * aj
                    a[j * n + r] = s * ai + c * aj
                for r in range(n):
                    ai = a[r * n + i]
                    aj = a[r * n + j]
                    a[r * n + i] = c * ai - s * aj
                    a[r * n + j] = s * ai + c * aj
                a[i * n + i] = app - t * apq
                a[j * n + j] = aqq + t * apq
                a[i * n + j] = 0.0
                a[j * n + i] = 0.0
    best = 0.0
    for i in range(n):
        if fabs(a[i * n + i]) > best:
            best = fabs(a[i * n + i])
    return best


def jacobi_extreme(a, double tol=1e-12):
    """Cyclic Jacobi with eigenvector tracking; (lmin, lmax, rotations, residual)."""
    a0 = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] amv = a0
    cdef int n = a0.shape[0]
    cdef int i, j, r, sweep, kmin, kmax
    cdef long rotations = 0
    cdef double apq, app, aqq, tau, t, c, s, off, ai, aj
    A = a0.copy()
    V = np.eye(n)
    cdef double[:, ::1] Am = A
    cdef double[:, ::1] Vm = V
    for sweep in range(100):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                if fabs(Am[i, j]) > off:
                    off = fabs(Am[i, j])
        if off <= tol:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                apq = Am[i, j]
                if fabs(apq) <= tol * 1e-2:
                    continue
                app = Am[i, i]
                aqq = Am[j, j]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                rotations += 1
                for r in range(n):
                    ai = Am[i, r]
                    aj = Am[j, r]
                    Am[i, r] = c * ai - s * aj
                    Am[j, r] = s * ai + c * aj
                for r in range(n):
                    ai = Am[r, i]
                    aj = Am[r, j]
                    Am[r, i] = c * ai - s * aj
                    Am[r, j] = s * ai + c * aj
                Am[i, i] = app - t * apq
                Am[j, j] = aqq + t * apq
                Am[i, j] = 0.0
                Am[j, i] = 0.0
                for r in range(n):
                    ai = Vm[r, i]
                    aj = Vm[r, j]
                    Vm[r, i] = c * ai - s * aj
                    Vm[r, j] = s * ai + c * aj
    diag = np.diag(A)
    kmin = int(np.argmin(diag))
    kmax = int(np.argmax(diag))
    residual = 0.0
    for k in (kmin, kmax):
        v = V[:, k]
        residual = max(residual, float(np.linalg.norm(a0 @ v - diag[k] * v)))
    return float(diag[kmin]), float(diag[kmax]), int(rotations), residual


cdef inline bint _colex_next(long long* sup, int k, int n) noexcept nogil:
    cdef int j, i
    cdef long long nxt
    for j in range(k):
        nxt = sup[j + 1] if j + 1 < k else n
        if sup[j] + 1 < nxt:
            sup[j] += 1
            for i in range(j):
                sup[i] = i
            return True
    return False


def _colex_first(long long rank, int k):
    """Unrank `rank` in colex order (python-level helper, boundary only)."""
    from .subsets import colex_unrank
    return colex_unrank(int(rank), k)


def rip_scan_range(s, int k, long long start, long long count):
    """Max spectral radius over a colex rank range of K-column supports."""
    smat = np.ascontiguousarray(s, dtype=np.int8)
    cdef const signed char[:, ::1] sm = smat
    cdef int n = smat.shape[0]
    cdef long long sup[MAXDIM]
    cdef long long best_sup[MAXDIM]
    cdef double buf[MAXDIM * MAXDIM]
    cdef long long done = 0
    cdef double best = -1.0
    cdef double val
    cdef int i, j
    cdef bint better
    first = _colex_first(start, k)
    for i in range(k):
        sup[i] = first[i]
        best_sup[i] = first[i]
    with nogil:
        while done < count:
            for i in range(k):
                for j in range(k):
                    buf[i * k + j] = sm[sup[i], sup[j]]
            val = _jacobi_max_abs(buf, k, 1e-12)
            if val > best:
                best = val
                for i in range(k):
                    best_sup[i] = sup[i]
            elif val == best:
                better = False
                for i in range(k):
                    if sup[i] != best_sup[i]:
                        better = sup[i] < best_sup[i]
                        break
                if better:
                    for i in range(k):
                        best_sup[i] = sup[i]
            done += 1
            if done < count:
                _colex_next(sup, k, n)
    return float(best), tuple(int(best_sup[i]) for i in range(k)), int(count)


def entry_sum_scan_range(block, int size, long long start, long long count):
    """Max |sum of entries of block[U, U]| over a colex range of supports."""
    blk = np.ascontiguousarray(block, dtype=np.int8)
    cdef const signed char[:, ::1] bm = blk
    cdef int n = blk.shape[0]
    cdef long long sup[MAXDIM]
    cdef long long best_sup[MAXDIM]
    cdef long long done = 0, best = -1, acc
    cdef int i, j
    cdef bint better
    first = _colex_first(start, size)
    for i in range(size):
        sup[i] = first[i]
        best_sup[i] = first[i]
    with nogil:
        while done < count:
            acc = 0
            for i in range(size):
                for j in range(size):
                    acc += bm[sup[i], sup[j]]
            if acc < 0:
                acc = -acc
            if acc > best:
                best = acc
                for i in range(size):
                    best_sup[i] = sup[i]
            elif acc == best:
                better = False
                for i in range(size):
                    if sup[i] != best_sup[i]:
                        better = sup[i] < best_sup[i]
                        break
                if better:
                    for i in range(size):
                        best_sup[i] = sup[i]
            done += 1
            if done < count:
                _colex_next(sup, size, n)
    return int(best), tuple(int(best_sup[i]) for i in range(size)), int(count)


# --- maximum clique (Tomita-style branch and bound, bitset words) ---

cdef struct CliqueCtx:
    int n
    int nw
    unsigned long long* adj      # n * nw words
    int* order                   # static vertex order
    int* r_stack                 # current clique, depth-indexed
    unsigned long long* cand_ws  # per-level candidate masks
    int* color_ws                # per-level (color, vertex) pairs
    unsigned long long* classes  # shared coloring scratch
    int best_size
    int* best_set
    long long nodes
    long long budget


cdef inline bint _test_bit(unsigned long long* w, int v) noexcept nogil:
    return (w[v >> 6] >> (v & 63)) & 1


cdef inline void _clear_bit(unsigned long long* w, int v) noexcept nogil:
    w[v >> 6] &= ~(1ULL << (v & 63))


cdef int _expand(CliqueCtx* cx, int depth) noexcept nogil:
    """Returns 0 normally, 1 when the node budget is exhausted."""
    cdef int nw = cx.nw
    cdef unsigned long long* cand = cx.cand_ws + depth * nw
    cdef unsigned long long* child = cx.cand_ws + (depth + 1) * nw
    cdef int* pairs = cx.color_ws + depth * 2 * cx.n
    cdef int i, j, v, w, ci, ncls, npairs, color, tmpc, tmpv
    cdef bint empty, fits
    cx.nodes += 1
    if cx.nodes > cx.budget:
        return 1
    empty = True
    for i in range(nw):
        if cand[i]:
            empty = False
            break
    if empty:
        if depth > cx.best_size:
            cx.best_size = depth
            for i in range(depth):
                cx.best_set[i] = cx.r_stack[i]
        return 0
    # greedy coloring in static order; classes live in shared scratch
    ncls = 0
    npairs = 0
    for i in range(cx.n):
        v = cx.order[i]
        if not _test_bit(cand, v):
            continue
        color = -1
        for ci in range(ncls):
            fits = True
            for j in range(nw):
                if cx.classes[ci * nw + j] & cx.adj[v * nw + j]:
                    fits = False
                    break
            if fits:
                color = ci
                break
        if color < 0:
            color = ncls
            memset(cx.classes + ncls * nw, 0, nw * sizeof(unsigned long long))
            ncls += 1
        cx.classes[color * nw + (v >> 6)] |= 1ULL << (v & 63)
        pairs[2 * npairs] = color + 1
        pairs[2 * npairs + 1] = v
        npairs += 1
    # sort pairs by (color asc, vertex desc) -- insertion sort, small n
    for i in range(1, npairs):
        tmpc = pairs[2 * i]
        tmpv = pairs[2 * i + 1]
        j = i - 1
        while j >= 0 and (pairs[2 * j] > tmpc or (pairs[2 * j] == tmpc and pairs[2 * j + 1] < tmpv)):
            pairs[2 * (j + 1)] = pairs[2 * j]
            pairs[2 * (j + 1) + 1] = pairs[2 * j + 1]
            j -= 1
        pairs[2 * (j + 1)] = tmpc
        pairs[2 * (j + 1) + 1] = tmpv
    # process in (color desc, vertex asc) order
    for i in range(npairs - 1, -1, -1):
        color = pairs[2 * i]
        v = pairs[2 * i + 1]
        if depth + color <= cx.best_size:
            return 0
        cx.r_stack[depth] = v
        for j in range(nw):
            child[j] = cand[j] & cx.adj[v * nw + j]
        if _expand(cx, depth + 1):
            return 1
        _clear_bit(cand, v)
    return 0


def max_clique(adj, long long budget):
    """Exact maximum clique of a 0/1 adjacency matrix; (size, members, nodes)."""
    am = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef const unsigned char[:, ::1] a = am
    cdef int n = am.shape[0]
    if n == 0:
        return 0, (), 0
    cdef int nw = (n + 63) >> 6
    cdef int maxdepth = n + 2
    cdef CliqueCtx cx
    cx.n = n
    cx.nw = nw
    cx.best_size = 0
    cx.nodes = 0
    cx.budget = budget
    cx.adj = <unsigned long long*> malloc(n * nw * sizeof(unsigned long long))
    cx.order = <int*> malloc(n * sizeof(int))
    cx.r_stack = <int*> malloc(maxdepth * sizeof(int))
    cx.cand_ws = <unsigned long long*> malloc(maxdepth * nw * sizeof(unsigned long long))
    cx.color_ws = <int*> malloc(maxdepth * 2 * n * sizeof(int))
    cx.classes = <unsigned long long*> malloc(n * nw * sizeof(unsigned long long))
    cx.best_set = <int*> malloc(n * sizeof(int))
    cdef int i, j
    cdef long long deg
    try:
        memset(cx.adj, 0, n * nw * sizeof(unsigned long long))
        degs = np.asarray(am, dtype=np.int64).sum(axis=1)
        order_py = sorted(range(n), key=lambda v: (-int(degs[v]), v))
        for i in range(n):
            cx.order[i] = order_py[i]
        for i in range(n):
            for j in range(n):
                if a[i, j]:
                    cx.adj[i * nw + (j >> 6)] |= 1ULL << (j & 63)
        memset(cx.cand_ws, 0, maxdepth * nw * sizeof(unsigned long long))
        for i in range(n):
            cx.cand_ws[i >> 6] |= 1ULL << (i & 63)
        exhausted = _expand(&cx, 0)
        if exhausted:
            raise BudgetExceeded(f"clique node budget {budget} exhausted")
        members = tuple(sorted(int(cx.best_set[i]) for i in range(cx.best_size)))
        return int(cx.best_size), members, int(cx.nodes)
    finally:
        free(cx.adj)
        free(cx.order)
        free(cx.r_stack)
        free(cx.cand_ws)
        free(cx.color_ws)
        free(cx.classes)
        free(cx.best_set)


def pair_sums_cross(chi, s_ind, t_ind):
    """Character sums / intersections for every (S_i, T_j); (ns,nt) arrays."""
    chia = np.ascontiguousarray(chi, dtype=np.int8)
    sa = np.ascontiguousarray(s_ind, dtype=np.uint8)
    ta = np.ascontiguousarray(t_ind, dtype=np.uint8)
    cdef const signed char[::1] ch = chia
    cdef const unsigned char[:, ::1] si = sa
    cdef const unsigned char[:, ::1] ti = ta
    cdef int p = chia.shape[0]
    cdef Py_ssize_t ns = sa.shape[0], nt = ta.shape[0]
    sums = np.zeros((ns, nt), dtype=np.int64)
    inters = np.zeros((ns, nt), dtype=np.int64)
    cdef long long[:, ::1] sv = sums
    cdef long long[:, ::1] iv = inters
    cdef long long* f = <long long*> malloc(p * sizeof(long long))
    cdef Py_ssize_t i, j
    cdef int s, t, d
    cdef long long acc, icc
    try:
        with nogil:
            for i in range(ns):
                for t in range(p):
                    acc = 0
                    for s in range(p):
                        if si[i, s]:
                            d = s - t
                            if d < 0:
                                d += p
                            acc += ch[d]
                    f[t] = acc
                for j in range(nt):
                    acc = 0
                    icc = 0
                    for t in range(p):
                        if ti[j, t]:
                            acc += f[t]
                            if si[i, t]:
                                icc += 1
                    sv[i, j] = acc
                    iv[i, j] = icc
    finally:
        free(f)
    return sums, inters


def pair_sums_zip(chi, s_ind, t_ind):
    """Character sums / intersections for aligned pairs (S_i, T_i)."""
    chia = np.ascontiguousarray(chi, dtype=np.int8)
    sa = np.ascontiguousarray(s_ind, dtype=np.uint8)
    ta = np.ascontiguousarray(t_ind, dtype=np.uint8)
    cdef const signed char[::1] ch = chia
    cdef const unsigned char[:, ::1] si = sa
    cdef const unsigned char[:, ::1] ti = ta
    cdef int p = chia.shape[0]
    cdef Py_ssize_t n = sa.shape[0]
    sums = np.zeros(n, dtype=np.int64)
    inters = np.zeros(n, dtype=np.int64)
    cdef long long[::1] sv = sums
    cdef long long[::1] iv = inters
    cdef Py_ssize_t i
    cdef int s, t, d
    cdef long long acc, icc
    with nogil:
        for i in range(n):
            acc = 0
            icc = 0
            for s in range(p):
                if si[i, s]:
                    for t in range(p):
                        if ti[i, t]:
                            d = s - t
                            if d < 0:
                                d += p
                            acc += ch[d]
            for t in range(p):
                if si[i, t] and ti[i, t]:
                    icc += 1
            sv[i] = acc
            iv[i] = icc
    return sums, inters
