"""Pure-Python (numpy) kernel backend.

Mirrors the compiled extension in `_ckernels.pyx`; selected at import time by
`paleylab.kernels` when the extension is unavailable or explicitly disabled.
All hot loops are vectorized over batches so the fallback stays usable at
desk scale.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BudgetExceeded
from .subsets import colex_successor, colex_supports, colex_unrank

BACKEND_NAME = "python"

_CHUNK = 1 << 15


def jacobi_extreme(a: np.ndarray, tol: float = 1e-12) -> tuple[float, float, int, float]:
    """Cyclic Jacobi eigensolver; returns (lmin, lmax, rotations, residual).

    The residual is max over the two extreme eigenpairs of ||A v - lambda v||.
    """
    a0 = np.asarray(a, dtype=np.float64)
    n = a0.shape[0]
    A = a0.copy()
    V = np.eye(n)
    rotations = 0
    for _ in range(100):
        off = 0.0
        for i in range(n - 1):
            row = np.abs(A[i, i + 1 :])
            if row.size:
                off = max(off, float(row.max()))
        if off <= tol:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                apq = A[i, j]
                if abs(apq) <= tol * 1e-2:
                    continue
                app, aqq = A[i, i], A[j, j]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rotations += 1
                ai = A[i, :].copy()
                aj = A[j, :].copy()
                A[i, :] = c * ai - s * aj
                A[j, :] = s * ai + c * aj
                ai = A[:, i].copy()
                aj = A[:, j].copy()
                A[:, i] = c * ai - s * aj
                A[:, j] = s * ai + c * aj
                A[i, i] = app - t * apq
                A[j, j] = aqq + t * apq
                A[i, j] = A[j, i] = 0.0
                vi = V[:, i].copy()
                vj = V[:, j].copy()
                V[:, i] = c * vi - s * vj
                V[:, j] = s * vi + c * vj
    diag = np.diag(A)
    kmin = int(np.argmin(diag))
    kmax = int(np.argmax(diag))
    residual = 0.0
    for k in (kmin, kmax):
        v = V[:, k]
        residual = max(residual, float(np.linalg.norm(a0 @ v - diag[k] * v)))
    return float(diag[kmin]), float(diag[kmax]), rotations, residual


def _batch_max_abs_eig(mats: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Spectral radius of each symmetric matrix in a (B,k,k) batch.

    Batched cyclic Jacobi: every matrix sees the identical rotation schedule,
    so results do not depend on how the batch was split.
    """
    A = mats.astype(np.float64, copy=True)
    B, k, _ = A.shape
    if k == 1:
        return np.abs(A[:, 0, 0])
    iu, ju = np.triu_indices(k, 1)
    for _ in range(60):
        if np.abs(A[:, iu, ju]).max() <= tol:
            break
        for i in range(k - 1):
            for j in range(i + 1, k):
                apq = A[:, i, j]
                active = np.abs(apq) > 1e-14
                if not active.any():
                    continue
                app = A[:, i, i]
                aqq = A[:, j, j]
                safe = np.where(active, apq, 1.0)
                tau = (aqq - app) / (2.0 * safe)
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                t = sgn / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ai = A[:, i, :].copy()
                aj = A[:, j, :].copy()
                A[:, i, :] = c[:, None] * ai - s[:, None] * aj
                A[:, j, :] = s[:, None] * ai + c[:, None] * aj
                ai = A[:, :, i].copy()
                aj = A[:, :, j].copy()
                A[:, :, i] = c[:, None] * ai - s[:, None] * aj
                A[:, :, j] = s[:, None] * ai + c[:, None] * aj
                A[:, i, i] = app - t * apq
                A[:, j, j] = aqq + t * apq
                A[:, i, j] = 0.0
                A[:, j, i] = 0.0
    d = np.einsum("bii->bi", A)
    return np.abs(d).max(axis=1)


def _range_supports(n: int, k: int, start: int, count: int) -> np.ndarray:
    total = math.comb(n, k)
    if start == 0 and count == total:
        return colex_supports(n, k)
    cur = list(colex_unrank(start, k))
    out = np.empty((count, k), dtype=np.int64)
    for r in range(count):
        out[r] = cur
        if r + 1 < count:
            colex_successor(cur, n)
    return out


def _lex_min_row(rows: np.ndarray) -> np.ndarray:
    order = np.lexsort(tuple(rows[:, c] for c in range(rows.shape[1] - 1, -1, -1)))
    return rows[order[0]]


def rip_scan_range(s: np.ndarray, k: int, start: int, count: int):
    """Max spectral radius over a colex rank range of K-column supports.

    Returns (best_value, support_tuple, examined); ties resolved toward the
    lexicographically smallest support.
    """
    smat = np.asarray(s, dtype=np.float64)
    best = -1.0
    best_sup: np.ndarray | None = None
    done = 0
    while done < count:
        b = min(_CHUNK, count - done)
        sups = _range_supports(s.shape[0], k, start + done, b)
        mats = smat[sups[:, :, None], sups[:, None, :]]
        vals = _batch_max_abs_eig(mats)
        m = float(vals.max())
        if m > best or best_sup is None:
            best = m
            best_sup = _lex_min_row(sups[vals == m])
        elif m == best:
            cand = _lex_min_row(sups[vals == m])
            if tuple(cand) < tuple(best_sup):
                best_sup = cand
        done += b
    return best, tuple(int(x) for x in best_sup), count


def entry_sum_scan_range(block: np.ndarray, size: int, start: int, count: int):
    """Max |sum of entries of block[U, U]| over a colex range of supports."""
    blk = np.asarray(block, dtype=np.int64)
    best = -1
    best_sup: np.ndarray | None = None
    done = 0
    while done < count:
        b = min(_CHUNK, count - done)
        sups = _range_supports(block.shape[0], size, start + done, b)
        vals = np.abs(blk[sups[:, :, None], sups[:, None, :]].sum(axis=(1, 2)))
        m = int(vals.max())
        if m > best or best_sup is None:
            best = m
            best_sup = _lex_min_row(sups[vals == m])
        elif m == best:
            cand = _lex_min_row(sups[vals == m])
            if tuple(cand) < tuple(best_sup):
                best_sup = cand
        done += b
    return best, tuple(int(x) for x in best_sup), count


def max_clique(adj: np.ndarray, budget: int):
    """Exact maximum clique via branch and bound with a greedy coloring bound.

    adj is a symmetric 0/1 matrix with zero diagonal.  Returns
    (size, members, nodes_explored).
    """
    n = adj.shape[0]
    if n == 0:
        return 0, (), 0
    masks = []
    for v in range(n):
        m = 0
        for u in np.nonzero(adj[v])[0]:
            m |= 1 << int(u)
        masks.append(m)
    # static order: degree descending, index ascending as tie-break
    order = sorted(range(n), key=lambda v: (-masks[v].bit_count(), v))
    best_size = 0
    best_set: tuple[int, ...] = ()
    nodes = 0

    def bits(m):
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def expand(r: list[int], cand: int):
        nonlocal best_size, best_set, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"clique node budget {budget} exhausted")
        if not cand:
            if len(r) > best_size:
                best_size = len(r)
                best_set = tuple(sorted(r))
            return
        # greedy coloring in static order; color number bounds the clique size
        colors = {}
        classes: list[int] = []
        for v in order:
            if not (cand >> v) & 1:
                continue
            for ci, cmask in enumerate(classes):
                if not (masks[v] & cmask):
                    classes[ci] |= 1 << v
                    colors[v] = ci + 1
                    break
            else:
                classes.append(1 << v)
                colors[v] = len(classes)
        for v in sorted(colors, key=lambda u: (-colors[u], u)):
            if len(r) + colors[v] <= best_size:
                return
            r.append(v)
            expand(r, cand & masks[v])
            r.pop()
            cand &= ~(1 << v)

    expand([], (1 << n) - 1)
    return best_size, best_set, nodes


def pair_sums_cross(chi: np.ndarray, s_ind: np.ndarray, t_ind: np.ndarray):
    """Character sums and intersection sizes for every (S_i, T_j) pair.

    Returns (sums, inters) of shape (ns, nt); caller is responsible for
    keeping ns*nt at a sane size.
    """
    p = chi.shape[0]
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    diff = chi.astype(np.int64)[idx]
    f = s_ind.astype(np.int64) @ diff
    sums = f @ t_ind.astype(np.int64).T
    inters = s_ind.astype(np.int64) @ t_ind.astype(np.int64).T
    return sums, inters


def pair_sums_zip(chi: np.ndarray, s_ind: np.ndarray, t_ind: np.ndarray):
    """Character sums and intersection sizes for aligned pairs (S_i, T_i)."""
    p = chi.shape[0]
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    diff = chi.astype(np.int64)[idx]
    f = s_ind.astype(np.int64) @ diff
    sums = (f * t_ind).sum(axis=1)
    inters = (s_ind.astype(np.int64) * t_ind).sum(axis=1)
    return sums, inters
