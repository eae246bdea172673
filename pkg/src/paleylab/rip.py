"""RIP constants of the frame: exact enumeration, search lower bounds,
coherence upper bound, and the indicator-vector checks connecting the RIP
to double character sums.

delta_K is computed from exact integer Seidel submatrices:
delta over a support U is max(lambda_max(S_U), -lambda_min(S_U)) / sqrt(p),
so the only float step is one small eigensolve per support.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    BudgetExceeded,
    LastColumnInSubset,
    NotSymmetric,
    TooLarge,
)
from .etf import SeidelMatrix
from .subsets import as_mask, colex_unrank, mask_elements

MAX_K = 64
DEFAULT_BUDGET = 1 << 31


@dataclass(frozen=True)
class EigenPair:
    lambda_min: float
    lambda_max: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class RipReport:
    p: int
    K: int
    mode: str  # exact | search-lower | coherence-upper
    delta_lower: float
    delta_upper: float
    witness: tuple[int, ...]
    subsets_examined: int
    elapsed: float

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "K": self.K,
            "mode": self.mode,
            "delta_lower": self.delta_lower,
            "delta_upper": self.delta_upper,
            "witness": list(self.witness),
            "subsets_examined": self.subsets_examined,
            "elapsed_s": self.elapsed,
        }

    def csv_row(self) -> str:
        return (
            f"{self.p},{self.K},{self.mode},"
            f"{self.delta_lower:.12g},{self.delta_upper:.12g}"
        )


@dataclass(frozen=True)
class SandwichReport:
    ok: bool
    value: float
    lower_margin: float
    upper_margin: float


@dataclass(frozen=True)
class TechBoundReport:
    p: int
    K: int
    delta: float
    max_ratio: float
    argmax: tuple[int, ...]
    per_size: tuple  # (size, max_abs_sum, ratio, argmax) per size
    subsets_examined: int
    violated: bool


def extreme_eigs(m, tol: float = 1e-12) -> EigenPair:
    """Extreme eigenvalues of a small symmetric matrix via cyclic Jacobi."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric("matrix must be square")
    if a.shape[0] > MAX_K:
        raise TooLarge(f"dimension {a.shape[0]} exceeds {MAX_K}")
    if not np.array_equal(a, a.T):
        raise NotSymmetric("matrix must be symmetric")
    lmin, lmax, iterations, residual = kernels.jacobi_extreme(a.astype(np.float64), tol)
    return EigenPair(lmin, lmax, iterations, residual)


def _scan_max_abs_eig(s: np.ndarray, k: int, workers: int = 1):
    """Deterministic parallel scan over all K-supports in colex order."""
    n = s.shape[0]
    total = math.comb(n, k)
    w = max(1, min(workers, total))
    bounds = [total * i // w for i in range(w + 1)]
    ranges = [(bounds[i], bounds[i + 1] - bounds[i]) for i in range(w) if bounds[i + 1] > bounds[i]]
    if len(ranges) == 1:
        results = [kernels.rip_scan_range(s, k, 0, total)]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            futs = [pool.submit(kernels.rip_scan_range, s, k, st, cnt) for st, cnt in ranges]
            results = [f.result() for f in futs]
    best, sup, _ = results[0]
    for val, s2, _ in results[1:]:
        if val > best or (val == best and s2 < sup):
            best, sup = val, s2
    return best, sup, total


def rip_exact(s: SeidelMatrix, K: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> RipReport:
    """Exact delta_K by enumerating every size-K column support.

    Ties between witnesses are broken toward the lexicographically smallest
    support, so the report is identical for any worker count.
    """
    if not 1 <= K <= MAX_K:
        raise TooLarge(f"K={K} outside [1, {MAX_K}]")
    total = math.comb(s.dim, K)
    if total > budget:
        raise BudgetExceeded(f"C({s.dim},{K}) = {total} exceeds budget {budget}")
    t0 = time.perf_counter()
    best, sup, examined = _scan_max_abs_eig(s.data, K, workers)
    delta = best / math.sqrt(s.p)
    return RipReport(
        p=s.p,
        K=K,
        mode="exact",
        delta_lower=delta,
        delta_upper=delta,
        witness=tuple(sup),
        subsets_examined=examined,
        elapsed=time.perf_counter() - t0,
    )


def rip_upper_coherence(p: int, K: int) -> float:
    """Gershgorin bound (K-1)/sqrt(p) from coherence 1/sqrt(p)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return (K - 1) / math.sqrt(p)


def _support_value(s: np.ndarray, sup: tuple[int, ...]) -> float:
    sub = s[np.ix_(sup, sup)].astype(np.float64)
    lmin, lmax, _, _ = kernels.jacobi_extreme(sub)
    return max(lmax, -lmin)


def rip_lower_search(
    s: SeidelMatrix,
    K: int,
    iters: int = 200,
    seed: int = 0,
    restarts: int = 4,
) -> RipReport:
    """Lower-bound delta_K by greedy support growth plus hill-climbing swaps.

    Restart 0 grows from the pair with the largest |row-sum| score; the other
    restarts grow from seeded random pairs.  The result is reproducible for a
    fixed (seed, iters) and independent of worker count.
    """
    if not 1 <= K <= MAX_K:
        raise TooLarge(f"K={K} outside [1, {MAX_K}]")
    t0 = time.perf_counter()
    mat = s.data
    n = s.dim
    sqrtp = math.sqrt(s.p)
    examined = 0

    def grow(start: tuple[int, int]) -> list[int]:
        sup = list(start[:K])
        while len(sup) < K:
            best_v, best_val = None, -1.0
            for v in range(n):
                if v in sup:
                    continue
                val = _support_value(mat, tuple(sorted(sup + [v])))
                if val > best_val:
                    best_v, best_val = v, val
            sup.append(best_v)
        return sorted(sup)

    rowsums = mat.astype(np.int64).sum(axis=1)
    pair_score = lambda i, j: abs(int(rowsums[i]) + int(rowsums[j]))
    best_pair = max(
        ((i, j) for i in range(n - 1) for j in range(i + 1, n)),
        key=lambda ij: (pair_score(*ij), (-ij[0], -ij[1])),
    )

    best_val = -1.0
    best_sup: tuple[int, ...] = ()
    for r in range(restarts):
        rng = random.Random(seed * 1000003 + r)
        if r == 0:
            start = best_pair
        else:
            start = tuple(rng.sample(range(n), 2))
        if K == 1:
            sup = [min(start)]
        else:
            sup = grow(start)
        cur = _support_value(mat, tuple(sup))
        examined += 1
        for _ in range(iters):
            out_el = rng.choice(sup)
            in_el = rng.choice([v for v in range(n) if v not in sup])
            cand = sorted(v for v in sup if v != out_el) + [in_el]
            cand.sort()
            val = _support_value(mat, tuple(cand))
            examined += 1
            if val > cur:
                sup, cur = cand, val
        if cur > best_val or (cur == best_val and tuple(sup) < best_sup):
            best_val, best_sup = cur, tuple(sup)

    return RipReport(
        p=s.p,
        K=K,
        mode="search-lower",
        delta_lower=best_val / sqrtp if K > 1 else 0.0,
        delta_upper=rip_upper_coherence(s.p, K),
        witness=best_sup,
        subsets_examined=examined,
        elapsed=time.perf_counter() - t0,
    )


def rayleigh_indicator(s: SeidelMatrix, U) -> float:
    """Indicator quadratic form |U| + (1/sqrt(p)) * sum_{u,v in U} chi(u-v).

    U must be a subset of the field elements; the border column is outside
    the formula's scope and is rejected.
    """
    mask = as_mask(s.dim, U)
    if (mask >> s.p) & 1:
        raise LastColumnInSubset("the border column is not a field element")
    elems = mask_elements(mask)
    if not elems:
        raise ValueError("U must be nonempty")
    idx = np.array(elems)
    total = int(s.data[np.ix_(idx, idx)].astype(np.int64).sum())
    return len(elems) + total / math.sqrt(s.p)


def check_rip_sandwich(s: SeidelMatrix, U, delta: float) -> SandwichReport:
    """Check (1-delta)|U| <= indicator form <= (1+delta)|U|, with margins."""
    mask = as_mask(s.dim, U)
    size = mask.bit_count()
    if size < 1:
        raise ValueError("U must be nonempty")
    q = rayleigh_indicator(s, mask)
    lower_margin = q - (1.0 - delta) * size
    upper_margin = (1.0 + delta) * size - q
    return SandwichReport(
        ok=lower_margin >= 0.0 and upper_margin >= 0.0,
        value=q,
        lower_margin=lower_margin,
        upper_margin=upper_margin,
    )


def check_tech_bound(
    s: SeidelMatrix,
    K: int,
    delta: float,
    budget: int = DEFAULT_BUDGET,
) -> TechBoundReport:
    """Verify |sum_{u,v in U} chi(u-v)| <= delta * sqrt(p) * |U| for |U| <= K.

    Enumerates every subset of the field elements up to size K and reports
    the maximal ratio and its argmax.
    """
    total = sum(math.comb(s.p, j) for j in range(1, K + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} subsets exceed budget {budget}")
    block = np.ascontiguousarray(s.data[: s.p, : s.p])
    sqrtp = math.sqrt(s.p)
    per_size = []
    best_ratio = -1.0
    best_sup: tuple[int, ...] = ()
    for j in range(1, K + 1):
        cnt = math.comb(s.p, j)
        max_abs, sup, _ = kernels.entry_sum_scan_range(block, j, 0, cnt)
        ratio = max_abs / (delta * sqrtp * j) if delta > 0 else math.inf
        per_size.append((j, int(max_abs), ratio, tuple(sup)))
        if ratio > best_ratio:
            best_ratio, best_sup = ratio, tuple(sup)
    return TechBoundReport(
        p=s.p,
        K=K,
        delta=delta,
        max_ratio=best_ratio,
        argmax=best_sup,
        per_size=tuple(per_size),
        subsets_examined=total,
        violated=best_ratio > 1.0,
    )
