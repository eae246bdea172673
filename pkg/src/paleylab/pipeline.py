"""End-to-end experiments: the RIP -> character-sum -> extractor implication
chain at desk scale, the RIP-constant scaling study, and parameter selection.

tau is always derived from the measured delta UPPER bound, so every
downstream claim stays sound when an exact RIP constant is unavailable.
The conjectured scaling bound uses base-2 logarithms throughout (any base
change is absorbed by the fitted constant).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .charsum import (
    local_search_pairs,
    masks_of_size,
    min_qualifying_size,
    property_p_exhaustive,
    property_p_search,
)
from .errors import BadAlpha, BudgetExceeded, TooFewRows
from .etf import seidel
from .extractor import extractor_error_bound
from .field import FieldCtx, new_field
from .kernels import pair_sums_cross, pair_sums_zip
from .rip import rip_exact, rip_lower_search
from .subsets import indicator_matrix, mask_elements

MAX_EXACT_K = 64


@dataclass(frozen=True)
class Budgets:
    rip_budget: int = 1 << 31
    pair_budget: int = 1 << 31
    samples: int = 10**5
    search_iters: int = 2000
    node_budget: int = 10**8


@dataclass(frozen=True)
class PipelineParams:
    p: int
    epsilon: float
    gamma: float
    K: int
    tau: float
    theta: float | None = None


@dataclass(frozen=True)
class SweepSummary:
    mode: str  # exhaustive | sampled
    pairs_checked: int
    violations: int
    worst_pair_s: tuple[int, ...]
    worst_pair_t: tuple[int, ...]
    worst_sum: int
    worst_ratio: float
    min_final_slack: float


@dataclass(frozen=True)
class ImplicationReport:
    params: PipelineParams
    delta_lower: float
    delta_upper: float
    rip_mode: str
    clamped: bool
    degenerate: bool
    alpha: float
    beta_in_window: float
    beta_above_window: float
    window: tuple[int, int]
    sweep: SweepSummary | None
    property_mode: str | None
    worst_property_ratio: float | None
    extractor_bound: float | None
    passed: bool

    def to_json_dict(self) -> dict:
        d = {
            "p": self.params.p,
            "epsilon": self.params.epsilon,
            "gamma": self.params.gamma,
            "K": self.params.K,
            "tau": self.params.tau,
            "delta_lower": self.delta_lower,
            "delta_upper": self.delta_upper,
            "rip_mode": self.rip_mode,
            "clamped": self.clamped,
            "degenerate": self.degenerate,
            "alpha": self.alpha,
            "beta_piecewise": {
                "in_window": self.beta_in_window,
                "above_window": self.beta_above_window,
            },
            "window_sizes": list(self.window),
            "pass": self.passed,
        }
        if self.sweep is not None:
            d["charsum_sweep"] = {
                "mode": self.sweep.mode,
                "pairs_checked": self.sweep.pairs_checked,
                "violations": self.sweep.violations,
                "worst_S": list(self.sweep.worst_pair_s),
                "worst_T": list(self.sweep.worst_pair_t),
                "worst_sum": self.sweep.worst_sum,
                "worst_ratio": self.sweep.worst_ratio,
                "min_final_slack": self.sweep.min_final_slack,
            }
        if self.extractor_bound is not None:
            d["property_mode"] = self.property_mode
            d["worst_property_ratio"] = self.worst_property_ratio
            d["extractor_bound"] = self.extractor_bound
        return d


@dataclass(frozen=True)
class ScalingRow:
    p: int
    K: int
    mode: str
    delta_lower: float
    delta_upper: float
    conjecture_bound: float
    ratio: float

    def csv_row(self) -> str:
        return (
            f"{self.p},{self.K},{self.mode},{self.delta_lower:.12g},"
            f"{self.delta_upper:.12g},{self.conjecture_bound:.12g},{self.ratio:.12g}"
        )


def select_parameters(alpha: float) -> tuple[float, float, float]:
    """Concrete (theta, tau, gamma) for a target entropy rate alpha <= 1/2.

    theta sits just below alpha, tau = 1/2 - (3/4) theta, gamma = theta/8;
    then (3/4) theta + gamma = (7/8) theta < theta < alpha and 0 < gamma < tau.
    """
    if not 0.0 < alpha <= 0.5:
        raise BadAlpha(f"alpha={alpha} outside (0, 1/2]; larger rates fall to the "
                       "unconditional character-sum regime")
    theta = alpha * (1.0 - 1e-3)
    tau = 0.5 - 0.75 * theta
    gamma = theta / 8.0
    assert 0.75 * theta + gamma < theta < alpha
    assert 0.0 < gamma < tau
    return theta, tau, gamma


def _snap_ceil(x: float) -> int:
    return math.ceil(x - 1e-9)


def _snap_floor(x: float) -> int:
    return math.floor(x + 1e-9)


def _measure_delta(ctx: FieldCtx, K_requested: int, budgets: Budgets, seed: int, workers: int):
    """Best-available delta_K bracket, clamping K rather than extrapolating."""
    s = seidel(ctx)
    k_max = 0
    for k in range(1, min(MAX_EXACT_K, s.dim) + 1):
        if math.comb(s.dim, k) <= budgets.rip_budget:
            k_max = k
        else:
            break
    K = min(K_requested, k_max) if k_max >= 2 else K_requested
    clamped = K < K_requested
    if K < 2:
        raise BudgetExceeded(f"cannot measure any delta_K with K >= 2 at budget {budgets.rip_budget}")
    if math.comb(s.dim, K) <= budgets.rip_budget:
        rep = rip_exact(s, K, budget=budgets.rip_budget, workers=workers)
    else:
        rep = rip_lower_search(s, K, iters=budgets.search_iters, seed=seed)
    return s, K, clamped, rep


def _window_masks(p: int, smin: int, smax: int) -> list[int]:
    masks: list[int] = []
    for j in range(smin, smax + 1):
        masks.extend(masks_of_size(p, j))
    return masks


def run_implication(
    p: int,
    epsilon: float,
    gamma: float | None = None,
    budgets: Budgets = Budgets(),
    seed: int = 0,
    workers: int = 1,
) -> ImplicationReport:
    """Execute the conditional implication as a measured inequality chain.

    Measures delta_K at K = ceil(p^(1/2+eps)) (clamped to the exact-RIP
    budget), derives tau from the delta upper bound, sweeps every qualifying
    (S, T) pair in the size window through the three-link chain (sampling
    plus adversarial search when exhaustion is infeasible), and converts the
    measured worst ratio into an extractor error bound.
    """
    ctx = new_field(p, require_1mod4=True)
    K_requested = _snap_ceil(p ** (0.5 + epsilon))
    if K_requested < 2:
        raise BadAlpha(f"epsilon={epsilon} gives K={K_requested} < 2")
    s, K, clamped, rip = _measure_delta(ctx, K_requested, budgets, seed, workers)
    delta = rip.delta_upper
    tau = -math.log(delta) / math.log(p)
    if gamma is None:
        gamma = tau / 2.0
    params = PipelineParams(p=p, epsilon=epsilon, gamma=gamma, K=K, tau=tau)
    alpha = 0.5 - tau + gamma
    beta_above = 0.05 * epsilon**2

    if gamma >= tau or tau <= 0:
        return ImplicationReport(
            params=params,
            delta_lower=rip.delta_lower,
            delta_upper=rip.delta_upper,
            rip_mode=rip.mode,
            clamped=clamped,
            degenerate=True,
            alpha=alpha,
            beta_in_window=gamma,
            beta_above_window=beta_above,
            window=(0, -1),
            sweep=None,
            property_mode=None,
            worst_property_ratio=None,
            extractor_bound=None,
            passed=False,
        )

    smin = _snap_floor(p ** (0.5 - tau + gamma)) + 1
    smax = min(_snap_floor(p ** (0.5 + epsilon)), K, p)
    sweep = None
    violations = 0
    if smin <= smax:
        sweep = _chain_sweep(ctx, delta, tau, gamma, smin, smax, budgets, seed)
        violations = sweep.violations

    # worst character-sum ratio at the implied alpha, then the extractor bound
    n_sets = sum(math.comb(p, j) for j in range(min_qualifying_size(p, alpha), p + 1))
    if n_sets * n_sets <= budgets.pair_budget:
        prop = property_p_exhaustive(ctx, alpha, budget=budgets.pair_budget)
    else:
        prop = property_p_search(
            ctx, alpha, sizes=[min_qualifying_size(p, alpha)],
            iters=budgets.search_iters, seed=seed,
        )
    bound = extractor_error_bound(ctx, prop)

    return ImplicationReport(
        params=params,
        delta_lower=rip.delta_lower,
        delta_upper=rip.delta_upper,
        rip_mode=rip.mode,
        clamped=clamped,
        degenerate=False,
        alpha=alpha,
        beta_in_window=gamma,
        beta_above_window=beta_above,
        window=(smin, smax),
        sweep=sweep,
        property_mode=prop.search_mode,
        worst_property_ratio=prop.worst_ratio,
        extractor_bound=bound,
        passed=violations == 0,
    )


def _chain_quantities(p, delta, gamma, sums, inters, a, b):
    """Vectorized three-link chain; returns (ok, final_slack, lhs, ab)."""
    sqrtp = math.sqrt(p)
    lhs = np.abs(sums).astype(np.float64)
    union2 = 2.0 * (a + b - inters)
    b1 = delta * sqrtp * union2
    b2 = 2.0 * delta * sqrtp * (a + b)
    b3 = 4.0 * p ** (-gamma) * a * b
    ok = (lhs <= b1 + 1e-9) & (b1 <= b2 + 1e-9) & (b2 <= b3 + 1e-9)
    return ok, b3 - lhs, lhs, a * b


def _chain_sweep(ctx, delta, tau, gamma, smin, smax, budgets: Budgets, seed: int) -> SweepSummary:
    p = ctx.p
    n_sets = sum(math.comb(p, j) for j in range(smin, smax + 1))
    exhaustive = n_sets * n_sets <= budgets.pair_budget
    worst = None  # (slack, ratio_key, s_mask, t_mask, sum)
    violations = 0
    checked = 0

    def consider(sums, inters, a, b, s_masks, t_masks, cross: bool):
        nonlocal worst, violations, checked
        ok, slack, lhs, ab = _chain_quantities(p, delta, gamma, sums, inters, a, b)
        checked += ok.size
        violations += int(ok.size - int(ok.sum()))
        flat = int(np.argmin(slack))
        if cross:
            i, j = divmod(flat, sums.shape[1])
            cand = (float(slack.flat[flat]), s_masks[i], t_masks[j], int(sums[i, j]),
                    float(lhs.flat[flat] / ab.flat[flat]))
        else:
            i = j = flat
            cand = (float(slack[flat]), s_masks[i], t_masks[j], int(sums[flat]),
                    float(lhs[flat] / ab[flat]))
        if worst is None or cand[0] < worst[0]:
            worst = cand

    if exhaustive:
        masks = _window_masks(p, smin, smax)
        ind = indicator_matrix(masks, p)
        sizes = ind.sum(axis=1).astype(np.float64)
        chunk = max(1, (1 << 22) // max(1, len(masks)))
        for lo in range(0, len(masks), chunk):
            s_ind = ind[lo : lo + chunk]
            sums, inters = pair_sums_cross(ctx.chi_table, s_ind, ind)
            consider(sums, inters, sizes[lo : lo + chunk, None], sizes[None, :],
                     masks[lo : lo + chunk], masks, cross=True)
        mode = "exhaustive"
    else:
        rng = random.Random(seed * 1000003 + 99)
        s_masks, t_masks = [], []
        for _ in range(budgets.samples):
            js = rng.randint(smin, smax)
            jt = rng.randint(smin, smax)
            s_masks.append(sum(1 << x for x in rng.sample(range(p), js)))
            t_masks.append(sum(1 << x for x in rng.sample(range(p), jt)))
        # adversarial: push the ratio up inside the window, then check those pairs
        for n in {smin, smax}:
            num, den, sm, tm, _ = local_search_pairs(
                ctx, n, n, budgets.search_iters, seed, add_intersection=False
            )
            s_masks.append(sm)
            t_masks.append(tm)
        s_ind = indicator_matrix(s_masks, p)
        t_ind = indicator_matrix(t_masks, p)
        sums, inters = pair_sums_zip(ctx.chi_table, s_ind, t_ind)
        consider(sums, inters, s_ind.sum(axis=1).astype(np.float64),
                 t_ind.sum(axis=1).astype(np.float64), s_masks, t_masks, cross=False)
        mode = "sampled"

    return SweepSummary(
        mode=mode,
        pairs_checked=checked,
        violations=violations,
        worst_pair_s=mask_elements(worst[1]),
        worst_pair_t=mask_elements(worst[2]),
        worst_sum=worst[3],
        worst_ratio=worst[4],
        min_final_slack=worst[0],
    )


def run_scaling_study(
    primes: list[int],
    K_max: int,
    budgets: Budgets = Budgets(),
    seed: int = 0,
    workers: int = 1,
) -> list[ScalingRow]:
    """delta_K brackets against the conjectured sqrt(K/p)*log2(K)*log2(p) curve."""
    rows = []
    for p in sorted(primes):
        ctx = new_field(p, require_1mod4=True)
        s = seidel(ctx)
        for K in range(1, K_max + 1):
            try:
                rep = rip_exact(s, K, budget=budgets.rip_budget, workers=workers)
            except BudgetExceeded:
                rep = rip_lower_search(s, K, iters=budgets.search_iters, seed=seed)
            bound = math.sqrt(K / p) * math.log2(K) * math.log2(p)
            ratio = rep.delta_lower / bound if K >= 2 else 0.0
            rows.append(
                ScalingRow(
                    p=p,
                    K=K,
                    mode=rep.mode,
                    delta_lower=rep.delta_lower,
                    delta_upper=rep.delta_upper,
                    conjecture_bound=bound,
                    ratio=ratio,
                )
            )
    return rows


def scaling_csv(rows: list[ScalingRow], provenance: str | None = None) -> str:
    lines = []
    if provenance:
        lines.append(f"# {provenance}")
    lines.append("p,K,mode,delta_lower,delta_upper,conjecture_bound,ratio")
    lines.extend(r.csv_row() for r in rows)
    return "\n".join(lines) + "\n"


def fit_constants(rows: list[ScalingRow]) -> dict:
    """Two-parameter least squares for delta_K ~ c1 * sqrt(K/p) * (log2 K * log2 p)^c2.

    Only exact rows with K >= 2 carry information; descriptive only, no
    pass/fail attached.
    """
    usable = [r for r in rows if r.mode == "exact" and r.K >= 2 and r.delta_lower > 0]
    if len(usable) < 8:
        raise TooFewRows(f"need >= 8 exact rows, got {len(usable)}")
    y = np.array([math.log(r.delta_lower) - 0.5 * math.log(r.K / r.p) for r in usable])
    x = np.array([math.log(math.log2(r.K) * math.log2(r.p)) for r in usable])
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return {
        "c1_hat": float(math.exp(coef[0])),
        "c2_hat": float(coef[1]),
        "residuals": resid.tolist(),
    }
