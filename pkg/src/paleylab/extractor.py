"""The Paley graph two-source extractor and its exact flat-source bias.

Pr[Ext = 1] for flat sources on S and T is the exact rational
(|S||T| + sum chi(s-t) + |S^T|) / (2|S||T|): counting pairs with chi = +1
gives (sum + |S||T| - |S^T|)/2 off the diagonal, and the diagonal always
outputs 1.  All bias arithmetic stays in integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .charsum import (
    PropertyPReport,
    SubsetPair,
    affine_orbit_reps,
    double_char_sum,
    local_search_pairs,
    masks_of_size,
    scan_pairs_max,
)
from .errors import (
    BudgetExceeded,
    EmptySet,
    EntropyTooHigh,
    OutOfRange,
    PrimeMismatch,
    SupportMismatch,
)
from .field import FieldCtx
from .subsets import as_mask, mask_elements


@dataclass(frozen=True)
class Pmf:
    """Finite distribution over an explicit outcome universe."""

    support: tuple
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise ValueError("support and probs must have equal length")
        if any(q < 0 for q in self.probs):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")


@dataclass(frozen=True)
class BiasReport:
    p: int
    s_mask: int
    t_mask: int
    pr_one_num: int
    pr_one_den: int
    bias_num: int
    bias_den: int
    k_s: float
    k_t: float
    bound_beta: float | None = None

    @property
    def bias(self) -> float:
        return self.bias_num / self.bias_den

    @property
    def pr_one(self) -> Fraction:
        return Fraction(self.pr_one_num, self.pr_one_den)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "k_bits": self.k_s,
            "size": self.s_mask.bit_count(),
            "bias_num": self.bias_num,
            "bias_den": self.bias_den,
            "bias": self.bias,
            "S": list(mask_elements(self.s_mask)),
            "T": list(mask_elements(self.t_mask)),
            "bound_beta": self.bound_beta,
        }


def ext(ctx: FieldCtx, x: int, y: int) -> int:
    """One-bit extractor: 1 on x = y, else (chi(x - y) + 1) / 2."""
    p = ctx.p
    if not (0 <= x < p and 0 <= y < p):
        raise OutOfRange(f"inputs must lie in [0, {p})")
    if x == y:
        return 1
    return (int(ctx.chi_table[(x - y) % p]) + 1) // 2


def min_entropy(d: Pmf) -> float:
    """-log2 of the largest point probability."""
    return -math.log2(max(d.probs))


def stat_distance(d1: Pmf, d2: Pmf) -> float:
    """Half the l1 distance between two distributions on a common universe."""
    if d1.support != d2.support:
        raise SupportMismatch("distributions must share the outcome universe")
    return 0.5 * sum(abs(a - b) for a, b in zip(d1.probs, d2.probs))


def output_pmf(report: "BiasReport") -> Pmf:
    """Distribution of the extractor output for the report's flat sources."""
    pr1 = report.pr_one_num / report.pr_one_den
    return Pmf(support=(0, 1), probs=(1.0 - pr1, pr1))


def flat_bias(ctx: FieldCtx, S, T, cross_check_limit: int = 10**6) -> BiasReport:
    """Exact bias of the extractor on flat sources over S and T.

    The closed form is cross-checked against direct enumeration of all
    (x, y) pairs whenever |S||T| is within `cross_check_limit`.
    """
    p = ctx.p
    s_mask = as_mask(p, S)
    t_mask = as_mask(p, T)
    if s_mask == 0 or t_mask == 0:
        raise EmptySet("flat sources need nonempty supports")
    a = s_mask.bit_count()
    b = t_mask.bit_count()
    total = double_char_sum(ctx, SubsetPair(p, s_mask, t_mask))
    inter = (s_mask & t_mask).bit_count()
    num = a * b + total + inter
    den = 2 * a * b
    if a * b <= cross_check_limit:
        t_elems = np.array(mask_elements(t_mask), dtype=np.int64)
        ones = 0
        for x in mask_elements(s_mask):
            row = ctx.chi_table[(x - t_elems) % p]
            ones += int((row == 1).sum()) + int((t_mask >> x) & 1)
        assert 2 * ones == num, "closed form disagrees with direct enumeration"
    return BiasReport(
        p=p,
        s_mask=s_mask,
        t_mask=t_mask,
        pr_one_num=num,
        pr_one_den=den,
        bias_num=abs(total + inter),
        bias_den=den,
        k_s=math.log2(a),
        k_t=math.log2(b),
    )


def worst_flat_bias(
    ctx: FieldCtx,
    k: float,
    mode: str = "exhaustive",
    iters: int = 0,
    seed: int = 0,
    budget: int = 1 << 31,
) -> BiasReport:
    """Maximal bias over flat pairs with |S| = |T| = ceil(2^k).

    Exhaustive mode scans affine-orbit representatives of S against every T
    (the maps preserve both the character sum and |S^T|); search mode reuses
    the hill-climbing pair search with the diagonal term in the objective.
    """
    p = ctx.p
    size = math.ceil(2**k - 1e-9)
    if size > p:
        raise EntropyTooHigh(f"2^{k} exceeds the field size {p}")
    if size < 1:
        raise EntropyTooHigh("entropy must be nonnegative")
    if mode == "exhaustive":
        n_sets = math.comb(p, size)
        if n_sets * n_sets > budget:
            raise BudgetExceeded(f"{n_sets * n_sets} pairs exceed budget {budget}")
        num, den, sm, tm, _ = scan_pairs_max(
            ctx,
            affine_orbit_reps(ctx, size),
            masks_of_size(p, size),
            add_intersection=True,
        )
    elif mode == "search":
        num, den, sm, tm, _ = local_search_pairs(
            ctx, size, size, iters, seed, add_intersection=True
        )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return flat_bias(ctx, sm, tm)


def extractor_error_bound(ctx: FieldCtx, report: PropertyPReport) -> float:
    """Extractor error implied by a measured worst character-sum ratio.

    bias <= (worst_ratio * |S||T| + |S^T|) / (2|S||T|)
         <= (worst_ratio + 1/ceil(p^alpha)) / 2
    for flat sources whose sizes qualify at the report's alpha.
    """
    if report.p != ctx.p:
        raise PrimeMismatch(f"report is for p={report.p}, context is p={ctx.p}")
    size_floor = math.ceil(ctx.p**report.alpha - 1e-9)
    return 0.5 * (report.worst_ratio + 1.0 / size_floor)


def bias_sweep_rows(ctx: FieldCtx, ks, mode: str, iters: int, seed: int, budget: int = 1 << 31):
    """(p, k, size, bias) rows for a sweep over entropy levels."""
    rows = []
    for k in ks:
        rep = worst_flat_bias(ctx, k, mode=mode, iters=iters, seed=seed, budget=budget)
        rows.append((ctx.p, k, rep.s_mask.bit_count(), rep.bias))
    return rows
