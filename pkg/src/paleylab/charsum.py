"""Double character sums over subset pairs, the bounded-ratio property tester,
the union/difference decomposition identity, and the Paley graph clique number.

Subsets are exact bitmasks; every sum is an exact integer.  The exhaustive
testers cut their work by the affine symmetry (s,t) -> (a*s+b, a*t+b) with
chi(a) = +1, which preserves sizes and the character sum, hence the ratio.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import (
    BudgetExceeded,
    EmptySet,
    SizeWindowViolated,
    WrongResidueClass,
)
from .field import FieldCtx
from .subsets import as_mask, indicator_matrix, mask_elements, rotate_mask

DEFAULT_PAIR_BUDGET = 1 << 31


@dataclass(frozen=True)
class SubsetPair:
    p: int
    s_mask: int
    t_mask: int

    @classmethod
    def from_sets(cls, p: int, S, T) -> "SubsetPair":
        return cls(p=p, s_mask=as_mask(p, S), t_mask=as_mask(p, T))

    @property
    def s_elements(self) -> tuple[int, ...]:
        return mask_elements(self.s_mask)

    @property
    def t_elements(self) -> tuple[int, ...]:
        return mask_elements(self.t_mask)

    @property
    def s_size(self) -> int:
        return self.s_mask.bit_count()

    @property
    def t_size(self) -> int:
        return self.t_mask.bit_count()


@dataclass(frozen=True)
class BoundCheck:
    value: float
    satisfied: bool
    slack: float


@dataclass(frozen=True)
class CharSumReport:
    pair: SubsetPair
    sum: int
    ratio: float
    bounds: dict[str, BoundCheck]


@dataclass(frozen=True)
class DecompositionReport:
    pair: SubsetPair
    cross_sum: int
    union_sum: int
    s_minus_t_sum: int
    t_minus_s_sum: int
    intersection_sum: int
    printed_residual: int   # (A - B - C) - cross
    corrected_residual: int  # (A - B - C + D)/2 - cross

    @property
    def corrected_holds(self) -> bool:
        return self.corrected_residual == 0


@dataclass(frozen=True)
class PropertyPReport:
    p: int
    alpha: float
    search_mode: str  # exhaustive | local-search
    worst_ratio: float
    worst_num: int
    worst_den: int
    worst_pair: SubsetPair
    implied_beta: float
    empirical_C_at_beta: float
    pairs_examined: int
    qualifying_pairs: int
    symmetry_factor: float

    def c_at(self, beta: float) -> float:
        """Smallest C making the ratio bound hold at a queried beta."""
        return self.worst_ratio * self.p**beta

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "alpha": self.alpha,
            "search_mode": self.search_mode,
            "worst_ratio": self.worst_ratio,
            "worst_num": self.worst_num,
            "worst_den": self.worst_den,
            "worst_S": list(self.worst_pair.s_elements),
            "worst_T": list(self.worst_pair.t_elements),
            "implied_beta": self.implied_beta,
            "empirical_C_at_beta": self.empirical_C_at_beta,
            "pairs_examined": self.pairs_examined,
            "qualifying_pairs": self.qualifying_pairs,
            "symmetry_factor": self.symmetry_factor,
        }


@dataclass(frozen=True)
class CliqueReport:
    p: int
    omega: int
    witness: tuple[int, ...]
    hp_bound: float
    nodes_explored: int

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "omega": self.omega,
            "witness": list(self.witness),
            "hp_bound": self.hp_bound,
            "nodes_explored": self.nodes_explored,
        }


def _check_nonempty(pair: SubsetPair):
    if pair.s_mask == 0 or pair.t_mask == 0:
        raise EmptySet("S and T must be nonempty")


def char_sum_direct(ctx: FieldCtx, s_mask: int, t_mask: int) -> int:
    """O(|S||T|) evaluation via table lookups."""
    s = np.array(mask_elements(s_mask), dtype=np.int64)
    t = np.array(mask_elements(t_mask), dtype=np.int64)
    idx = (s[:, None] - t[None, :]) % ctx.p
    return int(ctx.chi_table[idx].astype(np.int64).sum())


def char_sum_convolution(ctx: FieldCtx, s_mask: int, t_mask: int) -> int:
    """O(p * p/wordsize) evaluation via difference counts.

    #{(s,t): s-t = d} is the popcount of S & (T shifted by d); summing
    chi(d) times that count over d gives the same integer as the direct path.
    """
    p = ctx.p
    total = 0
    for d in range(1, p):
        n_d = (s_mask & rotate_mask(t_mask, d, p)).bit_count()
        if n_d:
            total += int(ctx.chi_table[d]) * n_d
    return total


def double_char_sum(ctx: FieldCtx, pair: SubsetPair) -> int:
    """Exact integer sum_{s in S, t in T} chi(s - t).

    Picks the difference-count path when the pair is dense enough for it to
    win; both paths agree exactly.
    """
    _check_nonempty(pair)
    words = (ctx.p + 63) // 64
    if pair.s_size * pair.t_size > ctx.p * words:
        return char_sum_convolution(ctx, pair.s_mask, pair.t_mask)
    return char_sum_direct(ctx, pair.s_mask, pair.t_mask)


def decomposition_check(ctx: FieldCtx, pair: SubsetPair) -> DecompositionReport:
    """Evaluate both decompositions of the cross sum into single-set sums.

    The plain identity  cross = union - (S\\T) - (T\\S)  fails by an
    intersection term; the corrected one
    cross = (union - (S\\T) - (T\\S) + (S^T)) / 2
    is an exact integer identity whenever chi(-1) = +1.
    """
    if ctx.p % 4 != 1:
        raise WrongResidueClass("decomposition requires chi(-1) = +1, i.e. p = 1 mod 4")
    _check_nonempty(pair)
    s, t = pair.s_mask, pair.t_mask

    def self_sum(mask: int) -> int:
        if mask == 0:
            return 0
        return char_sum_direct(ctx, mask, mask)

    cross = double_char_sum(ctx, pair)
    a = self_sum(s | t)
    b = self_sum(s & ~t)
    c = self_sum(t & ~s)
    d = self_sum(s & t)
    num = a - b - c + d
    assert num % 2 == 0, "corrected decomposition numerator must be even"
    return DecompositionReport(
        pair=pair,
        cross_sum=cross,
        union_sum=a,
        s_minus_t_sum=b,
        t_minus_s_sum=c,
        intersection_sum=d,
        printed_residual=(a - b - c) - cross,
        corrected_residual=num // 2 - cross,
    )


def chain_bound_check(
    ctx: FieldCtx,
    pair: SubsetPair,
    delta: float,
    tau: float,
    gamma: float,
) -> CharSumReport:
    """Check the three-link inequality chain from the RIP to the window bound.

    |sum| <= delta*sqrt(p)*(|SuT|+|S\\T|+|T\\S|+|S^T|)
          <= 2*delta*sqrt(p)*(|S|+|T|)
          <= 4*p^(-gamma)*|S||T|,
    valid when both sizes exceed p^(1/2 - tau + gamma), delta <= p^(-tau) and
    0 < gamma < tau.  Each link's slack is reported.
    """
    _check_nonempty(pair)
    p = ctx.p
    if not 0 < gamma < tau:
        raise SizeWindowViolated(f"need 0 < gamma < tau, got gamma={gamma}, tau={tau}")
    if delta > p ** (-tau) * (1 + 1e-9):
        raise SizeWindowViolated(f"delta={delta} exceeds p^-tau={p ** (-tau)}")
    a, b = pair.s_size, pair.t_size
    floor_size = p ** (0.5 - tau + gamma)
    if a <= floor_size + 1e-9 or b <= floor_size + 1e-9:
        raise SizeWindowViolated(
            f"|S|={a}, |T|={b} must both exceed p^(1/2-tau+gamma)={floor_size:.6g}"
        )
    inter = (pair.s_mask & pair.t_mask).bit_count()
    union = a + b - inter
    split_total = 2 * union  # |SuT| + |S\T| + |T\S| + |S^T|
    total = double_char_sum(ctx, pair)
    lhs = abs(total)
    sqrtp = math.sqrt(p)
    b1 = delta * sqrtp * split_total
    b2 = 2.0 * delta * sqrtp * (a + b)
    b3 = 4.0 * p ** (-gamma) * a * b
    bounds = {
        "tech": BoundCheck(value=b1, satisfied=lhs <= b1 + 1e-9, slack=b1 - lhs),
        "size": BoundCheck(value=b2, satisfied=b1 <= b2 + 1e-9, slack=b2 - b1),
        "final": BoundCheck(value=b3, satisfied=b2 <= b3 + 1e-9, slack=b3 - b2),
    }
    return CharSumReport(pair=pair, sum=total, ratio=lhs / (a * b), bounds=bounds)


def karatsuba_check(ctx: FieldCtx, pair: SubsetPair, epsilon: float) -> CharSumReport:
    """Measure the unconditional bound |sum| <= p^(-0.05 eps^2) |S||T|.

    The exponent is asymptotic; at desk scale the factor is close to 1 and a
    violation at small p contradicts nothing, so this only reports margins.
    """
    _check_nonempty(pair)
    p = ctx.p
    lo, hi = sorted((pair.s_size, pair.t_size))
    if not (lo > p**epsilon and hi > p ** (0.5 + epsilon)):
        raise SizeWindowViolated(
            f"need one size > p^eps={p**epsilon:.4g} and the other > "
            f"p^(1/2+eps)={p ** (0.5 + epsilon):.4g}; got {lo}, {hi}"
        )
    total = double_char_sum(ctx, pair)
    lhs = abs(total)
    bound = p ** (-0.05 * epsilon**2) * pair.s_size * pair.t_size
    return CharSumReport(
        pair=pair,
        sum=total,
        ratio=lhs / (pair.s_size * pair.t_size),
        bounds={"karatsuba": BoundCheck(value=bound, satisfied=lhs <= bound + 1e-9, slack=bound - lhs)},
    )


# --- affine symmetry reduction ---


@lru_cache(maxsize=8)
def _affine_perms(p: int, qr: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    perms = []
    for a in qr:
        for b in range(p):
            perms.append(tuple((a * x + b) % p for x in range(p)))
    return tuple(perms)


def _apply_perm(perm: tuple[int, ...], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


def affine_orbit_reps(ctx: FieldCtx, size: int) -> list[int]:
    """Lexicographically-least representatives of size-`size` subsets under
    the ratio-preserving affine maps."""
    perms = _affine_perms(ctx.p, ctx.qr_elements)
    seen: set[int] = set()
    reps = []
    for combo in itertools.combinations(range(ctx.p), size):
        mask = 0
        for x in combo:
            mask |= 1 << x
        if mask in seen:
            continue
        reps.append(mask)
        for perm in perms:
            seen.add(_apply_perm(perm, mask))
    return reps


def min_qualifying_size(p: int, alpha: float) -> int:
    """Smallest integer size strictly greater than p^alpha.

    Near-integer powers are snapped to the integer so that the strict
    inequality is decided mathematically, not by float error.
    """
    x = p**alpha
    return int(math.floor(x + 1e-9)) + 1


def masks_of_size(p: int, size: int) -> list[int]:
    out = []
    for combo in itertools.combinations(range(p), size):
        mask = 0
        for x in combo:
            mask |= 1 << x
        out.append(mask)
    return out


def _pair_key(p: int, s_mask: int, t_mask: int):
    return (mask_elements(s_mask), mask_elements(t_mask))


def scan_pairs_max(
    ctx: FieldCtx,
    s_masks: list[int],
    t_masks: list[int],
    add_intersection: bool = False,
    chunk: int = 1 << 22,
):
    """Maximize |sum (+ |S^T|)| / (|S||T|) over the cross product of masks.

    Distinct desk-scale rationals num/den never collide after one float
    division (gaps are >= 1/den^2 >> 2^-52), so the float argmax is exact;
    ties go to the lexicographically smallest (S, T) element tuples.
    Returns (num, den, s_mask, t_mask, examined).
    """
    p = ctx.p
    t_ind = indicator_matrix(t_masks, p)
    t_sizes = t_ind.sum(axis=1).astype(np.int64)
    best_ratio = -1.0
    best_entry = None  # (key, num, den, s_mask, t_mask)
    examined = 0
    rows_per_chunk = max(1, chunk // max(1, len(t_masks)))
    for lo in range(0, len(s_masks), rows_per_chunk):
        batch = s_masks[lo : lo + rows_per_chunk]
        s_ind = indicator_matrix(batch, p)
        sums, inters = kernels.pair_sums_cross(ctx.chi_table, s_ind, t_ind)
        obj = np.abs(sums + inters) if add_intersection else np.abs(sums)
        s_sizes = s_ind.sum(axis=1).astype(np.int64)
        dens = s_sizes[:, None] * t_sizes[None, :]
        examined += obj.size
        ratios = obj / dens
        m = float(ratios.max())
        if m < best_ratio:
            continue
        if m > best_ratio:
            best_ratio = m
            best_entry = None
        for i, j in zip(*np.nonzero(ratios == m)):
            key = _pair_key(p, batch[i], t_masks[j])
            if best_entry is None or key < best_entry[0]:
                best_entry = (key, int(obj[i, j]), int(dens[i, j]), batch[i], t_masks[j])
    _, num, den, sm, tm = best_entry
    return num, den, sm, tm, examined


def property_p_exhaustive(
    ctx: FieldCtx,
    alpha: float,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> PropertyPReport:
    """Exact worst ratio |sum| / (|S||T|) over all pairs with sizes > p^alpha.

    S runs over affine-orbit representatives (the maps preserve the ratio),
    T over every qualifying subset; the budget is checked against the full
    number of qualifying pairs before the reduction.
    """
    p = ctx.p
    m = min_qualifying_size(p, alpha)
    if m > p:
        raise SizeWindowViolated(f"no subsets of F_{p} have size > p^{alpha}")
    n_sets = sum(math.comb(p, j) for j in range(m, p + 1))
    qualifying = n_sets * n_sets
    if qualifying > budget:
        raise BudgetExceeded(f"{qualifying} qualifying pairs exceed budget {budget}")
    s_masks = []
    t_masks = []
    for j in range(m, p + 1):
        s_masks.extend(affine_orbit_reps(ctx, j))
        t_masks.extend(masks_of_size(p, j))
    num, den, sm, tm, examined = scan_pairs_max(ctx, s_masks, t_masks, add_intersection=False)
    ratio = num / den
    beta = -math.log(ratio) / math.log(p) if num > 0 else math.inf
    return PropertyPReport(
        p=p,
        alpha=alpha,
        search_mode="exhaustive",
        worst_ratio=ratio,
        worst_num=num,
        worst_den=den,
        worst_pair=SubsetPair(p, sm, tm),
        implied_beta=beta,
        empirical_C_at_beta=ratio * p**beta if num > 0 else 0.0,
        pairs_examined=examined,
        qualifying_pairs=qualifying,
        symmetry_factor=qualifying / examined if examined else 1.0,
    )


def local_search_pairs(
    ctx: FieldCtx,
    size_s: int,
    size_t: int,
    iters: int,
    seed: int,
    add_intersection: bool = False,
    restarts: int = 4,
):
    """Hill-climbing maximization of |sum (+ |S^T|)| over fixed-size pairs.

    One element of S or T is swapped per step and improvements are kept;
    each restart runs from a fresh seeded pair.  Returns
    (num, den, s_mask, t_mask, examined) — a lower bound on the true max.
    """
    p = ctx.p
    den = size_s * size_t
    best_num = -1
    best_pair = None
    examined = 0

    def objective(s_mask: int, t_mask: int) -> int:
        total = char_sum_direct(ctx, s_mask, t_mask)
        if add_intersection:
            total += (s_mask & t_mask).bit_count()
        return abs(total)

    for r in range(restarts):
        rng = random.Random(seed * 1000003 + r)
        s_set = sorted(rng.sample(range(p), size_s))
        t_set = sorted(rng.sample(range(p), size_t))
        s_mask = as_mask(p, s_set)
        t_mask = as_mask(p, t_set)
        cur = objective(s_mask, t_mask)
        examined += 1
        key = _pair_key(p, s_mask, t_mask)
        if cur > best_num or (cur == best_num and (best_pair is None or key < best_pair[2])):
            best_num = cur
            best_pair = (s_mask, t_mask, key)
        for _ in range(iters):
            on_s = rng.random() < 0.5
            mask = s_mask if on_s else t_mask
            elems = mask_elements(mask)
            out_el = rng.choice(elems)
            pool = [v for v in range(p) if not (mask >> v) & 1]
            in_el = rng.choice(pool)
            new_mask = (mask & ~(1 << out_el)) | (1 << in_el)
            cand = objective(new_mask, t_mask) if on_s else objective(s_mask, new_mask)
            examined += 1
            if cand > cur:
                cur = cand
                if on_s:
                    s_mask = new_mask
                else:
                    t_mask = new_mask
                key = _pair_key(p, s_mask, t_mask)
                if cur > best_num or (cur == best_num and key < best_pair[2]):
                    best_num = cur
                    best_pair = (s_mask, t_mask, key)
    return best_num, den, best_pair[0], best_pair[1], examined


def property_p_search(
    ctx: FieldCtx,
    alpha: float,
    sizes: list[int],
    iters: int,
    seed: int,
    restarts: int = 4,
) -> PropertyPReport:
    """Local-search lower bound on the worst ratio for sizes beyond exhaustion."""
    p = ctx.p
    m = min_qualifying_size(p, alpha)
    for n in sizes:
        if n < m or n > p:
            raise SizeWindowViolated(f"size {n} not in the qualifying window [{m}, {p}]")
    best = None
    examined = 0
    for n in sizes:
        num, den, sm, tm, ex = local_search_pairs(
            ctx, n, n, iters, seed, add_intersection=False, restarts=restarts
        )
        examined += ex
        if best is None or Fraction(num, den) > Fraction(best[0], best[1]):
            best = (num, den, sm, tm)
    num, den, sm, tm = best
    ratio = num / den
    beta = -math.log(ratio) / math.log(p) if num > 0 else math.inf
    n_sets = sum(math.comb(p, j) for j in range(m, p + 1))
    return PropertyPReport(
        p=p,
        alpha=alpha,
        search_mode="local-search",
        worst_ratio=ratio,
        worst_num=num,
        worst_den=den,
        worst_pair=SubsetPair(p, sm, tm),
        implied_beta=beta,
        empirical_C_at_beta=ratio * p**beta if num > 0 else 0.0,
        pairs_examined=examined,
        qualifying_pairs=n_sets * n_sets,
        symmetry_factor=1.0,
    )


def clique_number(ctx: FieldCtx, node_budget: int = 10**8) -> CliqueReport:
    """Exact clique number of the Paley graph.

    The graph is edge-transitive under x -> a*x + b with chi(a) = +1, so some
    maximum clique contains {0, 1}; branch and bound runs on the common
    neighborhood of that edge and 2 is added back.
    """
    if ctx.p % 4 != 1:
        raise WrongResidueClass("the Paley graph needs p = 1 mod 4")
    p = ctx.p
    chi = ctx.chi_table
    cands = [v for v in range(2, p) if chi[v] == 1 and chi[(v - 1) % p] == 1]
    k = len(cands)
    adj = np.zeros((k, k), dtype=np.uint8)
    for i in range(k):
        for j in range(k):
            if i != j and chi[(cands[i] - cands[j]) % p] == 1:
                adj[i, j] = 1
    size, members, nodes = kernels.max_clique(adj, node_budget)
    witness = tuple(sorted([0, 1] + [cands[i] for i in members]))
    for u, v in itertools.combinations(witness, 2):
        assert chi[(u - v) % p] == 1, "witness fails the pairwise edge check"
    omega = size + 2
    hp = math.sqrt(p / 2) + 1
    assert omega <= math.floor(hp) + 1e-9, "clique above the spectral bound"
    return CliqueReport(p=p, omega=omega, witness=witness, hp_bound=hp, nodes_explored=nodes)
