import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paleylab.charsum import (
    SubsetPair,
    affine_orbit_reps,
    chain_bound_check,
    char_sum_convolution,
    char_sum_direct,
    clique_number,
    decomposition_check,
    double_char_sum,
    karatsuba_check,
    local_search_pairs,
    min_qualifying_size,
    property_p_exhaustive,
    property_p_search,
)
from paleylab.errors import (
    BudgetExceeded,
    EmptySet,
    SizeWindowViolated,
    WrongResidueClass,
)
from paleylab.field import new_field
from paleylab.rip import rip_exact
from paleylab.etf import seidel

subsets13 = st.sets(st.integers(min_value=0, max_value=12), min_size=1, max_size=13)


def test_double_char_sum_examples(ctx13):
    assert double_char_sum(ctx13, SubsetPair.from_sets(13, {0}, {0})) == 0
    assert double_char_sum(ctx13, SubsetPair.from_sets(13, range(13), range(13))) == 0
    assert double_char_sum(ctx13, SubsetPair.from_sets(13, {0}, {1})) == 1
    with pytest.raises(EmptySet):
        double_char_sum(ctx13, SubsetPair.from_sets(13, set(), {1}))


@settings(max_examples=200, deadline=None)
@given(s=subsets13, t=subsets13)
def test_paths_agree_hypothesis(s, t):
    ctx = new_field(13)
    pair = SubsetPair.from_sets(13, s, t)
    assert char_sum_direct(ctx, pair.s_mask, pair.t_mask) == char_sum_convolution(
        ctx, pair.s_mask, pair.t_mask
    )


def test_paths_agree_seeded(contexts):
    for ctx in contexts.values():
        rng = random.Random(ctx.p)
        for _ in range(300):
            s = rng.getrandbits(ctx.p) or 1
            t = rng.getrandbits(ctx.p) or 1
            assert char_sum_direct(ctx, s, t) == char_sum_convolution(ctx, s, t)


def test_symmetry(ctx13):
    for s, t in itertools.product(range(1, 40, 3), range(1, 40, 5)):
        a = double_char_sum(ctx13, SubsetPair(13, s, t))
        b = double_char_sum(ctx13, SubsetPair(13, t, s))
        assert a == b


@settings(max_examples=200, deadline=None)
@given(s=subsets13, t=subsets13)
def test_decomposition_identities_hypothesis(s, t):
    ctx = new_field(13)
    rep = decomposition_check(ctx, SubsetPair.from_sets(13, s, t))
    assert rep.corrected_residual == 0
    # the plain identity misses exactly the intersection self-sum
    inter = rep.pair.s_mask & rep.pair.t_mask
    inter_sum = char_sum_direct(ctx, inter, inter) if inter else 0
    assert rep.printed_residual == rep.cross_sum - inter_sum


def test_decomposition_disjoint_example(ctx13):
    rep = decomposition_check(ctx13, SubsetPair.from_sets(13, {0}, {1}))
    assert rep.cross_sum == 1
    assert rep.union_sum == 2
    assert rep.printed_residual == 1
    assert rep.corrected_residual == 0


def test_decomposition_equal_sets(ctx13):
    rep = decomposition_check(ctx13, SubsetPair.from_sets(13, {0, 1, 4}, {0, 1, 4}))
    assert rep.printed_residual == 0
    assert rep.corrected_residual == 0


def test_decomposition_needs_1mod4():
    ctx7 = new_field(7)
    with pytest.raises(WrongResidueClass):
        decomposition_check(ctx7, SubsetPair.from_sets(7, {0}, {1}))


def test_chain_bound_exhaustive_window(ctx13):
    """All window pairs pass the chain with the exact delta_4."""
    s = seidel(ctx13)
    delta = rip_exact(s, 4).delta_lower
    tau = -math.log(delta) / math.log(13)
    gamma = tau / 2
    for s_set in itertools.combinations(range(13), 4):
        pair = SubsetPair.from_sets(13, s_set, (0, 1, 2, 3))
        rep = chain_bound_check(ctx13, pair, delta, tau, gamma)
        assert all(b.satisfied for b in rep.bounds.values())


def test_chain_bound_window_errors(ctx13):
    pair = SubsetPair.from_sets(13, {0, 1, 2, 3}, {4, 5, 6, 7})
    with pytest.raises(SizeWindowViolated):
        chain_bound_check(ctx13, pair, 0.5, tau=0.1, gamma=0.2)  # gamma > tau
    small = SubsetPair.from_sets(13, {0}, {1})
    delta = 13**-0.1
    with pytest.raises(SizeWindowViolated):
        chain_bound_check(ctx13, small, delta, tau=0.1, gamma=0.05)


def test_min_qualifying_size():
    assert min_qualifying_size(13, 0.5) == 4
    # size must strictly exceed p^alpha even when the power is integral
    assert min_qualifying_size(13, math.log(12) / math.log(13)) == 13


def test_affine_reps_cover_all_orbits(ctx13):
    reps = affine_orbit_reps(ctx13, 4)
    total = math.comb(13, 4)
    # orbits have size at most p(p-1)/2 = 78
    assert total / 78 <= len(reps) <= total
    # every size-4 subset is reachable from some rep
    from paleylab.charsum import _affine_perms, _apply_perm

    perms = _affine_perms(13, ctx13.qr_elements)
    seen = set()
    for rep in reps:
        for perm in perms:
            seen.add(_apply_perm(perm, rep))
    assert len(seen) == total


def test_property_p_exhaustive_13(ctx13):
    rep = property_p_exhaustive(ctx13, 0.5)
    assert rep.worst_num == 9 and rep.worst_den == 16
    assert rep.worst_ratio == 9 / 16
    assert rep.worst_ratio > 6 / 16
    assert abs(rep.implied_beta - (-math.log(9 / 16) / math.log(13))) < 1e-12
    assert abs(rep.empirical_C_at_beta - 1.0) < 1e-12
    assert rep.qualifying_pairs == 7814**2
    # worst pair qualifies and attains the ratio
    assert rep.worst_pair.s_size >= 4 and rep.worst_pair.t_size >= 4
    assert abs(double_char_sum(ctx13, rep.worst_pair)) == rep.worst_num


def test_property_p_exhaustive_full_size_alpha(ctx13):
    # only the full field qualifies; orthogonality kills the sum
    rep = property_p_exhaustive(ctx13, math.log(12) / math.log(13))
    assert rep.worst_num == 0
    assert rep.worst_ratio == 0.0
    assert rep.implied_beta == math.inf


def test_property_p_budget(ctx13):
    with pytest.raises(BudgetExceeded):
        property_p_exhaustive(ctx13, 0.5, budget=10)


def test_property_p_search_below_exhaustive(ctx13):
    exact = property_p_exhaustive(ctx13, 0.5)
    found = property_p_search(ctx13, 0.5, sizes=[4], iters=300, seed=5)
    assert found.search_mode == "local-search"
    assert found.worst_ratio <= exact.worst_ratio + 1e-12
    again = property_p_search(ctx13, 0.5, sizes=[4], iters=300, seed=5)
    assert again.worst_ratio == found.worst_ratio
    assert again.worst_pair == found.worst_pair
    with pytest.raises(SizeWindowViolated):
        property_p_search(ctx13, 0.5, sizes=[2], iters=10, seed=0)


def test_local_search_zero_iters_single_restart(ctx13):
    num, den, sm, tm, examined = local_search_pairs(
        ctx13, 4, 4, iters=0, seed=9, restarts=1
    )
    assert examined == 1
    assert den == 16
    assert abs(char_sum_direct(ctx13, sm, tm)) == num


def test_clique_13(ctx13):
    rep = clique_number(ctx13)
    assert rep.omega == 3
    assert rep.witness == (0, 1, 4)
    assert rep.omega <= math.floor(rep.hp_bound)
    # bridge: a maximum clique's self-sum counts its ordered edges
    w = rep.witness
    pair = SubsetPair.from_sets(13, w, w)
    assert double_char_sum(ctx13, pair) == len(w) * (len(w) - 1)


def test_clique_small_cases():
    assert clique_number(new_field(5)).omega == 2
    assert clique_number(new_field(17)).omega == 3
    with pytest.raises(WrongResidueClass):
        clique_number(new_field(7))


def test_clique_budget(ctx13):
    with pytest.raises(BudgetExceeded):
        clique_number(new_field(101), node_budget=1)


def test_karatsuba(ctx13):
    # T = F_p makes the sum vanish: bound holds with full margin
    pair = SubsetPair.from_sets(13, {0, 1, 4, 6}, range(13))
    rep = karatsuba_check(ctx13, pair, 0.1)
    assert rep.sum == 0
    assert rep.bounds["karatsuba"].satisfied
    with pytest.raises(SizeWindowViolated):
        karatsuba_check(ctx13, SubsetPair.from_sets(13, {0, 1}, {2, 3}), 0.1)


def test_karatsuba_bound_value():
    ctx = new_field(97)
    pair = SubsetPair.from_sets(97, range(3), range(30))
    rep = karatsuba_check(ctx, pair, 0.1)
    expected = 97 ** (-0.05 * 0.01) * 3 * 30
    assert abs(rep.bounds["karatsuba"].value - expected) < 1e-9
