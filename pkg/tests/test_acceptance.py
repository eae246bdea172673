"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest -v tests/test_acceptance.py` (or `-s` to see the PASS
lines inline).  Tolerances and runtime limits are pinned here.
"""

import itertools
import math
import random
import time

import numpy as np

from paleylab.charsum import (
    SubsetPair,
    clique_number,
    decomposition_check,
    double_char_sum,
    property_p_exhaustive,
)
from paleylab.etf import build_etf, gram, seidel, verify_etf
from paleylab.extractor import extractor_error_bound, flat_bias, worst_flat_bias
from paleylab.field import chi, gauss_sum, new_field
from paleylab.pipeline import Budgets, fit_constants, run_implication, run_scaling_study, scaling_csv
from paleylab.rip import check_tech_bound, rayleigh_indicator, rip_exact

GAUSS_PRIMES = (5, 13, 17, 29, 37, 41, 53)
ETF_PRIMES = (13, 17, 29, 37)
RIP_PRIMES = (13, 17, 29, 37, 53)
SCALING_PRIMES = (13, 17, 29, 37, 53, 73, 97)
CLIQUE_PRIMES_200 = (13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101,
                     109, 113, 137, 149, 157, 173, 181, 193, 197)
# frozen from an independent exact solver run
KNOWN_OMEGA = {13: 3, 17: 3, 29: 4, 37: 4, 41: 5, 53: 5, 61: 5, 73: 5, 89: 5,
               97: 6, 101: 5, 109: 6, 113: 7, 137: 7, 149: 7, 157: 7, 173: 8,
               181: 7, 193: 7, 197: 8}


class stopwatch:
    def __init__(self, limit_s):
        self.limit = limit_s

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, (
                f"runtime {self.elapsed:.1f}s exceeds the {self.limit}s limit")
        return False


def _report(n, detail, sw):
    print(f"PASS criterion {n}: {detail} [{sw.elapsed:.2f}s]")


def test_criterion_1_gauss_sum_identity():
    with stopwatch(1.0) as sw:
        worst = 0.0
        for p in GAUSS_PRIMES:
            ctx = new_field(p)
            sqrtp = math.sqrt(p)
            for a in range(1, p):
                err = abs(gauss_sum(ctx, a) - chi(ctx, a) * sqrtp)
                worst = max(worst, err)
        assert worst < 1e-9
    _report(1, f"Gauss sums exact for p in {GAUSS_PRIMES}, max |err| = {worst:.2e}", sw)


def test_criterion_2_etf_verification():
    with stopwatch(5.0) as sw:
        worst = {"unit": 0.0, "equi": 0.0, "tight": 0.0, "chi": 0.0}
        for p in ETF_PRIMES:
            ctx = new_field(p)
            etf = build_etf(ctx)
            rep = verify_etf(etf, 1e-9)
            assert rep.unit_norm_dev < 1e-12
            assert rep.equiangularity_dev < 1e-9
            assert rep.tightness_dev < 1e-9
            g = gram(etf)
            s = seidel(ctx)
            dev = np.abs(math.sqrt(p) * (g - np.eye(p + 1)) - s.data)[: p, : p].max()
            assert dev < 1e-6
            worst["unit"] = max(worst["unit"], rep.unit_norm_dev)
            worst["equi"] = max(worst["equi"], rep.equiangularity_dev)
            worst["tight"] = max(worst["tight"], rep.tightness_dev)
            worst["chi"] = max(worst["chi"], float(dev))
    _report(2, f"frame checks pass for p in {ETF_PRIMES}: {worst}", sw)


def test_criterion_3_rip_exactness():
    with stopwatch(120.0) as sw:
        for p in RIP_PRIMES:
            s = seidel(new_field(p))
            deltas = [rip_exact(s, k).delta_lower for k in (1, 2, 3, 4)]
            assert deltas[0] == 0.0
            assert abs(deltas[1] - 1 / math.sqrt(p)) < 1e-12
            for lo, hi in zip(deltas, deltas[1:]):
                assert lo <= hi + 1e-12
        # independent oracle: float Gram + LAPACK eigensolve over all 364 supports
        ctx = new_field(13)
        got = rip_exact(seidel(ctx), 3)
        assert got.subsets_examined == 364
        g = gram(build_etf(ctx))
        oracle = max(
            max(abs(ev[0] - 1), abs(ev[-1] - 1))
            for ev in (np.linalg.eigvalsh(g[np.ix_(u, u)])
                       for u in itertools.combinations(range(14), 3))
        )
        assert abs(got.delta_lower - oracle) < 1e-6
    _report(3, f"delta_1/delta_2 exact, monotone K<=4 for p in {RIP_PRIMES}; "
               f"delta_3(13) matches the float-Gram oracle", sw)


def test_criterion_4_indicator_lemma_suite():
    with stopwatch(120.0) as sw:
        rng = np.random.default_rng(2024)
        worst_dev = 0.0
        for p in RIP_PRIMES:
            ctx = new_field(p)
            s = seidel(ctx)
            g = gram(build_etf(ctx))
            for _ in range(1000):
                size = int(rng.integers(1, p))
                u = sorted(rng.choice(p, size=size, replace=False).tolist())
                ind = np.zeros(p + 1)
                ind[u] = 1.0
                dev = abs(rayleigh_indicator(s, u) - ind @ g @ ind)
                worst_dev = max(worst_dev, float(dev))
                assert dev < 1e-6
        worst_ratio = 0.0
        for p in RIP_PRIMES:
            s = seidel(new_field(p))
            for k in (1, 2, 3, 4):
                delta = rip_exact(s, k).delta_lower
                if delta == 0.0:
                    continue
                rep = check_tech_bound(s, k, delta)
                worst_ratio = max(worst_ratio, rep.max_ratio)
                assert rep.max_ratio <= 1.0 + 1e-12
    _report(4, f"indicator form matches Gram to {worst_dev:.2e}; "
               f"character-sum bound ratio <= {worst_ratio:.6f}", sw)


def test_criterion_5_decomposition_identity():
    with stopwatch(300.0) as sw:
        for p in RIP_PRIMES:
            ctx = new_field(p)
            rng = random.Random(p)
            for _ in range(10**4):
                s_mask = rng.getrandbits(p) or 1
                t_mask = rng.getrandbits(p) or 1
                rep = decomposition_check(ctx, SubsetPair(p, s_mask, t_mask))
                assert rep.corrected_residual == 0
                inter = s_mask & t_mask
                inter_self = (
                    double_char_sum(ctx, SubsetPair(p, inter, inter)) if inter else 0
                )
                assert rep.printed_residual == rep.cross_sum - inter_self
    _report(5, f"corrected identity exact on 10^4 seeded pairs per prime "
               f"(p in {RIP_PRIMES}); plain identity off by the intersection self-sum", sw)


def test_criterion_6_executable_chain():
    with stopwatch(600.0) as sw:
        eps13 = math.log(4) / math.log(13) - 0.5
        rep13 = run_implication(13, eps13, seed=0)
        assert rep13.rip_mode == "exact" and rep13.params.K == 4
        assert rep13.sweep.mode == "exhaustive"
        assert rep13.sweep.pairs_checked == math.comb(13, 4) ** 2
        assert rep13.sweep.violations == 0
        assert rep13.passed

        eps29 = math.log(6) / math.log(29) - 0.5
        rep29 = run_implication(29, eps29, seed=0, budgets=Budgets(samples=10**5))
        assert rep29.rip_mode == "exact" and rep29.params.K == 6
        assert rep29.sweep.mode == "sampled"
        assert rep29.sweep.pairs_checked >= 10**5
        assert rep29.sweep.violations == 0
        assert rep29.passed
    _report(6, f"chain sweeps clean: p=13 exhaustive ({rep13.sweep.pairs_checked} pairs), "
               f"p=29 sampled+adversarial ({rep29.sweep.pairs_checked} pairs)", sw)


def test_criterion_7_clique():
    with stopwatch(600.0) as sw:
        ctx = new_field(13)
        rep = clique_number(ctx)
        assert rep.omega == 3
        # independent exhaustive confirmation at p=13
        chi_t = ctx.chi_table
        def is_clique(group):
            return all(chi_t[(a - b) % 13] == 1 for a, b in itertools.combinations(group, 2))
        assert any(is_clique(c) for c in itertools.combinations(range(13), 3))
        assert not any(is_clique(c) for c in itertools.combinations(range(13), 4))

        for p in CLIQUE_PRIMES_200:
            r = clique_number(new_field(p))
            assert r.omega == KNOWN_OMEGA[p]
            assert r.omega <= math.sqrt(p / 2) + 1
            pair = SubsetPair.from_sets(p, r.witness, r.witness)
            assert double_char_sum(new_field(p), pair) == r.omega * (r.omega - 1)
    _report(7, f"omega exact and below sqrt(p/2)+1 for all {len(CLIQUE_PRIMES_200)} "
               f"primes up to 200; witnesses verified", sw)


def test_criterion_8_extractor_bias():
    with stopwatch(300.0) as sw:
        rng = random.Random(88)
        for p in RIP_PRIMES:
            ctx = new_field(p)
            # closed form vs enumeration is asserted inside flat_bias for
            # every call; drive it across random and structured pairs
            for _ in range(200):
                s = rng.getrandbits(p) or 1
                t = rng.getrandbits(p) or 1
                flat_bias(ctx, s, t)
            full = flat_bias(ctx, range(p), range(p))
            assert full.bias_num * 2 * p == full.bias_den  # bias = 1/(2p) exactly
        ctx = new_field(13)
        assert worst_flat_bias(ctx, 0.0).bias == 0.5
        prop = property_p_exhaustive(ctx, 0.5)
        bound = extractor_error_bound(ctx, prop)
        k = 0.5 * ctx.n  # alpha * n = 2 bits
        worst = worst_flat_bias(ctx, k)
        assert bound >= worst.bias
        for _ in range(300):
            s = frozenset(rng.sample(range(13), 4))
            t = frozenset(rng.sample(range(13), 4))
            assert flat_bias(ctx, s, t).bias <= bound
    _report(8, f"bias closed form exact; worst bias at alpha*n = {worst.bias} "
               f"<= measured-property bound {bound:.6f}", sw)


def test_criterion_9_scaling_study(tmp_path):
    with stopwatch(600.0) as sw:
        rows1 = run_scaling_study(list(SCALING_PRIMES), 4, seed=0, workers=1)
        rows2 = run_scaling_study(list(SCALING_PRIMES), 4, seed=0, workers=4)
        assert all(r.mode == "exact" for r in rows1)
        csv1 = scaling_csv(rows1, provenance="acceptance")
        csv2 = scaling_csv(rows2, provenance="acceptance")
        assert csv1 == csv2
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        a.write_text(csv1, newline="\n")
        b.write_text(csv2, newline="\n")
        assert a.read_bytes() == b.read_bytes()
        fit = fit_constants(rows1)
        assert math.isfinite(fit["c1_hat"]) and math.isfinite(fit["c2_hat"])
        assert all(math.isfinite(r) for r in fit["residuals"])
    _report(9, f"scaling CSV deterministic across runs and workers "
               f"({len(rows1)} exact rows); fit c1={fit['c1_hat']:.4f}, "
               f"c2={fit['c2_hat']:.4f}", sw)
