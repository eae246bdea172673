"""Command-line front end.

Every output file starts with a provenance record (tool version, normalized
flag set, seed); results are byte-identical for identical flags and seed
regardless of worker count, so the worker count itself is deliberately kept
out of file contents.

Exit codes: 0 success, 2 precondition or usage error, 3 budget exhaustion,
1 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .charsum import (
    SubsetPair,
    chain_bound_check,
    clique_number,
    decomposition_check,
    double_char_sum,
    karatsuba_check,
    property_p_exhaustive,
    property_p_search,
)
from .errors import BudgetExceeded, PaleyLabError
from .etf import build_etf, etf_csv, gram, seidel, seidel_csv, verify_etf
from .extractor import bias_sweep_rows, extractor_error_bound, flat_bias, worst_flat_bias
from .field import new_field
from .pipeline import Budgets, fit_constants, run_implication, run_scaling_study, scaling_csv
from .rip import rip_exact, rip_lower_search, rip_upper_coherence


def _count(text: str) -> int:
    """Counts accept scientific notation but must be integral."""
    val = float(text)
    if val != int(val) or val < 0:
        raise argparse.ArgumentTypeError(f"{text!r} is not a nonnegative integer count")
    return int(val)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _round12(obj):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.12g}")
        return obj
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _provenance(args: argparse.Namespace) -> str:
    skip = {"out", "workers", "func", "command"}
    parts = []
    for key in sorted(vars(args)):
        if key in skip:
            continue
        val = getattr(args, key)
        if val is None:
            continue
        if isinstance(val, list):
            val = ",".join(str(v) for v in val)
        elif isinstance(val, bool):
            val = str(val).lower()
        parts.append(f"{key}={val}")
    return f"paleylab {__version__} {args.command} " + " ".join(parts)


def _emit(args: argparse.Namespace, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args: argparse.Namespace, payload: dict):
    doc = {"provenance": _provenance(args)}
    doc.update(_round12(payload))
    _emit(args, json.dumps(doc, indent=2) + "\n")


# --- subcommand handlers ---


def _cmd_field(args) -> int:
    ctx = new_field(args.p, require_1mod4=args.require_1mod4)
    _emit_json(args, {
        "p": ctx.p,
        "n": ctx.n,
        "requires_1mod4": ctx.requires_1mod4,
        "num_qr": len(ctx.qr_elements),
        "qr": list(ctx.qr_elements),
    })
    return 0


def _cmd_etf(args) -> int:
    ctx = new_field(args.p, require_1mod4=True)
    if args.dump == "seidel":
        _emit(args, f"# {_provenance(args)}\n" + seidel_csv(seidel(ctx)))
        return 0
    etf = build_etf(ctx)
    if args.dump == "matrix":
        _emit(args, f"# {_provenance(args)}\n" + etf_csv(etf))
    elif args.dump == "gram":
        g = gram(etf)
        body = "\n".join(",".join(f"{v:.12g}" for v in row) for row in g)
        _emit(args, f"# {_provenance(args)}\n" + body + "\n")
    else:
        rep = verify_etf(etf, args.tol)
        _emit_json(args, {
            "p": rep.p,
            "tol": rep.tol,
            "unit_norm_dev": rep.unit_norm_dev,
            "equiangularity_dev": rep.equiangularity_dev,
            "tightness_dev": rep.tightness_dev,
            "passed": rep.passed,
        })
    return 0


def _cmd_rip(args) -> int:
    ctx = new_field(args.p, require_1mod4=True)
    s = seidel(ctx)
    if args.mode == "exact":
        rep = rip_exact(s, args.K, budget=args.budget, workers=args.workers)
    else:
        rep = rip_lower_search(s, args.K, iters=args.iters, seed=args.seed)
    if args.format == "csv":
        _emit(args, f"# {_provenance(args)}\np,K,mode,delta_lower,delta_upper\n" + rep.csv_row() + "\n")
    else:
        payload = rep.to_json_dict()
        payload["coherence_upper"] = rip_upper_coherence(args.p, args.K)
        _emit_json(args, payload)
    return 0


def _parse_pair(args, ctx) -> SubsetPair:
    if args.S is None or args.T is None:
        raise PaleyLabError("this operation needs --S and --T element lists")
    return SubsetPair.from_sets(ctx.p, args.S, args.T)


def _cmd_charsum(args) -> int:
    ctx = new_field(args.p, require_1mod4=True)
    if args.op == "sum":
        pair = _parse_pair(args, ctx)
        total = double_char_sum(ctx, pair)
        if args.format == "csv":
            ratio = abs(total) / (pair.s_size * pair.t_size)
            _emit(args, f"# {_provenance(args)}\np,S_size,T_size,sum,ratio\n"
                        f"{ctx.p},{pair.s_size},{pair.t_size},{total},{ratio:.12g}\n")
        else:
            _emit_json(args, {"p": ctx.p, "S": list(pair.s_elements), "T": list(pair.t_elements),
                              "sum": total,
                              "ratio": abs(total) / (pair.s_size * pair.t_size)})
    elif args.op == "decomp":
        rep = decomposition_check(ctx, _parse_pair(args, ctx))
        _emit_json(args, {
            "p": ctx.p, "S": list(rep.pair.s_elements), "T": list(rep.pair.t_elements),
            "cross_sum": rep.cross_sum, "union_sum": rep.union_sum,
            "s_minus_t_sum": rep.s_minus_t_sum, "t_minus_s_sum": rep.t_minus_s_sum,
            "intersection_sum": rep.intersection_sum,
            "printed_residual": rep.printed_residual,
            "corrected_residual": rep.corrected_residual,
        })
    elif args.op == "chain":
        rep = chain_bound_check(ctx, _parse_pair(args, ctx), args.delta, args.tau, args.gamma)
        _emit_json(args, {
            "p": ctx.p, "sum": rep.sum, "ratio": rep.ratio,
            "bounds": {k: {"value": b.value, "satisfied": b.satisfied, "slack": b.slack}
                       for k, b in rep.bounds.items()},
        })
    elif args.op == "karatsuba":
        rep = karatsuba_check(ctx, _parse_pair(args, ctx), args.epsilon)
        bc = rep.bounds["karatsuba"]
        _emit_json(args, {"p": ctx.p, "sum": rep.sum, "ratio": rep.ratio,
                          "bound": bc.value, "satisfied": bc.satisfied, "slack": bc.slack})
    elif args.op == "property":
        rep = property_p_exhaustive(ctx, args.alpha, budget=args.budget)
        _emit_json(args, rep.to_json_dict())
    else:  # property-search
        sizes = args.sizes or [math.floor(ctx.p**args.alpha) + 1]
        rep = property_p_search(ctx, args.alpha, sizes, args.iters, args.seed)
        _emit_json(args, rep.to_json_dict())
    return 0


def _cmd_clique(args) -> int:
    ctx = new_field(args.p, require_1mod4=True)
    rep = clique_number(ctx, node_budget=args.budget)
    _emit_json(args, rep.to_json_dict())
    return 0


def _cmd_extractor(args) -> int:
    ctx = new_field(args.p, require_1mod4=True)
    if args.op == "bias":
        if args.S is None or args.T is None:
            raise PaleyLabError("--op bias needs --S and --T")
        rep = flat_bias(ctx, args.S, args.T)
        _emit_json(args, rep.to_json_dict())
    elif args.op == "worst":
        rep = worst_flat_bias(ctx, args.k, mode=args.mode, iters=args.iters,
                              seed=args.seed, budget=args.budget)
        _emit_json(args, rep.to_json_dict())
    elif args.op == "bound":
        prop = property_p_exhaustive(ctx, args.alpha, budget=args.budget)
        _emit_json(args, {"p": ctx.p, "alpha": args.alpha,
                          "worst_ratio": prop.worst_ratio,
                          "bound": extractor_error_bound(ctx, prop)})
    else:  # sweep
        ks = []
        k = args.kmin
        while k <= args.kmax + 1e-12:
            ks.append(round(k, 9))
            k += args.kstep
        rows = bias_sweep_rows(ctx, ks, mode=args.mode, iters=args.iters,
                               seed=args.seed, budget=args.budget)
        body = "\n".join(f"{p},{k:.12g},{size},{bias:.12g}" for p, k, size, bias in rows)
        _emit(args, f"# {_provenance(args)}\np,k,size,bias\n" + body + "\n")
    return 0


def _cmd_implication(args) -> int:
    budgets = Budgets(rip_budget=args.rip_budget, pair_budget=args.pair_budget,
                      samples=args.samples, search_iters=args.search_iters)
    rep = run_implication(args.p, args.epsilon, gamma=args.gamma,
                          budgets=budgets, seed=args.seed, workers=args.workers)
    _emit_json(args, rep.to_json_dict())
    return 0


def _cmd_scaling(args) -> int:
    budgets = Budgets(rip_budget=args.budget, search_iters=args.iters)
    rows = run_scaling_study(args.primes, args.Kmax, budgets=budgets,
                             seed=args.seed, workers=args.workers)
    text = scaling_csv(rows, provenance=_provenance(args))
    if args.fit:
        fc = fit_constants(rows)
        text += (f"# fit c1_hat={fc['c1_hat']:.12g} c2_hat={fc['c2_hat']:.12g} "
                 f"max_abs_residual={max(abs(r) for r in fc['residuals']):.12g}\n")
    _emit(args, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="paleylab",
                                 description="Paley frame / Paley graph extractor verification lab")
    ap.add_argument("--version", action="version", version=f"paleylab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmtex=("json",)):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        if fmtex:
            p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("field", help="field context summary")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--require-1mod4", dest="require_1mod4", action="store_true")
    common(p, None)
    p.set_defaults(func=_cmd_field)

    p = sub.add_parser("etf", help="frame verification and matrix dumps")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--dump", choices=["verify", "matrix", "seidel", "gram"], default="verify")
    common(p, None)
    p.set_defaults(func=_cmd_etf)

    p = sub.add_parser("rip", help="RIP constants")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "search"], default="exact")
    p.add_argument("--budget", type=_count, default=1 << 31)
    p.add_argument("--iters", type=_count, default=200)
    common(p)
    p.set_defaults(func=_cmd_rip)

    p = sub.add_parser("charsum", help="double character sums and property tests")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--op", choices=["sum", "decomp", "chain", "karatsuba",
                                    "property", "property-search"], default="sum")
    p.add_argument("--S", type=_int_list, default=None)
    p.add_argument("--T", type=_int_list, default=None)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--sizes", type=_int_list, default=None)
    p.add_argument("--iters", type=_count, default=1000)
    p.add_argument("--budget", type=_count, default=1 << 31)
    common(p)
    p.set_defaults(func=_cmd_charsum)

    p = sub.add_parser("clique", help="Paley graph clique number")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--budget", type=_count, default=10**8)
    common(p, None)
    p.set_defaults(func=_cmd_clique)

    p = sub.add_parser("extractor", help="extractor bias measurements")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--op", choices=["bias", "worst", "bound", "sweep"], default="bias")
    p.add_argument("--S", type=_int_list, default=None)
    p.add_argument("--T", type=_int_list, default=None)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--kmin", type=float, default=0.0)
    p.add_argument("--kmax", type=float, default=3.0)
    p.add_argument("--kstep", type=float, default=1.0)
    p.add_argument("--mode", choices=["exhaustive", "search"], default="exhaustive")
    p.add_argument("--iters", type=_count, default=1000)
    p.add_argument("--budget", type=_count, default=1 << 31)
    common(p, None)
    p.set_defaults(func=_cmd_extractor)

    p = sub.add_parser("implication", help="end-to-end implication pipeline")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--rip-budget", dest="rip_budget", type=_count, default=1 << 31)
    p.add_argument("--pair-budget", dest="pair_budget", type=_count, default=1 << 31)
    p.add_argument("--samples", type=_count, default=10**5)
    p.add_argument("--search-iters", dest="search_iters", type=_count, default=2000)
    common(p, None)
    p.set_defaults(func=_cmd_implication)

    p = sub.add_parser("scaling", help="RIP-constant scaling study CSV")
    p.add_argument("--primes", type=_int_list, required=True)
    p.add_argument("--Kmax", type=int, default=4)
    p.add_argument("--budget", type=_count, default=1 << 31)
    p.add_argument("--iters", type=_count, default=200)
    p.add_argument("--fit", action="store_true", help="append fitted constants as a footer")
    common(p, None)
    p.set_defaults(func=_cmd_scaling)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except (PaleyLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal faults
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
