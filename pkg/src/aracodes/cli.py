"""Command-line workbench: construct, de, verify, simulate."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import nonneg, sim, tilting
from .constructions import CATALOG, build_catalog_pair, solve_b
from .powerseries import InvalidParameterError, ValidityError
from .codec import ConstructionError


def _add_pair_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--family", required=True, choices=sorted(CATALOG))
    sub.add_argument("--p", type=float, required=True, help="design erasure probability")
    sub.add_argument("--b", default=None, help="series parameter, or 'auto' to solve for it")
    sub.add_argument("--M", type=int, default=512, help="series truncation depth")
    sub.add_argument(
        "--allow-unproven",
        action="store_true",
        help="accept the numerically observed validity range for the regular families",
    )


def _parse_b(value):
    if value is None or value == "auto":
        return None
    return float(value)


def _build_pair(args):
    return build_catalog_pair(
        args.family,
        args.p,
        b=_parse_b(args.b),
        order=args.M,
        allow_unproven=getattr(args, "allow_unproven", False),
    )


def cmd_construct(args) -> int:
    pair = _build_pair(args)
    print(pair.to_json())
    return 0


def cmd_de(args) -> int:
    pair = _build_pair(args)
    xs = np.linspace(0.0, 1.0, args.grid + 1)[1:]
    resid = tilting.de_residual(pair, xs)
    for x, r in zip(xs, resid):
        print(f"{x:.6f},{r:.6e}")
    stab = tilting.stability(pair)
    chi = tilting.complexity(pair)
    trunc = tilting.truncate_pair(pair, args.M, args.M)
    summary = {
        "family": args.family,
        "p": args.p,
        "b": pair.b,
        "max_abs_residual": float(np.max(np.abs(resid))),
        "p_star": tilting.threshold_search(trunc),
        "stable_at_0": stab.stable_at_0,
        "unstable_at_1": stab.unstable_at_1,
        "margins": [stab.margin_at_0, stab.margin_at_1],
        "design_rate": tilting.design_rate(pair),
        "chi_encode": chi.chi_encode,
        "chi_decode": chi.chi_decode,
    }
    print(json.dumps(summary))
    return 0


def cmd_verify(args) -> int:
    if args.family in ("bit-regular-ara", "check-regular-ara"):
        p = args.p if args.family == "bit-regular-ara" else 1.0 - args.p
        report = nonneg.verify_bitreg_ara(p, grid_n=args.grid)
        series_min = nonneg.first_coefficients_min(args.family, args.p)
    elif args.family in ("check-regular-nsira", "bit-regular-aldpc"):
        p = args.p if args.family == "check-regular-nsira" else 1.0 - args.p
        report = nonneg.verify_checkreg_nsira(p, grid_n=args.grid)
        series_min = nonneg.first_coefficients_min(args.family, args.p)
    elif args.family.startswith("self-matched"):
        b = _parse_b(args.b)
        b = solve_b(args.p) if b is None else b
        tag = args.family.rsplit("-", 1)[-1].upper()
        ok = nonneg.self_matched_condition(args.p, b, tag)
        cstar = nonneg.C_STAR
        c1, c2 = nonneg.self_matched_scales(args.p, b)
        candidate = nonneg.self_matched_candidate(max(c1, c2))
        report = nonneg.polya_verify(candidate, grid_n=args.grid)
        series_min = float(nonneg.log_ratio_series(c1, 200).coeffs.min())
        print(
            json.dumps(
                {
                    "family": args.family,
                    "p": args.p,
                    "b": b,
                    "closed_form_condition": bool(ok),
                    "critical_c": cstar,
                    "verdict": report.verdict,
                    "min_second_difference": report.min_second_difference,
                    "integral": report.integral,
                    "head_min": report.head_min,
                    "first_200_coeff_min": series_min,
                }
            )
        )
        return 0
    else:
        raise InvalidParameterError(f"no verifier for family {args.family!r}")
    print(
        json.dumps(
            {
                "family": args.family,
                "p": args.p,
                "verdict": report.verdict,
                "min_second_difference": report.min_second_difference,
                "integral": report.integral,
                "head_min": report.head_min,
                "first_200_coeff_min": series_min,
            }
        )
    )
    return 0


def cmd_simulate(args) -> int:
    cfg = sim.SimConfig(
        family=args.family,
        p_start=args.p_start,
        p_stop=args.p_stop,
        p_step=args.p_step,
        k=args.k,
        trials=args.trials,
        seed=args.seed,
        d_L=args.d_l,
        d_R=args.d_r,
        m_outer=args.outer_m,
        alpha=args.alpha,
        design_p=args.design_p,
        b=_parse_b(args.b),
        order=args.M,
        use_outer=not args.no_outer,
        all_zero=args.all_zero,
    )
    result = sim.run_sweep(cfg)
    sim.emit_csv(result, args.out)
    print(f"wrote {len(result.p_values)} sweep points to {args.out} in {result.wall_time:.1f}s")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="aracodes")
    subs = parser.add_subparsers(dest="command", required=True)

    p_con = subs.add_parser("construct", help="emit a degree pair as JSON")
    _add_pair_args(p_con)
    p_con.set_defaults(func=cmd_construct)

    p_de = subs.add_parser("de", help="fixed-point residual grid and threshold summary")
    _add_pair_args(p_de)
    p_de.add_argument("--grid", type=int, default=1000)
    p_de.set_defaults(func=cmd_de)

    p_ver = subs.add_parser("verify", help="non-negativity verification report")
    _add_pair_args(p_ver)
    p_ver.add_argument("--grid", type=int, default=8192)
    p_ver.set_defaults(func=cmd_verify)

    p_sim = subs.add_parser("simulate", help="Monte Carlo erasure-channel sweep")
    p_sim.add_argument("--family", required=True, choices=sorted(CATALOG))
    p_sim.add_argument("--p-start", type=float, required=True)
    p_sim.add_argument("--p-stop", type=float, required=True)
    p_sim.add_argument("--p-step", type=float, required=True)
    p_sim.add_argument("--k", type=int, required=True)
    p_sim.add_argument("--trials", type=int, default=1000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--design-p", type=float, default=None,
                       help="fix the code design at this erasure probability")
    p_sim.add_argument("--alpha", type=float, default=1.0)
    p_sim.add_argument("--outer-m", type=int, default=0)
    p_sim.add_argument("--no-outer", action="store_true")
    p_sim.add_argument("--all-zero", action="store_true")
    p_sim.add_argument("--d-l", type=int, default=30)
    p_sim.add_argument("--d-r", type=int, default=30)
    p_sim.add_argument("--b", default=None)
    p_sim.add_argument("--M", type=int, default=256)
    p_sim.add_argument("--out", required=True)
    p_sim.set_defaults(func=cmd_simulate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParameterError, ValidityError, ConstructionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
