"""Batch command-line front-end.

Subcommands::

    exact          print the exact-probability registry (optionally CSV)
    quad           integral routes for a single entry law or product marginal
    mc             Monte Carlo sweep from a JSON config, tidy CSV out
    fit            saturation power-law fit of a CSV series
    correlations   entry-correlation metric for 2x2 ordinary products

Exit codes: 0 success, 2 quadrature nonconvergence, 3 unsupported
family/route, 4 config schema violation, 5 model violation.  The worker
count honours the REALSPEC_THREADS environment variable and is recorded
in the run manifest written next to CSV outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import subprocess
import sys
import time

import jsonschema

from . import analytic, quadrature
from ._quad import QuadratureError
from .distributions import (DensityUnavailable, DistributionSpec,
                            ParameterDomainError, ProductMarginal,
                            spec_from_dict, spec_to_dict)
from .matrixlab import (ExperimentConfig, ModelViolationError,
                        _worker_counts, config_from_dict, correlation_metric,
                        estimate_Pnk, fit_saturation, results_to_csv,
                        tally_rows)
from .rng import RandomStream

EXIT_NONCONVERGENCE = 2
EXIT_UNSUPPORTED = 3
EXIT_BAD_CONFIG = 4
EXIT_MODEL_VIOLATION = 5


def _git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
            cwd=os.path.dirname(os.path.abspath(__file__)),
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except Exception:
        pass
    return "unknown"


def write_manifest(path: str, name: str, config: dict, seed, outputs: list,
                   wall_time: float):
    """Run manifest: re-running with the same manifest (same seed and
    worker count) reproduces the listed CSV files byte for byte."""
    manifest = {
        "experiment": name,
        "config": config,
        "code_version": _git_describe(),
        "wall_time_s": round(wall_time, 3),
        "seed": seed,
        "workers": _worker_counts(),
        "outputs": outputs,
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _spec_from_args(args) -> DistributionSpec:
    params = {}
    for key in ("gamma", "mu", "nu", "eta", "a", "mu_log", "sigma_log"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if args.family in ("lognormal", "lognormal_product"):
        # the lognormal family already encodes the product length
        params["K"] = getattr(args, "K", 1) or 1
        if hasattr(args, "K"):
            args.K = 1
    obj = {"family": args.family, "params": params}
    if getattr(args, "scale", None) is not None:
        obj["scale"] = args.scale
    return spec_from_dict(obj)


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------


def cmd_exact(args) -> int:
    reg = analytic.registry()
    if args.output:
        analytic.registry_to_csv(args.output)
        print(f"wrote {len(reg)} rows to {args.output}")
        return 0
    width = max(len(k) for k in reg)
    for label in sorted(reg):
        ev = reg[label]
        print(f"{label:<{width}}  {ev.value:.9f}  [{ev.category}] {ev.provenance}")
    return 0


def cmd_quad(args) -> int:
    try:
        spec = _spec_from_args(args)
    except (ParameterDomainError, jsonschema.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    try:
        if args.K > 1:
            pm = ProductMarginal(spec, args.K)
            if args.route == "cf":
                raise quadrature.UnsupportedRouteError(
                    "product marginals are integrated on the convolution route"
                )
            result = quadrature.prob_real_product_law(pm, tol=args.tol)
        elif args.route == "cf":
            result = quadrature.prob_real_cf_route(spec, tol=args.tol or 1e-6)
        else:
            result = quadrature.prob_real_convolution_route(spec, tol=args.tol)
    except quadrature.UnsupportedRouteError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DensityUnavailable as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except QuadratureError as exc:
        print(f"nonconvergence: {exc}", file=sys.stderr)
        if exc.best is not None:
            print(f"best={exc.best:.9f} error~{exc.error:.2e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    print(f"family={spec.family} params={json.dumps(spec.params, sort_keys=True)} "
          f"scale={spec.scale:g} K={args.K} route={result.method}")
    print(f"P=%.9f error~%.2e evaluations=%d" %
          (result.value, result.abs_error_estimate, result.evaluations))
    return 0


def _sweep_rows(base: dict, Ks: list) -> list:
    rows = []
    for K in Ks:
        cfg_obj = dict(base)
        cfg_obj["K"] = int(K)
        cfg = config_from_dict(cfg_obj)
        tally = estimate_Pnk(cfg)
        rows.extend(tally_rows(cfg, tally))
    return rows


def cmd_mc(args) -> int:
    t0 = time.time()
    try:
        with open(args.config) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    Ks = obj.pop("K_sweep", None) or [obj.get("K", 1)]
    try:
        config_from_dict({**obj, "K": int(Ks[0])})  # schema check up front
    except Exception as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    rows = _sweep_rows(obj, Ks)
    results_to_csv(rows, args.output)
    outputs = [args.output]
    if args.manifest:
        write_manifest(args.manifest, "mc", {**obj, "K_sweep": list(Ks)},
                       obj.get("seed", 0), outputs, time.time() - t0)
        outputs.append(args.manifest)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def cmd_fit(args) -> int:
    series = {}
    try:
        with open(args.series) as fh:
            for row in csv.DictReader(fh):
                if args.k is not None and int(row["k"]) != args.k:
                    continue
                if args.k is None and int(row["k"]) != int(row["n"]):
                    continue  # default: the all-real count
                series[int(row["K"])] = (int(row["K"]), float(row["phat"]),
                                         float(row["stderr"]))
    except (OSError, KeyError, ValueError) as exc:
        print(f"bad series: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    try:
        fit = fit_saturation(sorted(series.values()), fix_Pinf=args.pinf)
    except ModelViolationError as exc:
        print(f"model violation: {exc}", file=sys.stderr)
        return EXIT_MODEL_VIOLATION
    except ValueError as exc:
        print(f"bad series: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    print(f"P_inf={fit.P_inf:.6f} C={fit.C:.6f} theta={fit.theta:.6f} "
          f"residual={fit.residual:.4g}")
    return 0


def cmd_correlations(args) -> int:
    try:
        spec = _spec_from_args(args)
    except (ParameterDomainError, jsonschema.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    rep = correlation_metric(args.K, spec, args.samples, RandomStream(args.seed),
                             renormalize=args.renormalize,
                             divide_by_K=args.divide_by_K)
    print(f"K={rep.K} samples={rep.samples} renormalized={rep.renormalized} "
          f"divided_by_K={rep.divided_by_K}")
    for i, (c, se, und) in enumerate(zip(rep.C, rep.stderr, rep.undefined), 1):
        tag = "  (undefined: negative base, even K)" if und else ""
        print(f"C_{i} = {c:.4f} +- {se:.4f}{tag}")
    return 0


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


def _add_family_args(p: argparse.ArgumentParser):
    p.add_argument("--family", required=True)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--mu-log", dest="mu_log", type=float, default=None)
    p.add_argument("--sigma-log", dest="sigma_log", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="realspec",
        description="Probability of real eigenvalues of random 2x2 matrices "
                    "and their products: exact values, quadrature, Monte Carlo.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="print the exact-probability registry")
    p.add_argument("--output", help="write CSV instead of printing")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("quad", help="integral evaluation of P(both real)")
    _add_family_args(p)
    p.add_argument("--route", choices=["conv", "cf"], default="conv")
    p.add_argument("--K", type=int, default=1,
                   help="Hadamard product length (product-marginal law)")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_quad)

    p = sub.add_parser("mc", help="Monte Carlo sweep from a JSON config")
    p.add_argument("config", help="experiment JSON (see schemas/)")
    p.add_argument("--output", required=True, help="CSV path")
    p.add_argument("--manifest", help="write a run manifest JSON here")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("fit", help="fit P(K) = P_inf - C/K^theta to a CSV series")
    p.add_argument("series", help="CSV produced by the mc subcommand")
    p.add_argument("--pinf", type=float, default=None,
                   help="fix the asymptote instead of profiling it")
    p.add_argument("--k", type=int, default=None,
                   help="real-count column to fit (default: all-real, k = n)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("correlations", help="entry correlations of 2x2 products")
    _add_family_args(p)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--renormalize", action="store_true",
                   help="per-step Frobenius renormalization variant")
    p.add_argument("--divide-by-K", dest="divide_by_K", action="store_true",
                   help="divide covariances by K before the K-th root")
    p.set_defaults(func=cmd_correlations)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
