"""Command-line interface: ``quatks algebra | verify-all | padic``."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from quatks.catalog import CatalogError, load_raw
from quatks.padic import ModuleKind, ODModule, UnsupportedPrime, Zp2Ring, det_image, hom_module
from quatks.quat import QuatAlgebra, QuaternionError, discriminant, is_indefinite, ramified_places
from quatks.suites import RunConfig, local_module_records, run_all, summary


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def cmd_algebra(args) -> int:
    try:
        A = QuatAlgebra(args.a, args.b)
    except (QuaternionError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    d = discriminant(A)
    places = ["inf" if v == "real" else v for v in ramified_places(A)]
    kind = "split" if d == 1 and is_indefinite(A) else ("indefinite" if is_indefinite(A) else "definite")
    print(f"(a, b) = ({A.a}, {A.b})")
    print(f"d_B = {d}")
    print(f"type: {kind}")
    print(f"ramified places: {places}")
    return 0


def cmd_verify_all(args) -> int:
    try:
        cfg = RunConfig(seed=args.seed, tol=args.tol, samples=args.samples, N=args.N)
        raw = load_raw(args.catalog)
    except (CatalogError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            records = run_all(raw, cfg, mapper=pool.map)
    else:
        records = run_all(raw, cfg)
    summ = summary(records)
    lines = [_dump(r) for r in records] + [_dump(summ)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    for r in records:
        status = "PASS" if r["pass"] else "FAIL"
        detail = f"  ({r['error']})" if "error" in r else ""
        if "violated" in r and r["violated"]:
            detail = f"  (violated: {', '.join(r['violated'])})"
        print(f"{status}  {r['entry']:<18} {r['check']}{detail}")
    print(f"{summ['passed']}/{summ['total']} checks passed")
    return 0 if summ["pass"] else 1


def cmd_padic(args) -> int:
    try:
        R = Zp2Ring(args.p, args.N)
    except UnsupportedPrime as exc:
        print(f"error: unsupported: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.N < 2:
        print("error: N must be at least 2", file=sys.stderr)
        return 2
    T = ODModule.of_kind(ModuleKind(args.T), R)
    Tp = ODModule.of_kind(ModuleKind(args.Tprime), R)
    h = hom_module(Tp, T)
    v = det_image(Tp, T)
    print(f"p = {args.p}, N = {args.N}, T = {args.T}, T' = {args.Tprime}")
    print(f"hom rank: {h.rank}")
    print(f"generator: (alpha, beta) = ({h.generator[0].u}, {h.generator[1].u})")
    print(f"det-image valuation: {v}")
    ok = all(r["pass"] for r in local_module_records("padic", args.p, args.N))
    if args.out:
        rec = {"p": args.p, "N": args.N, "T": args.T, "Tprime": args.Tprime, "hom_rank": h.rank,
               "det_valuation": v, "suite_pass": ok}
        Path(args.out).write_text(_dump(rec) + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quatks", description="Quaternionic Shimura curve metric checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("algebra", help="discriminant and ramification of (a, b | Q)")
    a.add_argument("--a", required=True, help="rational, e.g. -1 or 3/2")
    a.add_argument("--b", required=True)
    a.set_defaults(func=cmd_algebra)

    v = sub.add_parser("verify-all", help="run every suite on a catalog")
    v.add_argument("--catalog", default=None, help="catalog JSON (default: $QUATKS_CATALOG or the bundled one)")
    v.add_argument("--out", default=None, help="write JSON Lines records here")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--samples", type=int, default=1000, help="positivity samples")
    v.add_argument("--N", type=int, default=20, help="p-adic precision")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("padic", help="Hom and determinant image for local modules")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--N", type=int, default=20)
    kinds = [k.value for k in ModuleKind]
    p.add_argument("--T", choices=kinds, default="standard")
    p.add_argument("--Tprime", choices=kinds, default="twisted")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_padic)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
