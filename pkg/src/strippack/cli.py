"""Command line interface.

Exit codes: 0 success, 1 a packing failed validation, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict

from . import analysis, bench as benchmod, binpack, generators
from .core import (InstanceError, StructuralError, instance_to_dict, load_instance, load_packing,
                   packing_to_dict, save_instance, save_packing, validate_packing)
from .render import render_svg


class UsageError(Exception):
    pass


def _emit(args, data, rows=None):
    """Write JSON (or CSV rows when --format csv) to --out or stdout."""
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        if args.format == "csv" and rows is not None:
            w = csv.writer(fh)
            w.writerows(rows)
        else:
            json.dump(data, fh, indent=1)
            fh.write("\n")
    finally:
        if args.out:
            fh.close()


def _finish_packing(args, instance, packing) -> int:
    report = validate_packing(instance, packing)
    if args.out:
        save_packing(packing, args.out)
    else:
        json.dump(packing_to_dict(packing), sys.stdout)
        sys.stdout.write("\n")
    if args.svg:
        render_svg(instance, packing, args.svg)
    print(f"{instance.name}: height {packing.height:.6g}", file=sys.stderr)
    if not report.ok:
        print(report, file=sys.stderr)
        return 1
    return 0


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.kind == "uniform":
        inst = generators.gen_uniform(args.n, seed, tuple(args.w_range), tuple(args.h_range))
    elif args.kind == "tiling":
        inst = generators.gen_tiling(args.n, args.H, seed)
    else:
        if not args.sizes:
            raise UsageError("equal-height needs --sizes")
        inst = generators.gen_equal_height(args.sizes, args.height)
    if args.out:
        save_instance(inst, args.out)
    else:
        json.dump(instance_to_dict(inst), sys.stdout, indent=1)
        sys.stdout.write("\n")
    return 0


def cmd_pack(args) -> int:
    instance = load_instance(args.input)
    settings = benchmod.Settings(c=args.c, r=getattr(args, "r", 0.9), eps=getattr(args, "eps", None))
    if args.mode == "offline":
        if args.alg not in ("nfdh", "ffdh") and not args.alg.startswith("bp-"):
            raise UsageError(f"{args.alg!r} is not an offline algorithm")
    else:
        if args.alg != "gp" and not args.alg.startswith("shelf-"):
            raise UsageError(f"{args.alg!r} is not an online algorithm")
        if args.params:
            settings.params = binpack.load_params(args.params)
    packing = benchmod.pack_with(args.alg, instance, settings)
    return _finish_packing(args, instance, packing)


def cmd_binpack(args) -> int:
    sizes = list(args.sizes)
    if args.input:
        with open(args.input) as fh:
            data = json.load(fh)
        sizes += data["sizes"] if isinstance(data, dict) else data
    if args.alg == "opt":
        n = binpack.bin_opt_bruteforce(sizes)
        _emit(args, {"algorithm": "opt", "bins": n}, [["algorithm", "bins"], ["opt", n]])
        return 0
    res = binpack.run_bin_algorithm(args.alg, sizes)
    rows = [["bin", "item", "size"]] + [[b, i, repr(s)] for b, bn in enumerate(res.bins) for i, s in bn]
    _emit(args, {"algorithm": res.algorithm, "count": res.count,
                 "bins": [[i for i, _ in b] for b in res.bins], "loads": res.loads()}, rows)
    return 0


def cmd_analyze(args) -> int:
    params = binpack.load_params(args.params)
    if args.what == "bound":
        b = analysis.ratio_upper_bound(params, maximal_only=args.maximal_only, cap=args.cap)
        data = {"params": params.name, "bound": b.value, "branch": b.branch,
                "patterns": [list(p.q) for p in b.patterns], "mix": list(b.mix),
                "n_patterns": b.n_patterns}
        rows = [["bound", "branch", "pattern", "mix"]] + [
            [repr(b.value), b.branch, " ".join(map(str, p.q)), repr(m)]
            for p, m in zip(b.patterns, b.mix)]
    else:
        if not args.input:
            raise UsageError("analyze weight needs -i")
        inst = load_instance(args.input)
        w = analysis.total_weight(((r.w, r.h) for r in inst.rects), params)
        xi = analysis.consolidate(w, params)
        data = {"instance": inst.name, "weight": w.tolist(), "xi": xi}
        rows = [["instance", "xi"] + [f"w{i}" for i in range(len(w))],
                [inst.name, repr(xi)] + [repr(float(v)) for v in w]]
    _emit(args, data, rows)
    return 0


def cmd_bench(args) -> int:
    settings = benchmod.Settings(c=args.c, r=args.r, eps=args.eps)
    if args.params:
        settings.params = binpack.load_params(args.params)
    algs = [a for a in args.algs.split(",") if a]
    try:
        records = benchmod.bench(args.instances, algs, args.out, settings)
    except benchmod.PackingInvalid as exc:
        print(exc, file=sys.stderr)
        return 1
    if not args.out:
        w = csv.DictWriter(sys.stdout, fieldnames=benchmod.COLUMNS)
        w.writeheader()
        for r in records:
            w.writerow(benchmod._fmt(asdict(r)))
    return 0


def cmd_render(args) -> int:
    instance = load_instance(args.input)
    packing = load_packing(args.packing)
    if not args.out:
        raise UsageError("render needs -o/--out")
    render_svg(instance, packing, args.out)
    return 0 if validate_packing(instance, packing).ok else 1


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    # subcommands repeat the flags with SUPPRESS so they do not reset
    # values given before the subcommand name
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=d(None))
    g.add_argument("-o", "--out", default=d(None), help="output file (default stdout)")
    g.add_argument("--format", choices=("json", "csv"), default=d("json"))
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(False)
    p = argparse.ArgumentParser(prog="strippack", parents=[_global_flags(True)],
                                description="Strip and bin packing algorithms.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate an instance")
    g.add_argument("kind", choices=("uniform", "tiling", "equal-height"))
    g.add_argument("-n", type=int, default=100)
    g.add_argument("--H", type=float, default=10.0, help="tiling height")
    g.add_argument("--w-range", type=float, nargs=2, default=(0.0, 1.0))
    g.add_argument("--h-range", type=float, nargs=2, default=(0.0, 1.0))
    g.add_argument("--sizes", type=float, nargs="*", default=[])
    g.add_argument("--height", type=float, default=1.0)
    g.set_defaults(func=cmd_gen)

    pk = sub.add_parser("pack", help="pack an instance file")
    modes = pk.add_subparsers(dest="mode", required=True)
    off = modes.add_parser("offline", parents=[common])
    off.add_argument("--alg", required=True,
                     help="bp-ffd | bp-ff | bp-nf | bp-harmonic:<k> | bp-sh:<paramfile> | nfdh | ffdh")
    off.add_argument("--c", type=float, default=20.0)
    on = modes.add_parser("online", parents=[common])
    on.add_argument("--alg", required=True, help="gp | shelf-nf | shelf-ff | shelf-harmonic:<k>")
    on.add_argument("--eps", type=float, default=None)
    on.add_argument("--r", type=float, default=0.9)
    on.add_argument("--c", type=float, default=20.0)
    on.add_argument("--params", default=None, help="parameter file, harmonic:<k> or toy")
    for q in (off, on):
        q.add_argument("-i", "--input", required=True)
        q.add_argument("--svg", default=None)
        q.set_defaults(func=cmd_pack)

    b = sub.add_parser("binpack", parents=[common], help="1-D bin packing")
    b.add_argument("--alg", required=True,
                   help="nf | ff | ffd | harmonic:<k> | superharmonic:<params> | opt")
    b.add_argument("sizes", type=float, nargs="*")
    b.add_argument("-i", "--input", default=None, help="JSON list of sizes")
    b.set_defaults(func=cmd_binpack)

    a = sub.add_parser("analyze", help="weighting-system analysis")
    whats = a.add_subparsers(dest="what", required=True)
    ab = whats.add_parser("bound", parents=[common])
    ab.add_argument("--maximal-only", action="store_true")
    ab.add_argument("--cap", type=int, default=analysis.DEFAULT_CAP)
    aw = whats.add_parser("weight", parents=[common])
    aw.add_argument("-i", "--input", default=None)
    for q in (ab, aw):
        q.add_argument("--params", required=True)
        q.set_defaults(func=cmd_analyze)

    be = sub.add_parser("bench", parents=[common], help="benchmark algorithms")
    be.add_argument("--instances", required=True, help="glob of instance files")
    be.add_argument("--algs", required=True, help="comma separated algorithm names")
    be.add_argument("--c", type=float, default=20.0)
    be.add_argument("--r", type=float, default=0.9)
    be.add_argument("--eps", type=float, default=None)
    be.add_argument("--params", default=None)
    be.set_defaults(func=cmd_bench)

    rd = sub.add_parser("render", parents=[common], help="draw a packing as SVG")
    rd.add_argument("-i", "--input", required=True)
    rd.add_argument("-p", "--packing", required=True)
    rd.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StructuralError as exc:
        print(f"strippack: invalid packing: {exc}", file=sys.stderr)
        return 1
    except (UsageError, benchmod.UnknownAlgorithm, binpack.ParamsError, InstanceError,
            ValueError, FileNotFoundError) as exc:
        print(f"strippack: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
