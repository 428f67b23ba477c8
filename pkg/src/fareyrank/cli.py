"""Command line interface.

Exit codes: 0 success, 2 usage, 3 input format or file error, 4 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path

from . import io
from .errors import (FareyError, InputFormatError, InvalidArgument, InvalidDenominator,
                     InvalidOrder, OutOfTable)
from .geometry import ApproxConfig, approximate_polygon
from .search import (BINARY, REGULA_FALSI, SearchKey, bench_iterations, closest_binary,
                     closest_bruteforce, closest_regula_falsi)
from .sequence import generate_sequence, make_fraction
from .shape import compare_cyclic, descriptor_of
from .table import DirectionTable, check_table_properties, rank_of

EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_DOMAIN = 4

BENCH_HEADER = ["order", "algo", "trials", "mean_iters", "min_iters", "max_iters", "agreement"]


class UsageError(Exception):
    pass


def parse_orders(spec: str) -> list[int]:
    """``A..B:STEP``, ``A..B`` or a single ``N``; a comma list of those also works."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        try:
            if ".." in part:
                rng, _, step = part.partition(":")
                a, b = rng.split("..")
                a, b, s = int(a), int(b), int(step) if step else 1
                if s < 1 or a > b:
                    raise ValueError
                out.extend(range(a, b + 1, s))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad --orders value {spec!r}, expected A..B:STEP") from None
    if not out or any(n < 1 for n in out):
        raise UsageError(f"bad --orders value {spec!r}")
    return out


def _fraction_arg(text: str) -> tuple[int, int]:
    p, sep, q = text.strip().partition("/")
    try:
        if not sep:
            raise ValueError
        p, q = int(p), int(q)
    except ValueError:
        raise UsageError(f"malformed fraction {text!r}, expected p/q") from None
    if q == 0:
        raise UsageError(f"zero denominator in {text!r}")
    if p < 0 or q < 0:
        raise UsageError(f"negative fraction {text!r}")
    return p, q


def _need_order(args):
    if args.order is None:
        raise UsageError("--order is required")
    if args.order < 1:
        raise UsageError(f"--order must be >= 1, got {args.order}")
    return args.order


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _sidecar(out, suffix=".png"):
    return Path(out).with_suffix(suffix) if out else None


def _log(msg):
    print(f"fareyrank: {msg}", file=sys.stderr)


def cmd_seq(args):
    order = _need_order(args)
    seq = generate_sequence(order)
    fmt = args.format or "text"
    rows = list(zip(range(1, seq.f_max + 1), seq.nums, seq.dens))
    if fmt == "json":
        text = json.dumps({"order": order, "f_max": seq.f_max,
                           "fractions": [list(r) for r in rows]}) + "\n"
    elif fmt == "csv":
        buf = _io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        text = buf.getvalue()
    elif fmt == "text":
        text = "".join(f"{k} {a}/{b}\n" for k, a, b in rows)
    else:
        raise UsageError(f"seq does not support --format {fmt}")
    _emit(text, args.out)
    if args.out:
        from .plotting import plot_rank_value
        plot_rank_value(seq, _sidecar(args.out))
    return 0


def cmd_rank(args):
    order = _need_order(args)
    if args.frac is None:
        raise UsageError("--frac is required")
    p, q = _fraction_arg(args.frac)
    if p > q:
        raise OutOfTable(f"{p}/{q} is greater than 1")
    f = make_fraction(p, q)
    _, table = io.cached_table(order, not args.no_cache, log=_log)
    rank = rank_of(table, f.num, f.den)
    if args.format == "json":
        print(json.dumps({"order": order, "fraction": str(f), "rank": rank}))
    else:
        print(rank)
    return 0


ALGOS = {"binary": closest_binary, "regula": closest_regula_falsi, "brute": None}


def cmd_closest(args):
    order = _need_order(args)
    if args.frac is None:
        raise UsageError("--frac is required")
    p, q = _fraction_arg(args.frac)
    try:
        key = SearchKey(p, q)
    except InvalidArgument as exc:
        raise UsageError(str(exc)) from None
    seq, table = io.cached_table(order, not args.no_cache, log=_log)
    algo = args.algo or "regula"
    if algo == "brute":
        res = closest_bruteforce(seq, key)
    else:
        res = ALGOS[algo](seq, table, key)
    if args.format == "json":
        doc = {"order": order, "key": f"{p}/{q}", "closest": str(res.closest),
               "rank": res.rank, "algorithm": res.algorithm, "iterations": res.iterations}
        if res.bracket is not None:
            doc["bracket"] = [res.bracket.f1, res.bracket.f2]
        print(json.dumps(doc))
        return 0
    print(res.closest)
    if args.stats:
        print(f"rank {res.rank}")
        print(f"algorithm {res.algorithm}")
        print(f"iterations {res.iterations}")
        if res.bracket is not None:
            print(f"bracket {res.bracket.f1} {res.bracket.f2}")
    return 0


def bench_csv(rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in rows:
        w.writerow([r.order, r.algo, r.trials, f"{float(r.mean_iters):.4f}",
                    r.min_iters, r.max_iters, r.agreement])
    return buf.getvalue()


def cmd_bench(args):
    orders = parse_orders(args.orders or "50..400:50")
    trials = 1000 if args.trials is None else args.trials
    if trials < 1:
        raise UsageError("--trials must be >= 1")
    seed = 0 if args.seed is None else args.seed
    rows = bench_iterations(orders, trials, seed)
    _emit(bench_csv(rows), args.out)
    if args.out:
        from .plotting import plot_iterations
        plot_iterations(rows, _sidecar(args.out),
                        title=f"{trials} keys per order, q in [n+1, 100n], seed {seed}")
    return 0


def _direction_table(order, no_cache) -> DirectionTable:
    seq, table = io.cached_table(order, not no_cache, log=_log)
    return DirectionTable(table, seq)


def cmd_approx(args):
    order = _need_order(args)
    if not args.input:
        raise UsageError("--input is required")
    delta_f = args.delta_f or 0
    if delta_f < 0:
        raise UsageError("--delta-f must be non-negative")
    contour = io.load_contour_input(args.input[0])
    dt = _direction_table(order, args.no_cache)
    polygon, metrics = approximate_polygon(dt, contour, ApproxConfig(order, delta_f))
    fmt = args.format or "json"
    if fmt == "svg":
        text = io.render_svg(contour, polygon)
    elif fmt in ("json", "text"):
        text = json.dumps(io.polygon_to_dict(polygon, metrics, order=order,
                                             delta_f=delta_f)) + "\n"
    else:
        raise UsageError(f"approx does not support --format {fmt}")
    _emit(text, args.out)
    if args.out:
        from .plotting import plot_approximation
        plot_approximation(contour, polygon, _sidecar(args.out),
                           title=f"n = {order}, delta f = {delta_f}, {len(polygon)} vertices")
    return 0


def cmd_shape(args):
    order = _need_order(args)
    if not args.input:
        raise UsageError("--input is required")
    if len(args.input) > 2:
        raise UsageError("shape takes one input, or two to compare")
    delta_f = args.delta_f or 0
    dt = _direction_table(order, args.no_cache)
    descs = []
    for path in args.input:
        contour = io.load_contour_input(path)
        polygon, _ = approximate_polygon(dt, contour, ApproxConfig(order, delta_f))
        descs.append(descriptor_of(dt, polygon))
    if len(descs) == 1:
        doc = io.descriptor_to_dict(descs[0])
    else:
        match = compare_cyclic(*descs)
        doc = {"descriptors": [io.descriptor_to_dict(d) for d in descs],
               "score": str(match.score), "score_degrees": float(match.score),
               "deltas_degrees": [float(x) for x in match.deltas]}
    _emit(json.dumps(doc) + "\n", args.out)
    return 0


def cmd_table(args):
    order = _need_order(args)
    _, table = io.cached_table(order, not args.no_cache, log=_log)
    rep = check_table_properties(table)
    doc = {"order": order, "f_max": rep.f_max, "rank_sum": rep.rank_sum,
           "rows_decreasing": rep.rows_decreasing, "columns_increasing": rep.columns_increasing,
           "column_differences_symmetric": rep.column_differences_symmetric}
    if args.format == "json":
        print(json.dumps(doc))
    else:
        for k, v in doc.items():
            print(f"{k} {v}")
    return 0 if rep.ok else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, help="Farey order n")
    common.add_argument("--frac", help="fraction as p/q")
    common.add_argument("--algo", choices=["binary", "regula", "brute"])
    common.add_argument("--stats", action="store_true", help="print rank, iterations, bracket")
    common.add_argument("--orders", help="orders as A..B:STEP")
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output file (a PNG figure is written beside it)")
    common.add_argument("--format", choices=["text", "json", "csv", "svg"])
    common.add_argument("--delta-f", dest="delta_f", type=int, help="rank-difference threshold")
    common.add_argument("--input", action="append", help="P1 PBM bitmap or contour JSON")
    common.add_argument("--no-cache", action="store_true", help="rebuild the rank table")

    parser = argparse.ArgumentParser(prog="fareyrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (
            ("seq", cmd_seq, "list F_n"),
            ("rank", cmd_rank, "rank of a fraction in F_n"),
            ("closest", cmd_closest, "closest member of F_n"),
            ("bench", cmd_bench, "iteration benchmark of both searches"),
            ("approx", cmd_approx, "polygonal approximation of a bitmap or contour"),
            ("shape", cmd_shape, "rank-difference shape descriptor"),
            ("table", cmd_table, "check rank table properties")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidArgument, InvalidOrder, InvalidDenominator) as exc:
        parser.print_usage(sys.stderr)
        _log(f"error: {exc}")
        return EXIT_USAGE
    except (InputFormatError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_FORMAT
    except FareyError as exc:
        _log(f"error: {type(exc).__name__}: {exc}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
