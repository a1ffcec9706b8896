"""Command-line interface: build, trace, verify, sweep, info.

Exit codes: 0 ok, 1 verification mismatch or failed sweep rows, 2 usage,
3 I/O or malformed input, 4 unreachable sink.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .builders import (
    SCORINGS,
    GadgetSpec,
    GridSpec,
    build_chain,
    build_grid,
    build_lb_gadget,
    build_random_layered,
    parse_scoring,
    random_string,
)
from .dag import DagError, DpDag, degree_stats, frontier_width
from .dagfile import DagFileError, read_dag, write_dag
from .oracle import oracle_metrics, oracle_solve, oracle_traceback, verify
from .semiring import BOTTOM, format_value
from .traceback import (
    ASSERTION_LEVELS,
    MIDPOINT_RULES,
    NoWitnessError,
    TracebackConfig,
    traceback,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO, EXIT_UNREACHABLE = 0, 1, 2, 3, 4

FAMILIES = ("grid", "banded", "chain", "layered", "gadget")
ALPHABET = "ACGT"

# sweep parameters per family, with defaults
SWEEP_PARAMS = {
    "grid": {"m": 8, "n": 64, "scoring": "lcs"},
    "banded": {"N": 64, "B": 8, "scoring": "edit"},
    "chain": {"T": 1024, "step": 1},
    "layered": {"layers": 8, "width": 4, "density": 0.5},
    "gadget": {"omega": 4, "encode": 1},
}

CSV_FIELDS = [
    "family", "params", "seed", "T", "omega", "peak_live_words", "depth",
    "forward_passes", "wall_time", "status",
]


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# instance construction shared by `build` and `sweep`

def _strings(m: int, n: int, seed: int) -> tuple[str, str]:
    rng = random.Random(seed)
    return random_string(m, ALPHABET, rng), random_string(n, ALPHABET, rng)


def make_instance(family: str, params: dict, seed: int) -> DpDag:
    """Build one instance of ``family`` from sweep-style parameters."""
    p = {**SWEEP_PARAMS[family], **params}
    if family == "grid":
        a, b = _strings(int(p["m"]), int(p["n"]), seed)
        return build_grid(GridSpec(a, b, parse_scoring(str(p["scoring"]))))
    if family == "banded":
        N, B = int(p["N"]), int(p["B"])
        a, b = _strings(N, N, seed)
        return build_grid(GridSpec(a, b, parse_scoring(str(p["scoring"])), band=B // 2))
    if family == "chain":
        return build_chain(int(p["T"]), seed, int(p["step"]))
    if family == "layered":
        return build_random_layered(int(p["layers"]), int(p["width"]), float(p["density"]), seed)
    omega = int(p["omega"])
    rng = random.Random(seed)
    bits = [rng.randint(0, 1) for _ in range(omega)]
    bits[rng.randrange(omega)] = 1
    return build_lb_gadget(GadgetSpec(omega, tuple(bits), encode=bool(int(p["encode"]))))


def _build_from_args(args) -> DpDag:
    fam = args.family
    if fam in ("grid", "banded"):
        if args.a is not None or args.b is not None:
            a, b = args.a or "", args.b or ""
        else:
            if args.m is None or args.n is None:
                raise UsageError("grid needs --a/--b or --m/--n")
            a, b = _strings(args.m, args.n, args.seed)
        band = None
        if fam == "banded":
            if args.band is None:
                raise UsageError("banded needs --band B")
            band = args.band // 2
        return build_grid(GridSpec(a, b, parse_scoring(args.scoring), args.order, band))
    if fam == "chain":
        if args.length is None:
            raise UsageError("chain needs --length")
        return build_chain(args.length, args.seed, args.step)
    if fam == "layered":
        if args.layers is None or args.width is None:
            raise UsageError("layered needs --layers and --width")
        return build_random_layered(args.layers, args.width, args.density, args.seed or 0)
    if args.omega is None or args.pattern is None:
        raise UsageError("gadget needs --omega and --pattern")
    if not re.fullmatch(r"[01]+", args.pattern):
        raise UsageError("--pattern must be a bit string such as 0101")
    return build_lb_gadget(
        GadgetSpec.from_bits(args.omega, args.pattern, layer_count=args.layers, encode=args.encode)
    )


def cmd_build(args) -> int:
    dag = _build_from_args(args)
    write_dag(dag, args.out)
    print(f"T={dag.vertex_count}")
    print(f"omega={frontier_width(dag)}")
    return EXIT_OK


def _config(args) -> TracebackConfig:
    return TracebackConfig(
        base_case_threshold=args.base_case,
        assertion_level=args.assert_level,
        midpoint_rule=args.midpoint,
    )


def _sink(dag: DpDag, sink: Optional[int]) -> int:
    return dag.sinks[-1] if sink is None else sink


def _metrics_block(m) -> dict:
    return {
        "value": format_value(m.value),
        "peak_live_words": m.peak_live_words,
        "omega": m.omega,
        "depth": m.max_recursion_depth,
        "forward_passes": m.forward_pass_count,
        "vertex_visits": m.vertex_visit_count,
    }


def _emit_metrics(block: dict, fmt: str) -> None:
    if fmt == "json":
        print(_dump(block))
        return
    keys = sorted(block)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(keys)
    w.writerow([block[k] for k in keys])


def cmd_trace(args) -> int:
    dag = read_dag(args.dag)
    sink = _sink(dag, args.sink)
    if args.oracle:
        if not 1 <= sink <= dag.vertex_count:
            raise IndexError(f"sink {sink} outside 1..{dag.vertex_count}")
        table = oracle_solve(dag)
        path = oracle_traceback(table, sink)
        metrics = oracle_metrics(dag, table, sink)
    else:
        path, metrics = traceback(dag, sink, _config(args))
    for v in path:
        print(v)
    _emit_metrics(_metrics_block(metrics), args.format)
    return EXIT_OK


def _fuzzed(dag: DpDag, sink: int, seed: int) -> DpDag:
    """Copy of ``dag`` with one edge weight perturbed on the engine side.

    Lowering an edge of the canonical path by 1 always changes either the
    optimum or the canonical path, so verification must then fail.  When no
    such edge can be lowered a random edge is raised by 1 instead.
    """
    rng = random.Random(seed)
    if not dag.edges:
        return dag
    sr = dag.semiring
    try:
        path = oracle_traceback(oracle_solve(dag), sink).vertices
    except (NoWitnessError, IndexError):
        path = ()
    lowerable = [
        (u, v) for u, v in zip(path, path[1:])
        if dag.weight(u, v) != BOTTOM and not (sr.nonnegative and dag.weight(u, v) == 0)
    ]
    if lowerable:
        u, v = rng.choice(lowerable)
        return dag.with_weights({(u, v): dag.weight(u, v) - 1})
    u, v, w = rng.choice(dag.edges)
    return dag.with_weights({(u, v): 0 if w == BOTTOM else w + 1})


def cmd_verify(args) -> int:
    dag = read_dag(args.dag)
    sink = _sink(dag, args.sink)
    engine_dag = _fuzzed(dag, sink, args.fuzz) if args.fuzz is not None else None
    report, _ = verify(dag, sink, _config(args), engine_dag=engine_dag)
    block = report.as_dict()
    if args.format == "json":
        print(_dump(block))
    else:
        flat = {k: v for k, v in block.items() if k != "ratios"}
        flat.update({f"ratio_{k}": v for k, v in block["ratios"].items()})
        _emit_metrics(flat, "csv")
    return EXIT_OK if report.equal else EXIT_MISMATCH


def cmd_info(args) -> int:
    dag = read_dag(args.dag)
    info = {
        "T": dag.vertex_count,
        "omega": frontier_width(dag),
        "edges": len(dag.edges),
        "semiring": dag.semiring_tag,
        "delta_max": dag.delta_max,
        "sources": len(dag.sources),
        "sinks": len(dag.sinks),
        **degree_stats(dag),
    }
    _emit_metrics(info, args.format)
    return EXIT_OK


# sweep

_POW_RANGE = re.compile(r"2\^(\d+)\.\.2\^(\d+)")
_INT_RANGE = re.compile(r"(-?\d+)\.\.(-?\d+)")


def parse_values(text: str) -> list[str]:
    """``a,b,c``, ``lo..hi`` (inclusive) or ``2^a..2^b`` (powers of two)."""
    out: list[str] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if m := _POW_RANGE.fullmatch(part):
            out += [str(2**k) for k in range(int(m[1]), int(m[2]) + 1)]
        elif m := _INT_RANGE.fullmatch(part):
            out += [str(k) for k in range(int(m[1]), int(m[2]) + 1)]
        else:
            out.append(part)
    if not out:
        raise UsageError(f"empty value range {text!r}")
    return out


def parse_param(text: str) -> tuple[str, list[str]]:
    key, sep, vals = text.partition("=")
    if not sep or not key:
        raise UsageError(f"--param expects name=values, got {text!r}")
    return key.strip(), parse_values(vals)


def sweep_rows(family: str, grid: dict, seeds: Sequence[int], config: TracebackConfig, jobs: int = 1):
    """Run every parameter combination and seed; rows come back in input order."""
    unknown = set(grid) - set(SWEEP_PARAMS[family])
    if unknown:
        raise UsageError(f"unknown {family} parameters: {sorted(unknown)}")
    keys = sorted(grid)
    fixed = ";".join(f"{k}={grid[k][0]}" for k in keys if len(grid[k]) == 1)
    combos = [dict(zip(keys, vals)) for vals in itertools.product(*(grid[k] for k in keys))]
    tasks = [(c, s) for c in combos for s in seeds]

    def run(task):
        params, seed = task
        row = {
            "family": family,
            "params": ";".join(f"{k}={params[k]}" for k in keys),
            "seed": seed,
            "group": f"{family} {fixed}".strip(),
        }
        t0 = time.perf_counter()
        try:
            dag = make_instance(family, params, seed)
            row["T"] = dag.vertex_count
            _, m = traceback(dag, dag.sinks[-1], config)
            row.update(
                omega=m.omega,
                peak_live_words=m.peak_live_words,
                depth=m.max_recursion_depth,
                forward_passes=m.forward_pass_count,
                status="ok",
            )
        except (DagError, ValueError, NoWitnessError, AssertionError) as exc:
            row["status"] = f"error: {type(exc).__name__}: {exc}"
        row["wall_time"] = round(time.perf_counter() - t0, 6)
        return row

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, tasks))
    return [run(t) for t in tasks]


def cmd_sweep(args) -> int:
    grid = dict(parse_param(p) for p in args.param or [])
    seeds = [int(s) for s in parse_values(args.seeds)]
    rows = sweep_rows(args.family, grid, seeds, _config(args), args.jobs)
    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    figure = args.figure
    if figure is None and args.out:
        figure = str(Path(args.out).with_suffix(".png"))
    if figure and not args.no_figure:
        from .report import plot_sweep

        plot_sweep(rows, figure, title=f"{args.family} sweep")
        print(f"figure: {figure}", file=sys.stderr)
    failed = [r for r in rows if r["status"] != "ok"]
    for r in failed:
        print(f"row failed: {r['params']} seed={r['seed']}: {r['status']}", file=sys.stderr)
    return EXIT_MISMATCH if failed else EXIT_OK


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base-case", type=int, default=None, metavar="N",
                   help="base-case interval length (default ceil(log2(T)^2))")
    p.add_argument("--assert-level", choices=ASSERTION_LEVELS, default="decomposition")
    p.add_argument("--midpoint", choices=MIDPOINT_RULES, default="canonical",
                   help="crossing-vertex rule; smallest-index gives an optimal, not always canonical, path")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unihirsch", description="Frontier-width-space traceback for DP DAGs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an instance and write a DAG file")
    b.add_argument("family", choices=FAMILIES)
    b.add_argument("--out", required=True)
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--a", help="first string (grid rows)")
    b.add_argument("--b", help="second string (grid columns)")
    b.add_argument("--m", type=int, help="random first-string length")
    b.add_argument("--n", type=int, help="random second-string length")
    b.add_argument("--scoring", default="lcs", help=f"{'|'.join(SCORINGS)} or match,mismatch,gap")
    b.add_argument("--order", choices=("column-major", "row-major"), default="column-major")
    b.add_argument("--band", type=int, help="band width B (cells with |i-j| <= B/2)")
    b.add_argument("--length", type=int, help="chain length T")
    b.add_argument("--step", type=int, default=1, help="chain dependency span k")
    b.add_argument("--layers", type=int, help="layer count (layered, gadget)")
    b.add_argument("--width", type=int, help="layer width")
    b.add_argument("--density", type=float, default=0.5)
    b.add_argument("--omega", type=int)
    b.add_argument("--pattern", help="gadget active lanes, e.g. 0101")
    b.add_argument("--encode", action="store_true", help="gadget encodes the whole pattern")
    b.set_defaults(func=cmd_build)

    t = sub.add_parser("trace", help="print the canonical witness path and metrics")
    t.add_argument("dag")
    t.add_argument("--sink", type=int, default=None, help="default: largest declared sink")
    t.add_argument("--oracle", action="store_true", help="use the full-table solver")
    t.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    _add_config(t)
    t.set_defaults(func=cmd_trace)

    v = sub.add_parser("verify", help="compare traceback against the full-table oracle")
    v.add_argument("dag")
    v.add_argument("--sink", type=int, default=None)
    v.add_argument("--fuzz", type=int, default=None, metavar="SEED",
                   help="perturb one edge weight on the engine side (negative control)")
    v.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    _add_config(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="measure metrics over parameter ranges")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("--param", action="append", metavar="NAME=VALUES",
                   help="e.g. m=4,8,16 or T=2^10..2^16 or B=4..8")
    s.add_argument("--seeds", "--seed", default="1", help="seed list or range")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--figure", help="PNG path (default: CSV path with .png)")
    s.add_argument("--no-figure", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    _add_config(s)
    s.set_defaults(func=cmd_sweep)

    i = sub.add_parser("info", help="print T, frontier width and degree statistics")
    i.add_argument("dag")
    i.add_argument("--format", choices=("json", "csv"), default="json")
    i.set_defaults(func=cmd_info)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, DagFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NoWitnessError as exc:
        print(f"no witness: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (DagError, ValueError, IndexError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
