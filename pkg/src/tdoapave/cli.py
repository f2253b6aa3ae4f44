"""Command-line front end.

    tdoapave pave|range|compose|localize|compare --scenario FILE [options]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .interval import IntervalBox, fmt_real
from .paver import NumericalFailure, Paving, layered_svg, paving_to_svg
from .scenario import (
    ConfigError,
    Scenario,
    run_compare,
    run_compose,
    run_localize,
    run_pave,
    run_range,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdoapave", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=["pave", "range", "compose", "localize", "compare"])
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--eps", type=float, help="override the scenario's eps")
    p.add_argument("--method", choices=["kkt", "natural"], help="override the range method")
    p.add_argument("--out", help="paving output file")
    p.add_argument("--svg", help="SVG output file")
    p.add_argument("--stats", help="JSON statistics output file")
    p.add_argument("--threads", type=int, default=1, help="paver worker threads (default 1)")
    p.add_argument("--box", help="range query box 'x1lo,x1hi,x2lo,x2hi' (range only)")
    return p


def _level_path(path: str, i: int) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}_alpha{i}{p.suffix}")


def _stats_line(p: Paving) -> str:
    s = p.stats
    return (
        f"inside={s.n_inside} outside={s.n_outside} boundary={s.n_boundary} "
        f"leaves={s.n_leaves} boxes={s.n_boxes} bisections={s.n_bisections} "
        f"time={s.wall_time:.3f}s"
    )


def _emit(p: Paving, args, out=None, svg=None) -> None:
    out = out or args.out
    svg = svg or args.svg
    if out:
        p.write(out)
    if svg:
        paving_to_svg(p, svg)


def format_range_report(rep: dict) -> str:
    lines = [
        f"box      {rep['box']}",
        f"minimal  {rep['minimal']}",
        f"natural  {rep['natural']}",
    ]
    cps = rep["critical_points"]
    for x in cps.corners:
        lines.append(f"corner   {fmt_real(x[0])} {fmt_real(x[1])}")
    for x, edge in cps.edge_points:
        lines.append(f"edge     {fmt_real(x[0])} {fmt_real(x[1])} {edge}")
    for x in cps.ray_points:
        lines.append(f"ray      {fmt_real(x[0])} {fmt_real(x[1])}")
    return "\n".join(lines)


def _run(args) -> int:
    sc = Scenario.load(args.scenario)
    overrides = {}
    if args.eps is not None:
        overrides["eps"] = args.eps
    if args.method is not None:
        overrides["method"] = args.method
    if overrides:
        sc = sc.replace(**overrides)
    if args.threads < 1:
        raise ConfigError("threads", "must be >= 1")

    if args.command == "range":
        box = None
        if args.box:
            try:
                box = IntervalBox.from_bounds(*(float(v) for v in args.box.split(",")))
            except ValueError as e:
                raise ConfigError("box", str(e)) from None
        rep = run_range(sc, box)
        print(format_range_report(rep))
        if args.stats:
            Path(args.stats).write_text(
                json.dumps(
                    {
                        "box": [list(i) for i in rep["box"]],
                        "minimal": list(rep["minimal"]),
                        "natural": list(rep["natural"]),
                    },
                    indent=2,
                )
            )
        return EXIT_OK

    if args.command in ("pave", "compose"):
        run = run_pave if args.command == "pave" else run_compose
        p = run(sc, args.threads)
        _emit(p, args)
        print(_stats_line(p))
        if args.stats:
            Path(args.stats).write_text(json.dumps(p.stats.as_dict(), indent=2))
        return EXIT_OK

    if args.command == "localize":
        ps = run_localize(sc, args.threads)
        for i, (alpha, p) in enumerate(zip(sc.alpha_levels, ps)):
            if args.out:
                p.write(_level_path(args.out, i))
            print(f"alpha[{i}]={fmt_real(alpha)} {_stats_line(p)}")
        if args.svg:
            layered_svg(ps, args.svg)
        if args.stats:
            Path(args.stats).write_text(
                json.dumps(
                    [{"alpha": a, **p.stats.as_dict()} for a, p in zip(sc.alpha_levels, ps)],
                    indent=2,
                )
            )
        return EXIT_OK

    # compare
    res = run_compare(sc, args.threads)
    print(f"{'method':8} {'leaves':>8} {'boxes':>8} {'time[s]':>9}")
    for m in ("kkt", "natural"):
        r = res[m]
        print(f"{m:8} {r['n_leaves']:8d} {r['n_boxes']:8d} {r['wall_time']:9.3f}")
    print(
        f"ratio natural/kkt: boxes={res['ratio_boxes']:.3f} "
        f"leaves={res['ratio_leaves']:.3f} time={res['ratio_time']:.3f}"
    )
    if args.stats:
        Path(args.stats).write_text(json.dumps(res, indent=2))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
