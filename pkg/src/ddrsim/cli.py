"""Command line interface.

Subcommands:
  run      simulate one configuration, write trace.csv + summary.json
  sweep    run a grid of (protocol, field, population, seed) cells
  plot     render one metric from existing trace CSVs to an SVG
  layout   export the segment layout (and optionally a placement) as files
  analyze  compare measured first-round energy against the closed-form model

Exit codes: 0 on success, 1 for configuration or simulation errors,
2 for filesystem errors.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import os
import sys
from pathlib import Path

from . import report
from .analysis import run_crosscheck
from .config import SweepSpec, load_config, load_sweep
from .deployment import place_density_controlled
from .engine import SimConfig, compute_summary, run_sim
from .errors import DdrsimError
from .geometry import build_layout

SEED_ENV_VAR = "DDRSIM_SEED"


def _apply_seed_env(config: SimConfig) -> SimConfig:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return config
    try:
        seed = int(raw)
    except ValueError:
        raise DdrsimError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")
    if seed < 0:
        raise DdrsimError(f"{SEED_ENV_VAR} must be >= 0, got {seed}")
    return dataclasses.replace(config, seed=seed)


def cmd_run(args) -> int:
    config = load_config(args.config)
    config = _apply_seed_env(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    plans = [] if args.dump_plans else None
    plan_sink = plans.append if plans is not None else None
    trace = run_sim(config, plan_sink=plan_sink)
    summary = compute_summary(trace, n_nodes=config.n_nodes)

    report.write_trace_csv(out_dir / "trace.csv", trace)
    report.write_summary_json(out_dir / "summary.json", config, summary)
    if plans is not None:
        report.write_plans_jsonl(out_dir / "plans.jsonl", plans)
    if args.plot:
        xs = [r.round for r in trace]
        label = f"{config.protocol} seed {config.seed}"
        report.render_trace_chart(
            [(label, xs, [r.alive for r in trace])], "alive nodes", out_dir / "alive.svg"
        )
        report.render_trace_chart(
            [(label, xs, [r.packets_to_bs for r in trace])],
            "packets delivered to BS",
            out_dir / "packets.svg",
        )

    fnd = "not reached" if summary.fnd is None else summary.fnd
    lnd = "not reached" if summary.lnd is None else summary.lnd
    print(
        f"{config.protocol}: {summary.rounds_simulated} rounds, "
        f"fnd={fnd}, lnd={lnd}, packets={summary.total_packets}"
    )
    return 0


def _sweep_cell(item):
    """Worker for one sweep cell; returns (key, metrics or error message)."""
    key, config = item
    try:
        trace = run_sim(config)
        summary = compute_summary(trace, n_nodes=config.n_nodes)
    except Exception as exc:  # noqa: BLE001 - cell failures become empty rows
        return key, None, f"{type(exc).__name__}: {exc}"
    return key, summary, None


def _summary_filename(config: SimConfig) -> str:
    return f"{config.protocol}-L{config.field_side:g}-N{config.n_nodes}-s{config.seed}.summary.json"


def cmd_sweep(args) -> int:
    spec: SweepSpec = load_sweep(args.spec)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    items = spec.expand()
    configs = dict(items)
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_cell, items))
    else:
        results = [_sweep_cell(item) for item in items]

    rows = []
    failed = 0
    for key, summary, error in results:
        protocol, field_side, n_nodes, seed = key
        config = configs[key]
        if error is not None:
            failed += 1
            print(f"sweep cell {key} failed: {error}", file=sys.stderr)
            rows.append(report.SweepRow(protocol, field_side, n_nodes, seed, None, None, None))
            continue
        report.write_summary_json(out_dir / _summary_filename(config), config, summary)
        rows.append(
            report.SweepRow(
                protocol, field_side, n_nodes, seed, summary.fnd, summary.lnd, summary.total_packets
            )
        )
    report.write_sweep_csv(out_dir / "sweep.csv", rows)
    print(f"{len(rows) - failed}/{len(rows)} cells written to {out_dir / 'sweep.csv'}")
    return 1 if failed else 0


_PLOT_METRICS = {
    "alive": ("alive nodes", lambda r: r.alive),
    "packets": ("packets delivered to BS", lambda r: r.packets_to_bs),
}


def _trace_label(trace_path: Path) -> str:
    # Prefer the summary written next to the trace; fall back to the filename.
    candidates = [
        trace_path.with_suffix("").with_suffix(".summary.json")
        if trace_path.suffix == ".csv"
        else trace_path.with_suffix(".summary.json"),
        trace_path.parent / "summary.json",
    ]
    for cand in candidates:
        if cand.is_file():
            try:
                data = report.read_summary_json(cand)
                return f"{data['protocol']} seed {data['seed']}"
            except (OSError, KeyError, ValueError):
                continue
    return trace_path.stem


def cmd_plot(args) -> int:
    ylabel, pick = _PLOT_METRICS[args.metric]
    series = []
    for raw in args.traces:
        path = Path(raw)
        trace = report.read_trace_csv(path)
        series.append((_trace_label(path), [r.round for r in trace], [pick(r) for r in trace]))
    report.render_trace_chart(series, ylabel, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_layout(args) -> int:
    layout = build_layout(args.field_side, args.ring_spacing)
    report.write_layout_json(args.out, layout)
    print(f"wrote {args.out} ({len(layout.segments)} segments)")
    if args.place is not None:
        if args.placement_out is None:
            raise DdrsimError("--place requires --placement-out")
        nodes = place_density_controlled(layout, args.place, [args.seed, 0])
        report.write_placement_csv(args.placement_out, nodes)
        print(f"wrote {args.placement_out} ({len(nodes)} nodes)")
    return 0


def cmd_analyze(args) -> int:
    config = load_config(args.config)
    rep = run_crosscheck(config, tolerance=args.tolerance)
    payload = rep.to_jsonable()
    if args.out is not None:
        import json

        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    for row in rep.rows:
        mark = "FLAG" if row.flagged else "ok"
        print(
            f"{row.name:<18} sim={row.simulated_j:.6e} pred={row.predicted_j:.6e} "
            f"dev={row.rel_deviation:6.2%} [{mark}]"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ddrsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one configuration")
    p_run.add_argument("--config", required=True, help="key=value configuration file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--dump-plans", action="store_true", help="also write plans.jsonl")
    p_run.add_argument("--plot", action="store_true", help="also render alive.svg and packets.svg")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a grid of configurations")
    p_sweep.add_argument("--spec", required=True, help="sweep grid file (cells, protocols, seeds)")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p_sweep.set_defaults(func=cmd_sweep)

    p_plot = sub.add_parser("plot", help="render a metric from trace CSVs")
    p_plot.add_argument("traces", nargs="+", help="trace CSV paths")
    p_plot.add_argument("--metric", choices=sorted(_PLOT_METRICS), default="alive")
    p_plot.add_argument("--out", required=True, help="output SVG path")
    p_plot.set_defaults(func=cmd_plot)

    p_layout = sub.add_parser("layout", help="export segment layout as JSON")
    p_layout.add_argument("--field-side", type=float, required=True)
    p_layout.add_argument("--ring-spacing", type=float, required=True)
    p_layout.add_argument("--out", required=True, help="output JSON path")
    p_layout.add_argument("--place", type=int, default=None, help="also place N nodes")
    p_layout.add_argument("--placement-out", default=None, help="placement CSV path")
    p_layout.add_argument("--seed", type=int, default=1, help="placement seed")
    p_layout.set_defaults(func=cmd_layout)

    p_an = sub.add_parser("analyze", help="first-round energy crosscheck")
    p_an.add_argument("--config", required=True, help="key=value configuration file")
    p_an.add_argument("--out", default=None, help="optional JSON report path")
    p_an.add_argument("--tolerance", type=float, default=0.10, help="relative deviation flag level")
    p_an.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DdrsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
