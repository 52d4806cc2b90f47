"""Delimited artifacts and figure rendering.

Trace CSV, summary JSON, sweep CSV, layout JSON, placement CSV, and the
plans JSONL dump all live here, as does the SVG chart renderer. Output is
byte-stable: floats go through repr, JSON key order is fixed, and the SVG
backend runs with a pinned hash salt and no timestamp metadata.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from .deployment import NodeState
from .engine import RoundRecord, SimConfig, SimSummary
from .errors import ConfigError
from .geometry import SegmentLayout, layout_to_dict
from .plan import RoundPlan

TRACE_HEADER = ("round", "alive", "packets_to_bs", "ch_count", "total_residual_j")
SWEEP_HEADER = (
    "protocol",
    "field_side",
    "n_nodes",
    "seed",
    "fnd_round",
    "lnd_round",
    "total_packets",
)

NOT_REACHED = "not-reached"


def write_trace_csv(path, trace: list[RoundRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for r in trace:
            writer.writerow([r.round, r.alive, r.packets_to_bs, r.ch_count, repr(r.total_residual_j)])


def read_trace_csv(path) -> list[RoundRecord]:
    trace = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(TRACE_HEADER):
            raise ConfigError(f"{path} is not a trace CSV (header {header})")
        for row in reader:
            trace.append(
                RoundRecord(
                    round=int(row[0]),
                    alive=int(row[1]),
                    packets_to_bs=int(row[2]),
                    ch_count=int(row[3]),
                    total_residual_j=float(row[4]),
                )
            )
    return trace


def summary_dict(config: SimConfig, summary: SimSummary) -> dict:
    """Summary JSON payload; key order is part of the format."""
    return {
        "protocol": config.protocol,
        "seed": config.seed,
        "field_side_m": config.field_side,
        "n_nodes": config.n_nodes,
        "fnd_round": NOT_REACHED if summary.fnd is None else summary.fnd,
        "lnd_round": NOT_REACHED if summary.lnd is None else summary.lnd,
        "total_packets": summary.total_packets,
        "rounds_simulated": summary.rounds_simulated,
    }


def write_summary_json(path, config: SimConfig, summary: SimSummary) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary_dict(config, summary), fh, indent=2)
        fh.write("\n")


def read_summary_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


@dataclass
class SweepRow:
    protocol: str
    field_side: float
    n_nodes: int
    seed: int
    fnd: int | None
    lnd: int | None
    total_packets: int | None

    def as_csv_row(self) -> list:
        # Unreached or failed metrics stay as empty cells.
        return [
            self.protocol,
            f"{self.field_side:g}",
            self.n_nodes,
            self.seed,
            "" if self.fnd is None else self.fnd,
            "" if self.lnd is None else self.lnd,
            "" if self.total_packets is None else self.total_packets,
        ]


def write_sweep_csv(path, rows: list[SweepRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow(row.as_csv_row())


def write_layout_json(path, layout: SegmentLayout) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(layout_to_dict(layout), fh, indent=2)
        fh.write("\n")


def write_placement_csv(path, nodes: list[NodeState]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("id", "x", "y", "segment"))
        for node in nodes:
            writer.writerow(
                [node.id, repr(node.pos.x), repr(node.pos.y), "" if node.segment is None else node.segment]
            )


def write_plans_jsonl(path, plans: list[RoundPlan]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for plan in plans:
            fh.write(json.dumps(plan.to_jsonable(), separators=(",", ":")))
            fh.write("\n")


def render_trace_chart(series, ylabel: str, out_path, title: str | None = None) -> None:
    """Line chart of one value per round, one line per labeled trace.

    series is a list of (label, xs, ys). Rendered as SVG with deterministic
    bytes so identical inputs produce identical files.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "ddrsim"
    plt.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    for label, xs, ys in series:
        ax.plot(xs, ys, label=label, linewidth=1.4)
    ax.set_xlabel("round")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
