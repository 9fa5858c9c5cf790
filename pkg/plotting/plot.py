#!/usr/bin/env python3
"""Render simulator trace CSVs as figures.

Two modes. ``regret`` draws each policy's mean pseudo-regret against time
on log-log axes with a shaded band of one standard deviation around it.
``ratio`` draws the precomputed ``ratio_to_lb`` column (regret over the
lower-bound rate c * ln t) on a log time axis with a linear y axis; cells
where the ratio is undefined are skipped, and policies with no defined
ratio at all (the order-free baselines) are left out of the figure.

Inputs are never modified. Usage:

    plot.py --mode {regret|ratio} --out fig.png trace.csv [more.csv ...]
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")  # file output only, no display server
import matplotlib.pyplot as plt

TRACE_HEADER = ("scenario", "policy", "order", "t", "mean_regret", "std_regret", "ratio_to_lb")
MODES = ("regret", "ratio")


@dataclass(frozen=True)
class PlotSpec:
    """One figure: which traces, which mode, where to write it."""

    csv_paths: tuple[str, ...]
    mode: str
    out: str
    policies: tuple[str, ...] = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError("unknown mode %r, expected one of %s" % (self.mode, ", ".join(MODES)))
        if not self.csv_paths:
            raise ValueError("at least one input CSV is required")


@dataclass
class Series:
    scenario: str
    policy: str
    # rows are (t, mean, std, ratio or None), sorted by t after loading
    rows: list[tuple[int, float, float, float | None]] = field(default_factory=list)


def _parse_row(fields: list[str], path: str, lineno: int) -> tuple[str, str, int, float, float, float | None]:
    if len(fields) != len(TRACE_HEADER):
        raise ValueError("%s:%d: expected %d fields, got %d" % (path, lineno, len(TRACE_HEADER), len(fields)))
    scenario, policy, _order, t, mean, std, ratio = fields
    try:
        return (
            scenario,
            policy,
            int(t),
            float(mean),
            float(std),
            float(ratio) if ratio != "" else None,
        )
    except ValueError as exc:
        raise ValueError("%s:%d: %s" % (path, lineno, exc)) from exc


def read_series(paths) -> list[Series]:
    """Load one or more trace CSVs into per-(scenario, policy) series.

    The header of every file must match the trace schema exactly.  Series
    keep first-seen order so the legend follows the input files.
    """
    table: dict[tuple[str, str], Series] = {}
    for path in paths:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != TRACE_HEADER:
                raise ValueError(
                    "%s: header does not match the trace schema %s" % (path, ",".join(TRACE_HEADER))
                )
            for lineno, fields in enumerate(reader, start=2):
                if not fields:
                    continue
                scenario, policy, t, mean, std, ratio = _parse_row(fields, path, lineno)
                key = (scenario, policy)
                if key not in table:
                    table[key] = Series(scenario, policy)
                table[key].rows.append((t, mean, std, ratio))
    series = list(table.values())
    for s in series:
        s.rows.sort(key=lambda row: row[0])
    return series


def _labels(series: list[Series]) -> list[str]:
    # policy name alone unless it appears under several scenarios
    counts: dict[str, int] = {}
    for s in series:
        counts[s.policy] = counts.get(s.policy, 0) + 1
    return [s.policy if counts[s.policy] == 1 else "%s/%s" % (s.scenario, s.policy) for s in series]


def plot(spec: PlotSpec) -> list[str]:
    """Write the figure for ``spec`` and return the legend labels drawn."""
    series = read_series(spec.csv_paths)
    if spec.policies:
        wanted = set(spec.policies)
        series = [s for s in series if s.policy in wanted]
        if not series:
            raise ValueError("no series match the policy filter %r" % sorted(wanted))
    if not series:
        raise ValueError("no series found in the input")

    if spec.mode == "ratio":
        kept = []
        for s in series:
            defined = [row for row in s.rows if row[3] is not None]
            if defined:
                kept.append(Series(s.scenario, s.policy, defined))
        if not kept:
            raise ValueError("no series has a defined ratio_to_lb; ratio mode needs traces with a lower bound")
        series = kept

    labels = _labels(series)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for s, label in zip(series, labels):
        ts = [row[0] for row in s.rows]
        if spec.mode == "regret":
            means = [row[1] for row in s.rows]
            stds = [row[2] for row in s.rows]
            (line,) = ax.plot(ts, means, label=label)
            ax.fill_between(
                ts,
                [m - d for m, d in zip(means, stds)],
                [m + d for m, d in zip(means, stds)],
                color=line.get_color(),
                alpha=0.2,
                linewidth=0,
            )
        else:
            ax.plot(ts, [row[3] for row in s.rows], label=label)

    ax.set_xscale("log")
    ax.set_xlabel("t")
    if spec.mode == "regret":
        ax.set_yscale("log")
        ax.set_ylabel("mean pseudo-regret")
    else:
        ax.set_ylabel("regret / (c * ln t)")
    scenarios = sorted({s.scenario for s in series})
    if len(scenarios) == 1 and scenarios[0]:
        ax.set_title(scenarios[0])
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)
    return labels


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot.py", description="render simulator trace CSVs as regret or ratio figures"
    )
    parser.add_argument("--mode", choices=MODES, required=True, help="figure style")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--policy", action="append", default=None, help="restrict to this policy label (repeatable)"
    )
    parser.add_argument("csv", nargs="+", help="trace CSV written by the simulator")
    args = parser.parse_args(argv)
    spec = PlotSpec(tuple(args.csv), args.mode, args.out, tuple(args.policy or ()))
    try:
        labels = plot(spec)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    print("wrote %s (%d series)" % (spec.out, len(labels)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
