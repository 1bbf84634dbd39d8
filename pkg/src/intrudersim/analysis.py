"""Post-hoc trace analyses (path quality, intruder following) and SVG plots."""
from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Union

from .engine import DT, Trace, TraceRecord
from .sonar import SONAR_RANGE


class AnalysisError(ValueError):
    pass


class PathMetricsRow(NamedTuple):
    time: float
    d_left: float
    d_right: float
    total: float
    suggested: float
    actual: Optional[float]  # None unless both sides saw an obstacle


class FollowMetricsRow(NamedTuple):
    time: float
    displacement: float
    distances: dict[str, float]


def path_row(time: float, d_left: float, d_right: float) -> PathMetricsRow:
    """Total gap, suggested (mid) position and actual position from side distances."""
    total = d_left + d_right
    both_seen = d_left < SONAR_RANGE and d_right < SONAR_RANGE
    return PathMetricsRow(time, d_left, d_right, total, total / 2,
                          max(d_left, d_right) if both_seen else None)


def _tick_for(t: float) -> int:
    return round(Fraction(t).limit_denominator(10**6) / DT)


def _sample(rows_by_tick: dict, times: Sequence[float], what: str) -> list:
    if not rows_by_tick:
        raise AnalysisError(f"no trace rows for {what}")
    first, last = min(rows_by_tick), max(rows_by_tick)
    out = []
    for t in times:
        tick = _tick_for(t)
        if tick < first or tick > last or tick not in rows_by_tick:
            raise AnalysisError(f"time {t} s lies outside the trace span for {what}")
        out.append(rows_by_tick[tick])
    return out


def path_metrics(trace: Trace, robot_id, sample_times: Sequence[float]) -> list[PathMetricsRow]:
    if not trace.records:
        raise AnalysisError("empty trace")
    rows = {r.tick: r for r in trace.records if r.robot_id == str(robot_id)}
    if not rows:
        raise AnalysisError(f"unknown robot id {robot_id!r}")
    return [path_row(r.time, r.d_left, r.d_right) for r in _sample(rows, sample_times, f"robot {robot_id}")]


def follow_metrics(trace: Trace, follower_ids: Sequence, intruder_color: str,
                   sample_times: Sequence[float]) -> list[FollowMetricsRow]:
    color = str(intruder_color).lower()
    intr = {r.tick: r for r in trace.intruders if r.color == color}
    if not intr:
        raise AnalysisError(f"no {color!r} intruder in trace")
    start = intr[min(intr)]
    followers: dict[str, dict[int, TraceRecord]] = {}
    for fid in map(str, follower_ids):
        followers[fid] = {r.tick: r for r in trace.records if r.robot_id == fid}
        if not followers[fid]:
            raise AnalysisError(f"unknown robot id {fid!r}")
    out = []
    samples = _sample(intr, sample_times, f"{color} intruder")
    for t, ir in zip(sample_times, samples):
        dists = {}
        for fid, rows in followers.items():
            fr = _sample(rows, [t], f"robot {fid}")[0]
            dists[fid] = math.hypot(fr.x - ir.x, fr.y - ir.y)
        out.append(FollowMetricsRow(ir.time, math.hypot(ir.x - start.x, ir.y - start.y), dists))
    return out


# --- metrics CSV ---------------------------------------------------------------

PATH_COLUMNS = ["time", "d_left", "d_right", "total", "suggested", "actual"]


def _num(v) -> str:
    return "" if v is None else f"{v:.6g}"


def write_path_metrics(rows: Sequence[PathMetricsRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(PATH_COLUMNS)
    for r in rows:
        w.writerow([_num(v) for v in r])


def write_follow_metrics(rows: Sequence[FollowMetricsRow], fh) -> None:
    ids = list(rows[0].distances) if rows else []
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["time", "intruder_displacement"] + [f"distance_{i}" for i in ids])
    for r in rows:
        w.writerow([_num(r.time), _num(r.displacement)] + [_num(r.distances[i]) for i in ids])


def read_metrics(fh, kind: str) -> list:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        raise AnalysisError("empty metrics file")
    rows = [row for row in reader if row]
    if kind == "path":
        if header != PATH_COLUMNS:
            raise AnalysisError("not a path metrics file")
        return [PathMetricsRow(*(float(v) for v in row[:5]), float(row[5]) if row[5] else None)
                for row in rows]
    if kind == "follow":
        if header[:2] != ["time", "intruder_displacement"]:
            raise AnalysisError("not a follow metrics file")
        ids = [h.removeprefix("distance_") for h in header[2:]]
        return [FollowMetricsRow(float(row[0]), float(row[1]),
                                 {i: float(v) for i, v in zip(ids, row[2:])}) for row in rows]
    raise AnalysisError(f"unknown metrics kind {kind!r}")


# --- plots ---------------------------------------------------------------------

def emit_plot(rows: Sequence, kind: str, output: Union[str, Path, None] = None, title: str = "") -> str:
    """Render metrics rows as an SVG document; writes it when ``output`` is given."""
    if not rows:
        raise AnalysisError("nothing to plot")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "intrudersim"
    fig, ax = plt.subplots(figsize=(7, 4))
    t = [r.time for r in rows]
    if kind == "path":
        ax.plot(t, [r.total for r in rows], "o-", color="tab:blue", label="Total distance between obstacles")
        ax.plot(t, [r.suggested for r in rows], "o-", color="tab:red", label="Suggested position")
        ax.plot(t, [math.nan if r.actual is None else r.actual for r in rows], "o-",
                color="tab:green", label="Actual position")
        ax.set_ylabel("Distance (m)")
    elif kind == "follow":
        ax.plot(t, [r.displacement for r in rows], "o-", color="tab:blue", label="Intruder displacement")
        for fid, c in zip(rows[0].distances, ("tab:green", "tab:red", "tab:orange", "tab:purple")):
            ax.plot(t, [r.distances[fid] for r in rows], "o-", color=c, label=f"Robot {fid} to intruder")
        ax.set_ylabel("Distance (m)")
    else:
        plt.close(fig)
        raise AnalysisError(f"unknown plot kind {kind!r}")
    ax.set_xlabel("Time (s)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize="small")
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    svg = buf.getvalue()
    if output is not None:
        Path(output).write_text(svg)
    return svg
