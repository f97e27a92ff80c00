"""Accuracy metrics stratified by topology and confidence."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .assignment import Prediction
from .graph import Graph
from .labels import LabelStore, Split

log = logging.getLogger(__name__)

UNREACHABLE = -1


@dataclass(frozen=True)
class StratumPoint:
    value: int | str
    hits: float
    count: int


@dataclass(frozen=True)
class ThresholdPoint:
    tau: float
    hits: float | None   # None when nothing is retained
    retained: int
    retained_fraction: float


def _check_scope(pred: Prediction, truth: LabelStore, scope: np.ndarray) -> np.ndarray:
    scope = np.asarray(scope, dtype=np.int64)
    if scope.size == 0:
        raise ValueError("scope must be non-empty")
    if (truth.categories[scope] < 0).any():
        raise ValueError("scope contains nodes without ground truth")
    if (pred.categories[scope] < 0).any():
        raise ValueError("scope contains nodes without a prediction")
    return scope


def hits(pred: Prediction, truth: LabelStore, scope: np.ndarray) -> float:
    """Fraction of scope nodes whose predicted category matches the truth."""
    scope = _check_scope(pred, truth, scope)
    return float(np.mean(pred.categories[scope] == truth.categories[scope]))


def seeds_in_neighborhood(g: Graph, seeds: np.ndarray, x: int) -> int:
    """Number of seed nodes adjacent to ``x``."""
    seeds = np.asarray(seeds, dtype=np.int64)
    return int(np.isin(g.neighbors(x), seeds).sum())


def seeds_in_neighborhood_counts(g: Graph, seeds: np.ndarray) -> np.ndarray:
    """Vectorized seed-neighbor counts for every node."""
    indicator = np.zeros(g.node_count, dtype=np.float64)
    indicator[np.asarray(seeds, dtype=np.int64)] = 1.0
    counts = g.adjacency @ indicator
    return np.rint(counts).astype(np.int64)


def distance_to_seeds(g: Graph, seeds: np.ndarray) -> np.ndarray:
    """BFS hop distance from the seed set; unreachable nodes get -1."""
    seeds = np.asarray(seeds, dtype=np.int64)
    if seeds.size == 0:
        raise ValueError("seed set must be non-empty")
    dist = np.full(g.node_count, UNREACHABLE, dtype=np.int64)
    dist[seeds] = 0
    A = g.adjacency
    frontier = np.zeros(g.node_count, dtype=np.float64)
    frontier[seeds] = 1.0
    level = 0
    while True:
        touched = A @ frontier
        newly = (touched > 0) & (dist == UNREACHABLE)
        if not newly.any():
            return dist
        level += 1
        dist[newly] = level
        frontier = np.zeros(g.node_count, dtype=np.float64)
        frontier[newly] = 1.0


def _degree_bucket_index(degrees: np.ndarray) -> np.ndarray:
    """Geometric degree buckets: 0 | 1 | 2 | 3-4 | 5-8 | 9-16 | ..."""
    degrees = np.asarray(degrees, dtype=np.int64)
    idx = np.zeros(degrees.shape, dtype=np.int64)
    pos = degrees > 0
    idx[pos] = np.ceil(np.log2(degrees[pos])).astype(np.int64) + 1
    return idx  # 0 reserved for degree 0


def _degree_bucket_label(idx: int) -> str:
    if idx == 0:
        return "0"
    if idx <= 2:
        return str(idx)  # buckets {1}, {2}
    lo = 2 ** (idx - 2) + 1
    hi = 2 ** (idx - 1)
    return f"{lo}-{hi}"


def stratified_hits(
    metric_values: np.ndarray,
    pred: Prediction,
    truth: LabelStore,
    scope: np.ndarray,
    *,
    bucketing: str = "identity",
) -> list[StratumPoint]:
    """Hit rate per stratum of a per-node integer metric.

    ``bucketing="identity"`` keeps each metric value as its own stratum
    (e.g. seed-neighbor counts, hop distances, with -1 = unreachable);
    ``"log-degree"`` groups values into geometric buckets 1, 2, 3-4, 5-8...
    Strata with no members are omitted; stratum populations sum to the
    scope size.
    """
    if bucketing not in ("identity", "log-degree"):
        raise ValueError(f"unknown bucketing {bucketing!r}")
    scope = _check_scope(pred, truth, scope)
    values = np.asarray(metric_values, dtype=np.int64)[scope]
    correct = pred.categories[scope] == truth.categories[scope]

    if bucketing == "log-degree":
        keys = _degree_bucket_index(values)
        labeler = _degree_bucket_label
    else:
        keys = values
        labeler = None

    points = []
    for key in np.unique(keys):
        mask = keys == key
        count = int(mask.sum())
        rate = float(correct[mask].mean())
        value: int | str = labeler(int(key)) if labeler else int(key)
        points.append(StratumPoint(value, rate, count))
    return points


def threshold_curve(
    state: np.ndarray,
    pred: Prediction,
    truth: LabelStore,
    scope: np.ndarray,
    taus: Sequence[float],
) -> list[ThresholdPoint]:
    """Hit rate restricted to nodes whose decided-category probability >= tau.

    Retention counts are non-increasing in tau.  An empty retention yields
    hits=None for that point.
    """
    scope = _check_scope(pred, truth, scope)
    taus = [float(t) for t in taus]
    if any(not 0.0 <= t <= 1.0 for t in taus):
        raise ValueError("every tau must lie in [0, 1]")
    conf = state[scope, pred.categories[scope]]
    correct = pred.categories[scope] == truth.categories[scope]
    total = scope.size
    points = []
    for t in taus:
        keep = conf >= t
        retained = int(keep.sum())
        rate = float(correct[keep].mean()) if retained else None
        points.append(ThresholdPoint(t, rate, retained, retained / total))
    return points


@dataclass(eq=False)
class EvalReport:
    """Overall hit rate plus the stratified curves used for reporting."""

    overall_hits: float
    scope_size: int
    sin: list[StratumPoint] = field(default_factory=list)
    dts: list[StratumPoint] = field(default_factory=list)
    degree: list[StratumPoint] = field(default_factory=list)
    tau: list[ThresholdPoint] = field(default_factory=list)

    def to_dict(self) -> dict:
        def stratum_value(v):
            return "unreachable" if v == UNREACHABLE else v

        return {
            "overall_hits": float(self.overall_hits),
            "scope_size": int(self.scope_size),
            "sin": [
                {"value": stratum_value(p.value), "hits": float(p.hits), "count": int(p.count)}
                for p in self.sin
            ],
            "dts": [
                {"value": stratum_value(p.value), "hits": float(p.hits), "count": int(p.count)}
                for p in self.dts
            ],
            "degree": [
                {"bucket": p.value, "hits": float(p.hits), "count": int(p.count)}
                for p in self.degree
            ],
            "tau": [
                {
                    "tau": float(p.tau),
                    "hits": None if p.hits is None else float(p.hits),
                    "retained": int(p.retained),
                    "retained_fraction": float(p.retained_fraction),
                }
                for p in self.tau
            ],
        }

    def write_json(self, dest: str | Path) -> None:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def write_report_csvs(report: EvalReport, outdir: str | Path) -> dict[str, Path]:
    """One CSV per curve; returns {curve name: path}."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}

    def curve_csv(name: str, header: str, points: list[StratumPoint]) -> None:
        path = outdir / f"{name}.csv"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n")
            for p in points:
                value = "unreachable" if p.value == UNREACHABLE else p.value
                fh.write(f"{value},{p.hits!r},{p.count}\n")
        written[name] = path

    curve_csv("sin", "sin,hits,count", report.sin)
    curve_csv("dts", "dts,hits,count", report.dts)
    curve_csv("degree", "degree_bucket,hits,count", report.degree)

    path = outdir / "tau.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("tau,hits,retained_count,retained_fraction\n")
        for p in report.tau:
            h = "" if p.hits is None else repr(p.hits)
            fh.write(f"{p.tau!r},{h},{p.retained},{p.retained_fraction!r}\n")
    written["tau"] = path
    return written


def evaluate(
    g: Graph,
    pred: Prediction,
    truth: LabelStore,
    split: Split,
    *,
    state: np.ndarray | None = None,
    taus: Sequence[float] = (),
    scope: np.ndarray | None = None,
) -> EvalReport:
    """Assemble the full report over ``scope`` (default: the validation set)."""
    scope = split.validation if scope is None else np.asarray(scope, dtype=np.int64)
    scope = _check_scope(pred, truth, scope)
    overall = hits(pred, truth, scope)

    sin_counts = seeds_in_neighborhood_counts(g, split.seeds)
    dts_values = distance_to_seeds(g, split.seeds)
    report = EvalReport(
        overall_hits=overall,
        scope_size=int(scope.size),
        sin=stratified_hits(sin_counts, pred, truth, scope),
        dts=stratified_hits(dts_values, pred, truth, scope),
        degree=stratified_hits(g.degrees, pred, truth, scope, bucketing="log-degree"),
    )
    if taus:
        if state is None:
            raise ValueError("threshold curve requested but no state given")
        report.tau = threshold_curve(state, pred, truth, scope, taus)
    return report
