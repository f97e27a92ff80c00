"""Label-mixing diagnostics: observed contact counts vs. an independence surrogate.

The communication matrix counts, per unordered label pair, the edges whose
endpoints both carry a label.  The surrogate matrix is the expected count
under a null model that keeps the same number of labeled edges but places
them on uniformly random labeled pairs.  Their log-ratio (the social-effect
matrix) is positive where contact is over-represented.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .graph import Graph
from .labels import LabelStore

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MixingMatrix:
    """Symmetric k x k matrix over label values, plus edge bookkeeping."""

    values: np.ndarray
    labeled_edges: int    # edges with both endpoints labeled
    skipped_edges: int    # edges with at least one unlabeled endpoint

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("mixing matrix must be square")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def k(self) -> int:
        return int(self.values.shape[0])


def _edge_label_pairs(g: Graph, labels: LabelStore) -> tuple[np.ndarray, np.ndarray, int]:
    """Label pairs (lo <= hi) of both-labeled edges, plus the skipped count."""
    cats = labels.categories
    src = np.repeat(np.arange(g.node_count, dtype=np.int64), g.degrees)
    dst = g.indices.astype(np.int64)
    once = src < dst  # each undirected edge exactly once
    lu = cats[src[once]]
    lv = cats[dst[once]]
    both = (lu >= 0) & (lv >= 0)
    skipped = int(once.sum() - both.sum())
    lu = lu[both]
    lv = lv[both]
    return np.minimum(lu, lv), np.maximum(lu, lv), skipped


def communication_matrix(g: Graph, labels: LabelStore) -> MixingMatrix:
    """Count both-labeled edges per unordered label cell.

    The matrix is symmetric: an edge between labels i != j shows up in both
    [i, j] and [j, i] (one shared count), so the upper triangle including
    the diagonal sums to the number of both-labeled edges.
    """
    k = labels.d
    lo, hi, skipped = _edge_label_pairs(g, labels)
    upper = np.bincount(lo * k + hi, minlength=k * k).reshape(k, k)
    values = upper + upper.T
    np.fill_diagonal(values, upper.diagonal())
    return MixingMatrix(values.astype(np.int64), int(lo.size), skipped)


def surrogate_matrix(g: Graph, labels: LabelStore) -> MixingMatrix:
    """Expected communication counts under label-independent edge placement.

    Keeps the observed number of both-labeled edges m and distributes them
    uniformly over the unordered pairs of the n labeled nodes:

        R[i, j] = m * 2 * n_i * n_j / (n * (n - 1))   for i != j
        R[i, i] = m * n_i * (n_i - 1) / (n * (n - 1))
    """
    counts = labels.counts().astype(np.float64)
    n = counts.sum()
    if n < 2:
        raise ValueError("surrogate needs at least two labeled nodes")
    lo, hi, skipped = _edge_label_pairs(g, labels)
    m = int(lo.size)
    denom = n * (n - 1.0)
    values = 2.0 * m * np.outer(counts, counts) / denom
    np.fill_diagonal(values, m * counts * (counts - 1.0) / denom)
    return MixingMatrix(values, m, skipped)


def social_effect_matrix(
    c: MixingMatrix | np.ndarray,
    r: MixingMatrix | np.ndarray,
    pseudocount: float = 0.0,
) -> np.ndarray:
    """Cellwise ln(C + pc) - ln(R + pc); NaN marks masked cells.

    With pseudocount 0, any cell where either operand is 0 is undefined and
    comes back as NaN rather than +-inf.
    """
    cv = np.asarray(c.values if isinstance(c, MixingMatrix) else c, dtype=np.float64)
    rv = np.asarray(r.values if isinstance(r, MixingMatrix) else r, dtype=np.float64)
    if cv.shape != rv.shape:
        raise ValueError("matrices must have the same shape")
    if pseudocount < 0:
        raise ValueError("pseudocount must be non-negative")
    out = np.full(cv.shape, np.nan, dtype=np.float64)
    ok = (cv + pseudocount > 0) & (rv + pseudocount > 0)
    out[ok] = np.log(cv[ok] + pseudocount) - np.log(rv[ok] + pseudocount)
    return out


def write_matrix_csv(
    dest: str | Path | IO[str],
    values: np.ndarray,
    axis_labels: Sequence,
    *,
    delimiter: str = ",",
) -> None:
    """Labeled square matrix as CSV; NaN cells are emitted empty."""
    values = np.asarray(values)
    k = values.shape[0]
    if len(axis_labels) != k:
        raise ValueError("need one axis label per row")
    fh: IO[str]
    close = False
    if isinstance(dest, (str, Path)):
        fh = open(dest, "w", encoding="utf-8", newline="\n")
        close = True
    else:
        fh = dest

    def fmt(v) -> str:
        f = float(v)
        if math.isnan(f):
            return ""
        if f == int(f) and abs(f) < 1e15:
            return str(int(f))
        return repr(f)

    try:
        fh.write(delimiter.join([""] + [str(a) for a in axis_labels]) + "\n")
        for i in range(k):
            fh.write(delimiter.join([str(axis_labels[i])] + [fmt(v) for v in values[i]]) + "\n")
    finally:
        if close:
            fh.close()


def matrix_to_jsonable(values: np.ndarray) -> list[list]:
    """Nested lists with None for NaN cells (for JSON export)."""
    out = []
    for row in np.asarray(values, dtype=np.float64):
        out.append([None if math.isnan(float(v)) else float(v) for v in row])
    return out


def write_matrices_json(
    dest: str | Path | IO[str],
    axis_labels: Sequence,
    matrices: dict[str, np.ndarray],
) -> None:
    payload = {"labels": [str(a) for a in axis_labels]}
    for name, values in matrices.items():
        payload[name] = matrix_to_jsonable(values)
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        json.dump(payload, dest, indent=2)
