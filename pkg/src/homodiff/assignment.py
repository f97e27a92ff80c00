"""Collapse probability states into category decisions, optionally quota-constrained."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

from .graph import InputError, NodeIdMap

log = logging.getLogger(__name__)


class PredictionFileError(InputError):
    """Malformed prediction CSV input."""


@dataclass(eq=False)
class Prediction:
    """Per-node decisions: category index (-1 = none) and its probability."""

    categories: np.ndarray   # int32, length node_count
    confidences: np.ndarray  # float64, NaN where no decision

    def domain(self) -> np.ndarray:
        return np.nonzero(self.categories >= 0)[0]

    def __len__(self) -> int:
        return int((self.categories >= 0).sum())


def largest_remainder(shares: np.ndarray, total: int) -> np.ndarray:
    """Integer quotas summing exactly to ``total``, proportional to ``shares``.

    Floors the raw quotas, then hands the remaining units to the largest
    fractional parts; fraction ties go to the lower index.
    """
    shares = np.asarray(shares, dtype=np.float64)
    if total < 0:
        raise ValueError("total must be non-negative")
    if shares.ndim != 1 or shares.size == 0:
        raise ValueError("shares must be a non-empty 1-d array")
    if (shares < 0).any():
        raise ValueError("shares must be non-negative")
    ssum = shares.sum()
    if abs(ssum - 1.0) > 1e-9:
        raise ValueError(f"shares must sum to 1 within 1e-9, got {ssum!r}")
    raw = (shares / ssum) * total
    base = np.floor(raw).astype(np.int64)
    remainder = int(total - base.sum())
    if not 0 <= remainder <= shares.size:
        raise ValueError("apportionment overflow; shares out of tolerance")
    frac = raw - base
    order = np.lexsort((np.arange(shares.size), -frac))
    base[order[:remainder]] += 1
    return base


def empirical_distribution(labels) -> np.ndarray:
    """Category shares observed in a label store (sums to 1)."""
    counts = labels.counts()
    total = counts.sum()
    if total == 0:
        raise ValueError("empty label store has no distribution")
    return counts / total


def argmax_assign(state: np.ndarray) -> Prediction:
    """Pick each row's most probable category; ties go to the lower index."""
    state = np.asarray(state, dtype=np.float64)
    if state.ndim != 2 or state.shape[1] < 2:
        raise ValueError("state must be (node_count, d) with d >= 2")
    cats = np.argmax(state, axis=1).astype(np.int32)
    conf = state[np.arange(state.shape[0]), cats]
    return Prediction(cats, conf.astype(np.float64))


@dataclass(frozen=True)
class TargetDistribution:
    """Desired category shares for constrained assignment."""

    shares: np.ndarray

    def __post_init__(self) -> None:
        shares = np.asarray(self.shares, dtype=np.float64)
        if shares.ndim != 1 or shares.size < 2:
            raise ValueError("target must be a 1-d distribution over >= 2 categories")
        if (shares < 0).any() or abs(shares.sum() - 1.0) > 1e-9:
            raise ValueError("target shares must be non-negative and sum to 1 within 1e-9")
        shares = shares.copy()
        shares.setflags(write=False)
        object.__setattr__(self, "shares", shares)

    @property
    def d(self) -> int:
        return int(self.shares.size)


def constrained_assign(
    state: np.ndarray,
    target: TargetDistribution | np.ndarray,
    scope: np.ndarray,
) -> Prediction:
    """Greedy assignment matching largest-remainder quotas over ``scope``.

    Candidate (node, category, probability) triples are visited by
    descending probability; ties break toward the lower node index, then
    the lower category.  Each node takes the best category with quota
    remaining, so the output histogram equals the quotas exactly.
    """
    state = np.asarray(state, dtype=np.float64)
    if state.ndim != 2:
        raise ValueError("state must be 2-d")
    n, d = state.shape
    if not isinstance(target, TargetDistribution):
        target = TargetDistribution(np.asarray(target))
    if target.d != d:
        raise ValueError(f"target has {target.d} categories, state has {d}")
    scope = np.unique(np.asarray(scope, dtype=np.int64))
    if scope.size == 0:
        raise ValueError("scope must be non-empty")
    if scope[0] < 0 or scope[-1] >= n:
        raise ValueError("scope indices out of range")

    quotas = largest_remainder(target.shares, scope.size)
    probs = state[scope]
    flat = probs.ravel()
    pos_rep = np.repeat(np.arange(scope.size, dtype=np.int64), d)
    cat_rep = np.tile(np.arange(d, dtype=np.int64), scope.size)
    # scope is sorted, so ordering by scope position == ordering by node index
    order = np.lexsort((cat_rep, pos_rep, -flat))

    taken = bytearray(scope.size)
    remaining = quotas.tolist()
    cats_out = np.full(n, -1, dtype=np.int32)
    conf_out = np.full(n, np.nan, dtype=np.float64)
    left = scope.size
    order_pos = pos_rep[order].tolist()
    order_cat = cat_rep[order].tolist()
    for pos, cat in zip(order_pos, order_cat):
        if taken[pos] or remaining[cat] == 0:
            continue
        taken[pos] = 1
        remaining[cat] -= 1
        node = scope[pos]
        cats_out[node] = cat
        conf_out[node] = probs[pos, cat]
        left -= 1
        if left == 0:
            break
    return Prediction(cats_out, conf_out)


def write_predictions(
    dest: str | Path | IO[str],
    pred: Prediction,
    idmap: NodeIdMap,
) -> None:
    """CSV rows ``external_id,category,confidence`` for every decided node."""
    fh: IO[str]
    close = False
    if isinstance(dest, (str, Path)):
        fh = open(dest, "w", encoding="utf-8", newline="\n")
        close = True
    else:
        fh = dest
    try:
        fh.write("id,category,confidence\n")
        for idx in pred.domain():
            i = int(idx)
            fh.write(
                f"{idmap.external_of(i)},{int(pred.categories[i])},"
                f"{float(pred.confidences[i])!r}\n"
            )
    finally:
        if close:
            fh.close()


def read_predictions(
    source: str | Path | IO[str],
    idmap: NodeIdMap,
) -> Prediction:
    fh = open(source, "r", encoding="utf-8") if isinstance(source, (str, Path)) else source
    close = isinstance(source, (str, Path))
    cats = np.full(len(idmap), -1, dtype=np.int32)
    conf = np.full(len(idmap), np.nan, dtype=np.float64)
    try:
        header = fh.readline().strip()
        if header != "id,category,confidence":
            raise PredictionFileError(f"unexpected prediction header {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise PredictionFileError(f"line {lineno}: expected 3 fields")
            idx = idmap.get(parts[0])
            if idx is None:
                raise PredictionFileError(f"line {lineno}: unknown id {parts[0]!r}")
            try:
                cat = int(parts[1])
                conf[idx] = float(parts[2])
            except ValueError as exc:
                raise PredictionFileError(f"line {lineno}: {exc}") from None
            if cat < 0:
                raise PredictionFileError(
                    f"line {lineno}: category must be non-negative, got {cat}"
                )
            cats[idx] = cat
    finally:
        if close:
            fh.close()
    return Prediction(cats, conf)
