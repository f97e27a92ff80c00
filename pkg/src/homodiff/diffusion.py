"""Memory-anchored probability diffusion over graph neighborhoods.

Each node carries a probability vector over d categories.  One step blends
the node's initial vector with the mean of its neighbors' current vectors:

    next = (1 - lam) * initial + lam * neighbor_mean

Labeled seed nodes start one-hot, everyone else uniform, so the initial
vector acts as a per-node anchor while evidence spreads along edges.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np
from scipy import sparse

from .graph import Graph, InputError, NodeIdMap
from .labels import LabelStore

log = logging.getLogger(__name__)

RENORM_DRIFT = 1e-12


class StateFileError(InputError):
    """Malformed state checkpoint input."""


@dataclass(frozen=True)
class DiffusionParams:
    lam: float = 0.5
    max_iterations: int = 20
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")


@dataclass(eq=False)
class DiffusionResult:
    state: np.ndarray
    iterations: int
    final_delta: float
    renormalized_rows: int


def init_state(
    g: Graph,
    seeds: np.ndarray,
    labels: LabelStore,
    d: int | None = None,
) -> np.ndarray:
    """One-hot rows for seeds at their category, uniform 1/d rows elsewhere."""
    d = labels.d if d is None else int(d)
    if d < 2:
        raise ValueError("need at least two categories")
    seeds = np.asarray(seeds, dtype=np.int64)
    cats = labels.categories[seeds] if seeds.size else np.empty(0, dtype=np.int32)
    if seeds.size and (cats.min() < 0 or cats.max() >= d):
        raise ValueError("every seed must carry a category in [0, d)")
    state = np.full((g.node_count, d), 1.0 / d, dtype=np.float64)
    state[seeds] = 0.0
    state[seeds, cats] = 1.0
    return state


def _check_state(g: Graph, state: np.ndarray, name: str) -> None:
    if state.ndim != 2 or state.shape[0] != g.node_count:
        raise ValueError(f"{name} must be (node_count, d)")


def neighbor_sums(g: Graph, state: np.ndarray, threads: int = 1) -> np.ndarray:
    """Sum of neighbor rows for every node, i.e. adjacency @ state.

    Rows accumulate over neighbors in ascending index order regardless of
    ``threads``; worker count only changes which rows a worker computes, so
    results are bitwise identical for any thread count.
    """
    A = g.adjacency
    n = g.node_count
    threads = max(1, int(threads))
    if threads == 1 or n < 2 * threads:
        return A @ state

    out = np.empty((n, state.shape[1]), dtype=np.float64)
    bounds = np.linspace(0, n, threads + 1, dtype=np.int64)

    def block(lo: int, hi: int) -> None:
        s, e = int(A.indptr[lo]), int(A.indptr[hi])
        sub = sparse.csr_array(
            (A.data[s:e], A.indices[s:e], A.indptr[lo:hi + 1] - A.indptr[lo]),
            shape=(hi - lo, n),
        )
        out[lo:hi] = sub @ state

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(block, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for f in futures:
            f.result()
    return out


def step(
    g: Graph,
    current: np.ndarray,
    initial: np.ndarray,
    lam: float,
    *,
    threads: int = 1,
) -> np.ndarray:
    """One diffusion update; degree-0 nodes are held at their initial row."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    _check_state(g, current, "current")
    _check_state(g, initial, "initial")
    if current.shape != initial.shape:
        raise ValueError("current and initial must have the same shape")

    sums = neighbor_sums(g, current, threads)
    deg = g.degrees
    denom = np.where(deg > 0, deg, 1).astype(np.float64)
    mean = sums / denom[:, None]
    out = (1.0 - lam) * initial + lam * mean
    isolated = deg == 0
    if isolated.any():
        out[isolated] = initial[isolated]
    return out


def run(
    g: Graph,
    seeds: np.ndarray,
    labels: LabelStore,
    params: DiffusionParams,
    *,
    clamp_seeds: bool = False,
    threads: int = 1,
) -> DiffusionResult:
    """Iterate ``step`` until the max state change drops below tolerance.

    Rows are renormalized only when their sum drifts past 1e-12; the count
    of renormalized rows is reported in the result.  ``clamp_seeds`` resets
    seed rows to one-hot after each step (off by default: seeds evolve and
    stay anchored through the memory term instead).
    """
    seeds_arr = np.asarray(seeds, dtype=np.int64)
    if seeds_arr.size == 0:
        raise ValueError("seed set must be non-empty")
    initial = init_state(g, seeds, labels)
    current = initial.copy()
    renorm = 0
    iterations = 0
    delta = 0.0
    for iterations in range(1, params.max_iterations + 1):
        nxt = step(g, current, initial, params.lam, threads=threads)
        if clamp_seeds and seeds_arr.size:
            nxt[seeds_arr] = initial[seeds_arr]
        delta = float(np.max(np.abs(nxt - current)))
        sums = nxt.sum(axis=1)
        drifted = np.abs(sums - 1.0) > RENORM_DRIFT
        if drifted.any():
            nxt[drifted] /= sums[drifted, None]
            renorm += int(drifted.sum())
        current = nxt
        log.debug("iteration %d: delta=%.3e", iterations, delta)
        if delta < params.tolerance:
            break
    return DiffusionResult(current, iterations, delta, renorm)


def laplacian_residual(
    g: Graph,
    state_t: np.ndarray,
    state_prev: np.ndarray,
    initial: np.ndarray,
    lam: float,
) -> float:
    """Max deviation of one step from its reaction-diffusion form.

    For rows with degree > 0 the update is equivalently
    ``next - prev = (1-lam)*(initial - prev) - lam*L@prev`` with
    L = I - D^-1 A; the returned value is the L-inf norm of the difference
    between the observed change and that form (0.0 if no such rows).
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    for name, arr in (("state_t", state_t), ("state_prev", state_prev), ("initial", initial)):
        _check_state(g, arr, name)
    deg = g.degrees
    pos = deg > 0
    if not pos.any():
        return 0.0
    sums = neighbor_sums(g, state_prev)
    mean = sums[pos] / deg[pos, None].astype(np.float64)
    lhs = state_t[pos] - state_prev[pos]
    rhs = (1.0 - lam) * (initial[pos] - state_prev[pos]) - lam * (state_prev[pos] - mean)
    return float(np.max(np.abs(lhs - rhs)))


STATE_MAGIC = "# homodiff-state "


def write_state(
    dest: str | Path | IO[str],
    state: np.ndarray,
    idmap: NodeIdMap,
    *,
    meta: dict | None = None,
) -> None:
    """CSV checkpoint: a metadata comment line, then one row per node."""
    state = np.asarray(state, dtype=np.float64)
    header = dict(meta or {})
    header["d"] = int(state.shape[1])
    fh: IO[str]
    close = False
    if isinstance(dest, (str, Path)):
        fh = open(dest, "w", encoding="utf-8", newline="\n")
        close = True
    else:
        fh = dest
    try:
        fh.write(STATE_MAGIC + json.dumps(header, sort_keys=True) + "\n")
        fh.write("id," + ",".join(f"p{k}" for k in range(state.shape[1])) + "\n")
        for i in range(state.shape[0]):
            row = ",".join(repr(float(v)) for v in state[i])
            fh.write(f"{idmap.external_of(i)},{row}\n")
    finally:
        if close:
            fh.close()


def read_state(
    source: str | Path | IO[str],
    idmap: NodeIdMap,
) -> tuple[np.ndarray, dict]:
    fh = open(source, "r", encoding="utf-8") if isinstance(source, (str, Path)) else source
    close = isinstance(source, (str, Path))
    try:
        first = fh.readline()
        if not first.startswith(STATE_MAGIC):
            raise StateFileError("missing state metadata line")
        try:
            meta = json.loads(first[len(STATE_MAGIC):])
            d = int(meta["d"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise StateFileError(f"bad state metadata: {exc}") from None
        fh.readline()  # column header
        state = np.full((len(idmap), d), np.nan, dtype=np.float64)
        seen = 0
        for lineno, raw in enumerate(fh, start=3):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != d + 1:
                raise StateFileError(f"line {lineno}: expected {d + 1} fields")
            idx = idmap.get(parts[0])
            if idx is None:
                raise StateFileError(f"line {lineno}: unknown id {parts[0]!r}")
            state[idx] = [float(v) for v in parts[1:]]
            seen += 1
        if seen != len(idmap) or np.isnan(state).any():
            raise StateFileError("state file does not cover every graph node")
        return state, meta
    finally:
        if close:
            fh.close()
