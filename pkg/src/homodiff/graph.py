"""Immutable undirected graphs over dense node indices, with edge-list I/O."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable

import numpy as np
from scipy import sparse

log = logging.getLogger(__name__)


class InputError(ValueError):
    """Base class for malformed input files (distinct from bad parameters)."""


class EdgeListError(InputError):
    """Malformed, empty, or inconsistent edge-list input."""


@dataclass(frozen=True)
class EdgeListStats:
    """Bookkeeping from one edge-list load."""

    data_lines: int
    comment_lines: int
    self_loops_skipped: int
    duplicates_collapsed: int


class NodeIdMap:
    """Bijection between external id tokens and internal indices 0..n-1.

    Indices are assigned in order of first appearance in the input.
    """

    __slots__ = ("_index", "_external")

    def __init__(self) -> None:
        self._index: dict[str, int] = {}
        self._external: list[str] = []

    def add(self, token: str) -> int:
        """Return the index for ``token``, assigning the next free one if new."""
        idx = self._index.get(token)
        if idx is None:
            idx = len(self._external)
            self._index[token] = idx
            self._external.append(token)
        return idx

    def index_of(self, token: str) -> int:
        return self._index[token]

    def get(self, token: str, default=None):
        return self._index.get(token, default)

    def external_of(self, idx: int) -> str:
        return self._external[idx]

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __len__(self) -> int:
        return len(self._external)

    @property
    def externals(self) -> list[str]:
        return list(self._external)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph in CSR form.

    Neighbor lists are sorted ascending and free of self-loops and
    duplicates.  Arrays are read-only; instances are safe to share.
    """

    node_count: int
    edge_count: int
    indptr: np.ndarray   # int32, length node_count + 1
    indices: np.ndarray  # int32, length 2 * edge_count

    def neighbors(self, x: int) -> np.ndarray:
        """Sorted neighbor indices of node ``x`` (read-only view)."""
        if not 0 <= x < self.node_count:
            raise IndexError(f"node {x} out of range [0, {self.node_count})")
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    def degree(self, x: int) -> int:
        if not 0 <= x < self.node_count:
            raise IndexError(f"node {x} out of range [0, {self.node_count})")
        return int(self.indptr[x + 1] - self.indptr[x])

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def adjacency(self) -> sparse.csr_array:
        """Unweighted adjacency as float64 CSR (shared; do not mutate)."""
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return sparse.csr_array(
            (data, self.indices, self.indptr),
            shape=(self.node_count, self.node_count),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.edge_count == other.edge_count
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:  # arrays elided on purpose
        return f"Graph(node_count={self.node_count}, edge_count={self.edge_count})"


def graph_from_pairs(
    u: Iterable[int],
    v: Iterable[int],
    node_count: int,
    duplicate_policy: str = "collapse",
) -> tuple[Graph, int]:
    """Build a Graph from endpoint arrays (no self-loops allowed).

    Returns (graph, duplicates_collapsed).  With ``duplicate_policy="error"``
    a repeated undirected edge raises EdgeListError instead of collapsing.
    """
    if duplicate_policy not in ("collapse", "error"):
        raise ValueError(f"unknown duplicate policy {duplicate_policy!r}")
    if node_count <= 0:
        raise ValueError("node_count must be positive")
    ua = np.asarray(u, dtype=np.int64)
    va = np.asarray(v, dtype=np.int64)
    if ua.shape != va.shape:
        raise ValueError("endpoint arrays must have equal length")
    if ua.size and (ua == va).any():
        raise ValueError("self-loops must be filtered before graph construction")

    lo = np.minimum(ua, va)
    hi = np.maximum(ua, va)
    key = lo * node_count + hi  # node_count < 2**31 keeps this inside int64
    uniq = np.unique(key)
    dups = int(key.size - uniq.size)
    if dups and duplicate_policy == "error":
        raise EdgeListError(f"{dups} duplicate edge(s) in input")
    lo = uniq // node_count
    hi = uniq % node_count

    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int32)
    counts = np.bincount(src, minlength=node_count)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int32)
    indices.setflags(write=False)
    indptr.setflags(write=False)
    return Graph(node_count, int(uniq.size), indptr, indices), dups


def _split_tokens(line: str, delimiter: str) -> list[str]:
    if delimiter == " ":
        return line.split()
    return [t.strip() for t in line.split(delimiter)]


def load_edge_list(
    source: str | Path | Iterable[str],
    *,
    delimiter: str = ",",
    duplicate_policy: str = "collapse",
) -> tuple[Graph, NodeIdMap, EdgeListStats]:
    """Parse ``src<delim>dst[<delim>weight]`` lines into a Graph.

    ``source`` is a path or any iterable of lines.  Lines starting with ``#``
    are comments; blank lines are ignored; an optional third weight token is
    accepted and ignored.  Self-loops are dropped (their endpoint still gets
    an index) and duplicate edges collapse to one unless
    ``duplicate_policy="error"``.

    Returns (graph, id_map, stats).  Raises EdgeListError on a malformed
    line (with its 1-based line number) or when no data lines are present.
    """
    if delimiter not in (",", "\t", " "):
        raise ValueError(f"unsupported delimiter {delimiter!r}")
    fh: Iterable[str]
    close = False
    if isinstance(source, (str, Path)):
        fh = open(source, "r", encoding="utf-8")
        close = True
    else:
        fh = source

    idmap = NodeIdMap()
    us: list[int] = []
    vs: list[int] = []
    data_lines = comment_lines = self_loops = 0
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                comment_lines += 1
                continue
            tokens = _split_tokens(line, delimiter)
            if len(tokens) not in (2, 3) or not tokens[0] or not tokens[1]:
                raise EdgeListError(
                    f"line {lineno}: expected 'src{delimiter}dst' with optional "
                    f"weight, got {raw.rstrip()!r}"
                )
            data_lines += 1
            a = idmap.add(tokens[0])
            b = idmap.add(tokens[1])
            if a == b:
                self_loops += 1
                continue
            us.append(a)
            vs.append(b)
    finally:
        if close:
            fh.close()  # type: ignore[union-attr]

    if data_lines == 0:
        raise EdgeListError("empty edge list: no data lines found")
    g, dups = graph_from_pairs(us, vs, len(idmap), duplicate_policy)
    stats = EdgeListStats(data_lines, comment_lines, self_loops, dups)
    log.info(
        "loaded graph: %d nodes, %d edges (%d self-loops skipped, %d duplicates collapsed)",
        g.node_count, g.edge_count, self_loops, dups,
    )
    return g, idmap, stats


def export_edge_list(
    g: Graph,
    idmap: NodeIdMap,
    dest: str | Path | IO[str],
    *,
    delimiter: str = ",",
) -> None:
    """Write each edge once, smaller internal index first, as external ids."""
    if delimiter not in (",", "\t", " "):
        raise ValueError(f"unsupported delimiter {delimiter!r}")
    fh: IO[str]
    close = False
    if isinstance(dest, (str, Path)):
        fh = open(dest, "w", encoding="utf-8", newline="\n")
        close = True
    else:
        fh = dest
    try:
        ext = idmap.externals
        for x in range(g.node_count):
            nb = g.neighbors(x)
            start = int(np.searchsorted(nb, x, side="right"))
            for y in nb[start:]:
                fh.write(f"{ext[x]}{delimiter}{ext[int(y)]}\n")
    finally:
        if close:
            fh.close()
