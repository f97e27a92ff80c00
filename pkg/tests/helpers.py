"""Small graph/label builders shared across test modules."""

from collections import deque

import numpy as np

from homodiff import Graph, LabelStore, graph_from_pairs


def build(edges, n: int) -> Graph:
    if edges:
        u, v = zip(*edges)
    else:
        u, v = (), ()
    g, _ = graph_from_pairs(
        np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64), n
    )
    return g


def path_graph(n: int) -> Graph:
    return build([(i, i + 1) for i in range(n - 1)], n)


def star_graph(n: int) -> Graph:
    # node 0 is the hub
    return build([(0, i) for i in range(1, n)], n)


def complete_graph(n: int) -> Graph:
    return build([(i, j) for i in range(n) for j in range(i + 1, n)], n)


def random_graph(rng, n: int, p: float) -> Graph:
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    g, _ = graph_from_pairs(iu[keep], ju[keep], n)
    return g


def store(cats, d: int | None = None) -> LabelStore:
    cats = np.asarray(cats, dtype=np.int32)
    if d is None:
        d = int(cats.max()) + 1
    return LabelStore(cats.size, d, cats)


def bfs_distances(g: Graph, sources) -> np.ndarray:
    """Reference hop distances (-1 where unreachable)."""
    dist = np.full(g.node_count, -1, dtype=np.int64)
    q = deque()
    for s in sources:
        dist[int(s)] = 0
        q.append(int(s))
    while q:
        x = q.popleft()
        for y in g.neighbors(x):
            y = int(y)
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist
