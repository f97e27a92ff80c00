"""Planted-homophily block-model graphs for desk-scale pipeline tests."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .graph import Graph, graph_from_pairs
from .labels import LabelStore

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SynthConfig:
    """Block-model description: group sizes, pairwise edge probabilities,
    and how much of the ground truth is revealed."""

    nodes_per_group: tuple[int, ...]
    mixing: np.ndarray          # (groups, groups) symmetric probabilities
    labeled_fraction: float = 0.1
    rng_seed: int = 0

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.nodes_per_group)
        if len(sizes) < 2 or any(s < 0 for s in sizes) or sum(sizes) < 2:
            raise ValueError("need >= 2 groups and >= 2 nodes in total")
        object.__setattr__(self, "nodes_per_group", sizes)
        m = np.asarray(self.mixing, dtype=np.float64).copy()
        if m.shape != (len(sizes), len(sizes)):
            raise ValueError("mixing matrix must be groups x groups")
        if not np.allclose(m, m.T):
            raise ValueError("mixing matrix must be symmetric")
        if (m < 0).any() or (m > 1).any():
            raise ValueError("mixing entries must be probabilities")
        m.setflags(write=False)
        object.__setattr__(self, "mixing", m)
        if not 0.0 < self.labeled_fraction <= 1.0:
            raise ValueError("labeled_fraction must lie in (0, 1]")

    @property
    def node_count(self) -> int:
        return sum(self.nodes_per_group)

    @classmethod
    def from_rates(
        cls,
        nodes_per_group,
        p_in: float,
        p_out: float,
        *,
        labeled_fraction: float = 0.1,
        rng_seed: int = 0,
    ) -> "SynthConfig":
        """Uniform within-group probability p_in, cross-group p_out."""
        k = len(nodes_per_group)
        mixing = np.full((k, k), float(p_out))
        np.fill_diagonal(mixing, float(p_in))
        return cls(tuple(nodes_per_group), mixing, labeled_fraction, rng_seed)

    @classmethod
    def from_mean_degrees(
        cls,
        groups: int,
        group_size: int,
        intra_degree: float,
        inter_degree: float,
        *,
        labeled_fraction: float = 0.1,
        rng_seed: int = 0,
    ) -> "SynthConfig":
        """Equal-size groups with target mean within- and cross-group degrees.

        ``intra_degree`` is the expected number of same-group neighbors per
        node; ``inter_degree`` the expected number of neighbors across all
        other groups combined.
        """
        if groups < 2 or group_size < 2:
            raise ValueError("need >= 2 groups of >= 2 nodes")
        p_in = intra_degree / (group_size - 1)
        p_out = inter_degree / (group_size * (groups - 1))
        if not (0 <= p_in <= 1 and 0 <= p_out <= 1):
            raise ValueError("target degrees exceed the feasible range")
        return cls.from_rates(
            (group_size,) * groups, p_in, p_out,
            labeled_fraction=labeled_fraction, rng_seed=rng_seed,
        )


def _sample_distinct(rng: np.random.Generator, total: int, k: int) -> np.ndarray:
    """Uniform k-subset of range(total), as a sorted array.

    Draws i.i.d. positions and keeps the first k distinct ones in draw
    order, which is exactly a uniform subset; practical because k is far
    below total for sparse blocks (and k == total short-circuits).
    """
    if k >= total:
        return np.arange(total, dtype=np.int64)
    if k <= 0:
        return np.empty(0, dtype=np.int64)
    chosen = np.empty(0, dtype=np.int64)
    need = k
    while need > 0:
        batch = rng.integers(0, total, size=need + (need >> 3) + 16, dtype=np.int64)
        if chosen.size:
            batch = batch[~np.isin(batch, chosen)]
        uniq, first = np.unique(batch, return_index=True)
        take = uniq[np.argsort(first)][:need]
        chosen = np.concatenate([chosen, take])
        need = k - chosen.size
    return np.sort(chosen)


def _triangle_decode(linear: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert the u-major enumeration of pairs (u, v), u < v, within a group."""
    lin = np.asarray(linear, dtype=np.int64)
    b = 2.0 * s - 1.0
    u = np.floor((b - np.sqrt(b * b - 8.0 * lin.astype(np.float64))) / 2.0).astype(np.int64)
    u = np.clip(u, 0, s - 2)

    def base(uu):
        return uu * (s - 1) - (uu * (uu - 1)) // 2

    # fix +-1 drift from the float sqrt
    for _ in range(3):
        over = base(u) > lin
        if over.any():
            u[over] -= 1
        under = lin >= base(u) + (s - 1 - u)
        if under.any():
            u[under] += 1
        if not (over.any() or under.any()):
            break
    v = lin - base(u) + u + 1
    return u, v


def generate(config: SynthConfig) -> tuple[Graph, LabelStore, LabelStore]:
    """Draw a graph from the block model.

    Every unordered node pair is an independent Bernoulli with the
    probability of its group cell; blocks are sampled by count + uniform
    positions, so the cost scales with the expected edge count rather than
    the pair count.  Returns (graph, full ground truth, a uniformly sampled
    labeled_fraction of it).  Deterministic given the config.
    """
    rng = np.random.default_rng(config.rng_seed)
    sizes = np.asarray(config.nodes_per_group, dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    n = int(offsets[-1])
    groups = len(sizes)

    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    for i in range(groups):
        for j in range(i, groups):
            p = float(config.mixing[i, j])
            if i == j:
                total = int(sizes[i]) * (int(sizes[i]) - 1) // 2
            else:
                total = int(sizes[i]) * int(sizes[j])
            if total == 0 or p == 0.0:
                continue
            count = int(rng.binomial(total, p))
            if count == 0:
                continue
            positions = _sample_distinct(rng, total, count)
            if i == j:
                u, v = _triangle_decode(positions, int(sizes[i]))
                us.append(u + offsets[i])
                vs.append(v + offsets[i])
            else:
                us.append(positions // int(sizes[j]) + offsets[i])
                vs.append(positions % int(sizes[j]) + offsets[j])

    if us:
        u = np.concatenate(us)
        v = np.concatenate(vs)
    else:
        u = np.empty(0, dtype=np.int64)
        v = np.empty(0, dtype=np.int64)
    g, _ = graph_from_pairs(u, v, n)

    group_of = np.repeat(np.arange(groups, dtype=np.int32), sizes)
    full = LabelStore(n, groups, group_of)
    k_lab = max(1, int(round(config.labeled_fraction * n)))
    revealed = np.sort(rng.choice(n, size=min(k_lab, n), replace=False))
    sampled = full.restrict_to(revealed)
    log.info(
        "generated block-model graph: %d nodes, %d edges, %d labeled",
        n, g.edge_count, len(sampled),
    )
    return g, full, sampled
