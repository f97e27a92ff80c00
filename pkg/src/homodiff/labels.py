"""Ground-truth ages, category binning, label stores, and seed/validation splits."""

from __future__ import annotations

import json
import logging
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .assignment import largest_remainder
from .graph import InputError, NodeIdMap, _split_tokens

log = logging.getLogger(__name__)

DEFAULT_UPPER_BOUNDS = (24, 34, 50)


class LabelFileError(InputError):
    """Malformed or inconsistent label/split input."""


@dataclass(frozen=True)
class AgeBinning:
    """Age-to-category map from ascending inclusive upper bounds.

    ``upper_bounds`` holds the finite bounds; the last category is
    open-ended, so d = len(upper_bounds) + 1.  An age lands in the smallest
    category whose bound it does not exceed.
    """

    upper_bounds: tuple[int, ...] = DEFAULT_UPPER_BOUNDS
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        bounds = tuple(int(b) for b in self.upper_bounds)
        if len(bounds) < 1:
            raise ValueError("need at least one finite bound (two categories)")
        if bounds[0] < 0:
            raise ValueError("bounds must be non-negative")
        if any(b <= a for a, b in zip(bounds, bounds[1:])):
            raise ValueError("bounds must be strictly increasing")
        object.__setattr__(self, "upper_bounds", bounds)
        if self.names is None:
            names = []
            lo = 0
            for b in bounds:
                names.append(f"{lo}-{b}")
                lo = b + 1
            names.append(f"{lo}+")
            object.__setattr__(self, "names", tuple(names))
        elif len(self.names) != len(bounds) + 1:
            raise ValueError("need exactly one name per category")

    @property
    def d(self) -> int:
        return len(self.upper_bounds) + 1

    def bin_age(self, age: int) -> int:
        """Category index for an integer age (>= 0)."""
        if age < 0:
            raise ValueError(f"age must be non-negative, got {age}")
        return bisect_left(self.upper_bounds, age)

    def bin_ages(self, ages: np.ndarray) -> np.ndarray:
        """Vectorized bin_age; negative entries are propagated as -1."""
        ages = np.asarray(ages)
        out = np.searchsorted(self.upper_bounds, ages, side="left").astype(np.int32)
        out[ages < 0] = -1
        return out

    def representative_ages(self) -> list[int]:
        """One age per category that bins back to it (used by generators)."""
        reps = []
        lo = 0
        for b in self.upper_bounds:
            reps.append((lo + b) // 2)
            lo = b + 1
        reps.append(lo + 4)
        return reps


def bin_age(age: int, binning: AgeBinning) -> int:
    return binning.bin_age(age)


class LabelStore:
    """Partial map node index -> category, dense-array backed (-1 = unlabeled)."""

    __slots__ = ("_cats", "d")

    def __init__(self, node_count: int, d: int, categories: np.ndarray | None = None):
        if d < 2:
            raise ValueError("need at least two categories")
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        self.d = int(d)
        if categories is None:
            self._cats = np.full(node_count, -1, dtype=np.int32)
        else:
            cats = np.asarray(categories, dtype=np.int32).copy()
            if cats.shape != (node_count,):
                raise ValueError("categories array must have one entry per node")
            if cats.max(initial=-1) >= d:
                raise ValueError("category index out of range")
            self._cats = cats

    @property
    def node_count(self) -> int:
        return int(self._cats.shape[0])

    @property
    def categories(self) -> np.ndarray:
        """Full dense category array (read-only view; -1 means unlabeled)."""
        view = self._cats.view()
        view.setflags(write=False)
        return view

    def set(self, node: int, category: int) -> None:
        if not 0 <= category < self.d:
            raise ValueError(f"category {category} out of range [0, {self.d})")
        self._cats[node] = category

    def get(self, node: int) -> int | None:
        c = int(self._cats[node])
        return None if c < 0 else c

    def __len__(self) -> int:
        return int((self._cats >= 0).sum())

    def labeled_nodes(self) -> np.ndarray:
        return np.nonzero(self._cats >= 0)[0]

    def counts(self) -> np.ndarray:
        """Per-category histogram over labeled nodes (length d)."""
        labeled = self._cats[self._cats >= 0]
        return np.bincount(labeled, minlength=self.d).astype(np.int64)

    def restrict_to(self, nodes: np.ndarray) -> "LabelStore":
        """New store keeping only the given nodes' labels."""
        cats = np.full(self.node_count, -1, dtype=np.int32)
        nodes = np.asarray(nodes, dtype=np.int64)
        cats[nodes] = self._cats[nodes]
        return LabelStore(self.node_count, self.d, cats)


@dataclass(frozen=True)
class LabelStats:
    data_lines: int
    comment_lines: int
    unknown_ids_skipped: int
    duplicate_rows: int


def load_ages(
    source: str | Path | Iterable[str],
    idmap: NodeIdMap,
    *,
    delimiter: str = ",",
) -> tuple[np.ndarray, LabelStats]:
    """Parse ``id<delim>age`` lines into a per-node age array (-1 = unknown).

    Ids absent from the graph are skipped and counted.  A repeated id with
    the same age collapses to one entry; a conflicting age is an error.
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

    ages = np.full(len(idmap), -1, dtype=np.int32)
    data_lines = comment_lines = unknown = dup_rows = 0
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                comment_lines += 1
                continue
            tokens = _split_tokens(line, delimiter)
            if len(tokens) != 2 or not tokens[0] or not tokens[1]:
                raise LabelFileError(
                    f"line {lineno}: expected 'id{delimiter}age', got {raw.rstrip()!r}"
                )
            data_lines += 1
            try:
                age = int(tokens[1])
            except ValueError:
                raise LabelFileError(
                    f"line {lineno}: age must be an integer, got {tokens[1]!r}"
                ) from None
            if age < 0:
                raise LabelFileError(f"line {lineno}: age must be non-negative")
            idx = idmap.get(tokens[0])
            if idx is None:
                unknown += 1
                continue
            prev = int(ages[idx])
            if prev >= 0:
                if prev != age:
                    raise LabelFileError(
                        f"line {lineno}: id {tokens[0]!r} already has age {prev}, "
                        f"conflicting value {age}"
                    )
                dup_rows += 1
                continue
            ages[idx] = age
    finally:
        if close:
            fh.close()  # type: ignore[union-attr]

    if data_lines == 0:
        raise LabelFileError("empty label file: no data lines found")
    stats = LabelStats(data_lines, comment_lines, unknown, dup_rows)
    log.info(
        "loaded ages for %d nodes (%d unknown ids skipped, %d duplicate rows)",
        int((ages >= 0).sum()), unknown, dup_rows,
    )
    return ages, stats


def load_ground_truth(
    source: str | Path | Iterable[str],
    idmap: NodeIdMap,
    binning: AgeBinning | None = None,
    *,
    delimiter: str = ",",
) -> tuple[LabelStore, LabelStats]:
    """Load ages and bin them into a LabelStore."""
    binning = binning or AgeBinning()
    ages, stats = load_ages(source, idmap, delimiter=delimiter)
    cats = binning.bin_ages(ages)
    return LabelStore(len(idmap), binning.d, cats), stats


def year_store(ages: np.ndarray) -> LabelStore:
    """LabelStore whose categories are raw age years (for per-year mixing)."""
    ages = np.asarray(ages, dtype=np.int32)
    top = int(ages.max(initial=-1))
    if top < 0:
        raise ValueError("no labeled nodes")
    return LabelStore(ages.shape[0], max(top + 1, 2), ages)


@dataclass(frozen=True)
class Split:
    """Disjoint seed/validation partition of the labeled nodes."""

    seeds: np.ndarray
    validation: np.ndarray
    rng_seed: int | None = None

    def __post_init__(self) -> None:
        for name in ("seeds", "validation"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            arr = np.sort(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def split_train_validation(
    labels: LabelStore,
    validation_fraction: float,
    rng_seed: int,
    *,
    stratified: bool = False,
) -> Split:
    """Partition labeled nodes into seeds and validation.

    Validation size is round(fraction * labeled_count).  Stratified mode
    apportions that size across categories by largest remainder, so the
    validation set mirrors the label histogram.
    """
    if not 0.0 < validation_fraction < 1.0:
        raise ValueError("validation fraction must lie strictly between 0 and 1")
    pool = labels.labeled_nodes()
    if pool.size == 0:
        raise ValueError("cannot split an empty label store")
    n_val = int(round(validation_fraction * pool.size))
    rng = np.random.default_rng(rng_seed)

    if not stratified:
        perm = rng.permutation(pool)
        val = perm[:n_val]
    else:
        counts = labels.counts()
        shares = counts / counts.sum()
        quotas = largest_remainder(shares, n_val)
        cats = labels.categories
        parts = []
        for k in range(labels.d):
            members = pool[cats[pool] == k]
            if quotas[k] > members.size:
                raise ValueError(
                    f"category {k} has {members.size} labeled nodes, "
                    f"cannot reserve {quotas[k]} for validation"
                )
            perm = rng.permutation(members)
            parts.append(perm[: quotas[k]])
        val = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)

    val_sorted = np.sort(val.astype(np.int64))
    seed_nodes = np.setdiff1d(pool, val_sorted, assume_unique=True)
    return Split(seed_nodes, val_sorted, rng_seed)


def split_to_dict(split: Split, idmap: NodeIdMap) -> dict:
    return {
        "rng_seed": split.rng_seed,
        "seeds": [idmap.external_of(int(x)) for x in split.seeds],
        "validation": [idmap.external_of(int(x)) for x in split.validation],
    }


def write_split(dest: str | Path | IO[str], split: Split, idmap: NodeIdMap) -> None:
    payload = split_to_dict(split, idmap)
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        json.dump(payload, dest, indent=2)


def read_split(source: str | Path | IO[str], idmap: NodeIdMap) -> Split:
    """Read a split JSON back into internal indices."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    else:
        payload = json.load(source)
    try:
        seeds_ext = payload["seeds"]
        val_ext = payload["validation"]
    except (TypeError, KeyError) as exc:
        raise LabelFileError("split file must contain 'seeds' and 'validation' arrays") from exc

    def to_idx(tokens, what):
        out = np.empty(len(tokens), dtype=np.int64)
        for i, t in enumerate(tokens):
            idx = idmap.get(str(t))
            if idx is None:
                raise LabelFileError(f"{what} id {t!r} not present in the graph")
            out[i] = idx
        return out

    return Split(to_idx(seeds_ext, "seed"), to_idx(val_ext, "validation"),
                 payload.get("rng_seed"))
