"""Delta histograms of combination values and known-combination coverage.

The value range [min, max] of the combination stream is cut into n_bucket
equi-width buckets; a value v falls in the bucket with r_min < v <= r_max,
except that the lowest bucket also includes the global minimum. Within a
bucket, combinations rank by value descending; equal values rank by stream
position, earlier position first. A known combination counts toward
known_in_top[m] when its rank is at most ceil(m/100 * bucket size). The
Y-axis percentage divides by the total number of known combinations
network-wide, so the per-bucket percentages at any m sum to at most 100 and
at m = 100 to exactly 100.

Construction is a two-pass streaming reduction: the stream is never
materialized, only per-bucket counters and the (few) known combinations'
statistics are held.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .influence import (
    ComboScore,
    Measure,
    SourceDiffVector,
    colex_rank,
    colex_unrank,
    value_blocks,
)
from .network import AnnotationSets, SignalingNetwork

DEFAULT_M_LEVELS = (1, 10, 20, 50)
_BLOCK = 65536


@dataclass(frozen=True)
class KnownComboSet:
    k: int
    combos: frozenset[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.combos)


def known_combos(annotations: AnnotationSets, network: SignalingNetwork, k: int) -> KnownComboSet:
    """Size-k subsets of each drug's resolved targets, deduplicated.

    Drugs with fewer than k resolved targets contribute nothing; if that
    leaves no combination at all the inputs cannot be profiled.
    """
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    out = set()
    for drug, targets in annotations.drugs.items():
        ids = sorted(int(t) for t in targets)
        if any(t < 0 or t >= network.n for t in ids):
            raise ValidationError(f"drug {drug!r} has target ids outside network of size {network.n}")
        if len(ids) < k:
            continue
        out.update(itertools.combinations(ids, k))
    if not out:
        raise ValidationError(f"no drug has >= {k} targets resolved in the network")
    return KnownComboSet(k=k, combos=frozenset(out))


@dataclass(frozen=True)
class KnownPlacement:
    members: tuple[int, ...]
    value: float
    bucket: int
    rank: int


@dataclass
class Bucket:
    r_min: float
    r_max: float
    combo_count: int
    known_in_bucket: int
    known_in_top: dict[int, int] = field(default_factory=dict)


@dataclass
class DeltaHistogram:
    measure: Measure
    k: int
    n_bucket: int
    m_levels: tuple[int, ...]
    buckets: list[Bucket]
    total_combos: int
    total_known: int
    value_min: float
    value_max: float
    degenerate: bool
    known_placements: tuple[KnownPlacement, ...] = ()

    def percentage(self, bucket_index: int, m: int) -> float:
        if self.total_known == 0:
            return 0.0
        return 100.0 * self.buckets[bucket_index].known_in_top[m] / self.total_known

    def coverage(self, bucket_index: int) -> float:
        """Share of all known combinations in this bucket's top 50%."""
        return self.percentage(bucket_index, 50)

    def max_coverage_index(self) -> int:
        """Index of the max-coverage bucket; ties go to the higher range."""
        best = 0
        for i in range(len(self.buckets)):
            if self.coverage(i) >= self.coverage(best):
                best = i
        return best

    @property
    def delta_range(self) -> tuple[float, float]:
        b = self.buckets[self.max_coverage_index()]
        return b.r_min, b.r_max

    def worst_bucket_size(self) -> int:
        return max(b.combo_count for b in self.buckets)

    def to_json_dict(self) -> dict:
        d_min, d_max = self.delta_range
        return {
            "measure": self.measure.value,
            "k": self.k,
            "n_bucket": self.n_bucket,
            "m_levels": list(self.m_levels),
            "total_combos": self.total_combos,
            "total_known": self.total_known,
            "value_min": self.value_min,
            "value_max": self.value_max,
            "degenerate": self.degenerate,
            "delta_min": d_min,
            "delta_max": d_max,
            "max_coverage_bucket": self.max_coverage_index(),
            "buckets": [
                {
                    "index": i,
                    "r_min": b.r_min,
                    "r_max": b.r_max,
                    "combo_count": b.combo_count,
                    "known_in_bucket": b.known_in_bucket,
                    "known_in_top": {str(m): c for m, c in sorted(b.known_in_top.items())},
                    "percent": {str(m): self.percentage(i, m) for m in sorted(b.known_in_top)},
                    "coverage": self.coverage(i),
                }
                for i, b in enumerate(self.buckets)
            ],
        }


def _check_levels(m_levels):
    levels = tuple(int(m) for m in m_levels)
    if not levels:
        raise ValidationError("m_levels is empty")
    for m in levels:
        if not (1 <= m <= 100):
            raise ValidationError(f"m level must lie in [1, 100], got {m}")
    return levels


def _bucket_edges(vmin, vmax, n_bucket):
    if vmin == vmax:
        warnings.warn(
            f"zero-width value range [{vmin}, {vmax}]: collapsing to a single bucket",
            stacklevel=3,
        )
        return np.array([vmin, vmax]), True
    return np.linspace(vmin, vmax, n_bucket + 1), False


def _assign(edges, values):
    idx = np.searchsorted(edges, values, side="left") - 1
    return np.clip(idx, 0, len(edges) - 2)


def _histogram_core(block_factory, total, vmin, vmax, known_items, n_bucket,
                    m_levels, measure, k):
    """Second pass: per-bucket counts plus exact ranks of the known items.

    known_items is a list of (members, stream_position, value). A known's
    rank inside its bucket is 1 + (streamed values strictly greater) +
    (equal values streamed at an earlier position).
    """
    edges, degenerate = _bucket_edges(vmin, vmax, n_bucket)
    nb = len(edges) - 1
    counts = np.zeros(nb, dtype=np.int64)

    known_bucket = {}
    per_bucket: dict[int, dict] = {}
    for ki, (members, pos, value) in enumerate(known_items):
        b = int(_assign(edges, np.array([value]))[0])
        known_bucket[ki] = b
        per_bucket.setdefault(b, {"items": []})["items"].append(ki)
    for b, state in per_bucket.items():
        order = sorted(state["items"], key=lambda ki: known_items[ki][2])
        state["order"] = order
        state["kv"] = np.array([known_items[ki][2] for ki in order])
        state["cnt"] = np.zeros(len(order) + 1, dtype=np.int64)
        state["ties"] = np.zeros(len(order), dtype=np.int64)

    for start, vals in block_factory():
        bidx = _assign(edges, vals)
        counts += np.bincount(bidx, minlength=nb)
        for b, state in per_bucket.items():
            mask = bidx == b
            if not mask.any():
                continue
            sel = vals[mask]
            left = np.searchsorted(state["kv"], sel, side="left")
            state["cnt"] += np.bincount(left, minlength=len(state["kv"]) + 1)
            right = np.searchsorted(state["kv"], sel, side="right")
            hits = np.flatnonzero(right > left)
            if hits.size:
                abs_pos = start + np.flatnonzero(mask)
                for h in hits:
                    for slot in range(left[h], right[h]):
                        ki = state["order"][slot]
                        if abs_pos[h] < known_items[ki][1]:
                            state["ties"][slot] += 1

    ranks = {}
    for b, state in per_bucket.items():
        suffix = np.cumsum(state["cnt"][::-1])[::-1]
        for slot, ki in enumerate(state["order"]):
            greater = int(suffix[slot + 1])
            ranks[ki] = greater + int(state["ties"][slot]) + 1

    levels = sorted(set(m_levels) | {50, 100})
    buckets = []
    for b in range(nb):
        kis = per_bucket.get(b, {}).get("items", [])
        top = {}
        for m in levels:
            thr = (m * int(counts[b]) + 99) // 100
            top[m] = sum(1 for ki in kis if ranks[ki] <= thr)
        buckets.append(
            Bucket(
                r_min=float(edges[b]),
                r_max=float(edges[b + 1]),
                combo_count=int(counts[b]),
                known_in_bucket=len(kis),
                known_in_top=top,
            )
        )
    placements = tuple(
        KnownPlacement(members=members, value=value, bucket=known_bucket[ki], rank=ranks[ki])
        for ki, (members, pos, value) in sorted(enumerate(known_items), key=lambda kv: kv[1][1])
    )
    return DeltaHistogram(
        measure=measure,
        k=k,
        n_bucket=n_bucket,
        m_levels=tuple(m_levels),
        buckets=buckets,
        total_combos=total,
        total_known=len(known_items),
        value_min=vmin,
        value_max=vmax,
        degenerate=degenerate,
        known_placements=placements,
    )


def histogram_from_diffs(
    diffs: SourceDiffVector,
    k: int,
    known: KnownComboSet,
    n_bucket: int = 5,
    m_levels: Sequence[int] = DEFAULT_M_LEVELS,
) -> DeltaHistogram:
    """Build the histogram straight from a diff vector (colex fast path)."""
    if n_bucket < 1:
        raise ValidationError(f"n_bucket must be >= 1, got {n_bucket}")
    if known.k != k:
        raise ValidationError(f"known combinations have k={known.k}, stream has k={k}")
    m_levels = _check_levels(m_levels)
    n = diffs.n
    if not (2 <= k <= n):
        raise ValidationError(f"k must satisfy 2 <= k <= {n}, got {k}")

    known_items = []
    values = diffs.values
    for members in sorted(known.combos, key=colex_rank):
        ids = np.array(members)
        if ids.min() < 0 or ids.max() >= n:
            raise ValidationError(f"known combination {members} outside network of size {n}")
        known_items.append((members, colex_rank(members), float(np.mean(values[ids]))))

    total = 0
    vmin = np.inf
    vmax = -np.inf
    for _, vals in value_blocks(values, k, _BLOCK):
        total += vals.shape[0]
        if vals.size:
            vmin = min(vmin, float(vals.min()))
            vmax = max(vmax, float(vals.max()))
    if total == 0:
        raise ValidationError("empty combination stream")
    return _histogram_core(
        lambda: value_blocks(values, k, _BLOCK),
        total, vmin, vmax, known_items, n_bucket, m_levels, diffs.measure, k,
    )


def build_delta_histogram(
    combo_stream,
    known: KnownComboSet,
    n_bucket: int = 5,
    m_levels: Sequence[int] = DEFAULT_M_LEVELS,
    measure: Measure = Measure.PEN,
) -> DeltaHistogram:
    """Build the histogram from a replayable stream of ComboScore.

    combo_stream is either a sequence or a zero-argument callable returning
    a fresh iterator (the reduction needs two passes). One-shot iterators
    are materialized as a fallback.
    """
    if n_bucket < 1:
        raise ValidationError(f"n_bucket must be >= 1, got {n_bucket}")
    m_levels = _check_levels(m_levels)
    if callable(combo_stream):
        factory = combo_stream
    elif isinstance(combo_stream, Sequence):
        factory = lambda: iter(combo_stream)
    else:
        combos = list(combo_stream)
        factory = lambda: iter(combos)

    wanted = {tuple(c): i for i, c in enumerate(sorted(known.combos, key=colex_rank))}
    found: dict[int, tuple] = {}
    total = 0
    vmin = np.inf
    vmax = -np.inf
    for pos, score in enumerate(factory()):
        total += 1
        v = score.value
        if v < vmin:
            vmin = v
        if v > vmax:
            vmax = v
        ki = wanted.get(score.members)
        if ki is not None:
            found[ki] = (score.members, pos, v)
    if total == 0:
        raise ValidationError("empty combination stream")
    missing = [c for c, i in wanted.items() if i not in found]
    if missing:
        raise ValidationError(f"known combinations absent from the stream: {missing[:3]}")
    known_items = [found[i] for i in range(len(wanted))]

    def blocks():
        it = factory()
        start = 0
        while True:
            chunk = list(itertools.islice(it, _BLOCK))
            if not chunk:
                return
            yield start, np.array([s.value for s in chunk])
            start += len(chunk)

    return _histogram_core(blocks, total, vmin, vmax, known_items, n_bucket,
                           m_levels, measure, known.k)


def select_candidates(combo_stream: Iterable[ComboScore], lo: float, hi: float,
                      top_m: int | None = None) -> list[ComboScore]:
    """Combinations with lo < value <= hi, sorted by value descending.

    The lower bound is closed when lo equals the stream's global minimum,
    mirroring the lowest-bucket rule. Ties keep stream order. An empty
    selection is an empty list.
    """
    if top_m is not None and top_m < 1:
        raise ValidationError(f"top_m must be >= 1, got {top_m}")
    picked = []
    boundary = []
    vmin = np.inf
    for pos, score in enumerate(combo_stream):
        v = score.value
        if v < vmin:
            vmin = v
        if lo < v <= hi:
            picked.append((pos, score))
        elif v == lo and v <= hi:
            boundary.append((pos, score))
    if boundary and lo == vmin:
        picked.extend(boundary)
    picked.sort(key=lambda ps: (-ps[1].value, ps[0]))
    if top_m is not None:
        picked = picked[:top_m]
    return [score for _, score in picked]


def select_from_diffs(diffs: SourceDiffVector, k: int, lo: float, hi: float,
                      top_m: int | None = None) -> list[ComboScore]:
    """Vectorized equivalent of select_candidates over the colex stream."""
    if top_m is not None and top_m < 1:
        raise ValidationError(f"top_m must be >= 1, got {top_m}")
    n = diffs.n
    if not (2 <= k <= n):
        raise ValidationError(f"k must satisfy 2 <= k <= {n}, got {k}")
    pos_parts = []
    val_parts = []
    bpos_parts = []
    bval_parts = []
    vmin = np.inf
    for start, vals in value_blocks(diffs.values, k, _BLOCK):
        if vals.size:
            vmin = min(vmin, float(vals.min()))
        inside = np.flatnonzero((vals > lo) & (vals <= hi))
        if inside.size:
            pos_parts.append(start + inside)
            val_parts.append(vals[inside])
        if lo <= hi:
            edge = np.flatnonzero(vals == lo)
            if edge.size:
                bpos_parts.append(start + edge)
                bval_parts.append(vals[edge])
    if bpos_parts and lo == vmin:
        pos_parts.extend(bpos_parts)
        val_parts.extend(bval_parts)
    if not pos_parts:
        return []
    positions = np.concatenate(pos_parts)
    values = np.concatenate(val_parts)
    order = np.lexsort((positions, -values))
    if top_m is not None:
        order = order[:top_m]
    return [
        ComboScore(members=colex_unrank(int(positions[i]), k), value=float(values[i]))
        for i in order
    ]


def save_known_membership_csv(hist: DeltaHistogram, network: SignalingNetwork, path) -> None:
    """Per-known-combination bucket membership, one row per combination."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("members,value,bucket,rank,bucket_r_min,bucket_r_max\n")
        for p in hist.known_placements:
            names = "+".join(network.symbol_of(m) for m in p.members)
            b = hist.buckets[p.bucket]
            fh.write(f"{names},{p.value:.4f},{p.bucket},{p.rank},{b.r_min:.4f},{b.r_max:.4f}\n")
