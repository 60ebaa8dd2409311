"""Influence differentials between oncogenes and the rest of a network.

The single-source diff of s is the average distance from s to the
non-oncogene nodes minus the average distance from s to the oncogenes
(the source itself is never excluded from the side it falls on; its
diagonal zero contributes). A combination's value is the arithmetic mean of
its members' single-source diffs, which is identical to averaging the
members' distance rows first and then differencing, by linearity.

Combinations are canonical ascending id tuples, streamed in colexicographic
order so a combination's stream position is a closed-form function of its
members.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from .errors import ValidationError
from .pen import PenMatrix


class Measure(str, enum.Enum):
    PEN = "pen"
    PPR = "ppr"
    DIST = "dist"


@dataclass
class SourceDiffVector:
    measure: Measure
    gene_set: frozenset[int]
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ComboScore:
    members: tuple[int, ...]
    value: float


def _check_node_set(node_set, n, label):
    ids = sorted(set(int(v) for v in node_set))
    if not ids:
        raise ValidationError(f"{label} is empty")
    if ids[0] < 0 or ids[-1] >= n:
        raise ValidationError(f"{label} contains ids outside network of size {n}")
    return np.array(ids, dtype=np.int64)


def avg_pen_distance(pen: PenMatrix, source: int, node_set) -> float:
    """Mean distance from source to the node set (source not excluded)."""
    ids = _check_node_set(node_set, pen.n, "node set")
    if not (0 <= source < pen.n):
        raise ValidationError(f"source id {source} outside matrix of size {pen.n}")
    return float(np.mean(pen.values[source, ids]))


def _split_genes(genes, n):
    gene_ids = _check_node_set(genes, n, "gene set")
    if gene_ids.size == n:
        raise ValidationError("gene set covers every node; the complement is empty")
    mask = np.zeros(n, dtype=bool)
    mask[gene_ids] = True
    rest_ids = np.flatnonzero(~mask)
    return gene_ids, rest_ids


def source_pen_diff(pen: PenMatrix, source: int, genes) -> float:
    """avg(source, V - genes) - avg(source, genes)."""
    gene_ids, rest_ids = _split_genes(genes, pen.n)
    if not (0 <= source < pen.n):
        raise ValidationError(f"source id {source} outside matrix of size {pen.n}")
    return float(np.mean(pen.values[source, rest_ids]) - np.mean(pen.values[source, gene_ids]))


def diff_vector_from_matrix(matrix: np.ndarray, genes, measure: Measure,
                            gene_side_minus_rest: bool = False) -> SourceDiffVector:
    """Single-source diffs for every source at once.

    Default orientation is (mean over complement) - (mean over genes), the
    natural one for distance-style matrices. gene_side_minus_rest flips it,
    which suits similarity-style matrices such as raw pi.
    """
    n = matrix.shape[0]
    gene_ids, rest_ids = _split_genes(genes, n)
    rest_mean = matrix[:, rest_ids].mean(axis=1)
    gene_mean = matrix[:, gene_ids].mean(axis=1)
    values = gene_mean - rest_mean if gene_side_minus_rest else rest_mean - gene_mean
    return SourceDiffVector(measure=measure, gene_set=frozenset(int(g) for g in gene_ids), values=values)


def pen_diff_vector(pen: PenMatrix, genes) -> SourceDiffVector:
    return diff_vector_from_matrix(pen.values, genes, Measure.PEN)


def combo_diff(diffs: SourceDiffVector, members) -> ComboScore:
    """Mean of the members' single-source diffs, members stored ascending."""
    ids = tuple(sorted(int(v) for v in members))
    if len(ids) < 2:
        raise ValidationError(f"a combination needs at least 2 members, got {len(ids)}")
    if len(set(ids)) != len(ids):
        raise ValidationError(f"combination members must be distinct: {ids}")
    if ids[0] < 0 or ids[-1] >= diffs.n:
        raise ValidationError(f"combination ids {ids} outside network of size {diffs.n}")
    value = float(np.mean(diffs.values[np.array(ids)]))
    return ComboScore(members=ids, value=value)


def combo_breakdown(pen: PenMatrix, members, genes) -> tuple[float, float, float]:
    """(mean distance to complement, mean distance to genes, their difference)
    averaged over the combination members."""
    ids = tuple(sorted(int(v) for v in members))
    gene_ids, rest_ids = _split_genes(genes, pen.n)
    rows = pen.values[np.array(ids)]
    rest_mean = float(np.mean(rows[:, rest_ids]))
    gene_mean = float(np.mean(rows[:, gene_ids]))
    return rest_mean, gene_mean, rest_mean - gene_mean


def colex_combinations(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ascending k-tuples over range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for last in range(k - 1, n):
        for rest in colex_combinations(last, k - 1):
            yield (*rest, last)


def colex_rank(members) -> int:
    """Stream position of an ascending combination under colex order."""
    return sum(math.comb(m, j + 1) for j, m in enumerate(members))


def colex_unrank(position: int, k: int) -> tuple[int, ...]:
    """Inverse of colex_rank: the ascending tuple at a stream position."""
    if position < 0:
        raise ValidationError(f"stream position must be >= 0, got {position}")
    members = []
    rem = position
    for j in range(k, 0, -1):
        m = j - 1
        step = 1
        while math.comb(m + step, j) <= rem:
            m += step
            step *= 2
        while step > 1:
            step //= 2
            if math.comb(m + step, j) <= rem:
                m += step
        rem -= math.comb(m, j)
        members.append(m)
    return tuple(reversed(members))


def value_blocks(values: np.ndarray, k: int, block_size: int = 65536):
    """Yield (start_position, value_block) covering the colex stream.

    The pair case is fully vectorized (one block per greatest member);
    larger k batches tuples from the generator.
    """
    n = values.shape[0]
    if k == 2:
        for last in range(1, n):
            yield last * (last - 1) // 2, (values[:last] + values[last]) / 2.0
        return
    batch = []
    start = 0
    for members in colex_combinations(n, k):
        batch.append(members)
        if len(batch) == block_size:
            yield start, values[np.array(batch)].mean(axis=1)
            start += len(batch)
            batch = []
    if batch:
        yield start, values[np.array(batch)].mean(axis=1)


def enumerate_combo_diffs(
    diffs: SourceDiffVector,
    k: int,
    sink: Optional[Callable[[ComboScore], None]] = None,
) -> int:
    """Stream every size-k combination with its value; return the count.

    The stream is single-threaded and colex-ordered. With no sink the values
    are still produced blockwise but no per-combination objects are built.
    """
    n = diffs.n
    if not (2 <= k <= n):
        raise ValidationError(f"k must satisfy 2 <= k <= {n}, got {k}")
    if sink is None:
        count = 0
        for _, block in value_blocks(diffs.values, k):
            count += block.shape[0]
        return count
    count = 0
    values = diffs.values
    for members in colex_combinations(n, k):
        value = float(np.mean(values[np.array(members)]))
        sink(ComboScore(members=members, value=value))
        count += 1
    return count


def combo_stream(diffs: SourceDiffVector, k: int) -> Iterator[ComboScore]:
    """Generator form of the colex combination stream."""
    n = diffs.n
    if not (2 <= k <= n):
        raise ValidationError(f"k must satisfy 2 <= k <= {n}, got {k}")
    values = diffs.values
    for members in colex_combinations(n, k):
        yield ComboScore(members=members, value=float(np.mean(values[np.array(members)])))
