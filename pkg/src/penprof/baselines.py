"""Raw-PPR and shortest-path baselines plus effective-search-ratio reports.

Both baselines reuse the diff structure of the PEN measure with a different
matrix inside. Raw pi is a similarity, so its diff defaults to (mean over
oncogenes) - (mean over the rest); shortest-path length is a distance and
keeps the PEN orientation. Either can be flipped via gene_side_minus_rest
since the published profiles leave the sign convention open.

The effective search ratio of a measure is the size of its largest bucket
divided by the PEN profile's largest bucket: how much bigger the worst-case
candidate pool gets when the same histogram procedure runs on the baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import ValidationError
from .influence import Measure, SourceDiffVector, diff_vector_from_matrix
from .network import SignalingNetwork
from .ppr import PprMatrix
from .profiler import DeltaHistogram


def distance_matrix(network: SignalingNetwork, sentinel: float | None = None) -> np.ndarray:
    """Unweighted directed shortest-path lengths, dist(s, s) = 0.

    Unreachable pairs get the sentinel, which defaults to the node count
    (one past the longest possible simple path).
    """
    n = network.n
    if sentinel is None:
        sentinel = float(n)
    ones = np.ones(network.e)
    adj = sparse.csr_matrix((ones, (network.edges[:, 0], network.edges[:, 1])), shape=(n, n))
    adj.sum_duplicates()
    dist = csgraph.shortest_path(adj, method="D", directed=True, unweighted=True)
    dist[np.isinf(dist)] = sentinel
    return dist


def ppr_diff_vector(ppr: PprMatrix, genes, gene_side_minus_rest: bool = True) -> SourceDiffVector:
    """Diff over raw pi values. Default orientation is genes minus rest so
    larger still means a stronger oncogene connection."""
    return diff_vector_from_matrix(ppr.values, genes, Measure.PPR,
                                   gene_side_minus_rest=gene_side_minus_rest)


def distance_diff_vector(network: SignalingNetwork, genes, sentinel: float | None = None,
                         gene_side_minus_rest: bool = False) -> SourceDiffVector:
    """Diff over shortest-path lengths, same orientation as the PEN diff."""
    dist = distance_matrix(network, sentinel=sentinel)
    return diff_vector_from_matrix(dist, genes, Measure.DIST,
                                   gene_side_minus_rest=gene_side_minus_rest)


@dataclass
class EsrReport:
    worst_bucket: dict[Measure, int]
    ratio: dict[Measure, float]

    def to_json_dict(self) -> dict:
        return {
            "worst_bucket": {m.value: c for m, c in sorted(self.worst_bucket.items())},
            "esr": {m.value: r for m, r in sorted(self.ratio.items())},
        }


def esr(histograms: dict[Measure, DeltaHistogram]) -> EsrReport:
    """Largest-bucket sizes and their ratios against the PEN profile."""
    if Measure.PEN not in histograms:
        raise ValidationError("ESR needs the PEN histogram as the reference measure")
    ref = histograms[Measure.PEN]
    for m, h in histograms.items():
        if h.k != ref.k or h.n_bucket != ref.n_bucket:
            raise ValidationError(
                f"histogram for {m.value} was built with k={h.k}, n_bucket={h.n_bucket}; "
                f"reference has k={ref.k}, n_bucket={ref.n_bucket}"
            )
    worst = {m: h.worst_bucket_size() for m, h in histograms.items()}
    base = worst[Measure.PEN]
    if base <= 0:
        raise ValidationError("PEN histogram has no populated bucket")
    return EsrReport(
        worst_bucket=worst,
        ratio={m: w / base for m, w in worst.items()},
    )


def save_esr_csv(report: EsrReport, path) -> None:
    """measure,worst_bucket_size,esr rows with ratios at 2 decimal places."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("measure,worst_bucket_size,esr\n")
        for m in sorted(report.worst_bucket, key=lambda m: m.value):
            fh.write(f"{m.value},{report.worst_bucket[m]},{report.ratio[m]:.2f}\n")
