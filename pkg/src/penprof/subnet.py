"""Target-aware subnetwork extraction.

A node v survives iff some drug target u and some oncogene w satisfy
dist(u, v) + dist(v, w) < d, where dist is the unweighted directed
shortest-path length and dist(x, x) = 0. Minimizing over u and w
independently makes two multi-source BFS sweeps (forward from the targets,
backward from the oncogenes) sufficient; witnesses are walks, not
necessarily simple paths, since the two shortest segments may share nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .network import SignalingNetwork

UNREACHED = np.iinfo(np.int64).max


@dataclass(frozen=True)
class SubnetSpec:
    targets: frozenset[int]
    oncogenes: frozenset[int]
    path_length_threshold: int = 5

    def __post_init__(self):
        if self.path_length_threshold < 2:
            raise ValidationError(
                f"path length threshold must be >= 2, got {self.path_length_threshold}"
            )
        if not self.targets:
            raise ValidationError("target set is empty")
        if not self.oncogenes:
            raise ValidationError("oncogene set is empty")


def multi_source_bfs(network: SignalingNetwork, sources, reverse: bool = False) -> np.ndarray:
    """Distance from the nearest source to every node (or to the sources when
    reverse is true). Unreached nodes hold UNREACHED."""
    n = network.n
    dist = np.full(n, UNREACHED, dtype=np.int64)
    frontier = sorted(set(int(s) for s in sources))
    for s in frontier:
        if not (0 <= s < n):
            raise ValidationError(f"node id {s} outside network of size {n}")
        dist[s] = 0
    level = 0
    neigh = network.in_neighbors if reverse else network.out_neighbors
    while frontier:
        level += 1
        nxt = []
        for u in frontier:
            for v in neigh(u):
                v = int(v)
                if dist[v] == UNREACHED:
                    dist[v] = level
                    nxt.append(v)
        frontier = nxt
    return dist


def build_subnetwork(network: SignalingNetwork, spec: SubnetSpec) -> SignalingNetwork:
    """Vertex-induced subgraph on the nodes meeting the distance-sum criterion.

    Raises ValidationError when no node qualifies, naming the closest
    target/oncogene pair found (or the absence of any connecting path).
    """
    for v in spec.targets | spec.oncogenes:
        if not (0 <= v < network.n):
            raise ValidationError(f"annotation node id {v} outside network of size {network.n}")
    fwd = multi_source_bfs(network, spec.targets)
    bwd = multi_source_bfs(network, spec.oncogenes, reverse=True)
    reachable = (fwd != UNREACHED) & (bwd != UNREACHED)
    total = np.full(network.n, UNREACHED, dtype=np.int64)
    total[reachable] = fwd[reachable] + bwd[reachable]
    keep = np.flatnonzero(total < spec.path_length_threshold)
    if keep.size == 0:
        best = _closest_pair(network, spec)
        if best is None:
            raise ValidationError(
                "empty subnetwork: no directed path connects any drug target to any oncogene"
            )
        u, w, d_uw = best
        raise ValidationError(
            "empty subnetwork: closest target/oncogene pair is "
            f"{network.symbol_of(u)} -> {network.symbol_of(w)} at distance {d_uw}, "
            f"not below threshold {spec.path_length_threshold}"
        )
    return network.induced_subgraph(keep)


def _closest_pair(network, spec):
    best = None
    for u in sorted(spec.targets):
        dist = multi_source_bfs(network, [u])
        for w in sorted(spec.oncogenes):
            if dist[w] != UNREACHED and (best is None or dist[w] < best[2]):
                best = (u, w, int(dist[w]))
    return best


def subnet_summary(network: SignalingNetwork, subnet: SignalingNetwork, spec: SubnetSpec) -> dict:
    """Node/edge/annotation counts for the extracted subnetwork."""
    sub_syms = set(subnet.symbols)
    targets_kept = sum(1 for v in spec.targets if network.symbol_of(v) in sub_syms)
    onco_kept = sum(1 for v in spec.oncogenes if network.symbol_of(v) in sub_syms)
    return {
        "nodes": subnet.n,
        "edges": subnet.e,
        "targets_retained": targets_kept,
        "oncogenes_retained": onco_kept,
        "path_length_threshold": spec.path_length_threshold,
        "source_nodes": network.n,
        "source_edges": network.e,
        "digest": subnet.digest,
    }
