"""Personalized PageRank under terminate-or-step walk semantics.

A walker at node u with out-degree d(u) > 0 terminates with probability
alpha, otherwise moves to a uniformly random out-edge of u. At a node with
no out-edges it terminates with probability 1; mass entering a dead end is
absorbed there rather than teleported. pi(s, t) is the probability that the
walk started at s terminates at t.

The solver is a synchronous residual-push iteration: each sweep settles the
terminating share of the active mass into pi and pushes the remainder along
out-edges, stopping once the undistributed mass drops below tolerance. The
tail is discarded and the vector renormalized to sum exactly 1. Iteration
order is fixed, so identical inputs give bitwise-identical vectors, and a
block of sources reproduces the single-source results column by column.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import ComputeError, ValidationError
from .network import SignalingNetwork

DEFAULT_ALPHA = 0.2
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERATIONS = 100_000


@dataclass
class PprVector:
    source: int
    alpha: float
    tolerance: float
    residual_norm: float
    values: np.ndarray


@dataclass
class PprMatrix:
    """All-pairs pi values; row s is the vector for source s."""

    alpha: float
    tolerance: float
    network_digest: str
    residual_norms: np.ndarray
    values: np.ndarray


def _check_params(alpha, tolerance, max_iterations):
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    if tolerance <= 0.0:
        raise ValidationError(f"tolerance must be positive, got {tolerance}")
    if max_iterations < 1:
        raise ValidationError(f"iteration cap must be >= 1, got {max_iterations}")


def push_matrix(network: SignalingNetwork, alpha: float) -> sparse.csr_matrix:
    """Column-stochastic-up-to-(1-alpha) push operator.

    Entry [v, u] carries (1-alpha)/d(u) once per edge u->v, so a pair joined
    by both an activation and an inhibition edge receives two shares; signs
    themselves play no role in the walk.
    """
    n = network.n
    src = network.edges[:, 0]
    dst = network.edges[:, 1]
    data = (1.0 - alpha) / network.out_degree[src]
    mat = sparse.csr_matrix((data, (dst, src)), shape=(n, n))
    mat.sum_duplicates()
    return mat


def _termination_profile(network, alpha):
    term = np.where(network.out_degree > 0, alpha, 1.0)
    return term


def _column_sums(matrix):
    """Per-column sums with a summation order independent of column count.

    numpy picks a different accumulation tree for a contiguous (n, 1) slab
    than for the strided columns of a wider block, which shifts results by
    an ulp and breaks bitwise block-width invariance. Transposing to
    contiguous rows pins the tree to the column length alone.
    """
    return np.ascontiguousarray(matrix.T).sum(axis=1)


def _ppr_block(push, term, sources, tolerance, max_iterations):
    """Iterate a block of source columns; each column stops independently."""
    n = push.shape[0]
    b = len(sources)
    resid = np.zeros((n, b))
    for j, s in enumerate(sources):
        resid[s, j] = 1.0
    pi = np.zeros((n, b))
    residual_norm = np.zeros(b)
    active = np.ones(b, dtype=bool)
    iterations = 0
    while True:
        idx = np.flatnonzero(active)
        sums = _column_sums(resid[:, idx])
        done = sums <= tolerance
        if done.any():
            residual_norm[idx[done]] = sums[done]
            active[idx[done]] = False
            idx = idx[~done]
            sums = sums[~done]
        if idx.size == 0:
            break
        if iterations >= max_iterations:
            raise ComputeError(
                f"PPR did not converge within {max_iterations} iterations "
                f"(residual {float(sums.max()):.3e} > {tolerance:.1e})"
            )
        block = resid[:, idx]
        pi[:, idx] += term[:, None] * block
        resid[:, idx] = push @ block
        iterations += 1
    pi /= _column_sums(pi)
    return pi, residual_norm


def ppr_single_source(
    network: SignalingNetwork,
    source: int,
    alpha: float = DEFAULT_ALPHA,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> PprVector:
    _check_params(alpha, tolerance, max_iterations)
    if not (0 <= source < network.n):
        raise ValidationError(f"source id {source} outside network of size {network.n}")
    push = push_matrix(network, alpha)
    term = _termination_profile(network, alpha)
    pi, resid = _ppr_block(push, term, [source], tolerance, max_iterations)
    return PprVector(
        source=source,
        alpha=alpha,
        tolerance=tolerance,
        residual_norm=float(resid[0]),
        values=pi[:, 0],
    )


def ppr_all_pairs(
    network: SignalingNetwork,
    alpha: float = DEFAULT_ALPHA,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    block_size: int = 256,
    threads: int = 1,
) -> PprMatrix:
    """All-pairs pi matrix, computed in independent source blocks.

    Blocks never interact, so the thread count changes wall time only, not
    a single bit of the result, and row s always equals ppr_single_source(s).
    """
    _check_params(alpha, tolerance, max_iterations)
    if block_size < 1:
        raise ValidationError(f"block size must be >= 1, got {block_size}")
    n = network.n
    push = push_matrix(network, alpha)
    term = _termination_profile(network, alpha)
    values = np.zeros((n, n))
    residuals = np.zeros(n)
    starts = list(range(0, n, block_size))

    def run_block(start):
        sources = list(range(start, min(start + block_size, n)))
        return start, _ppr_block(push, term, sources, tolerance, max_iterations)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_block, starts))
    else:
        results = [run_block(s) for s in starts]
    for start, (pi, resid) in results:
        stop = min(start + block_size, n)
        values[start:stop, :] = pi.T
        residuals[start:stop] = resid
    return PprMatrix(
        alpha=alpha,
        tolerance=tolerance,
        network_digest=network.digest,
        residual_norms=residuals,
        values=values,
    )


def ppr_cache_key(network_digest: str, alpha: float, tolerance: float) -> str:
    payload = f"ppr|{network_digest}|{alpha!r}|{tolerance!r}"
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def save_ppr_matrix(mat: PprMatrix, path) -> None:
    meta = json.dumps(
        {
            "alpha": mat.alpha,
            "tolerance": mat.tolerance,
            "network_digest": mat.network_digest,
        },
        sort_keys=True,
    )
    np.savez(path, values=mat.values, residual_norms=mat.residual_norms, meta=np.array(meta))


def load_ppr_matrix(path) -> PprMatrix:
    with np.load(path) as bundle:
        meta = json.loads(str(bundle["meta"]))
        return PprMatrix(
            alpha=float(meta["alpha"]),
            tolerance=float(meta["tolerance"]),
            network_digest=str(meta["network_digest"]),
            residual_norms=bundle["residual_norms"],
            values=bundle["values"],
        )
