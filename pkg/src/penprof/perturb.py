"""Seeded edge perturbation and the noise-robustness study.

Remove deletes floor(fraction * e) distinct edges chosen uniformly without
replacement from the canonical edge list; Add inserts the same number of
distinct, currently-absent, non-self ordered pairs with a uniformly drawn
sign. The node set never changes. All randomness comes from a PCG64
generator seeded by the spec, so a (network, spec) pair fully determines
the outcome across processes and platforms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import pen as pen_mod
from . import ppr as ppr_mod
from .errors import ValidationError
from .influence import pen_diff_vector
from .network import AnnotationSets, SignalingNetwork
from .profiler import DEFAULT_M_LEVELS, DeltaHistogram, histogram_from_diffs, known_combos


class PerturbMode(str, enum.Enum):
    ADD = "add"
    REMOVE = "remove"


@dataclass(frozen=True)
class PerturbSpec:
    mode: PerturbMode
    fraction: float
    seed: int

    def __post_init__(self):
        if not (0.0 < self.fraction <= 1.0):
            raise ValidationError(f"fraction must lie in (0, 1], got {self.fraction}")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def perturb_count(fraction: float, edge_count: int) -> int:
    """floor(fraction * e) computed on the decimal the fraction prints as,
    so 0.29 of 100 edges is 29, not a float-rounding artifact."""
    return math.floor(Fraction(str(fraction)) * edge_count)


def perturb(network: SignalingNetwork, spec: PerturbSpec) -> SignalingNetwork:
    count = perturb_count(spec.fraction, network.e)
    if count < 1:
        raise ValidationError(
            f"fraction {spec.fraction} of {network.e} edges rounds down to zero; nothing to perturb"
        )
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if spec.mode is PerturbMode.REMOVE:
        return _remove_edges(network, count, rng)
    if spec.mode is PerturbMode.ADD:
        return _add_edges(network, count, rng)
    raise ValidationError(f"unknown perturbation mode: {spec.mode!r}")


def _remove_edges(network, count, rng):
    drop = set(int(i) for i in rng.choice(network.e, size=count, replace=False))
    triples = [
        (network.symbol_of(int(u)), network.symbol_of(int(v)), int(g))
        for i, ((u, v), g) in enumerate(zip(network.edges, network.signs))
        if i not in drop
    ]
    return SignalingNetwork.from_edges(triples, extra_symbols=network.symbols)


def _add_edges(network, count, rng):
    n = network.n
    existing = network.ordered_pairs()
    available = n * (n - 1) - len(existing)
    if count > available:
        raise ValidationError(
            f"cannot add {count} edges: only {available} absent ordered pairs remain"
        )
    chosen: list[tuple[int, int, int]] = []
    chosen_pairs: set[tuple[int, int]] = set()
    if available >= 4 * count:
        while len(chosen) < count:
            u = int(rng.integers(0, n))
            v = int(rng.integers(0, n))
            if u == v or (u, v) in existing or (u, v) in chosen_pairs:
                continue
            sign = 1 if int(rng.integers(0, 2)) == 0 else -1
            chosen_pairs.add((u, v))
            chosen.append((u, v, sign))
    else:
        # Nearly complete graph: enumerate the (small) absent set instead of
        # rejection-sampling against long odds.
        absent = [
            (u, v)
            for u in range(n)
            for v in range(n)
            if u != v and (u, v) not in existing
        ]
        picks = rng.choice(len(absent), size=count, replace=False)
        for i in picks:
            u, v = absent[int(i)]
            sign = 1 if int(rng.integers(0, 2)) == 0 else -1
            chosen.append((u, v, sign))
    triples = [
        (network.symbol_of(int(u)), network.symbol_of(int(v)), int(g))
        for (u, v), g in zip(network.edges, network.signs)
    ]
    triples.extend(
        (network.symbol_of(u), network.symbol_of(v), g) for u, v, g in chosen
    )
    return SignalingNetwork.from_edges(triples, extra_symbols=network.symbols)


@dataclass
class NoiseRun:
    mode: Optional[PerturbMode]
    fraction: float
    seed: Optional[int]
    network_digest: str
    histogram: DeltaHistogram


def noise_study(
    network: SignalingNetwork,
    annotations: AnnotationSets,
    k: int = 2,
    fractions: Sequence[float] = (0.01,),
    modes: Sequence[PerturbMode] = (PerturbMode.REMOVE, PerturbMode.ADD),
    seeds: Sequence[int] = (0,),
    alpha: float = ppr_mod.DEFAULT_ALPHA,
    tolerance: float = ppr_mod.DEFAULT_TOLERANCE,
    epsilon: float = pen_mod.DEFAULT_EPSILON,
    n_bucket: int = 5,
    m_levels: Sequence[int] = DEFAULT_M_LEVELS,
) -> list[NoiseRun]:
    """Full pipeline (PPR, PEN, diff, histogram) per perturbed copy.

    A fraction of 0 runs the unperturbed network once as the reference row;
    every positive fraction runs per (mode, seed). Node ids are stable under
    perturbation (the symbol set is preserved), so the annotation ids carry
    over unchanged.
    """

    def run_one(net, mode, fraction, seed):
        mat = ppr_mod.ppr_all_pairs(net, alpha=alpha, tolerance=tolerance)
        pen = pen_mod.pen_matrix(mat, net, epsilon=epsilon)
        diffs = pen_diff_vector(pen, annotations.oncogenes)
        known = known_combos(annotations, net, k)
        hist = histogram_from_diffs(diffs, k, known, n_bucket=n_bucket, m_levels=m_levels)
        return NoiseRun(
            mode=mode,
            fraction=fraction,
            seed=seed,
            network_digest=net.digest,
            histogram=hist,
        )

    runs = []
    if any(f == 0.0 for f in fractions):
        runs.append(run_one(network, None, 0.0, None))
    for mode in modes:
        for fraction in fractions:
            if fraction == 0.0:
                continue
            for seed in seeds:
                spec = PerturbSpec(mode=mode, fraction=fraction, seed=seed)
                runs.append(run_one(perturb(network, spec), mode, fraction, seed))
    return runs
