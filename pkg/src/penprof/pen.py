"""PEN distance: out-degree-adjusted negative-log influence.

For source s and target t the distance is 1 - ln(pi(s, t) * d(s) + eps)
with natural log and a small floor eps (default 1e-5) that caps the
unreachable case at 1 - ln(eps) ~= 12.5129. The diagonal is exactly 0 by
definition. Larger pi means smaller distance; the measure is asymmetric and
not a metric.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .network import SignalingNetwork
from .ppr import PprMatrix

DEFAULT_EPSILON = 1e-5


def max_pen(epsilon: float = DEFAULT_EPSILON) -> float:
    """Distance assigned to an unreachable pair (pi = 0)."""
    if epsilon <= 0.0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    return 1.0 - math.log(epsilon)


def pen_distance(pi_value: float, out_degree: int, epsilon: float = DEFAULT_EPSILON) -> float:
    if epsilon <= 0.0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    if pi_value < 0.0:
        raise ValidationError(f"pi must be non-negative, got {pi_value}")
    return 1.0 - math.log(pi_value * out_degree + epsilon)


@dataclass
class PenMatrix:
    network_digest: str
    alpha: float
    epsilon: float
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


def pen_matrix(ppr: PprMatrix, network: SignalingNetwork, epsilon: float = DEFAULT_EPSILON) -> PenMatrix:
    """Apply the distance transform to an all-pairs pi matrix."""
    if epsilon <= 0.0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    if ppr.values.shape != (network.n, network.n):
        raise ValidationError(
            f"pi matrix shape {ppr.values.shape} does not match network of size {network.n}"
        )
    if ppr.network_digest != network.digest:
        raise ValidationError("pi matrix was computed for a different network (digest mismatch)")
    scaled = ppr.values * network.out_degree[:, None].astype(float)
    values = 1.0 - np.log(scaled + epsilon)
    np.fill_diagonal(values, 0.0)
    return PenMatrix(
        network_digest=network.digest,
        alpha=ppr.alpha,
        epsilon=epsilon,
        values=values,
    )


def save_pen_csv(pen: PenMatrix, network: SignalingNetwork, path) -> None:
    """source,target,distance rows at 4 decimal places, diagonal included."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("source,target,distance\n")
        for s in range(pen.n):
            row = pen.values[s]
            s_sym = network.symbol_of(s)
            for t in range(pen.n):
                fh.write(f"{s_sym},{network.symbol_of(t)},{row[t]:.4f}\n")


def pen_cache_key(network_digest: str, alpha: float, tolerance: float, epsilon: float) -> str:
    payload = f"pen|{network_digest}|{alpha!r}|{tolerance!r}|{epsilon!r}"
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def save_pen_matrix(pen: PenMatrix, path) -> None:
    meta = json.dumps(
        {"alpha": pen.alpha, "epsilon": pen.epsilon, "network_digest": pen.network_digest},
        sort_keys=True,
    )
    np.savez(path, values=pen.values, meta=np.array(meta))


def load_pen_matrix(path) -> PenMatrix:
    with np.load(path) as bundle:
        meta = json.loads(str(bundle["meta"]))
        return PenMatrix(
            network_digest=str(meta["network_digest"]),
            alpha=float(meta["alpha"]),
            epsilon=float(meta["epsilon"]),
            values=bundle["values"],
        )
