"""End-to-end profiling pipeline and its run manifest.

A run loads the network and annotations, extracts the target/oncogene
subnetwork, computes the configured measure's diff vector, and profiles
every size-k combination into a delta histogram. Heavy intermediates (the
all-pairs pi matrix and the PEN matrix) are cached in binary form keyed by
the subnetwork digest and the numerical parameters, so reruns skip straight
to the cheap stages. Every output directory gets a manifest holding the
config, input digests, and package version; equal manifests mean
byte-identical outputs.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .baselines import distance_diff_vector, ppr_diff_vector
from .errors import ValidationError
from .influence import Measure, SourceDiffVector, pen_diff_vector
from .network import (
    AnnotationSets,
    SignalingNetwork,
    load_annotations,
    load_network,
    project_annotations,
)
from .pen import (
    DEFAULT_EPSILON,
    PenMatrix,
    load_pen_matrix,
    pen_cache_key,
    pen_matrix,
    save_pen_matrix,
)
from .plotting import emit_plot
from .ppr import (
    DEFAULT_ALPHA,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    PprMatrix,
    load_ppr_matrix,
    ppr_all_pairs,
    ppr_cache_key,
    save_ppr_matrix,
)
from .profiler import (
    DEFAULT_M_LEVELS,
    DeltaHistogram,
    histogram_from_diffs,
    known_combos,
    save_known_membership_csv,
)
from .subnet import SubnetSpec, build_subnetwork, subnet_summary

CACHE_DIR_ENV = "PENPROF_CACHE_DIR"


@dataclass
class PipelineConfig:
    network_file: str
    oncogene_file: str
    drug_target_file: str
    out_dir: str
    alpha: float = DEFAULT_ALPHA
    epsilon: float = DEFAULT_EPSILON
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    path_length_threshold: int = 5
    k: int = 2
    n_bucket: int = 5
    m_levels: tuple[int, ...] = DEFAULT_M_LEVELS
    measure: Measure = Measure.PEN
    ppr_gene_side_minus_rest: bool = True
    dist_gene_side_minus_rest: bool = False
    drop_neutral: bool = True
    cache_dir: str | None = None
    seed: int = 0
    threads: int = 1

    def validate(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.epsilon <= 0.0:
            raise ValidationError(f"epsilon must be positive, got {self.epsilon}")
        if self.tolerance <= 0.0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValidationError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.path_length_threshold < 2:
            raise ValidationError(
                f"path_length_threshold must be >= 2, got {self.path_length_threshold}"
            )
        if self.k < 2:
            raise ValidationError(f"k must be >= 2, got {self.k}")
        if self.n_bucket <= 1:
            raise ValidationError(f"n_bucket must be > 1, got {self.n_bucket}")
        if not self.m_levels:
            raise ValidationError("m_levels is empty")
        for m in self.m_levels:
            if not (1 <= int(m) <= 100):
                raise ValidationError(f"m level must lie in [1, 100], got {m}")
        if self.measure not in tuple(Measure):
            raise ValidationError(f"unknown measure: {self.measure!r}")
        if self.threads < 1:
            raise ValidationError(f"threads must be >= 1, got {self.threads}")
        if self.seed < 0:
            raise ValidationError(f"seed must be non-negative, got {self.seed}")

    def manifest_dict(self) -> dict:
        """Config as recorded in the manifest.

        Output and cache locations are excluded: they place the artifacts
        but never influence their content.
        """
        d = dataclasses.asdict(self)
        d.pop("out_dir")
        d.pop("cache_dir")
        d["measure"] = self.measure.value
        d["m_levels"] = list(self.m_levels)
        return d


@dataclass
class PipelineResult:
    config: PipelineConfig
    network: SignalingNetwork
    subnet: SignalingNetwork
    annotations: AnnotationSets
    diffs: SourceDiffVector
    histogram: DeltaHistogram
    out_dir: Path
    cache_hits: dict[str, bool] = field(default_factory=dict)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def resolve_cache_dir(config: PipelineConfig, out_dir: Path) -> Path:
    if config.cache_dir:
        return Path(config.cache_dir)
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    return out_dir / "cache"


def cached_ppr_matrix(network: SignalingNetwork, config: PipelineConfig,
                      cache_dir: Path) -> tuple[PprMatrix, bool]:
    key = ppr_cache_key(network.digest, config.alpha, config.tolerance)
    path = cache_dir / f"ppr_{key}.npz"
    if path.exists():
        mat = load_ppr_matrix(path)
        if mat.network_digest == network.digest:
            return mat, True
    mat = ppr_all_pairs(
        network,
        alpha=config.alpha,
        tolerance=config.tolerance,
        max_iterations=config.max_iterations,
        threads=config.threads,
    )
    cache_dir.mkdir(parents=True, exist_ok=True)
    save_ppr_matrix(mat, path)
    return mat, False


def cached_pen_matrix(network: SignalingNetwork, config: PipelineConfig,
                      cache_dir: Path) -> tuple[PenMatrix, bool, bool]:
    key = pen_cache_key(network.digest, config.alpha, config.tolerance, config.epsilon)
    path = cache_dir / f"pen_{key}.npz"
    if path.exists():
        pen = load_pen_matrix(path)
        if pen.network_digest == network.digest:
            return pen, True, True
    mat, ppr_hit = cached_ppr_matrix(network, config, cache_dir)
    pen = pen_matrix(mat, network, epsilon=config.epsilon)
    cache_dir.mkdir(parents=True, exist_ok=True)
    save_pen_matrix(pen, path)
    return pen, ppr_hit, False


def compute_diffs(subnet: SignalingNetwork, genes, config: PipelineConfig,
                  cache_dir: Path) -> tuple[SourceDiffVector, dict[str, bool]]:
    hits: dict[str, bool] = {}
    if config.measure is Measure.PEN:
        pen, ppr_hit, pen_hit = cached_pen_matrix(subnet, config, cache_dir)
        hits["ppr"] = ppr_hit
        hits["pen"] = pen_hit
        return pen_diff_vector(pen, genes), hits
    if config.measure is Measure.PPR:
        mat, ppr_hit = cached_ppr_matrix(subnet, config, cache_dir)
        hits["ppr"] = ppr_hit
        return ppr_diff_vector(mat, genes, gene_side_minus_rest=config.ppr_gene_side_minus_rest), hits
    if config.measure is Measure.DIST:
        return distance_diff_vector(
            subnet, genes, gene_side_minus_rest=config.dist_gene_side_minus_rest
        ), hits
    raise ValidationError(f"unknown measure: {config.measure!r}")


def write_json(payload: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_diff_csv(diffs: SourceDiffVector, network: SignalingNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("node,value\n")
        for i in range(network.n):
            fh.write(f"{network.symbol_of(i)},{diffs.values[i]:.4f}\n")


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    config.validate()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache_dir = resolve_cache_dir(config, out_dir)

    inputs = {
        "network_file": file_digest(config.network_file),
        "oncogene_file": file_digest(config.oncogene_file),
        "drug_target_file": file_digest(config.drug_target_file),
    }
    network = load_network(config.network_file, drop_neutral=config.drop_neutral)
    annotations, unresolved = load_annotations(
        network, config.oncogene_file, config.drug_target_file
    )
    write_json(unresolved.to_json_dict(), out_dir / "unresolved.json")

    spec = SubnetSpec(
        targets=annotations.targets,
        oncogenes=annotations.oncogenes,
        path_length_threshold=config.path_length_threshold,
    )
    subnet = build_subnetwork(network, spec)
    subnet.save_tsv(out_dir / "subnet.tsv")
    write_json(subnet_summary(network, subnet, spec), out_dir / "subnet_summary.json")

    sub_ann = project_annotations(annotations, network, subnet)
    if not sub_ann.oncogenes:
        raise ValidationError("no oncogene survives in the extracted subnetwork")
    if len(sub_ann.oncogenes) == subnet.n:
        raise ValidationError("every subnetwork node is an oncogene; the diff is undefined")

    diffs, hits = compute_diffs(subnet, sub_ann.oncogenes, config, cache_dir)
    save_diff_csv(diffs, subnet, out_dir / "source_diff.csv")

    known = known_combos(sub_ann, subnet, config.k)
    hist = histogram_from_diffs(
        diffs, config.k, known, n_bucket=config.n_bucket, m_levels=config.m_levels
    )
    write_json(hist.to_json_dict(), out_dir / "histogram.json")
    emit_plot(hist, out_dir / "histogram.svg")
    save_known_membership_csv(hist, subnet, out_dir / "known_membership.csv")

    d_min, d_max = hist.delta_range
    write_json(
        {
            "measure": config.measure.value,
            "k": config.k,
            "delta_min": d_min,
            "delta_max": d_max,
            "bucket_index": hist.max_coverage_index(),
            "coverage": hist.coverage(hist.max_coverage_index()),
            "worst_bucket_size": hist.worst_bucket_size(),
        },
        out_dir / "thresholds.json",
    )

    manifest = {
        "version": __version__,
        "seed": config.seed,
        "config": config.manifest_dict(),
        "inputs": inputs,
        "network_digest": network.digest,
        "subnet_digest": subnet.digest,
        "cache": {f"{k}_hit": v for k, v in sorted(hits.items())},
    }
    write_json(manifest, out_dir / "manifest.json")

    return PipelineResult(
        config=config,
        network=network,
        subnet=subnet,
        annotations=sub_ann,
        diffs=diffs,
        histogram=hist,
        out_dir=out_dir,
        cache_hits=hits,
    )
