"""Influence-driven profiling of drug-target combinations in directed
signaling networks."""

__version__ = "0.1.0"

from .errors import ComputeError, ParseError, PenprofError, ValidationError
from .network import (
    AnnotationSets,
    EdgeSign,
    SignalingNetwork,
    load_annotations,
    load_network,
    project_annotations,
)
from .subnet import SubnetSpec, build_subnetwork
from .ppr import PprMatrix, PprVector, ppr_all_pairs, ppr_single_source
from .pen import PenMatrix, max_pen, pen_distance, pen_matrix
from .influence import (
    ComboScore,
    Measure,
    SourceDiffVector,
    avg_pen_distance,
    combo_diff,
    enumerate_combo_diffs,
    pen_diff_vector,
    source_pen_diff,
)
from .profiler import (
    Bucket,
    DeltaHistogram,
    KnownComboSet,
    build_delta_histogram,
    histogram_from_diffs,
    known_combos,
    select_candidates,
)
from .baselines import EsrReport, distance_diff_vector, esr, ppr_diff_vector
from .perturb import PerturbMode, PerturbSpec, noise_study, perturb
from .pipeline import PipelineConfig, PipelineResult, run_pipeline

__all__ = [
    "__version__",
    "AnnotationSets",
    "Bucket",
    "ComboScore",
    "ComputeError",
    "DeltaHistogram",
    "EdgeSign",
    "EsrReport",
    "KnownComboSet",
    "Measure",
    "ParseError",
    "PenMatrix",
    "PenprofError",
    "PerturbMode",
    "PerturbSpec",
    "PipelineConfig",
    "PipelineResult",
    "PprMatrix",
    "PprVector",
    "SignalingNetwork",
    "SourceDiffVector",
    "SubnetSpec",
    "ValidationError",
    "avg_pen_distance",
    "build_delta_histogram",
    "build_subnetwork",
    "combo_diff",
    "distance_diff_vector",
    "enumerate_combo_diffs",
    "esr",
    "histogram_from_diffs",
    "known_combos",
    "load_annotations",
    "load_network",
    "max_pen",
    "noise_study",
    "pen_diff_vector",
    "pen_distance",
    "pen_matrix",
    "perturb",
    "ppr_all_pairs",
    "ppr_diff_vector",
    "ppr_single_source",
    "project_annotations",
    "run_pipeline",
    "select_candidates",
    "source_pen_diff",
]
