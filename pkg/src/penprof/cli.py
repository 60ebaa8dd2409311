"""Command-line interface.

Subcommands operate on the network file they are given; `run` is the only
one that chains subnetwork extraction into profiling, so the others compose
via files (`build-subnet` first, then point the rest at subnet.tsv). Every
subcommand writes its artifacts plus a manifest into --out-dir.

Exit codes: 0 success, 1 validation error, 2 compute failure, 3 I/O error.
Failures emit a single JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .baselines import (
    distance_diff_vector,
    esr,
    ppr_diff_vector,
    save_esr_csv,
)
from .errors import ComputeError, ValidationError
from .influence import Measure, pen_diff_vector
from .network import load_annotations, load_network, load_symbol_list
from .pen import DEFAULT_EPSILON, pen_matrix, save_pen_csv
from .pipeline import (
    CACHE_DIR_ENV,
    PipelineConfig,
    cached_pen_matrix,
    cached_ppr_matrix,
    file_digest,
    resolve_cache_dir,
    run_pipeline,
    save_diff_csv,
    write_json,
)
from .plotting import emit_plot
from .ppr import (
    DEFAULT_ALPHA,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    ppr_all_pairs,
    ppr_single_source,
)
from .profiler import (
    DEFAULT_M_LEVELS,
    histogram_from_diffs,
    known_combos,
    save_known_membership_csv,
    select_from_diffs,
)
from .perturb import PerturbMode, PerturbSpec, noise_study, perturb
from .subnet import SubnetSpec, build_subnetwork, subnet_summary


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}") from None


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ValidationError(f"expected a comma-separated float list, got {text!r}") from None


def _parse_modes(text: str) -> tuple[PerturbMode, ...]:
    out = []
    for p in text.split(","):
        p = p.strip()
        if not p:
            continue
        try:
            out.append(PerturbMode(p))
        except ValueError:
            raise ValidationError(f"unknown perturbation mode {p!r} (use add/remove)") from None
    if not out:
        raise ValidationError("no perturbation mode given")
    return tuple(out)


def get_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="penprof",
        description="Profile drug-target combinations in directed signaling networks.",
    )
    parser.add_argument("--version", action="version", version=f"penprof {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    net = argparse.ArgumentParser(add_help=False)
    net.add_argument("--network", required=True, help="edge list TSV (src, dst, sign)")
    net.add_argument("--drop-neutral", action=argparse.BooleanOptionalAction, default=True,
                     help="drop sign-0 rows instead of rejecting them")

    ann = argparse.ArgumentParser(add_help=False)
    ann.add_argument("--oncogenes", required=True, help="oncogene symbols, one per line")
    ann.add_argument("--drug-targets", required=True, help="drug_id<TAB>target TSV")

    num = argparse.ArgumentParser(add_help=False)
    num.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    num.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    num.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    num.add_argument("--max-iterations", type=int, default=DEFAULT_MAX_ITERATIONS)
    num.add_argument("--threads", type=int, default=1)
    num.add_argument("--cache-dir", default=None,
                     help=f"matrix cache location (default: ${CACHE_DIR_ENV} or out dir)")

    prof = argparse.ArgumentParser(add_help=False)
    prof.add_argument("--k", type=int, default=2, help="combination size")
    prof.add_argument("--buckets", type=int, default=5, help="number of histogram buckets")
    prof.add_argument("--m-levels", type=_parse_int_list, default=DEFAULT_M_LEVELS,
                      help="comma-separated top-m%% levels (default 1,10,20,50)")
    prof.add_argument("--measure", choices=[m.value for m in Measure], default="pen")
    prof.add_argument("--ppr-diff-orientation", choices=["genes-minus-rest", "rest-minus-genes"],
                      default="genes-minus-rest")
    prof.add_argument("--dist-diff-orientation", choices=["genes-minus-rest", "rest-minus-genes"],
                      default="rest-minus-genes")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out-dir", required=True)

    p = sub.add_parser("run", parents=[net, ann, num, prof, out],
                       help="full pipeline: subnet, measure, diff, histogram")
    p.add_argument("--d", type=int, default=5, dest="d",
                   help="path length threshold for subnetwork extraction")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("build-subnet", parents=[net, ann, out],
                       help="extract the target/oncogene subnetwork")
    p.add_argument("--d", type=int, default=5, dest="d")
    p.set_defaults(func=cmd_build_subnet)

    p = sub.add_parser("ppr", parents=[net, num, out],
                       help="personalized PageRank vectors or matrix")
    p.add_argument("--source", default=None, help="source symbol (default: all pairs)")
    p.set_defaults(func=cmd_ppr)

    p = sub.add_parser("pen", parents=[net, num, out], help="PEN distance matrix CSV")
    p.set_defaults(func=cmd_pen)

    p = sub.add_parser("diff", parents=[net, num, prof, out],
                       help="single-source diff vector for one measure")
    p.add_argument("--oncogenes", required=True)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("profile", parents=[net, ann, num, prof, out],
                       help="delta histogram of all size-k combinations")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("select", parents=[net, num, prof, out],
                       help="combinations inside a diff value range")
    p.add_argument("--oncogenes", required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--top-m", type=int, default=None)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("esr", parents=[net, ann, num, prof, out],
                       help="effective search ratio across measures")
    p.set_defaults(func=cmd_esr)

    p = sub.add_parser("perturb", parents=[net, out], help="write a perturbed copy")
    p.add_argument("--mode", choices=["add", "remove"], required=True)
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("noise-study", parents=[net, ann, num, prof, out],
                       help="histogram stability under edge noise")
    p.add_argument("--fractions", type=_parse_float_list, default=(0.0, 0.01))
    p.add_argument("--modes", type=_parse_modes, default=(PerturbMode.REMOVE, PerturbMode.ADD))
    p.add_argument("--seeds", type=_parse_int_list, default=(0,))
    p.set_defaults(func=cmd_noise_study)

    return parser


def _out_dir(args) -> Path:
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _manifest(args, command, inputs, extra=None) -> dict:
    config = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("func", "command", "out_dir", "cache_dir") and not k.startswith("_")
    }
    for key, value in config.items():
        if isinstance(value, PerturbMode):
            config[key] = value.value
        elif isinstance(value, tuple):
            config[key] = [v.value if isinstance(v, PerturbMode) else v for v in value]
    payload = {
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": {name: file_digest(path) for name, path in inputs.items()},
    }
    if extra:
        payload.update(extra)
    return payload


def _config_from_args(args, out_dir) -> PipelineConfig:
    return PipelineConfig(
        network_file=args.network,
        oncogene_file=args.oncogenes,
        drug_target_file=args.drug_targets,
        out_dir=str(out_dir),
        alpha=args.alpha,
        epsilon=args.epsilon,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        path_length_threshold=args.d,
        k=args.k,
        n_bucket=args.buckets,
        m_levels=tuple(args.m_levels),
        measure=Measure(args.measure),
        ppr_gene_side_minus_rest=args.ppr_diff_orientation == "genes-minus-rest",
        dist_gene_side_minus_rest=args.dist_diff_orientation == "genes-minus-rest",
        drop_neutral=args.drop_neutral,
        cache_dir=args.cache_dir,
        seed=args.seed,
        threads=args.threads,
    )


def cmd_run(args) -> int:
    out_dir = _out_dir(args)
    run_pipeline(_config_from_args(args, out_dir))
    return 0


def cmd_build_subnet(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    annotations, unresolved = load_annotations(network, args.oncogenes, args.drug_targets)
    write_json(unresolved.to_json_dict(), out_dir / "unresolved.json")
    spec = SubnetSpec(
        targets=annotations.targets,
        oncogenes=annotations.oncogenes,
        path_length_threshold=args.d,
    )
    subnet = build_subnetwork(network, spec)
    subnet.save_tsv(out_dir / "subnet.tsv")
    write_json(subnet_summary(network, subnet, spec), out_dir / "subnet_summary.json")
    inputs = {"network": args.network, "oncogenes": args.oncogenes,
              "drug_targets": args.drug_targets}
    write_json(_manifest(args, "build-subnet", inputs,
                         {"network_digest": network.digest, "subnet_digest": subnet.digest}),
               out_dir / "manifest.json")
    return 0


def _cache_config(args, out_dir) -> PipelineConfig:
    """Minimal config wrapper so the atomic subcommands share the pipeline's
    cache layout."""
    return PipelineConfig(
        network_file=args.network,
        oncogene_file="",
        drug_target_file="",
        out_dir=str(out_dir),
        alpha=args.alpha,
        tolerance=args.tolerance,
        epsilon=getattr(args, "epsilon", DEFAULT_EPSILON),
        max_iterations=args.max_iterations,
        cache_dir=args.cache_dir,
        threads=args.threads,
    )


def cmd_ppr(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    extra = {"network_digest": network.digest}
    if args.source is not None:
        source = network.index_of(args.source)
        vec = ppr_single_source(network, source, alpha=args.alpha, tolerance=args.tolerance,
                                max_iterations=args.max_iterations)
        with open(out_dir / "ppr.csv", "w", encoding="utf-8") as fh:
            fh.write("source,target,value\n")
            for t in range(network.n):
                fh.write(f"{args.source},{network.symbol_of(t)},{vec.values[t]:.4f}\n")
        extra["residual_norm"] = vec.residual_norm
    else:
        config = _cache_config(args, out_dir)
        mat, hit = cached_ppr_matrix(network, config, resolve_cache_dir(config, out_dir))
        with open(out_dir / "ppr.csv", "w", encoding="utf-8") as fh:
            fh.write("source,target,value\n")
            for s in range(network.n):
                row = mat.values[s]
                s_sym = network.symbol_of(s)
                for t in range(network.n):
                    fh.write(f"{s_sym},{network.symbol_of(t)},{row[t]:.4f}\n")
        extra["cache"] = {"ppr_hit": hit}
    write_json(_manifest(args, "ppr", {"network": args.network}, extra),
               out_dir / "manifest.json")
    return 0


def cmd_pen(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    config = _cache_config(args, out_dir)
    pen, ppr_hit, pen_hit = cached_pen_matrix(network, config, resolve_cache_dir(config, out_dir))
    save_pen_csv(pen, network, out_dir / "pen.csv")
    write_json(_manifest(args, "pen", {"network": args.network},
                         {"network_digest": network.digest,
                          "cache": {"pen_hit": pen_hit, "ppr_hit": ppr_hit}}),
               out_dir / "manifest.json")
    return 0


def _diff_for_measure(args, network, genes, out_dir):
    measure = Measure(args.measure)
    config = _cache_config(args, out_dir)
    cache_dir = resolve_cache_dir(config, out_dir)
    if measure is Measure.PEN:
        pen, _, _ = cached_pen_matrix(network, config, cache_dir)
        return pen_diff_vector(pen, genes)
    if measure is Measure.PPR:
        mat, _ = cached_ppr_matrix(network, config, cache_dir)
        return ppr_diff_vector(mat, genes,
                               gene_side_minus_rest=args.ppr_diff_orientation == "genes-minus-rest")
    return distance_diff_vector(network, genes,
                                gene_side_minus_rest=args.dist_diff_orientation == "genes-minus-rest")


def cmd_diff(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    genes, missing = load_symbol_list(network, args.oncogenes)
    if not genes:
        raise ValidationError(f"no oncogene symbol from {args.oncogenes} resolves to a network node")
    write_json({"oncogenes": list(missing)}, out_dir / "unresolved.json")
    diffs = _diff_for_measure(args, network, genes, out_dir)
    save_diff_csv(diffs, network, out_dir / "diff.csv")
    write_json(_manifest(args, "diff", {"network": args.network, "oncogenes": args.oncogenes},
                         {"network_digest": network.digest}),
               out_dir / "manifest.json")
    return 0


def cmd_profile(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    annotations, unresolved = load_annotations(network, args.oncogenes, args.drug_targets)
    write_json(unresolved.to_json_dict(), out_dir / "unresolved.json")
    diffs = _diff_for_measure(args, network, annotations.oncogenes, out_dir)
    known = known_combos(annotations, network, args.k)
    hist = histogram_from_diffs(diffs, args.k, known, n_bucket=args.buckets,
                                m_levels=args.m_levels)
    write_json(hist.to_json_dict(), out_dir / "histogram.json")
    emit_plot(hist, out_dir / "histogram.svg")
    save_known_membership_csv(hist, network, out_dir / "known_membership.csv")
    inputs = {"network": args.network, "oncogenes": args.oncogenes,
              "drug_targets": args.drug_targets}
    write_json(_manifest(args, "profile", inputs, {"network_digest": network.digest}),
               out_dir / "manifest.json")
    return 0


def cmd_select(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    genes, missing = load_symbol_list(network, args.oncogenes)
    if not genes:
        raise ValidationError(f"no oncogene symbol from {args.oncogenes} resolves to a network node")
    write_json({"oncogenes": list(missing)}, out_dir / "unresolved.json")
    diffs = _diff_for_measure(args, network, genes, out_dir)
    picked = select_from_diffs(diffs, args.k, args.lo, args.hi, top_m=args.top_m)
    with open(out_dir / "select.csv", "w", encoding="utf-8") as fh:
        fh.write("members,value\n")
        for score in picked:
            names = "+".join(network.symbol_of(m) for m in score.members)
            fh.write(f"{names},{score.value:.4f}\n")
    write_json(_manifest(args, "select", {"network": args.network, "oncogenes": args.oncogenes},
                         {"network_digest": network.digest, "selected": len(picked)}),
               out_dir / "manifest.json")
    return 0


def cmd_esr(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    annotations, unresolved = load_annotations(network, args.oncogenes, args.drug_targets)
    write_json(unresolved.to_json_dict(), out_dir / "unresolved.json")
    genes = annotations.oncogenes
    known = known_combos(annotations, network, args.k)
    config = _cache_config(args, out_dir)
    cache_dir = resolve_cache_dir(config, out_dir)
    pen, _, _ = cached_pen_matrix(network, config, cache_dir)
    mat, _ = cached_ppr_matrix(network, config, cache_dir)
    vectors = {
        Measure.PEN: pen_diff_vector(pen, genes),
        Measure.PPR: ppr_diff_vector(mat, genes,
                                     gene_side_minus_rest=args.ppr_diff_orientation == "genes-minus-rest"),
        Measure.DIST: distance_diff_vector(network, genes,
                                           gene_side_minus_rest=args.dist_diff_orientation == "genes-minus-rest"),
    }
    histograms = {
        m: histogram_from_diffs(v, args.k, known, n_bucket=args.buckets, m_levels=args.m_levels)
        for m, v in vectors.items()
    }
    report = esr(histograms)
    save_esr_csv(report, out_dir / "esr.csv")
    write_json(report.to_json_dict(), out_dir / "esr.json")
    inputs = {"network": args.network, "oncogenes": args.oncogenes,
              "drug_targets": args.drug_targets}
    write_json(_manifest(args, "esr", inputs, {"network_digest": network.digest}),
               out_dir / "manifest.json")
    return 0


def cmd_perturb(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    spec = PerturbSpec(mode=PerturbMode(args.mode), fraction=args.fraction, seed=args.seed)
    perturbed = perturb(network, spec)
    perturbed.save_tsv(out_dir / "perturbed.tsv")
    write_json(_manifest(args, "perturb", {"network": args.network},
                         {"network_digest": network.digest,
                          "perturbed_digest": perturbed.digest,
                          "edges_before": network.e, "edges_after": perturbed.e}),
               out_dir / "manifest.json")
    return 0


def cmd_noise_study(args) -> int:
    out_dir = _out_dir(args)
    network = load_network(args.network, drop_neutral=args.drop_neutral)
    annotations, unresolved = load_annotations(network, args.oncogenes, args.drug_targets)
    write_json(unresolved.to_json_dict(), out_dir / "unresolved.json")
    runs = noise_study(
        network, annotations,
        k=args.k, fractions=args.fractions, modes=args.modes, seeds=args.seeds,
        alpha=args.alpha, tolerance=args.tolerance, epsilon=args.epsilon,
        n_bucket=args.buckets, m_levels=args.m_levels,
    )
    summary = []
    for run in runs:
        mode = run.mode.value if run.mode is not None else "none"
        seed = run.seed if run.seed is not None else "-"
        name = f"{mode}_f{run.fraction:g}_s{seed}"
        run_dir = out_dir / name
        run_dir.mkdir(parents=True, exist_ok=True)
        write_json(run.histogram.to_json_dict(), run_dir / "histogram.json")
        emit_plot(run.histogram, run_dir / "histogram.svg")
        d_min, d_max = run.histogram.delta_range
        summary.append({
            "run": name,
            "mode": mode,
            "fraction": run.fraction,
            "seed": run.seed,
            "network_digest": run.network_digest,
            "delta_min": d_min,
            "delta_max": d_max,
            "max_coverage_bucket": run.histogram.max_coverage_index(),
            "coverage": run.histogram.coverage(run.histogram.max_coverage_index()),
        })
    inputs = {"network": args.network, "oncogenes": args.oncogenes,
              "drug_targets": args.drug_targets}
    write_json(_manifest(args, "noise-study", inputs,
                         {"network_digest": network.digest, "runs": summary}),
               out_dir / "manifest.json")
    return 0


def main(argv=None) -> int:
    parser = get_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        _emit_error("validation", exc, 1)
        return 1
    except ComputeError as exc:
        _emit_error("compute", exc, 2)
        return 2
    except OSError as exc:
        _emit_error("io", exc, 3)
        return 3


def _emit_error(kind, exc, code) -> None:
    print(json.dumps({"error": kind, "message": str(exc), "exit_code": code}),
          file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
