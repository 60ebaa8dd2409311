"""Release gate: one test per published acceptance criterion.

Each test is self-contained and prints as a single pass/fail line under
pytest -v. Tolerances and frozen constants are stated inline next to the
assertion they guard.
"""

import itertools
import json
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from penprof.baselines import esr
from penprof.errors import ValidationError
from penprof.influence import (
    ComboScore,
    Measure,
    SourceDiffVector,
    combo_diff,
    enumerate_combo_diffs,
    pen_diff_vector,
)
from penprof.network import load_network
from penprof.pen import max_pen, pen_matrix
from penprof.perturb import PerturbMode, PerturbSpec, perturb, perturb_count
from penprof.pipeline import PipelineConfig, run_pipeline
from penprof.ppr import ppr_all_pairs, ppr_single_source
from penprof.profiler import KnownComboSet, build_delta_histogram
from penprof.subnet import SubnetSpec, build_subnetwork

from conftest import DATA, make_net
from oracles import (
    dense_ppr,
    literal_average_then_subtract,
    mc_ppr,
    mc_standard_errors,
    random_digraph,
    simple_path_nodes,
    walk_member_nodes,
    witness_walks,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
GOLDEN = REPO_ROOT / "tests" / "golden" / "run30"


def test_c01_pen_cap_matches_published_value():
    """max PEN distance at epsilon 1e-5 equals 12.5129 within 5e-5, under 1s."""
    t0 = time.perf_counter()
    value = max_pen(1e-5)
    elapsed = time.perf_counter() - t0
    assert abs(value - 12.5129) <= 5e-5
    assert elapsed < 1.0


def test_c02_solver_agrees_with_dense_and_monte_carlo_oracles():
    """Fifty seeded digraphs (<= 12 nodes): the push solver matches a dense
    linear solve to 1e-8 per entry and a 1e6-walk Monte Carlo estimate to
    3 binomial standard errors, all inside 60s. Master seed 100 is frozen;
    the dense bound runs unconditionally, the seed only pins sampling noise.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(100)
    n_walks = 1_000_000
    interior_entries = 0
    for _ in range(50):
        syms, triples = random_digraph(rng, max_nodes=12)
        net = make_net(triples, extra=tuple(syms))
        source = int(rng.integers(net.n))
        mc_seed = int(rng.integers(2 ** 32))

        vec = ppr_single_source(net, source, alpha=0.2)
        exact = dense_ppr(net, source, 0.2)
        assert np.max(np.abs(vec.values - exact)) <= 1e-8

        est = mc_ppr(net, source, 0.2, n_walks, mc_seed)
        se = mc_standard_errors(exact, n_walks)
        zero = exact == 0.0
        one = exact == 1.0
        interior = ~zero & ~one
        assert np.all(est[zero] == 0.0)
        assert np.all(est[one] == 1.0)
        if interior.any():
            z = np.abs(est[interior] - exact[interior]) / se[interior]
            assert z.max() < 3.0
            interior_entries += int(interior.sum())
    assert interior_entries > 200
    assert time.perf_counter() - t0 < 60.0


def test_c03_ppr_rows_are_probability_distributions():
    """Every source row of every fixture network sums to 1 within 1e-8."""
    networks = [
        load_network(DATA / "net30.tsv"),
        load_network(DATA / "noise_net.tsv"),
        make_net([("s", "a", 1), ("a", "t", 1)]),
        make_net([("s", "t", 1)]),
        make_net([("s", "t", 1), ("t", "s", 1)]),
        make_net([("u", "a", 1), ("u", "b", 1), ("a", "w", -1)]),
        make_net([("a", "b", 1)], extra=("u",)),
    ]
    for net in networks:
        mat = ppr_all_pairs(net, alpha=0.2)
        sums = mat.values.sum(axis=1)
        assert np.max(np.abs(sums - 1.0)) <= 1e-8


def test_c04_combo_mean_equals_literal_average_then_diff():
    """Averaging member diff values reproduces the literal two-step recipe
    (average the members' distance rows, then rest mean minus gene mean)
    to 1e-12 on twenty seeded networks of at most 12 nodes.
    """
    rng = np.random.default_rng(20260802)
    checked = 0
    for _ in range(20):
        syms, triples = random_digraph(rng, max_nodes=12)
        net = make_net(triples, extra=tuple(syms))
        if net.n < 4:
            continue
        genes = frozenset(int(i) for i in rng.permutation(net.n)[:2])
        pen = pen_matrix(ppr_all_pairs(net, alpha=0.2), net)
        diffs = pen_diff_vector(pen, genes)
        for members in itertools.combinations(range(net.n), 2):
            got = combo_diff(diffs, members).value
            want = literal_average_then_subtract(pen.values, members, genes)
            assert abs(got - want) <= 1e-12
            checked += 1
    assert checked > 100


def test_c05_streaming_enumeration_covers_all_pairs_of_2560_nodes():
    """The combination stream over 2560 nodes yields exactly C(2560, 2)
    = 3,275,520 values in under 10 seconds.
    """
    rng = np.random.default_rng(5)
    diffs = SourceDiffVector(
        measure=Measure.PEN,
        gene_set=frozenset({0}),
        values=rng.normal(size=2560),
    )
    t0 = time.perf_counter()
    count = enumerate_combo_diffs(diffs, 2)
    elapsed = time.perf_counter() - t0
    assert count == math.comb(2560, 2) == 3_275_520
    assert elapsed < 10.0


def test_c06_histogram_partition_and_network_wide_percentages():
    """Ten hand-valued combinations split into five two-combo buckets; the
    percentage denominator is the network-wide known count, and the m=100
    levels across buckets account for every known combination.
    """
    stream = [
        ComboScore(members=(i, i + 40), value=float(v))
        for i, v in enumerate(range(1, 11))
    ]
    known = KnownComboSet(
        k=2, combos=frozenset({stream[0].members, stream[9].members})
    )
    hist = build_delta_histogram(stream, known, n_bucket=5, m_levels=(1, 10, 20, 50))
    assert [b.combo_count for b in hist.buckets] == [2, 2, 2, 2, 2]
    assert sum(b.combo_count for b in hist.buckets) == hist.total_combos == 10
    assert hist.total_known == 2
    # Top bucket holds one of two known combos: 50 percent, not the
    # bucket-local 100 percent.
    assert hist.percentage(4, 50) == 50.0
    assert hist.percentage(0, 50) == 0.0
    assert hist.percentage(0, 100) == 50.0
    assert sum(hist.percentage(i, 100) for i in range(5)) == 100.0
    assert hist.max_coverage_index() == 4


def test_c07_effective_search_ratio_reference_and_published_scale():
    """ESR of the reference measure against itself is exactly 1; injecting
    the published worst-bucket sizes reproduces the published ratios 2.39
    and 9.27 at two decimals.
    """
    from test_baselines import synth_hist

    self_report = esr({Measure.PEN: synth_hist(Measure.PEN, [7, 3, 11])})
    assert self_report.ratio[Measure.PEN] == 1.0

    report = esr({
        Measure.PEN: synth_hist(Measure.PEN, [226049, 1, 1, 1, 1]),
        Measure.PPR: synth_hist(Measure.PPR, [539293, 1, 1, 1, 1]),
    })
    assert round(report.ratio[Measure.PPR], 2) == 2.39

    report = esr({
        Measure.PEN: synth_hist(Measure.PEN, [122070, 1, 1, 1, 1]),
        Measure.DIST: synth_hist(Measure.DIST, [1131200, 1, 1, 1, 1]),
    })
    assert round(report.ratio[Measure.DIST], 2) == 9.27


def test_c08_subnet_membership_equals_walk_oracle_with_witness_analysis():
    """Extracted subnetwork membership equals the walk-length oracle on
    eighty seeded sparse digraphs (d up to 6), and every member the
    simple-path relaxation would exclude is witnessed only by walks that
    revisit a vertex.
    """
    rng = np.random.default_rng(20260801)
    checked = 0
    discrepant_nodes = 0
    for _ in range(80):
        syms, triples = random_digraph(rng, max_nodes=10, p=0.15)
        if not triples:
            continue
        net = make_net(triples, extra=tuple(syms))
        if net.n < 4:
            continue
        ids = rng.permutation(net.n)
        targets = frozenset(int(i) for i in ids[:2])
        genes = frozenset(int(i) for i in ids[2:4])
        d = int(rng.integers(2, 7))
        oracle = walk_member_nodes(net, targets, genes, d)
        spec = SubnetSpec(targets=targets, oncogenes=genes, path_length_threshold=d)
        try:
            sub = build_subnetwork(net, spec)
            members = {net.index_of(s) for s in sub.symbols}
        except ValidationError:
            members = set()
        assert members == oracle
        for node in members - simple_path_nodes(net, targets, genes, d):
            walks = witness_walks(net, node, targets, genes, d)
            assert walks
            assert all(len(set(w)) < len(w) for w in walks)
            discrepant_nodes += 1
        checked += 1
    assert checked >= 50

    # Deterministic witness fixture: x sits on the walk t>a>x>a>g but on no
    # simple t-to-g path, so walk membership must include it and every
    # witnessing walk must repeat a.
    net = make_net([("t", "a", 1), ("a", "x", 1), ("x", "a", 1), ("a", "g", 1)])
    targets = frozenset({net.index_of("t")})
    genes = frozenset({net.index_of("g")})
    sub = build_subnetwork(
        net, SubnetSpec(targets=targets, oncogenes=genes, path_length_threshold=5)
    )
    members = {net.index_of(s) for s in sub.symbols}
    assert members == {net.index_of(s) for s in "taxg"}
    assert net.index_of("x") not in simple_path_nodes(net, targets, genes, 5)
    walks = witness_walks(net, net.index_of("x"), targets, genes, 5)
    assert walks
    assert all(len(set(w)) < len(w) for w in walks)
    # Frozen seed: the sweep itself hits four such nodes, so the witness
    # clause above is exercised beyond this hand fixture.
    assert discrepant_nodes == 4


def test_c09_perturbation_reproducible_across_processes_with_exact_counts(tmp_path):
    """The same perturbation spec yields byte-identical networks in two
    separate CLI processes, and the edge arithmetic is exact (floor of the
    printed fraction times the edge count) on twenty seeded networks.
    """
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        proc = subprocess.run(
            [
                sys.executable, "-m", "penprof.cli", "perturb",
                "--network", str(DATA / "net30.tsv"),
                "--mode", "add", "--fraction", "0.25", "--seed", "77",
                "--out-dir", str(out),
            ],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(out)
    a = (outs[0] / "perturbed.tsv").read_bytes()
    b = (outs[1] / "perturbed.tsv").read_bytes()
    assert a == b
    manifests = [json.loads((o / "manifest.json").read_text()) for o in outs]
    assert manifests[0]["perturbed_digest"] == manifests[1]["perturbed_digest"]

    rng = np.random.default_rng(909)
    checked = 0
    for _ in range(20):
        syms, triples = random_digraph(rng, max_nodes=10)
        net = make_net(triples, extra=tuple(syms))
        for mode, fraction in (
            (PerturbMode.REMOVE, 0.5),
            (PerturbMode.REMOVE, 0.29),
            (PerturbMode.ADD, 0.25),
        ):
            count = perturb_count(fraction, net.e)
            if count < 1:
                continue
            if mode is PerturbMode.ADD:
                room = net.n * (net.n - 1) - len(net.ordered_pairs())
                if count > room:
                    continue
                expected = net.e + count
            else:
                expected = net.e - count
            out = perturb(net, PerturbSpec(mode=mode, fraction=fraction, seed=3))
            assert out.e == expected
            checked += 1
    assert checked >= 20


def test_c10_pipeline_reproduces_committed_golden_run(tmp_path, monkeypatch):
    """A fresh pipeline run over the committed fixture reproduces every
    artifact of tests/golden/run30 byte for byte in under 5 seconds.
    """
    monkeypatch.chdir(REPO_ROOT)
    t0 = time.perf_counter()
    config = PipelineConfig(
        network_file="tests/data/net30.tsv",
        oncogene_file="tests/data/oncogenes30.txt",
        drug_target_file="tests/data/drugs30.tsv",
        out_dir=str(tmp_path / "out"),
        cache_dir=str(tmp_path / "cache"),
    )
    run_pipeline(config)
    elapsed = time.perf_counter() - t0
    golden_files = sorted(p.name for p in GOLDEN.iterdir())
    fresh_files = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert fresh_files == golden_files
    for name in golden_files:
        assert (tmp_path / "out" / name).read_bytes() == (GOLDEN / name).read_bytes(), name
    assert elapsed < 5.0
