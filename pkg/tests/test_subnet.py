"""Subnetwork extraction: membership criterion, thresholds, error reporting."""

import numpy as np
import pytest

from penprof.errors import ValidationError
from penprof.subnet import (
    UNREACHED,
    SubnetSpec,
    build_subnetwork,
    multi_source_bfs,
    subnet_summary,
)

from conftest import make_net
from oracles import random_digraph, simple_path_nodes, walk_member_nodes


def spec_for(net, targets, genes, d=5):
    return SubnetSpec(
        targets=frozenset(net.index_of(s) for s in targets),
        oncogenes=frozenset(net.index_of(s) for s in genes),
        path_length_threshold=d,
    )


def test_chain_within_threshold():
    net = make_net([("u", "a", 1), ("a", "w", 1)])
    sub = build_subnetwork(net, spec_for(net, ["u"], ["w"], d=5))
    assert sorted(sub.symbols) == ["a", "u", "w"]
    assert sub.e == 2


def test_chain_at_threshold_boundary_is_empty():
    net = make_net([("u", "a", 1), ("a", "w", 1)])
    with pytest.raises(ValidationError) as err:
        build_subnetwork(net, spec_for(net, ["u"], ["w"], d=2))
    msg = str(err.value)
    assert "u" in msg and "w" in msg and "2" in msg


def test_star_excludes_dead_branch(star4):
    sub = build_subnetwork(star4, spec_for(star4, ["u"], ["w"], d=5))
    assert sorted(sub.symbols) == ["a", "u", "w"]


def test_star_matches_simple_path_enumeration(star4):
    targets = {star4.index_of("u")}
    genes = {star4.index_of("w")}
    sub = build_subnetwork(
        star4,
        SubnetSpec(targets=frozenset(targets), oncogenes=frozenset(genes),
                   path_length_threshold=5),
    )
    expected = {star4.symbol_of(v) for v in simple_path_nodes(star4, targets, genes, 5)}
    assert set(sub.symbols) == expected


def test_spec_validation():
    with pytest.raises(ValidationError):
        SubnetSpec(targets=frozenset({0}), oncogenes=frozenset({1}),
                   path_length_threshold=1)
    with pytest.raises(ValidationError):
        SubnetSpec(targets=frozenset(), oncogenes=frozenset({1}),
                   path_length_threshold=5)
    with pytest.raises(ValidationError):
        SubnetSpec(targets=frozenset({0}), oncogenes=frozenset(),
                   path_length_threshold=5)


def test_bfs_distances():
    net = make_net([("a", "b", 1), ("b", "c", 1), ("c", "a", 1), ("d", "a", 1)])
    dist = multi_source_bfs(net, {net.index_of("a")}, reverse=False)
    assert dist[net.index_of("a")] == 0
    assert dist[net.index_of("b")] == 1
    assert dist[net.index_of("c")] == 2
    assert dist[net.index_of("d")] == UNREACHED
    back = multi_source_bfs(net, {net.index_of("a")}, reverse=True)
    assert back[net.index_of("d")] == 1
    assert back[net.index_of("b")] == 2


def test_membership_matches_walk_oracle_on_random_graphs():
    rng = np.random.default_rng(20260501)
    checked = 0
    for _ in range(50):
        syms, triples = random_digraph(rng, max_nodes=10)
        if not triples:
            continue
        net = make_net(triples, extra=tuple(syms))
        ids = rng.permutation(net.n)
        targets = frozenset(int(i) for i in ids[:2])
        genes = frozenset(int(i) for i in ids[2:4])
        if not targets or not genes:
            continue
        d = int(rng.integers(2, 5))
        oracle = walk_member_nodes(net, targets, genes, d)
        spec = SubnetSpec(targets=targets, oncogenes=genes, path_length_threshold=d)
        try:
            sub = build_subnetwork(net, spec)
            members = {net.index_of(s) for s in sub.symbols}
        except ValidationError:
            members = set()
        assert members == oracle
        checked += 1
    assert checked >= 40


def test_monotone_in_threshold():
    rng = np.random.default_rng(7)
    for _ in range(20):
        syms, triples = random_digraph(rng, max_nodes=10)
        if not triples:
            continue
        net = make_net(triples, extra=tuple(syms))
        targets = frozenset({0})
        genes = frozenset({net.n - 1})
        prev = set()
        for d in range(2, 7):
            spec = SubnetSpec(targets=targets, oncogenes=genes,
                              path_length_threshold=d)
            try:
                sub = build_subnetwork(net, spec)
                cur = set(sub.symbols)
            except ValidationError:
                cur = set()
            assert prev <= cur
            prev = cur


def test_vertex_induced_edges_complete(net30, net30_annotations):
    ann, _ = net30_annotations
    spec = SubnetSpec(targets=ann.targets, oncogenes=ann.oncogenes,
                      path_length_threshold=5)
    sub = build_subnetwork(net30, spec)
    kept = {s: i for i, s in enumerate(sub.symbols)}
    expected = set()
    for (u, v), g in zip(net30.edges, net30.signs):
        su, sv = net30.symbol_of(u), net30.symbol_of(v)
        if su in kept and sv in kept:
            expected.add((su, sv, int(g)))
    got = {
        (sub.symbol_of(u), sub.symbol_of(v), int(g))
        for (u, v), g in zip(sub.edges, sub.signs)
    }
    assert got == expected


def test_fixture_subnet_prunes_unreachable_tail(net30, net30_annotations):
    ann, _ = net30_annotations
    spec = SubnetSpec(targets=ann.targets, oncogenes=ann.oncogenes,
                      path_length_threshold=5)
    sub = build_subnetwork(net30, spec)
    assert sub.n < net30.n
    assert "G29" not in sub.symbols
    assert "G30" not in sub.symbols


def test_summary_fields(net30, net30_annotations):
    ann, _ = net30_annotations
    spec = SubnetSpec(targets=ann.targets, oncogenes=ann.oncogenes,
                      path_length_threshold=5)
    sub = build_subnetwork(net30, spec)
    summary = subnet_summary(net30, sub, spec)
    assert summary["nodes"] == sub.n
    assert summary["edges"] == sub.e
    assert summary["targets_retained"] == len(
        [t for t in ann.targets if net30.symbol_of(t) in sub.symbols]
    )
    assert summary["oncogenes_retained"] == len(
        [g for g in ann.oncogenes if net30.symbol_of(g) in sub.symbols]
    )
    assert summary["path_length_threshold"] == 5
    assert summary["digest"] == sub.digest
