"""Walk-termination PPR: closed-form anchors, oracle equality, determinism."""

import numpy as np
import pytest

from penprof.errors import ComputeError, ValidationError
from penprof.ppr import (
    DEFAULT_ALPHA,
    load_ppr_matrix,
    ppr_all_pairs,
    ppr_cache_key,
    ppr_single_source,
    save_ppr_matrix,
)

from conftest import make_net
from oracles import dense_ppr, mc_ppr, mc_standard_errors, random_digraph

# Closed forms for the worked examples, frozen.
#   chain s->a->t:  pi = (0.2, 0.16, 0.64)
#   two-node s->t:  pi = (0.2, 0.8)
#   two-cycle:      pi(s,s) = alpha / (1 - (1-alpha)^2) = 1/1.8
CHAIN = {"s": 0.2, "a": 0.16, "t": 0.64}
CYCLE_SELF = 0.2 / (1.0 - 0.8 * 0.8)


def by_symbol(net, values):
    return {net.symbol_of(i): values[i] for i in range(net.n)}


class TestClosedForms:
    def test_two_node(self, two_node):
        vec = ppr_single_source(two_node, two_node.index_of("s"))
        got = by_symbol(two_node, vec.values)
        assert got["s"] == pytest.approx(0.2, abs=1e-12)
        assert got["t"] == pytest.approx(0.8, abs=1e-12)

    def test_chain(self, chain3):
        vec = ppr_single_source(chain3, chain3.index_of("s"))
        got = by_symbol(chain3, vec.values)
        for sym, want in CHAIN.items():
            assert got[sym] == pytest.approx(want, abs=1e-12)
        assert vec.residual_norm == 0.0

    def test_two_cycle(self, two_cycle):
        vec = ppr_single_source(two_cycle, two_cycle.index_of("s"))
        got = by_symbol(two_cycle, vec.values)
        assert got["s"] == pytest.approx(CYCLE_SELF, abs=1e-9)
        assert got["t"] == pytest.approx(1.0 - CYCLE_SELF, abs=1e-9)

    def test_isolated_source_absorbs(self, isolated_plus_pair):
        net = isolated_plus_pair
        u = net.index_of("u")
        vec = ppr_single_source(net, u)
        expected = np.zeros(net.n)
        expected[u] = 1.0
        assert np.array_equal(vec.values, expected)

    def test_all_pairs_row_matches_single_source(self, chain3):
        mat = ppr_all_pairs(chain3)
        for s in range(chain3.n):
            vec = ppr_single_source(chain3, s)
            assert np.array_equal(mat.values[s], vec.values)


class TestInvariants:
    def test_rows_sum_to_one(self, net30):
        mat = ppr_all_pairs(net30)
        sums = mat.values.sum(axis=1)
        assert np.all(np.abs(sums - 1.0) <= 1e-8)

    def test_non_negative(self, net30):
        mat = ppr_all_pairs(net30)
        assert np.all(mat.values >= 0.0)

    def test_residuals_below_tolerance(self, net30):
        mat = ppr_all_pairs(net30, tolerance=1e-9)
        assert np.all(mat.residual_norms <= 1e-9)

    def test_support_equals_reachability(self):
        rng = np.random.default_rng(17)
        for _ in range(15):
            syms, triples = random_digraph(rng, max_nodes=10)
            if not triples:
                continue
            net = make_net(triples, extra=tuple(syms))
            mat = ppr_all_pairs(net)
            for s in range(net.n):
                reach = {s}
                frontier = [s]
                while frontier:
                    nxt = []
                    for u in frontier:
                        lo, hi = net.out_indptr[u], net.out_indptr[u + 1]
                        for v in net.out_targets[lo:hi]:
                            if int(v) not in reach:
                                reach.add(int(v))
                                nxt.append(int(v))
                    frontier = nxt
                positive = set(np.flatnonzero(mat.values[s] > 0).tolist())
                assert positive == reach


class TestDeterminism:
    def test_bitwise_repeatability(self, net30):
        a = ppr_all_pairs(net30)
        b = ppr_all_pairs(net30)
        assert np.array_equal(a.values, b.values)

    def test_block_width_does_not_change_results(self, net30):
        a = ppr_all_pairs(net30, block_size=1)
        b = ppr_all_pairs(net30, block_size=7)
        c = ppr_all_pairs(net30, block_size=256)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(b.values, c.values)

    def test_thread_count_does_not_change_results(self, net30):
        a = ppr_all_pairs(net30, threads=1)
        b = ppr_all_pairs(net30, threads=4)
        assert np.array_equal(a.values, b.values)


class TestOracles:
    def test_dense_linear_solve_agreement(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            syms, triples = random_digraph(rng)
            if not triples:
                continue
            net = make_net(triples, extra=tuple(syms))
            mat = ppr_all_pairs(net)
            for s in range(net.n):
                exact = dense_ppr(net, s, DEFAULT_ALPHA)
                assert np.max(np.abs(exact - mat.values[s])) < 1e-8

    def test_monte_carlo_agreement_chain(self, chain3):
        s = chain3.index_of("s")
        vec = ppr_single_source(chain3, s)
        est = mc_ppr(chain3, s, DEFAULT_ALPHA, 200_000, seed=3)
        se = mc_standard_errors(vec.values, 200_000)
        gap = np.abs(est - vec.values)
        assert np.all(gap <= 3.0 * np.where(se > 0, se, np.inf))


class TestValidationAndCaching:
    def test_alpha_range_checked(self, chain3):
        for bad in (0.0, 1.0, -0.3, 1.5):
            with pytest.raises(ValidationError):
                ppr_single_source(chain3, 0, alpha=bad)

    def test_tolerance_checked(self, chain3):
        with pytest.raises(ValidationError):
            ppr_single_source(chain3, 0, tolerance=0.0)

    def test_source_checked(self, chain3):
        with pytest.raises(ValidationError):
            ppr_single_source(chain3, 99)

    def test_iteration_cap_raises_with_residual(self, two_cycle):
        with pytest.raises(ComputeError) as err:
            ppr_single_source(two_cycle, 0, tolerance=1e-12, max_iterations=3)
        assert "residual" in str(err.value)

    def test_cache_round_trip(self, tmp_path, net30):
        mat = ppr_all_pairs(net30)
        p = tmp_path / "ppr.npz"
        save_ppr_matrix(mat, p)
        back = load_ppr_matrix(p)
        assert np.array_equal(back.values, mat.values)
        assert back.alpha == mat.alpha
        assert back.tolerance == mat.tolerance
        assert back.network_digest == mat.network_digest

    def test_cache_key_separates_parameters(self, net30):
        base = ppr_cache_key(net30.digest, 0.2, 1e-9)
        assert ppr_cache_key(net30.digest, 0.2, 1e-9) == base
        assert ppr_cache_key(net30.digest, 0.15, 1e-9) != base
        assert ppr_cache_key(net30.digest, 0.2, 1e-8) != base
        assert ppr_cache_key("0" * 64, 0.2, 1e-9) != base
