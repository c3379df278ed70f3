"""Exact brute-force oracles: partition functions, phases, polymer sums."""

import itertools
import math

import numpy as np
import pytest

from bipolymer import bigraph, oracle, polymer, spin
from bipolymer.polymer import Polymer, PolymerModel


def k33():
    adj = np.array([[3, 4, 5]] * 3 + [[0, 1, 2]] * 3)
    return bigraph.BipartiteRegularGraph(3, 3, adj)


def slow_partition_function(g, system):
    """Independent reference: loop over all q^(2n) assignments."""
    q, n = system.q, g.n
    total = 0.0
    for sigma in itertools.product(range(q), repeat=2 * n):
        w = 1.0
        for v in range(2 * n):
            w *= system.lam[sigma[v]]
        for v in range(n):
            for u in g.adj[v]:
                w *= system.b[sigma[v], sigma[int(u)]]
        total += w
    return total


class TestPartitionFunction:
    def test_k33_hardcore_counts_independent_sets(self):
        assert oracle.exact_partition_function(k33(), spin.hardcore(1.0)) == 15.0

    def test_k33_colorings(self):
        z = oracle.exact_partition_function(k33(), spin.colorings(4))
        assert z == 420.0

    def test_matches_slow_reference_on_soft_system(self):
        g = bigraph.generate(3, 2, seed=11)
        rng = np.random.default_rng(5)
        b = rng.uniform(0.2, 1.0, size=(3, 3))
        b = (b + b.T) / 2
        b[np.unravel_index(b.argmax(), b.shape)] = 1.0
        b = np.minimum((b + b.T) / 2, 1.0)
        idx = np.unravel_index(b.argmax(), b.shape)
        b[idx] = 1.0
        b[idx[::-1]] = 1.0
        lam = np.array([1.0, 0.7, 0.4])
        system = spin.SpinSystem(b, lam)
        fast = oracle.exact_partition_function(g, system)
        slow = slow_partition_function(g, system)
        assert abs(fast - slow) < 1e-12 * slow

    def test_hardcore_activity_scaling(self):
        # Z for K33 hard-core at activity lam: sum over ind. sets of lam^|I|
        g = k33()
        for lam in (0.3, 0.5, 1.0):
            z = oracle.exact_partition_function(g, spin.hardcore(lam))
            expected = sum(
                math.comb(3, k) * lam**k for k in range(4)
            ) * 2 - 1  # both sides, empty set counted twice
            assert abs(z - expected) < 1e-12

    def test_cost_guard(self):
        g = bigraph.generate(30, 3, seed=0)
        with pytest.raises(ValueError):
            oracle.exact_partition_function(g, spin.colorings(4))


class TestPhaseDecomposition:
    def test_masses_sum_to_z(self):
        g = k33()
        for system in (spin.hardcore(1.0), spin.colorings(3)):
            hists = oracle.exact_phase_decomposition(g, system)
            z = oracle.exact_partition_function(g, system)
            total = math.fsum(h.mass for h in hists)
            assert abs(total - z) < 1e-9 * z
            assert all(h.mass > 0 for h in hists)
            # sorted by decreasing mass
            masses = [h.mass for h in hists]
            assert masses == sorted(masses, reverse=True)

    def test_histogram_normalization(self):
        hists = oracle.exact_phase_decomposition(k33(), spin.hardcore(0.5))
        for h in hists:
            assert abs(h.alpha.sum() - 1) < 1e-12
            assert abs(h.beta.sum() - 1) < 1e-12
            assert sum(h.alpha_counts) == sum(h.beta_counts) == 3

    def test_hardcore_k33_extreme_phases_present(self):
        # all-left-occupied and all-right-occupied are distinct entries
        hists = oracle.exact_phase_decomposition(k33(), spin.hardcore(1.0))
        keys = {(h.alpha_counts, h.beta_counts) for h in hists}
        assert ((0, 3), (3, 0)) in keys  # left fully occupied, right empty
        assert ((3, 0), (0, 3)) in keys


class TestRestrictedEnsembles:
    def test_k33_hardcore_identity(self):
        g = k33()
        system = spin.hardcore(1.0)
        bc = spin.Biclique((0,), (0, 1))
        z_st = oracle.exact_polymer_partition_function(g, system, bc, kmax=1)
        assert abs(z_st - 1.375) < 1e-15  # 1 + 3/8
        rss = oracle.restricted_spin_sum(g, system, bc, kmax=1)
        assert abs(rss - 11.0) < 1e-12
        prefactor = 1.0**3 * 2.0**3
        assert abs(rss - prefactor * z_st) < 1e-12

    def test_k33_coloring_identity(self):
        g = k33()
        system = spin.colorings(4)
        bc = spin.Biclique((0, 1), (2, 3))
        z_st = oracle.exact_polymer_partition_function(g, system, bc, kmax=1)
        assert abs(z_st - 1.75) < 1e-15  # 1 + 12/16
        rss = oracle.restricted_spin_sum(g, system, bc, kmax=1)
        assert abs(rss - 112.0) < 1e-12
        assert abs(rss - 4.0**3 * z_st) < 1e-12

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_identity_on_random_graphs(self, seed):
        g = bigraph.generate(6, 3, seed=seed)
        cases = [
            (spin.hardcore(1.0), 2),
            (spin.hardcore(0.5), 2),
            (spin.colorings(4), 1),
        ]
        for system, kmax in cases:
            for bc in spin.enumerate_maximal_bicliques(system):
                model = PolymerModel(g, system, bc)
                z_st = oracle.exact_polymer_partition_function(g, system, bc, kmax)
                rss = oracle.restricted_spin_sum(g, system, bc, kmax)
                pref = model.sum_s**g.n * model.sum_t**g.n
                assert abs(rss - pref * z_st) <= 1e-9 * abs(rss), (
                    f"identity fails: seed={seed} bc={bc} kmax={kmax}"
                )

    def test_kmax_zero_restricts_to_pure_ground(self):
        g = k33()
        system = spin.hardcore(1.0)
        bc = spin.Biclique((0,), (0, 1))
        assert oracle.exact_polymer_partition_function(g, system, bc, kmax=0) == 1.0
        rss = oracle.restricted_spin_sum(g, system, bc, kmax=0)
        # only fully-ground assignments: left unoccupied, right free => 2^3
        assert abs(rss - 8.0) < 1e-15

    def test_restricted_sum_reaches_z_at_full_cap(self):
        # a biclique whose deviations cover everything: hard-core left side
        # can deviate anywhere; with kmax = n the restricted ensemble for
        # ({0},{0,1}) is every assignment with decomposable deviation set
        g = k33()
        system = spin.hardcore(1.0)
        bc = spin.Biclique((0,), (0, 1))
        rss = oracle.restricted_spin_sum(g, system, bc, kmax=3)
        # deviation sets are occupied-left sets; all are single components
        # (pairwise distance 2), always decomposable at kmax=3: the
        # restricted ensemble is all 8 left patterns x free right side,
        # weighted: sum over occupied-left sets S of (#right assignments
        # compatible) ... cross-checked against the direct assignment loop:
        total = 0.0
        for sigma in itertools.product((0, 1), repeat=6):
            w = 1.0
            for v in range(3):
                for u in k33().adj[v]:
                    w *= system.b[sigma[v], sigma[int(u)]]
            total += w
        assert abs(rss - total) < 1e-12


class TestConfigurationsAndMu:
    def test_enumerate_configurations_k33(self):
        model = PolymerModel(k33(), spin.hardcore(1.0), spin.Biclique((0,), (0, 1)))
        configs = oracle.enumerate_configurations(model, kmax=1)
        # empty + 3 singletons; no compatible pair at distance <= 3
        assert len(configs) == 4
        assert () in configs

    def test_mu_st_normalized_and_proportional(self):
        g = k33()
        system = spin.hardcore(1.0)
        bc = spin.Biclique((0,), (0, 1))
        mu = oracle.exact_mu_st(g, system, bc, kmax=1)
        assert abs(sum(mu.values()) - 1) < 1e-12
        model = PolymerModel(g, system, bc)
        z = 1.375
        for config, prob in mu.items():
            assert abs(prob - model.configuration_weight(config) / z) < 1e-15

    def test_mu_two_state_instance(self):
        # single-edge graph: one polymer total, so mu = (1/(1+w), w/(1+w))
        g = bigraph.BipartiteRegularGraph(1, 1, np.array([[1], [0]]))
        system = spin.hardcore(1.0)
        bc = spin.Biclique((0,), (0, 1))
        mu = oracle.exact_mu_st(g, system, bc, kmax=1)
        w = polymer.polymer_weight(g, system, bc, Polymer((0,), (1,)))
        assert abs(w - 0.5) < 1e-15
        assert len(mu) == 2
        assert abs(mu[()] - 1 / (1 + w)) < 1e-15
        key = (Polymer((0,), (1,)),)
        assert abs(mu[key] - w / (1 + w)) < 1e-15

    def test_configuration_limit_guard(self):
        g = bigraph.generate(12, 3, seed=1)
        model = PolymerModel(g, spin.colorings(4), spin.Biclique((0, 1), (2, 3)))
        with pytest.raises(ValueError):
            oracle.enumerate_configurations(model, kmax=2, limit=10)


class TestZPmerAndMixture:
    def test_k33_hardcore_z_pmer(self):
        g = k33()
        report = oracle.exact_z_pmer(g, spin.hardcore(1.0), kmax=1)
        assert abs(report.value - 22.0) < 1e-12  # 11 per biclique
        assert len(report.bicliques) == 2
        assert abs(math.exp(report.log_value) - report.value) < 1e-12 * report.value
        z = oracle.exact_partition_function(g, spin.hardcore(1.0))
        ratio = report.value / z
        assert 1.0 < ratio < 2.0  # overcounting stays within the biclique count

    def test_mixture_normalizer_equals_z_pmer(self):
        # the generative density sums, over all assignments and both
        # bicliques, to exactly the biclique-resolved partition sum
        g = k33()
        system = spin.hardcore(1.0)
        mix = oracle.assignment_mixture(g, system, kmax=1)
        assert abs(sum(mix.values()) - 1) < 1e-12
        report = oracle.exact_z_pmer(g, system, kmax=1)
        # recover the unnormalized mass from the pure-ground assignment:
        # all-unoccupied arises in both ensembles from the empty
        # configuration, with fill probability 1 * (1/2)^3 and
        # prefactor 1^3 * 2^3 = 8, so its raw density is 1 + 1 = 2
        ground = tuple([0] * 6)
        assert abs(mix[ground] * report.value - 2.0) < 1e-12

    def test_mixture_vs_gibbs_on_k33(self):
        # the independent ground fill can close an occupied-occupied edge
        # across a polymer boundary, so the mixture supports assignments
        # the Gibbs measure forbids; on K33 at kmax=1 that leakage is
        # 48 - 15 assignments carrying ~0.24 of the mass
        g = k33()
        system = spin.hardcore(1.0)
        mix = oracle.assignment_mixture(g, system, kmax=1)
        z = oracle.exact_partition_function(g, system)
        gibbs = {}
        for sigma in itertools.product((0, 1), repeat=6):
            w = 1.0
            for v in range(3):
                for u in g.adj[v]:
                    w *= system.b[sigma[v], sigma[int(u)]]
            if w > 0:
                gibbs[sigma] = w / z
        assert set(gibbs) < set(mix)
        assert len(mix) == 48 and len(gibbs) == 15
        leaked = sum(p for s, p in mix.items() if s not in gibbs)
        assert abs(leaked - 0.238636363636) < 1e-9
        tv = oracle.total_variation(mix, gibbs)
        assert 0 < tv < 0.3


class TestTotalVariation:
    def test_dict_and_array_forms(self):
        p = {"a": 0.5, "b": 0.5}
        q = {"a": 0.25, "b": 0.25, "c": 0.5}
        assert abs(oracle.total_variation(p, q) - 0.5) < 1e-15
        assert oracle.total_variation(p, p) == 0.0
        pa = np.array([0.5, 0.5, 0.0])
        qa = np.array([0.25, 0.25, 0.5])
        assert abs(oracle.total_variation(pa, qa) - 0.5) < 1e-15

    def test_bounds(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            p = rng.dirichlet(np.ones(6))
            q = rng.dirichlet(np.ones(6))
            tv = oracle.total_variation(p, q)
            assert 0 <= tv <= 1
