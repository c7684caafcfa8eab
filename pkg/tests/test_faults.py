"""Fault generation: cardinality, exclusion, determinism and statistical oracles."""

from __future__ import annotations

import numpy as np
import pytest

from gaussnet.faults import (
    FaultSpec,
    fault_count,
    fault_set_nodes_from_csv,
    fault_set_to_csv,
    inject_clustered,
    inject_uniform,
)
from gaussnet.gaussian import NetworkModulus, bfs_distances_from, build_topology


@pytest.fixture(scope="module")
def t3():
    return build_topology(NetworkModulus.from_k(3))


def test_density_zero_empty(t3):
    fs = inject_uniform(t3, FaultSpec(density=0.0, seed=1))
    assert len(fs) == 0


def test_exact_count_with_exclusion(t3):
    fs = inject_uniform(t3, FaultSpec(density=0.4, seed=2), excluded={0, 3})
    assert len(fs) == 10
    assert not fs.nodes & {0, 3}


@pytest.mark.parametrize("density,n,expected", [
    (0.4, 25, 10),
    (0.15, 25, 3),
    (0.1, 25, 2),
    (0.05, 25, 1),
    (3 / 13, 13, 3),
    (0.35, 41, 14),
])
def test_fault_count_floor(density, n, expected):
    assert fault_count(density, n) == expected


def test_seed_determinism(t3):
    spec = FaultSpec(density=0.3, seed=99)
    assert inject_uniform(t3, spec).nodes == inject_uniform(t3, spec).nodes
    cspec = FaultSpec(mode="clustered", density=0.3, seed=99, cluster_sigma=1.0, num_clusters=2)
    assert inject_clustered(t3, cspec).nodes == inject_clustered(t3, cspec).nodes


def test_infeasible_count_rejected(t3):
    with pytest.raises(ValueError):
        inject_uniform(t3, FaultSpec(density=0.5, seed=0), excluded=set(range(15)))


def test_density_bounds_validated():
    with pytest.raises(ValueError):
        FaultSpec(density=0.6)
    with pytest.raises(ValueError):
        FaultSpec(density=-0.1)


def test_uniform_marginals_hypergeometric(t3):
    # inclusion frequency of each eligible node within 5 SE of count/eligible
    trials = 10_000
    count, eligible = 10, 25
    p = count / eligible
    se = np.sqrt(p * (1 - p) / trials)
    freq = np.zeros(25)
    for i in range(trials):
        fs = inject_uniform(t3, FaultSpec(density=0.4, seed=i))
        for c in fs.nodes:
            freq[c] += 1
    freq /= trials
    assert (np.abs(freq - p) < 5 * se).all()


class TestClustered:
    def test_single_seed_is_whole_set(self, t3):
        spec = FaultSpec(mode="clustered", density=1 / 25, seed=5, cluster_sigma=1.0, num_clusters=1)
        fs = inject_clustered(t3, spec)
        assert len(fs) == 1
        assert fs.nodes == set(fs.cluster_seeds)

    def test_exclusion_and_count(self, t3):
        spec = FaultSpec(mode="clustered", density=0.4, seed=6, cluster_sigma=1.5, num_clusters=2)
        fs = inject_clustered(t3, spec, excluded={0, 1, 2})
        assert len(fs) == 10
        assert not fs.nodes & {0, 1, 2}

    def test_tight_sigma_concentrates(self, t3):
        # sigma 0.5, 5 faults, 1 cluster: everything within 2 hops of the seed
        # in (far) more than 99% of generations
        trials = 10_000
        within = 0
        spec0 = FaultSpec(mode="clustered", density=0.2, seed=0, cluster_sigma=0.5, num_clusters=1)
        for i in range(trials):
            fs = inject_clustered(t3, FaultSpec(
                mode="clustered", density=0.2, seed=i,
                cluster_sigma=0.5, num_clusters=1,
            ))
            seed_node = fs.cluster_seeds[0]
            dist = bfs_distances_from(t3, seed_node)
            within += all(dist[c] <= 2 for c in fs.nodes)
        assert within / trials > 0.99
        assert len(inject_clustered(t3, spec0)) == 5

    def test_huge_sigma_indistinguishable_from_uniform(self, t3):
        # chi-square on fault positions relative to the seed (translation is a
        # graph automorphism of the circulant indexing): at sigma=100 the
        # kernel is flat, so uniformity cannot be rejected at alpha=0.05
        trials = 10_000
        counts = np.zeros(24)
        for i in range(trials):
            fs = inject_clustered(t3, FaultSpec(
                mode="clustered", density=0.2, seed=i,
                cluster_sigma=100.0, num_clusters=1,
            ))
            s = fs.cluster_seeds[0]
            for c in fs.nodes:
                if c != s:
                    counts[(c - s) % 25 - 1] += 1
        expected = counts.sum() / 24
        chi2 = ((counts - expected) ** 2 / expected).sum()
        assert chi2 < 35.172  # chi-square critical value, df=23, alpha=0.05


def test_csv_round_trip(t3):
    spec = FaultSpec(mode="clustered", density=0.2, seed=17, cluster_sigma=2.0, num_clusters=2)
    fs = inject_clustered(t3, spec)
    text = fault_set_to_csv(fs)
    assert text.startswith("# fault-set mode=clustered density=0.2 seed=17")
    assert fault_set_nodes_from_csv(text) == fs.nodes
