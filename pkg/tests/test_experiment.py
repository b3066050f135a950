import math
from dataclasses import replace

import numpy as np
import pytest

from kjnn import (
    ExperimentConfig,
    TopologyKind,
    degree_distribution,
    link_gain,
    run_experiment,
    run_paired,
    run_trial,
)
from kjnn.experiment import (
    AggregateResult,
    build_topology,
    resolve_workers,
    run_trials_paired,
    trial_cloud,
)
from kjnn.graph import is_connected, pairwise_rankings


def agg(n=100, mean_degree=6.0, **kw):
    base = dict(
        kind=TopologyKind.SYM_KNN, k=5, j=None, n=n, trials=1, master_seed=0,
        connectivity_probability=1.0, mean_degree=mean_degree, mean_min_degree=5.0, mean_max_degree=9.0,
    )
    base.update(kw)
    return AggregateResult(**base)


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(kind="kj-nn", k=5, j=5),
            dict(kind="kj-nn", k=5, j=0),
            dict(kind="sym-knn", k=0),
            dict(kind="sym-knn", k=5, n_values=()),
            dict(kind="sym-knn", k=5, n_values=(1,)),
            dict(kind="sym-knn", k=5, trials=0),
            dict(kind="rgg", k=5, r=-1.0),
            dict(kind="bogus", k=5),
            dict(kind="kj-nn", k=5, j=3, removal="nope"),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ExperimentConfig(**kw)

    def test_j_ignored_for_knn(self):
        assert ExperimentConfig(kind="sym-knn", k=5, j=9).kind is TopologyKind.SYM_KNN

    def test_radius_modes(self):
        formula = ExperimentConfig(kind="kj-nn-rgg", k=5, j=3)
        assert formula.radius_for(1000) == pytest.approx(0.0720886, abs=1e-7)
        assert ExperimentConfig(kind="rgg", k=5, r=0.3).radius_for(1000) == 0.3
        assert ExperimentConfig(kind="kj-nn", k=5, j=3).radius_for(1000) is None


class TestTrial:
    def test_complete_graph(self):
        n = 30
        cfg = ExperimentConfig(kind="sym-knn", k=n - 1, n_values=(n,), trials=3, master_seed=1)
        for t in range(3):
            res = run_trial(cfg, n, t)
            assert res.connected
            assert res.degree_stats.mean == n - 1
            assert res.edge_count == n * (n - 1) // 2

    def test_rgg_beyond_diameter(self):
        cfg = ExperimentConfig(kind="rgg", k=5, r=2.0, n_values=(50,), trials=2)
        res = run_trial(cfg, 50, 1)
        assert res.connected
        assert res.radius_used == 2.0

    def test_deterministic(self):
        cfg = ExperimentConfig(kind="kj-nn", k=5, j=3, n_values=(500,), trials=4, master_seed=99)
        assert run_trial(cfg, 500, 2) == run_trial(cfg, 500, 2)

    def test_edge_count_matches_mean(self):
        cfg = ExperimentConfig(kind="kj-nn-rgg", k=5, j=3, n_values=(200,), trials=3, master_seed=5)
        res = run_trial(cfg, 200, 0)
        assert abs(res.edge_count - 200 * res.degree_stats.mean / 2) <= 1e-9

    def test_out_of_range(self):
        cfg = ExperimentConfig(kind="sym-knn", k=5, n_values=(100,), trials=2)
        with pytest.raises(ValueError):
            run_trial(cfg, 200, 0)
        with pytest.raises(ValueError):
            run_trial(cfg, 100, 2)

    def test_seed_excludes_kind(self):
        # every topology kind sees the same cloud for a given (seed, n, trial)
        a = trial_cloud(3, 100, 7)
        b = trial_cloud(3, 100, 7)
        c = trial_cloud(3, 100, 8)
        assert np.array_equal(a.points, b.points)
        assert not np.array_equal(a.points, c.points)


class TestExperiment:
    def test_shape_and_invariants(self):
        cfg = ExperimentConfig(kind="kj-nn", k=5, j=3, n_values=(50, 80), trials=7, master_seed=3)
        results = run_experiment(cfg)
        assert [r.n for r in results] == [50, 80]
        for r in results:
            assert r.trials == 7
            assert r.kind is TopologyKind.KJ_NN and (r.k, r.j) == (5, 3)
            assert math.isclose(math.fsum(r.degree_histogram.values()), 1.0, abs_tol=1e-9)
            assert r.mean_min_degree <= r.mean_degree <= r.mean_max_degree
            assert round(r.connectivity_probability * 7) == pytest.approx(r.connectivity_probability * 7)

    def test_single_trial_probability_is_binary(self):
        for kind, extra in [("sym-knn", {}), ("kj-nn", {"j": 2}), ("rgg", {}), ("kj-nn-rgg", {"j": 2})]:
            cfg = ExperimentConfig(kind=kind, k=3, n_values=(40,), trials=1, **extra)
            assert run_experiment(cfg)[0].connectivity_probability in (0.0, 1.0)

    def test_serial_equals_threaded(self):
        cfg = ExperimentConfig(kind="kj-nn-rgg", k=5, j=3, n_values=(60, 120), trials=6, master_seed=17)
        assert run_experiment(cfg, workers=1) == run_experiment(cfg, workers=3)

    def test_paired_equals_individual(self):
        cfgs = [
            ExperimentConfig(kind="sym-knn", k=5, n_values=(60,), trials=5, master_seed=2),
            ExperimentConfig(kind="kj-nn", k=5, j=3, n_values=(60,), trials=5, master_seed=2),
            ExperimentConfig(kind="rgg", k=5, n_values=(60,), trials=5, master_seed=2),
        ]
        assert run_paired(cfgs) == [run_experiment(c) for c in cfgs]

    def test_paired_requires_matching_sweeps(self):
        a = ExperimentConfig(kind="sym-knn", k=5, n_values=(60,), trials=5)
        with pytest.raises(ValueError):
            run_paired([a, replace(a, trials=4)])

    def test_per_trial_subgraph_implications(self):
        n_values, trials = (40, 90), 25
        cfgs = [ExperimentConfig(kind="sym-knn", k=5, n_values=n_values, trials=trials)]
        cfgs += [ExperimentConfig(kind="kj-nn", k=5, j=j, n_values=n_values, trials=trials) for j in (2, 3, 4)]
        sets = run_trials_paired(cfgs)
        for n in n_values:
            for t in range(trials):
                row = [s[n][t].connected for s in sets]
                # connectivity can only be lost as j grows, and (k,j) connected implies k-NN connected
                assert row == sorted(row, reverse=True)
                assert sets[0][n][t].degree_stats.mean >= 5

    def test_connectivity_non_increasing_in_j(self):
        cfgs = [ExperimentConfig(kind="kj-nn", k=6, j=j, n_values=(150,), trials=30) for j in range(1, 6)]
        probs = [res[0].connectivity_probability for res in run_paired(cfgs)]
        assert probs == sorted(probs, reverse=True)

    def test_composite_edges_within_radius(self):
        cfg = ExperimentConfig(kind="kj-nn-rgg", k=5, j=3, n_values=(300,), trials=1, master_seed=4)
        cloud = trial_cloud(4, 300, 0)
        g, r = build_topology(cfg, cloud, pairwise_rankings(cloud))
        lengths = np.linalg.norm(cloud.points[g.edges[:, 0]] - cloud.points[g.edges[:, 1]], axis=1)
        assert lengths.max() <= r

    def test_resolve_workers(self, monkeypatch):
        monkeypatch.delenv("KJNN_THREADS", raising=False)
        assert resolve_workers() == 1
        monkeypatch.setenv("KJNN_THREADS", "3")
        assert resolve_workers() == 3
        monkeypatch.setenv("KJNN_THREADS", "0")
        assert resolve_workers() >= 1
        assert resolve_workers(2) == 2


class TestDegreeDistribution:
    def test_complete_graph(self):
        cfg = ExperimentConfig(kind="sym-knn", k=9, n_values=(10,), trials=3)
        assert degree_distribution(cfg, 10) == {9: 1.0}

    def test_kj_has_no_low_degrees(self):
        cfg = ExperimentConfig(kind="kj-nn", k=5, j=3, n_values=(100, 250), trials=10, master_seed=8)
        hist = degree_distribution(cfg, 250)
        assert math.isclose(math.fsum(hist.values()), 1.0, abs_tol=1e-9)
        assert min(hist) >= 3

    def test_requires_configured_n(self):
        cfg = ExperimentConfig(kind="sym-knn", k=5, n_values=(100,), trials=1)
        with pytest.raises(ValueError):
            degree_distribution(cfg, 200)

    def test_min_degree_brute_force(self):
        # degree >= k - j + 1 = 3 on 1,000 independent clouds
        for seed in range(1000):
            cloud = trial_cloud(seed, 12 + seed % 40, 0)
            cfg = ExperimentConfig(kind="kj-nn", k=5, j=3, n_values=(cloud.n,), trials=1)
            g, _ = build_topology(cfg, cloud)
            assert g.degrees().min() >= 3


class TestLinkGain:
    def test_reference_pairs(self):
        assert link_gain(agg(mean_degree=6.0063), agg(mean_degree=4.4902)) == pytest.approx(0.75805, abs=1e-12)
        assert link_gain(agg(mean_degree=7.1277), agg(mean_degree=3.3803)) == pytest.approx(1.8737, abs=1e-12)
        assert link_gain(agg(mean_degree=6.0063), agg(mean_degree=4.4316)) == pytest.approx(0.78735, abs=1e-12)

    def test_self(self):
        a = agg()
        assert link_gain(a, a) == 0

    def test_mismatched_n(self):
        with pytest.raises(ValueError):
            link_gain(agg(n=100), agg(n=200))


def test_connected_matches_graph():
    cfg = ExperimentConfig(kind="kj-nn", k=5, j=4, n_values=(200,), trials=10, master_seed=1)
    for t in range(10):
        cloud = trial_cloud(1, 200, t)
        g, _ = build_topology(cfg, cloud)
        assert run_trial(cfg, 200, t).connected == is_connected(g)
