import unittest

import numpy as np
from scipy.special import digamma, polygamma

from arlbsg.core.distributions import sample_stirling_gamma, \
    stirling_gamma_grid
from arlbsg.core.errors import InvalidParameterError
from arlbsg.core.params import ModelConfig
from arlbsg.core.posterior.identities import expected_clusters
from arlbsg.core.posterior.partitions import lagged_ari
from arlbsg.scenarios.base import ScenarioSpec, generate, \
    generate_locations, simulate_crp_cluster_counts
from tests.fixtures import SLOW_TESTS


class TestScenarioSpec(unittest.TestCase):

    def test_defaults(self):
        spec = ScenarioSpec()
        self.assertEqual((spec.n, spec.T, spec.p), (64, 60, 5))
        self.assertEqual(spec.num_clusters, 3)
        self.assertEqual(spec.jumps_per_step, 6)

    def test_jumps_per_step(self):
        self.assertEqual(ScenarioSpec(n=20, jump_rate=0.1).jumps_per_step, 2)
        self.assertEqual(ScenarioSpec(n=4, jump_rate=0.1).jumps_per_step, 1)
        self.assertEqual(ScenarioSpec(jump_rate=0).jumps_per_step, 0)

    def test_mode(self):
        with self.assertRaises(InvalidParameterError):
            ScenarioSpec(mode='drifting')

    def test_jump_rate(self):
        with self.assertRaises(InvalidParameterError):
            ScenarioSpec(jump_rate=1.5)

    def test_repeated_means(self):
        with self.assertRaises(InvalidParameterError):
            ScenarioSpec(cluster_means=(1.0, 1.0))

    def test_ratio(self):
        with self.assertRaises(InvalidParameterError):
            ScenarioSpec(mode='imbalanced', imbalanced_ratio=(0.5, 0.5))

    def test_positive(self):
        with self.assertRaises(InvalidParameterError):
            ScenarioSpec(tau_sq=0.0)
        with self.assertRaises(InvalidParameterError):
            ScenarioSpec(n=0)

    def test_replace(self):
        spec = ScenarioSpec(n=10).replace(seed=4)
        self.assertEqual((spec.n, spec.seed), (10, 4))
        self.assertEqual(spec.to_dict()['cluster_means'], [5.0, 32.0, 60.0])


class TestGenerateLocations(unittest.TestCase):

    def test_box(self):
        coords, dist = generate_locations(30, (-40, -30, -72, -70), seed=0)
        self.assertEqual(coords.shape, (30, 2))
        self.assertTrue(np.all((coords[:, 0] >= -40) & (coords[:, 0] <= -30)))
        self.assertTrue(np.all((coords[:, 1] >= -72) & (coords[:, 1] <= -70)))
        np.testing.assert_array_equal(dist, dist.T)
        np.testing.assert_array_equal(np.diag(dist), 0.0)

    def test_bad_bounds(self):
        with self.assertRaises(InvalidParameterError):
            generate_locations(5, (10, 10, 0, 1))
        with self.assertRaises(InvalidParameterError):
            generate_locations(5, (-100, 0, 0, 1))
        with self.assertRaises(InvalidParameterError):
            generate_locations(0)


class TestGenerate(unittest.TestCase):

    def test_shapes(self):
        data, truth = generate(ScenarioSpec(n=12, T=7, p=2, seed=1))
        self.assertEqual((data.n, data.T, data.p), (12, 7, 2))
        self.assertEqual(truth.partitions.shape, (7, 12))
        self.assertEqual(truth.cocluster.shape, (7, 12, 12))
        self.assertEqual(truth.labels.shape, (12, 7))
        self.assertEqual(truth.beta.shape, (2,))
        self.assertEqual(truth.gamma.shape, (12,))
        self.assertEqual(data.station_ids[0], 'S001')

    def test_seeded(self):
        spec = ScenarioSpec(n=10, T=4, seed=2)
        first, _ = generate(spec)
        second, _ = generate(spec)
        self.assertEqual(first, second)
        third, _ = generate(spec.replace(seed=3))
        self.assertNotEqual(first, third)

    def test_static_memberships(self):
        _, truth = generate(ScenarioSpec(n=15, T=6, jump_rate=0, seed=4))
        table = lagged_ari(truth.partitions, 5)
        for lag in range(6):
            np.testing.assert_allclose(table[lag, :6 - lag], 1.0)

    def test_balanced_jumps(self):
        spec = ScenarioSpec(n=20, T=10, jump_rate=0.1, seed=5)
        _, truth = generate(spec)
        changes = (np.diff(truth.labels, axis=1) != 0).sum(axis=0)
        np.testing.assert_array_equal(changes, 2)

    def test_imbalanced_sizes(self):
        spec = ScenarioSpec(n=100, T=8, mode='imbalanced', seed=6)
        _, truth = generate(spec)
        sizes = np.array([np.bincount(truth.labels[:, t], minlength=3)
                          for t in range(spec.T)])
        np.testing.assert_array_equal(sizes, np.tile(sizes[0], (8, 1)))
        self.assertGreater(sizes[0, 0], sizes[0, 1])
        changes = (np.diff(truth.labels, axis=1) != 0).sum(axis=0)
        np.testing.assert_array_equal(changes, 6)

    def test_cluster_means(self):
        spec = ScenarioSpec(n=60, T=3, p=0, tau_sq=1e-6, gamma_mean=0.0,
                            cluster_var=0.01, seed=7)
        data, truth = generate(spec)
        means = np.asarray(spec.cluster_means)[truth.labels]
        np.testing.assert_allclose(data.y - truth.gamma[:, None], means,
                                   atol=0.5)


class TestCRPClusterCounts(unittest.TestCase):

    def test_tiny_alpha(self):
        counts = simulate_crp_cluster_counts(np.full(50, 1e-12), 40,
                                             np.random.default_rng(0))
        np.testing.assert_array_equal(counts, 1)

    def test_expected_value(self):
        counts = simulate_crp_cluster_counts(np.full(20000, 2.0), 30,
                                             np.random.default_rng(1))
        self.assertAlmostEqual(counts.mean(), expected_clusters(2.0, 30)[0],
                               delta=0.08)

    def test_chunks(self):
        counts = simulate_crp_cluster_counts(np.ones(7), 10,
                                             np.random.default_rng(2),
                                             chunk=20)
        self.assertEqual(counts.shape, (7,))
        self.assertTrue(np.all((counts >= 1) & (counts <= 10)))

    @unittest.skipUnless(SLOW_TESTS, 'set ARLBSG_SLOW_TESTS=1')
    def test_stirling_gamma_prior_mean(self):
        rng = np.random.default_rng(3)
        m = 10 ** 4
        params = ModelConfig(sg_a=1.0, sg_b=0.2).stirling_gamma(m)
        alpha = sample_stirling_gamma(params, rng, size=20000)
        counts = simulate_crp_cluster_counts(alpha, m, rng)
        self.assertAlmostEqual(counts.mean(), 5.0, delta=0.15)

    @unittest.skipUnless(SLOW_TESTS, 'set ARLBSG_SLOW_TESTS=1')
    def test_stirling_gamma_prior_variance(self):
        # Var(K_m) ~ (b + 1) / b (a / b - 1) = 15 for SG(1, 0.25, m)
        rng = np.random.default_rng(4)
        m = 10 ** 4
        params = ModelConfig(sg_a=1.0, sg_b=0.25).stirling_gamma(m)

        # E[K | alpha] and Var(K | alpha) integrated over the prior grid
        grid, cdf = stirling_gamma_grid(params)
        prob = np.diff(cdf)
        a = np.exp(0.5 * (grid[1:] + grid[:-1]))
        mean = a * (digamma(a + m) - digamma(a))
        var = mean - a ** 2 * (polygamma(1, a) - polygamma(1, a + m))
        exact = np.sum(prob * (var + mean ** 2)) - np.sum(prob * mean) ** 2
        self.assertAlmostEqual(exact, 15.0, delta=1.5)

        alpha = sample_stirling_gamma(params, rng, size=100000)
        counts = simulate_crp_cluster_counts(alpha, m, rng)
        self.assertAlmostEqual(counts.mean(), 4.0, delta=0.1)
        self.assertAlmostEqual(counts.var(), 15.0, delta=1.5)
        self.assertAlmostEqual(counts.var(), exact, delta=0.7)

    @unittest.skipUnless(SLOW_TESTS, 'set ARLBSG_SLOW_TESTS=1')
    def test_stirling_gamma_prior_mean_below_three(self):
        rng = np.random.default_rng(5)
        m = 10 ** 4
        params = ModelConfig(sg_a=8.0, sg_b=3.25).stirling_gamma(m)
        alpha = sample_stirling_gamma(params, rng, size=20000)
        counts = simulate_crp_cluster_counts(alpha, m, rng)
        self.assertAlmostEqual(counts.mean(), 8.0 / 3.25, delta=0.05)


if __name__ == '__main__':
    unittest.main()
