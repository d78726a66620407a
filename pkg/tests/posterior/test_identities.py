import unittest

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from arlbsg.core.errors import InvalidParameterError
from arlbsg.core.panel import PanelDataset
from arlbsg.core.params import ModelConfig
from arlbsg.core.posterior.identities import alpha_joint_test, \
    expected_clusters, geweke_test, posterior_mean_identity
from arlbsg.core.posterior.predictive import posterior_predictive
from tests.fixtures import SLOW_TESTS, fake_draws


class TestExpectedClusters(unittest.TestCase):

    def test_harmonic(self):
        np.testing.assert_allclose(expected_clusters(1.0, 3),
                                   [1 + 1 / 2 + 1 / 3])

    def test_vectorized(self):
        values = expected_clusters([1e-9, 1e9], 10)
        np.testing.assert_allclose(values, [1.0, 10.0], rtol=1e-6)


class TestPosteriorMeanIdentity(unittest.TestCase):

    def test_values(self):
        # two clusters at the first time, one at the second
        partitions = np.tile(np.array([[0, 0], [1, 0]])[None], (3, 1, 1))
        draws = fake_draws(partitions)
        check = posterior_mean_identity(draws, ModelConfig())
        self.assertAlmostEqual(check.lhs, 1.5)
        self.assertAlmostEqual(check.rhs, 4 / 2.25)
        self.assertEqual(check.se, 0.0)
        self.assertFalse(check.ok)

    def test_exact_agreement(self):
        # alpha = 1, n = 2 gives 1.5 on both sides when a/b = 1.5
        partitions = np.tile(np.array([[0, 0], [1, 0]])[None], (3, 1, 1))
        draws = fake_draws(partitions)
        check = posterior_mean_identity(draws, ModelConfig(sg_a=0.375))
        self.assertAlmostEqual(check.lhs, check.rhs)
        self.assertTrue(check.ok)


class TestPosteriorPredictive(unittest.TestCase):

    def setUp(self):
        partitions = np.zeros((4, 3, 2), dtype=int)
        self.draws = fake_draws(partitions)
        self.data = PanelDataset(np.zeros((3, 2)), x=np.ones((3, 2, 1)))
        self.grid = np.linspace(-8, 8, 801)

    def test_standard_normal(self):
        density = posterior_predictive(self.draws, self.data, 1, self.grid)
        np.testing.assert_allclose(density.mean, stats.norm.pdf(self.grid))
        self.assertAlmostEqual(trapezoid(density.mean, self.grid), 1.0,
                               places=4)

    def test_band(self):
        density = posterior_predictive(self.draws, self.data, 0, self.grid)
        self.assertTrue(np.all(density.lower <= density.mean + 1e-12))
        self.assertTrue(np.all(density.mean <= density.upper + 1e-12))

    def test_time_range(self):
        with self.assertRaises(InvalidParameterError):
            posterior_predictive(self.draws, self.data, 2, self.grid)


@unittest.skipUnless(SLOW_TESTS, 'set ARLBSG_SLOW_TESTS=1')
class TestJointDistribution(unittest.TestCase):

    def test_psi_and_tau_sq_follow_priors(self):
        config = ModelConfig(H=5, a_tau=3.0, b_tau=2.0, base_a0=3.0,
                             base_b0=2.0, a_phi=2.0, b_phi=2.0)
        samples = geweke_test(config, 6, 4, 4000, np.random.default_rng(0),
                              thin=10)
        self.assertEqual(samples.psi.shape, (400,))
        self.assertAlmostEqual(samples.psi.mean(), 0.0, delta=0.15)
        self.assertAlmostEqual(samples.psi.std(), 1 / np.sqrt(3), delta=0.1)
        self.assertAlmostEqual(np.median(np.log(samples.tau_sq)),
                               np.median(np.log(samples.prior_tau_sq)),
                               delta=0.3)

    def test_alpha_follows_prior(self):
        config = ModelConfig(sg_a=3.0, sg_b=1.0)
        samples = alpha_joint_test(config, 10, 2, 4000,
                                   np.random.default_rng(1))
        self.assertEqual(samples.alpha.shape, (4000,))
        chain, prior = np.log(samples.alpha), np.log(samples.prior_alpha)
        self.assertAlmostEqual(chain.mean(), prior.mean(), delta=0.2)
        self.assertAlmostEqual(chain.std() / prior.std(), 1.0, delta=0.15)


if __name__ == '__main__':
    unittest.main()
