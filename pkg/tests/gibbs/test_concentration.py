import unittest

import numpy as np

from arlbsg.core.distributions import sample_stirling_gamma
from arlbsg.core.gibbs.concentration import cluster_counts, draw_alpha, \
    stirling_gamma_posterior, update_alpha
from arlbsg.core.params import ModelConfig, StirlingGammaParams
from arlbsg.core.state import ChainState


class TestClusterCounts(unittest.TestCase):

    def test_counts(self):
        s = np.array([[0, 0], [1, 0], [1, 2]])
        np.testing.assert_array_equal(cluster_counts(s), [2, 2])

    def test_labels_are_arbitrary(self):
        s = np.array([[7, 3, 3], [7, 9, 3], [2, 1, 3]])
        np.testing.assert_array_equal(cluster_counts(s), [2, 3, 1])


class TestStirlingGammaPosterior(unittest.TestCase):

    def test_conjugacy(self):
        prior = StirlingGammaParams(1.0, 0.25, 3)
        posterior = stirling_gamma_posterior(prior, [2, 2])
        self.assertEqual(posterior, (5.0, 2.25, 3))

    def test_draw_alpha_is_posterior_draw(self):
        prior = StirlingGammaParams(1.0, 0.25, 6)
        alpha = draw_alpha(prior, [3, 2], np.random.default_rng(4))
        expected = sample_stirling_gamma(StirlingGammaParams(6.0, 2.25, 6),
                                         np.random.default_rng(4))
        self.assertEqual(alpha, expected)

    def test_update(self):
        n, T, H = 6, 4, 3
        s = np.tile(np.arange(n) % 3, (T, 1)).T
        state = ChainState(
            s=s, theta=np.zeros(H), sigma_sq=np.ones(H),
            eps=np.zeros((H, T)), lam=np.ones(H), xi=np.zeros((H, T)),
            weights=np.full((H, T), 1 / 3), alpha=1.0, psi=0.0,
            beta=np.zeros(0), gamma=np.zeros(n), tau_sq=1.0, phi=1.0,
            rho_sq=1.0)
        update_alpha(state, ModelConfig(), np.random.default_rng(0))
        self.assertGreater(state.alpha, 0)
        self.assertNotEqual(state.alpha, 1.0)


if __name__ == '__main__':
    unittest.main()
