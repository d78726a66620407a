import unittest

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from arlbsg.core.distributions import ar1_correlation, ar1_kernel
from arlbsg.core.gibbs.correlation import psi_log_target, update_psi
from arlbsg.core.state import ChainState


class TestPsi(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(0)
        self.eps = rng.standard_normal((3, 6))
        self.lam = np.array([0.5, 1.0, 2.0])
        self.alpha = 1.5

    def test_log_target(self):
        psi = -0.35
        corr = ar1_correlation(ar1_kernel(psi, 6))
        expected = sum(
            stats.multivariate_normal(
                np.full(6, 0.5 * lam * (1 - self.alpha)), lam * corr
            ).logpdf(eps)
            for eps, lam in zip(self.eps, self.lam))
        self.assertAlmostEqual(
            psi_log_target(psi, self.eps, self.lam, self.alpha), expected)

    def test_update_stays_in_range(self):
        H, T = 4, 6
        eps = np.zeros((H, T))
        eps[:3] = self.eps
        state = ChainState(
            s=np.zeros((2, T), dtype=int), theta=np.zeros(H),
            sigma_sq=np.ones(H), eps=eps, lam=np.append(self.lam, 1.0),
            xi=np.zeros((H, T)), weights=np.full((H, T), 0.25),
            alpha=self.alpha, psi=0.2, beta=np.zeros(0), gamma=np.zeros(2),
            tau_sq=1.0, phi=1.0, rho_sq=1.0)
        rng = np.random.default_rng(1)
        accepted = 0
        for _ in range(200):
            _, ok = update_psi(state, 0.5, rng)
            accepted += ok
            self.assertTrue(-1 < state.psi < 1)
        self.assertGreater(accepted, 0)
        self.assertLess(accepted, 200)

    def test_stationary_distribution(self):
        H, T = 4, 6
        eps = np.zeros((H, T))
        eps[:3] = self.eps
        state = ChainState(
            s=np.zeros((2, T), dtype=int), theta=np.zeros(H),
            sigma_sq=np.ones(H), eps=eps, lam=np.append(self.lam, 1.0),
            xi=np.zeros((H, T)), weights=np.full((H, T), 0.25),
            alpha=self.alpha, psi=0.0, beta=np.zeros(0), gamma=np.zeros(2),
            tau_sq=1.0, phi=1.0, rho_sq=1.0)
        rng = np.random.default_rng(2)
        draws = np.empty(20000)
        for i in range(draws.size):
            update_psi(state, 0.5, rng)
            draws[i] = state.psi

        # U(-1, 1) prior times the AR(1) likelihood on a grid
        grid = np.linspace(-0.999, 0.999, 4001)
        log_post = np.array([psi_log_target(psi, self.eps, self.lam,
                                            self.alpha) for psi in grid])
        post = np.exp(log_post - log_post.max())
        norm = trapezoid(post, grid)
        mean = trapezoid(grid * post, grid) / norm
        sd = np.sqrt(trapezoid((grid - mean) ** 2 * post, grid) / norm)
        self.assertAlmostEqual(draws[1000:].mean(), mean, delta=0.03)
        self.assertAlmostEqual(draws[1000:].std(), sd, delta=0.03)


if __name__ == '__main__':
    unittest.main()
