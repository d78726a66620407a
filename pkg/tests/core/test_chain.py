import tempfile
import threading
import unittest
from pathlib import Path

import numpy as np

from arlbsg.core.chain import Chain, PosteriorDraws, run_chain
from arlbsg.core.errors import ChainError, NumericalError
from arlbsg.core.gibbs import SWEEP_ORDER
from arlbsg.core.state import ChainState
from tests.fixtures import small_config, small_scenario


class TestRunChain(unittest.TestCase):
    '''Tests arlbsg.core.chain.run_chain on a small synthetic panel'''

    @classmethod
    def setUpClass(cls):
        cls.data, _ = small_scenario()
        cls.config = small_config()
        cls.draws = run_chain(cls.config, cls.data, show_progress=False)

    def test_retained(self):
        # sweeps 6, 8, 10, 12
        self.assertEqual(self.draws.num_draws, 4)
        self.assertEqual(self.draws.num_draws, self.config.num_draws)

    def test_shapes(self):
        n, T = self.data.n, self.data.T
        self.assertEqual(self.draws.s.shape, (4, n, T))
        self.assertEqual(self.draws.theta.shape, (4, self.config.H))
        self.assertEqual(self.draws.loglik.shape, (4, self.data.n_obs))
        self.assertEqual(self.draws.weights.shape, (4, self.config.H, T))
        self.assertFalse(self.draws.store_latents)

    def test_invariants(self):
        np.testing.assert_allclose(self.draws.weights.sum(axis=1), 1.0,
                                   atol=1e-10)
        self.assertTrue(np.all(self.draws.sigma_sq > 0))
        self.assertTrue(np.all(np.abs(self.draws.psi) < 1))
        self.assertTrue(np.all(self.draws.alpha > 0))
        self.assertTrue(np.all((self.draws.s >= 0) &
                               (self.draws.s < self.config.H)))
        self.assertTrue(np.all(np.isfinite(self.draws.loglik)))

    def test_deterministic(self):
        again = run_chain(self.config, self.data, show_progress=False)
        np.testing.assert_array_equal(again.s, self.draws.s)
        np.testing.assert_array_equal(again.alpha, self.draws.alpha)
        np.testing.assert_array_equal(again.loglik, self.draws.loglik)

    def test_seed(self):
        other = run_chain(self.config.replace(seed=4), self.data,
                          show_progress=False)
        self.assertFalse(np.array_equal(other.alpha, self.draws.alpha))

    def test_metadata(self):
        self.assertEqual(self.draws.metadata['seed'], 3)
        self.assertEqual(self.draws.metadata['last_iteration'], 12)
        self.assertFalse(self.draws.metadata['aborted'])
        self.assertEqual(set(self.draws.acceptance),
                         {'lambda', 'psi', 'phi'})

    def test_rebuilt_state(self):
        state = self.draws.state(0)
        self.assertIsInstance(state, ChainState)
        np.testing.assert_array_equal(state.s, self.draws.s[0])

    def test_concatenate(self):
        pooled = PosteriorDraws.concatenate([self.draws, self.draws])
        self.assertEqual(pooled.num_draws, 8)
        self.assertEqual(pooled.metadata['chains'], 2)


class TestChainControls(unittest.TestCase):

    def setUp(self):
        self.data, _ = small_scenario(n=6, T=4, seed=5)
        self.config = small_config(n_iter=6, burn_in=0, thin=1)

    def test_store_latents(self):
        draws = run_chain(self.config.replace(store_latents=True), self.data,
                          show_progress=False)
        self.assertTrue(draws.store_latents)
        self.assertEqual(draws.eps.shape, (6, self.config.H, self.data.T))
        self.assertEqual(draws.lam.shape, (6, self.config.H))

    def test_single_cluster(self):
        draws = run_chain(self.config.replace(single_cluster=True),
                          self.data, show_progress=False)
        np.testing.assert_array_equal(draws.s, 0)
        np.testing.assert_array_equal(draws.alpha, 4.0)

    def test_progress(self):
        calls = []
        chain = Chain(self.config, self.data, show_progress=False,
                      progress=lambda *args: calls.append(args))
        chain.run()
        self.assertEqual(len(calls), len(SWEEP_ORDER) * 6)
        self.assertEqual(calls[-1][:2], (6, SWEEP_ORDER[-1]))

    def test_abort(self):
        abort = threading.Event()
        abort.set()
        draws = run_chain(self.config, self.data, abort=abort,
                          show_progress=False)
        self.assertEqual(draws.num_draws, 0)
        self.assertTrue(draws.metadata['aborted'])

    def test_resume_matches_single_run(self):
        full = run_chain(self.config, self.data, show_progress=False)

        first = Chain(self.config.replace(n_iter=3), self.data,
                      show_progress=False)
        head = first.run()
        second = Chain(self.config.replace(n_iter=3), self.data,
                       state=first.state, show_progress=False)
        tail = second.run()

        np.testing.assert_array_equal(
            np.concatenate((head.alpha, tail.alpha)), full.alpha)
        np.testing.assert_array_equal(tail.s[-1], full.s[-1])
        self.assertEqual(second.state.iteration, 6)

    def test_checkpoint(self):
        with tempfile.TemporaryDirectory() as tmp:
            run_chain(self.config, self.data, show_progress=False,
                      checkpoint_dir=tmp)
            state = ChainState.load(Path(tmp) / 'last_state.pickle')
        self.assertEqual(state.iteration, 6)
        self.assertIsNotNone(state.rng_state)

    def test_multithreaded_sticks(self):
        serial = run_chain(self.config, self.data, show_progress=False)
        threaded = run_chain(self.config.replace(k_workers=2), self.data,
                             show_progress=False)
        np.testing.assert_array_equal(threaded.s, serial.s)
        np.testing.assert_array_equal(threaded.alpha, serial.alpha)


class TestChainError(unittest.TestCase):

    def test_details(self):
        error = ChainError(17, 'spatial',
                           NumericalError('boom', condition_number=1e18))
        self.assertEqual(error.details, {'iteration': 17, 'block': 'spatial',
                                         'condition_number': 1e18})
        self.assertIn('iteration 17', str(error))


if __name__ == '__main__':
    unittest.main()
