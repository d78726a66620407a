"""Seeded Metropolis-within-Gibbs chain runner"""
import datetime
import logging
import time
from multiprocessing.pool import ThreadPool

import numpy as np
from tqdm import tqdm

from arlbsg.core.errors import ChainError, NumericalError
from arlbsg.core.gibbs import SWEEP_ORDER, STICK_BLOCKS, MomentMatcher, \
    StickUpdateWorkspace, compute_weights, update_alpha, update_atoms, \
    update_epsilon, update_lambda, update_memberships, \
    update_pg_augmentation, update_psi, update_regression, update_spatial
from arlbsg.core.state import ChainState, init_state, \
    pointwise_log_likelihood

# block codes of the per-stick substreams
SUBSTREAM_CODES = {'lambda': 1, 'epsilon': 2}

SCALAR_FIELDS = ('alpha', 'psi', 'tau_sq', 'phi', 'rho_sq')


class PosteriorDraws:
    """Retained states stored column-wise

    Attributes:
    ----------
    * s: numpy.array<int16>  (D, n, T) 0-based memberships
    * theta, sigma_sq: numpy.array<float>  (D, H)
    * alpha, psi, tau_sq, phi, rho_sq: numpy.array<float>  (D,)
    * beta: numpy.array<float>  (D, p)
    * gamma: numpy.array<float>  (D, n)
    * weights: numpy.array<float>  (D, H, T)
    * loglik: numpy.array<float>  (D, n_obs) observed cells, row-major
    * eps, lam, xi: numpy.array<float> or None  (stored latents)
    * acceptance: dict<str, float>
    * timing: dict<str, float>  minutes
    * metadata: dict
    """

    FIELDS = ('s', 'theta', 'sigma_sq', 'alpha', 'psi', 'beta', 'gamma',
              'tau_sq', 'phi', 'rho_sq', 'loglik', 'weights')
    LATENTS = ('eps', 'lam', 'xi')

    def __init__(self, acceptance=None, timing=None, metadata=None,
                 **arrays):
        for name in self.FIELDS:
            setattr(self, name, np.asarray(arrays[name]))
        for name in self.LATENTS:
            value = arrays.get(name)
            setattr(self, name, None if value is None else np.asarray(value))
        self.acceptance = dict(acceptance or {})
        self.timing = dict(timing or {})
        self.metadata = dict(metadata or {})

    @classmethod
    def from_states(cls, states, logliks, store_latents=False, **kwargs):
        arrays = {
            's': np.array([st.s for st in states], dtype=np.int16),
            'loglik': np.array(logliks, dtype=float),
        }
        for name in cls.FIELDS:
            if name not in arrays:
                arrays[name] = np.array([getattr(st, name) for st in states],
                                        dtype=float)
        if store_latents:
            for name in cls.LATENTS:
                arrays[name] = np.array([getattr(st, name) for st in states],
                                        dtype=float)
        return cls(**arrays, **kwargs)

    @classmethod
    def concatenate(cls, draws):
        """Pools the draws of several chains"""
        first = draws[0]
        arrays = {name: np.concatenate([getattr(d, name) for d in draws])
                  for name in cls.FIELDS}
        if all(d.store_latents for d in draws):
            for name in cls.LATENTS:
                arrays[name] = np.concatenate([getattr(d, name)
                                               for d in draws])
        metadata = dict(first.metadata)
        metadata['chains'] = len(draws)
        return cls(acceptance=first.acceptance, timing=first.timing,
                   metadata=metadata, **arrays)

    @property
    def num_draws(self):
        return self.s.shape[0]

    def __len__(self):
        return self.num_draws

    @property
    def n(self):
        return self.s.shape[1]

    @property
    def T(self):
        return self.s.shape[2]

    @property
    def H(self):
        return self.theta.shape[1]

    @property
    def p(self):
        return self.beta.shape[1]

    @property
    def store_latents(self):
        return self.eps is not None

    def partitions(self, t):
        """(D, n) memberships at time t"""
        return self.s[:, :, t]

    def state(self, d):
        """Rebuilds the d-th retained ChainState"""
        H, T = self.H, self.T
        eps = self.eps[d] if self.store_latents else np.zeros((H, T))
        lam = self.lam[d] if self.store_latents else np.ones(H)
        xi = self.xi[d] if self.store_latents else np.zeros((H, T))
        return ChainState(
            s=self.s[d], theta=self.theta[d], sigma_sq=self.sigma_sq[d],
            eps=eps, lam=lam, xi=xi, weights=self.weights[d],
            alpha=self.alpha[d], psi=self.psi[d], beta=self.beta[d],
            gamma=self.gamma[d], tau_sq=self.tau_sq[d], phi=self.phi[d],
            rho_sq=self.rho_sq[d])

    def __repr__(self):
        return (f'PosteriorDraws(draws={self.num_draws}, n={self.n}, '
                f'T={self.T}, H={self.H})')


class Chain:
    """Runs one chain of the sampler

        >>> chain = Chain(config, data)
        >>> draws = chain.run()

    Attributes
    ----------
    config : arlbsg.core.params.ModelConfig
        resolved hyperparameters
    data : arlbsg.core.panel.PanelDataset
    state : arlbsg.core.state.ChainState
        current state, advanced in place
    progress : callable
        progress(iteration, block, acceptance_rates) after every block
    abort : threading.Event
        honored at sweep boundaries
    skip_blocks : tuple<str>
        blocks held fixed (e.g. alpha in the joint distribution test)
    """

    def __init__(self, config, data, state=None, progress=None, abort=None,
                 show_progress=True, skip_blocks=()):
        self.config = config.resolve(data)
        self.skip_blocks = tuple(skip_blocks)
        self.data = data
        self.progress = progress
        self.abort = abort
        self.show_progress = show_progress

        self.rng = np.random.default_rng(config.seed)
        num_sticks = max(self.config.H - 1, 0)
        self.matcher = MomentMatcher(num_sticks, self.config.moment_window)

        if state is None:
            self.state = init_state(self.config, data, self.rng)
        else:
            self.state = state.copy()
            if state.rng_state is not None:
                self.rng.bit_generator.state = state.rng_state
            if state.lambda_window is not None:
                self.matcher = state.lambda_window
            self.state.rng_state = None
            self.state.lambda_window = None
        self.start = self.state.iteration

        self._accepted = {'lambda': 0, 'psi': 0, 'phi': 0}
        self._attempted = {'lambda': 0, 'psi': 0, 'phi': 0}
        self._warned_truncation = False
        self.aborted = False

        logging.info(' Starting chain seed={} at {}'.format(
            config.seed, str(datetime.datetime.utcnow())))

    @property
    def acceptance_rates(self):
        return {k: (self._accepted[k] / self._attempted[k]
                    if self._attempted[k] else float('nan'))
                for k in self._accepted}

    def _substreams(self, block, iteration):
        code = SUBSTREAM_CODES[block]
        return [np.random.default_rng([self.config.seed, iteration, code, k])
                for k in range(self.state.H - 1)]

    def _record(self, key, accepted):
        accepted = np.atleast_1d(accepted)
        self._accepted[key] += int(accepted.sum())
        self._attempted[key] += int(accepted.size)

    def sweep(self, iteration, pool=None):
        """One pass through every block, in SWEEP_ORDER"""
        config, data, state, rng = self.config, self.data, self.state, \
            self.rng
        workspace = None

        for block in SWEEP_ORDER:
            if config.single_cluster and block in STICK_BLOCKS:
                continue
            if block in self.skip_blocks:
                continue
            try:
                if block == 'memberships':
                    update_memberships(state, data, rng)
                elif block == 'workspace':
                    workspace = StickUpdateWorkspace.from_state(state, data)
                elif block == 'pg':
                    update_pg_augmentation(state, workspace, rng,
                                           config.pg_exact_threshold)
                elif block == 'lambda':
                    shapes = self.matcher.proposals(state.alpha)
                    _, accepted = update_lambda(
                        state, workspace, shapes,
                        self._substreams('lambda', iteration),
                        jitter=config.jitter, pool=pool)
                    self._record('lambda', accepted)
                    self.matcher.push(state.lam)
                elif block == 'epsilon':
                    update_epsilon(state, workspace,
                                   self._substreams('epsilon', iteration),
                                   jitter=config.jitter, pool=pool)
                elif block == 'weights':
                    compute_weights(state)
                elif block == 'alpha':
                    update_alpha(state, config, rng)
                elif block == 'atoms':
                    update_atoms(state, data, config, rng)
                elif block == 'regression':
                    update_regression(state, data, config, rng)
                elif block == 'spatial':
                    _, accepted = update_spatial(state, data, config, rng)
                    self._record('phi', accepted)
                elif block == 'psi':
                    _, accepted = update_psi(state, config.psi_step, rng)
                    self._record('psi', accepted)
            except (NumericalError, ArithmeticError, ValueError,
                    np.linalg.LinAlgError) as error:
                raise ChainError(iteration, block, error) from error

            if self.progress is not None:
                self.progress(iteration, block, self.acceptance_rates)

        violations = state.check()
        if violations:
            raise ChainError(iteration, 'invariants', NumericalError(
                '; '.join(violations)))
        self._check_truncation()
        state.iteration = iteration

    def _check_truncation(self):
        H = self.state.H
        if self._warned_truncation or H < 3 or self.config.single_cluster:
            return
        if self.state.occupied(self.data.observed)[H - 2]:
            logging.warning(
                f'cluster {H - 1} of {H} is occupied: '
                'consider a larger truncation level H')
            self._warned_truncation = True

    def run(self):
        """Runs config.n_iter sweeps

        Returns
        -------
        draws : PosteriorDraws
            (n_iter - burn_in) // thin retained states
        """
        config = self.config
        states, logliks = [], []
        pool = ThreadPool(config.k_workers) if config.k_workers > 1 else None
        started = time.time()
        try:
            iterations = range(1, config.n_iter + 1)
            for step in tqdm(iterations, disable=not self.show_progress):
                if self.abort is not None and self.abort.is_set():
                    logging.warning(f'chain aborted after {step - 1} sweeps')
                    self.aborted = True
                    break
                if step == config.burn_in + 1:
                    self.matcher.freeze(self.state.alpha)

                self.sweep(self.start + step, pool=pool)

                if step > config.burn_in and \
                        (step - config.burn_in) % config.thin == 0:
                    states.append(self.state.copy())
                    logliks.append(
                        pointwise_log_likelihood(self.state, self.data))
        finally:
            if pool is not None:
                pool.close()
                pool.join()

        elapsed = (time.time() - started) / 60
        self.state.rng_state = self.rng.bit_generator.state
        self.state.lambda_window = self.matcher
        logging.info(f'chain seed={config.seed} finished '
                     f'{self.state.iteration - self.start} sweeps in '
                     f'{elapsed:.3f} min, acceptance {self.acceptance_rates}')

        if not states:
            states, logliks = [], np.zeros((0, self.data.n_obs))
        draws = self._collect(states, logliks)
        draws.timing['sampling_minutes'] = elapsed
        return draws

    def _collect(self, states, logliks):
        config, data = self.config, self.data
        metadata = {
            'seed': config.seed, 'n_iter': config.n_iter,
            'burn_in': config.burn_in, 'thin': config.thin,
            'start_iteration': self.start,
            'last_iteration': self.state.iteration,
            'aborted': self.aborted,
            'sg_a': config.sg_a, 'sg_b': config.sg_b,
        }
        if states:
            return PosteriorDraws.from_states(
                states, logliks, store_latents=config.store_latents,
                acceptance=self.acceptance_rates, metadata=metadata)

        H, n, T, p = config.H, data.n, data.T, data.p
        empty = {
            's': np.zeros((0, n, T), dtype=np.int16),
            'theta': np.zeros((0, H)), 'sigma_sq': np.zeros((0, H)),
            'beta': np.zeros((0, p)), 'gamma': np.zeros((0, n)),
            'loglik': np.zeros((0, data.n_obs)),
            'weights': np.zeros((0, H, T)),
        }
        for name in SCALAR_FIELDS:
            empty[name] = np.zeros(0)
        return PosteriorDraws(acceptance=self.acceptance_rates,
                              metadata=metadata, **empty)


def run_chain(config, data, state=None, progress=None, abort=None,
              show_progress=True, checkpoint_dir=None):
    """Runs one chain and checks the posterior mean identity

    Parameters:
    ----------
    * config: ModelConfig

    * data: PanelDataset

    * state: ChainState
        continue from this state (resume)

    * checkpoint_dir: str or pathlib.Path
        where the last state is dumped as `last_state.pickle`

    Returns:
    -------
    * draws: PosteriorDraws
    """
    from arlbsg.core.posterior.identities import posterior_mean_identity

    chain = Chain(config, data, state=state, progress=progress, abort=abort,
                  show_progress=show_progress)
    draws = chain.run()
    if checkpoint_dir is not None:
        chain.state.dump(checkpoint_dir, 'last_state')

    if draws.num_draws > 1 and not config.single_cluster:
        check = posterior_mean_identity(draws, config)
        log = logging.info if check.ok else logging.warning
        log(f'posterior mean identity: lhs={check.lhs:.4f} '
            f'rhs={check.rhs:.4f} se={check.se:.4f} ok={check.ok}')
    return draws
