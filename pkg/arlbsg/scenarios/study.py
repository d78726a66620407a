"""Repeated simulation study: generate, fit and score"""
import logging
import time

import numpy as np
import pandas as pd

from arlbsg.core.chain import run_chain
from arlbsg.core.posterior.criteria import psis_loo, waic
from arlbsg.core.posterior.partitions import adjusted_rand_index, \
    cocluster_error, cocluster_probs, cocluster_stack, lagged_ari, \
    vi_point_estimates
from arlbsg.scenarios.base import generate

STUDY_COLUMNS = ('replicate', 'seed', 'mode', 'cocluster_error', 'waic',
                 'waic_se', 'looic', 'looic_se', 'max_pareto_k',
                 'median_ari', 'lag1_ari_gap', 'elapsed_minutes')


def score_fit(draws, truth):
    """Recovery and predictive scores of one fit against its truth

    Returns:
    -------
    * scores: dict
        cocluster_error, waic, looic (with standard errors), the largest
        Pareto k, the median over time of ARI(truth, VI estimate) and the
        mean absolute gap between true and estimated lag-1 ARI
    """
    stack = cocluster_probs(draws)
    estimate = vi_point_estimates(draws, stack)
    ari = np.array([adjusted_rand_index(truth.partitions[t], estimate[t])
                    for t in range(draws.T)])

    if draws.T > 1:
        gap = np.nanmean(np.abs(lagged_ari(truth.partitions, 1)[1] -
                                lagged_ari(estimate, 1)[1]))
    else:
        gap = 0.0

    w = waic(draws.loglik)
    loo = psis_loo(draws.loglik)
    return {
        'cocluster_error': cocluster_error(truth.cocluster, stack),
        'waic': w.waic, 'waic_se': w.se,
        'looic': loo.looic, 'looic_se': loo.se,
        'max_pareto_k': float(np.max(loo.pareto_k)),
        'median_ari': float(np.median(ari)),
        'lag1_ari_gap': float(gap),
        'point_cocluster_error': cocluster_error(truth.cocluster,
                                                 cocluster_stack(estimate)),
    }


def replicate_one(spec, config, index):
    """Runs replicate `index`: scenario and chain seeds are offset by it"""
    spec = spec.replace(seed=spec.seed + index)
    config = config.replace(seed=config.seed + index)
    started = time.time()
    data, truth = generate(spec)
    draws = run_chain(config, data, show_progress=False)
    row = {'replicate': index, 'seed': spec.seed, 'mode': spec.mode}
    row.update(score_fit(draws, truth))
    row['elapsed_minutes'] = (time.time() - started) / 60
    logging.info(f'replicate {index}: median ARI {row["median_ari"]:.3f}, '
                 f'waic {row["waic"]:.2f}')
    return row


def replicate(spec, config, replications, mapper=map):
    """Repeated simulation study

    Parameters:
    ----------
    * spec: ScenarioSpec

    * config: ModelConfig

    * replications: int

    * mapper: callable
        map-like, e.g a multiprocessing pool's `map`

    Returns:
    -------
    * table: pandas.DataFrame
        one row per replicate, columns STUDY_COLUMNS (plus the
        co-clustering error of the point estimate)
    """
    rows = list(mapper(_ReplicateTask(spec, config), range(replications)))
    table = pd.DataFrame(rows)
    columns = [c for c in STUDY_COLUMNS if c in table.columns]
    rest = [c for c in table.columns if c not in columns]
    return table[columns + rest]


class _ReplicateTask:
    """Picklable callable for pool mappers"""

    def __init__(self, spec, config):
        self.spec = spec
        self.config = config

    def __call__(self, index):
        return replicate_one(self.spec, self.config, index)
