"""Runs the chains of a fit in parallel

    The number of worker processes is read from ARLBSG_WORKERS (default 1)
    and is capped by the number of chains and of processors. Chains are
    seeded independently of the worker count, so the draw files do not
    depend on it.
"""
import logging
import multiprocessing as mp
import os

from models.fit import get_arguments, print_arguments, run_fit

WORKERS_ENV = 'ARLBSG_WORKERS'


def num_workers(tasks):
    """Worker processes for `tasks` independent jobs"""
    requested = int(os.environ.get(WORKERS_ENV, '1'))
    processors_total = mp.cpu_count()
    workers = max(1, min(requested, tasks, processors_total))
    if workers < requested:
        logging.info(f'number of workers downgraded to {workers}')
    return workers


def fit_batch(flags):
    """Fits every chain, pooling them when more than one worker is set"""
    workers = num_workers(flags.chains)
    if workers > 1:
        with mp.Pool(workers) as pool:
            return run_fit(flags, mapper=pool.map)
    return run_fit(flags)


def main(args=None):
    flags = get_arguments(args)
    print_arguments(flags)
    return str(fit_batch(flags))


if __name__ == '__main__':
    main()
