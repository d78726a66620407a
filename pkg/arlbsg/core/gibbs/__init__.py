"""Blocks of the Metropolis-within-Gibbs sweep"""
from arlbsg.core.gibbs.atoms import update_atoms
from arlbsg.core.gibbs.concentration import update_alpha
from arlbsg.core.gibbs.correlation import update_psi
from arlbsg.core.gibbs.memberships import update_memberships
from arlbsg.core.gibbs.regression import update_regression
from arlbsg.core.gibbs.spatial import update_spatial
from arlbsg.core.gibbs.sticks import StickUpdateWorkspace, MomentMatcher, \
    compute_weights, update_epsilon, update_lambda, update_pg_augmentation

# weights must follow eps and alpha must follow the memberships
SWEEP_ORDER = ('memberships', 'workspace', 'pg', 'lambda', 'epsilon',
               'weights', 'alpha', 'atoms', 'regression', 'spatial', 'psi')

# blocks skipped by the single cluster ablation
STICK_BLOCKS = ('memberships', 'workspace', 'pg', 'lambda', 'epsilon',
                'weights', 'alpha', 'psi')
