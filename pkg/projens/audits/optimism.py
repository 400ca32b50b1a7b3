# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Optimism audit: an estimate's mean plus its Wasserstein distance to the
true return distribution never falls below the true mean.

"""

import logging

import numpy as np

from projens.audits import AuditReport, BaseAudit
from projens.exceptions import ArgumentError
from projens.lib.distribution import make_particle
from projens.lib.mdp import ReturnTable, cellwise_wasserstein


LOG = logging.getLogger('projens.audits.optimism')

TOLERANCE = 1e-9


def audit_optimism(eta_hat, eta_true):
    ''' Check mean(eta_hat) + w_1(eta_hat, eta_true) >= mean(eta_true)
    at every cell.
    '''
    if eta_hat.shape != eta_true.shape:
        raise ArgumentError('The return tables have different shapes')
    slack = eta_hat.means() + cellwise_wasserstein(eta_hat, eta_true) \
        - eta_true.means()
    return AuditReport(
        'optimism', trials=slack.size, max_violation=float(np.max(-slack)),
        bound=0.0, tolerance=TOLERANCE,
        details={'min_slack': float(np.min(slack))})


def _random_dist(rng, max_atoms):
    count = rng.integers(1, max_atoms + 1)
    return make_particle(
        rng.normal(0.0, rng.uniform(0.1, 10.0), count),
        rng.dirichlet(np.ones(count)))


class OptimismAudit(BaseAudit):
    ''' Optimism of the mean-plus-distance bound on random pairs. '''

    name = 'optimism'
    stream = 2

    @classmethod
    def run(cls, cfg):
        rng = np.random.default_rng([cfg.seed, cls.stream])
        estimates = ReturnTable([
            [_random_dist(rng, cfg.atoms)] for _ in range(cfg.optimism_pairs)])
        truths = ReturnTable([
            [_random_dist(rng, cfg.atoms)] for _ in range(cfg.optimism_pairs)])
        report = audit_optimism(estimates, truths)
        LOG.info('Smallest optimism slack %.3g over %d pairs',
                 report.details['min_slack'], report.trials)
        return report
