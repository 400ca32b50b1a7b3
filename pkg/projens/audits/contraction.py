# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Contraction audit: the projected Bellman operator shrinks the supremum
Wasserstein distance between any two return tables by c_bar * gamma.

"""

import logging

import numpy as np

from projens.audits import AuditReport, BaseAudit
from projens.lib.mdp import (
    apply_projected_operator, random_table, sup_wasserstein)
from projens.lib.projection import contraction_modulus


LOG = logging.getLogger('projens.audits.contraction')

TOLERANCE = 1e-6


def audit_contraction(mdp, pi, specs, trials, p=1.0, rng=None, pairs=None):
    """ Largest empirical contraction ratio over random table pairs.

    :arg trials: number of random (eta, eta') pairs
    :kwarg p: order of the Wasserstein metric
    :kwarg rng: numpy generator drawing the tables
    :kwarg pairs: explicit table pairs, audited instead of random ones
    :return: an :class:`AuditReport`; pairs at distance zero are skipped

    """
    if rng is None:
        rng = np.random.default_rng()
    bound = contraction_modulus(specs) * mdp.gamma
    if pairs is None:
        n_atoms = max(spec.n_atoms for spec in specs)
        low, high = mdp.return_range()
        pairs = (
            tuple(random_table(rng, mdp.n_states, mdp.n_actions, n_atoms,
                               low, high) for _ in range(2))
            for _ in range(trials))

    ratios = []
    for eta, other in pairs:
        before = sup_wasserstein(eta, other, p)
        if before <= 1e-15:
            continue
        after = sup_wasserstein(
            apply_projected_operator(eta, mdp, pi, specs),
            apply_projected_operator(other, mdp, pi, specs), p)
        ratios.append(after / before)

    if not ratios:
        return AuditReport('contraction', bound=bound, tolerance=TOLERANCE)
    max_ratio = max(ratios)
    return AuditReport(
        'contraction', trials=len(ratios), max_violation=max_ratio - bound,
        bound=bound, tolerance=TOLERANCE, details={'max_ratio': max_ratio})


class ContractionAudit(BaseAudit):
    ''' Contraction of the projected operator on random MDPs. '''

    name = 'contraction'
    stream = 1

    @classmethod
    def run(cls, cfg):
        reports = []
        for trial in range(cfg.trials):
            mdp, pi, rng = cls.sample(cfg, trial)
            reports.append(audit_contraction(
                mdp, pi, cls.specs_for(mdp, cfg.atoms), cfg.table_pairs,
                p=cfg.p, rng=rng))
        report = AuditReport.merge(reports)
        LOG.info('Largest contraction ratio %s against %s',
                 report.details.get('max_ratio'), report.bound)
        return report
