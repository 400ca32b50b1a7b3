# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Propagation audit: the distance from an estimate to the projected fixed
point is bounded by its one-step disagreement propagated through the
policy's transitions.

"""

import logging

import numpy as np

from projens.audits import AuditReport, BaseAudit
from projens.exceptions import ArgumentError
from projens.lib.mdp import (
    BonusTable, apply_projected_operator, cellwise_wasserstein,
    ensemble_disagreement, ensemble_members, iterate_projection_mixture,
    policy_matrix, propagate_bonus, random_table)
from projens.lib.projection import contraction_modulus


LOG = logging.getLogger('projens.audits.propagation')

TOLERANCE = 1e-7
BONUS_TOLERANCE = 1e-6


def audit_propagation(mdp, pi, eta_hat, specs, tol=1e-10, max_iter=5000,
                      fixed_point=None):
    """ Check, cell by cell,

        w_1(eta_hat, eta_M) <= w_1(eta_hat, Omega T eta_hat)
                               + c_bar gamma E[w_1(eta_hat, eta_M)(S', A')]

    and that the propagated bonus dominates w_1(eta_hat, eta_M).

    :kwarg tol: tolerance of the fixed-point iteration computing eta_M
    :kwarg fixed_point: eta_M, when already known
    :raise ArgumentError: when ``c_bar * gamma >= 1``

    """
    c_bar = contraction_modulus(specs)
    if c_bar * mdp.gamma >= 1:
        raise ArgumentError(
            'The propagation bound needs c_bar * gamma < 1, got %r'
            % (c_bar * mdp.gamma))
    if fixed_point is None:
        result = iterate_projection_mixture(mdp, pi, specs, tol, max_iter)
        if not result.converged:
            LOG.warning('Auditing against an unconverged fixed point')
        fixed_point = result.table

    distance = cellwise_wasserstein(eta_hat, fixed_point)
    one_step = cellwise_wasserstein(
        eta_hat, apply_projected_operator(eta_hat, mdp, pi, specs))
    expected = policy_matrix(mdp, pi).dot(distance.ravel()).reshape(
        distance.shape)
    violation = distance - (one_step + c_bar * mdp.gamma * expected)

    bonus = propagate_bonus(
        mdp, pi, BonusTable(one_step), c_bar, tol=tol * 1e-2)
    bonus_gap = float(np.max(distance - bonus.values))
    max_violation = float(np.max(violation))

    return AuditReport(
        'propagation', trials=violation.size, max_violation=max_violation,
        bound=c_bar * mdp.gamma, tolerance=TOLERANCE,
        passed=max_violation <= TOLERANCE and bonus_gap <= BONUS_TOLERANCE,
        details={
            'bonus_gap': bonus_gap,
            'max_distance': float(np.max(distance)),
        })


class PropagationAudit(BaseAudit):
    ''' Propagated one-step disagreement bounds the fixed-point error. '''

    name = 'propagation'
    stream = 3

    @classmethod
    def run(cls, cfg):
        reports = []
        for trial in range(cfg.propagation_trials):
            mdp, pi, rng = cls.sample(cfg, trial)
            low, high = mdp.return_range()
            eta_hat = random_table(
                rng, mdp.n_states, mdp.n_actions, cfg.atoms, low, high)
            reports.append(audit_propagation(
                mdp, pi, eta_hat, cls.specs_for(mdp, cfg.atoms),
                tol=cfg.tolerance, max_iter=cfg.max_iter))
        report = AuditReport.merge(reports)
        LOG.info('Largest propagation violation %.3g, bonus gap %.3g',
                 report.max_violation, report.details['bonus_gap'])
        return report

    @classmethod
    def reference_tables(cls, cfg):
        """ The projected fixed point of the first propagation MDP, the
        disagreement of its members and that disagreement propagated.

        :return: ``(fixed_point, disagreement, bonus)``

        """
        mdp, pi, _ = cls.sample(cfg, 0)
        specs = cls.specs_for(mdp, cfg.atoms)
        result = iterate_projection_mixture(
            mdp, pi, specs, cfg.tolerance, cfg.max_iter)
        disagreement = ensemble_disagreement(
            ensemble_members(result.table, mdp, pi, specs))
        bonus = propagate_bonus(
            mdp, pi, disagreement, contraction_modulus(specs),
            tol=cfg.tolerance)
        return result.table, disagreement, bonus
