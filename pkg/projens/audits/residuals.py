# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Residual audit: at each resolution K, the projected fixed point stays
within its bias bound of a high-resolution reference, and the members'
disagreement at the fixed point is bounded and shrinks with K.

"""

import logging

import numpy as np

from projens.audits import AuditReport, BaseAudit
from projens.audits.optimism import audit_optimism
from projens.exceptions import ArgumentError
from projens.lib.mdp import (
    ensemble_disagreement, ensemble_members, iterate_projection_mixture,
    sup_wasserstein)
from projens.lib.projection import (
    CategoricalSupport, ProjectionSpec, contraction_modulus)


LOG = logging.getLogger('projens.audits.residuals')

TOLERANCE = 1e-9


def reference_table(mdp, pi, resolution, tol=1e-10, max_iter=5000):
    """ Categorical dynamic programming on a fine support spanning the
    return range.

    :return: the reference table and its own w_1 error bound

    """
    low, high = mdp.return_range()
    if high - low < 1e-12:
        high = low + 1.0
    support = CategoricalSupport(low, high, resolution)
    result = iterate_projection_mixture(
        mdp, pi, [ProjectionSpec.categorical(support)], tol, max_iter)
    return result.table, support.spacing / (1.0 - mdp.gamma)


def audit_residuals(mdp, pi, specs, k_values, reference_resolution,
                    tol=1e-10, max_iter=5000, reference=None):
    """ Bias, disagreement and monotonicity checks over resolutions.

    For every K of ``k_values`` the members of ``specs`` are rebuilt with
    K atoms (categorical supports spanning the return range) and
    the following are checked:

    * w_1(eta_M, reference) <= d_bar / (1 - c_bar gamma) + reference error
    * max w_avg at the fixed point <= 4 (R_max - R_min) / ((1 - gamma) K)
    * max w_avg does not increase with K

    :kwarg reference: ``(table, error)`` from :func:`reference_table`
    :return: an :class:`AuditReport` whose details carry, per K, the
        figures behind each check

    """
    if not k_values or min(k_values) < 2:
        raise ArgumentError('Resolutions must be at least 2, got %r'
                            % (k_values,))
    if reference_resolution <= max(k_values):
        LOG.warning('Reference resolution %d is not above the audited ones',
                    reference_resolution)
    if reference is None:
        reference = reference_table(
            mdp, pi, reference_resolution, tol, max_iter)
    reference, ref_error = reference

    low, high = mdp.return_range()
    if high - low < 1e-12:
        high = low + 1.0
    c_bar = contraction_modulus(specs)
    violations = []
    details = {'reference_error': ref_error}
    previous = None
    for n_atoms in sorted(k_values):
        k_specs = [spec.with_atoms(n_atoms, low, high) for spec in specs]
        result = iterate_projection_mixture(mdp, pi, k_specs, tol, max_iter)
        fixed = result.table

        d_bar = float(np.mean([
            spec.error_bound(low, high) for spec in k_specs]))
        bias = sup_wasserstein(fixed, reference)
        bias_bound = d_bar / (1.0 - c_bar * mdp.gamma) + ref_error
        violations.append(bias - bias_bound)

        members = ensemble_members(fixed, mdp, pi, k_specs)
        wavg = float(np.max(ensemble_disagreement(members).values))
        wavg_bound = 4.0 * (mdp.r_max - mdp.r_min) / (
            (1.0 - mdp.gamma) * n_atoms)
        violations.append(wavg - wavg_bound)
        if previous is not None:
            violations.append(wavg - previous)
        previous = wavg

        optimism = audit_optimism(fixed, reference)
        violations.append(optimism.max_violation)

        count = len(k_specs)
        details.update({
            'bias_%d' % n_atoms: bias,
            'bias_bound_%d' % n_atoms: bias_bound,
            'wavg_%d' % n_atoms: wavg,
            'wavg_bound_%d' % n_atoms: wavg_bound,
            'disagreement_bound_%d' % n_atoms:
                2.0 * count / (count - 1) * d_bar if count > 1 else 0.0,
        })
        LOG.debug('K=%d: bias %.4g <= %.4g, w_avg %.4g <= %.4g', n_atoms,
                  bias, bias_bound, wavg, wavg_bound)

    return AuditReport(
        'residuals', trials=len(violations), max_violation=max(violations),
        bound=c_bar * mdp.gamma, tolerance=TOLERANCE, details=details)


class ResidualAudit(BaseAudit):
    ''' Fixed-point bias and disagreement against a fine reference. '''

    name = 'residuals'
    stream = 4

    @classmethod
    def run(cls, cfg):
        reports = []
        for trial in range(cfg.residual_trials):
            mdp, pi, _ = cls.sample(cfg, trial)
            reports.append(audit_residuals(
                mdp, pi, cls.specs_for(mdp, cfg.atoms), cfg.k_values,
                cfg.reference_resolution, tol=cfg.tolerance,
                max_iter=cfg.max_iter))
        report = AuditReport.merge(reports)
        LOG.info('Largest residual violation %.3g', report.max_violation)
        return report
