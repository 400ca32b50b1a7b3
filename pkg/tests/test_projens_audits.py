# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

"""

import json
import unittest
import sys
import os

import munch
import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(
    os.path.abspath(__file__)), '..'))

from projens.audits import AuditReport, BaseAudit, get_audits
from projens.audits.contraction import ContractionAudit, audit_contraction
from projens.audits.optimism import OptimismAudit, audit_optimism
from projens.audits.propagation import PropagationAudit, audit_propagation
from projens.audits.residuals import (
    ResidualAudit, audit_residuals, reference_table)
from projens.exceptions import ArgumentError
from projens.lib.distribution import dirac, uniform
from projens.lib.mdp import (
    Policy, ReturnTable, random_table, sample_random_mdp)
from projens.lib.projection import CategoricalSupport, ProjectionSpec
import tests


def audit_config(**kwargs):
    """ A small audit configuration. """
    cfg = munch.Munch(
        seed=3, names=['contraction'], trials=2, table_pairs=2,
        optimism_pairs=20, propagation_trials=2, residual_trials=1,
        n_states=2, n_actions=2, reward_atoms=2, gamma=0.5, atoms=3,
        k_values=[3, 5], reference_resolution=101, p=1.0, tolerance=1e-10,
        max_iter=2000)
    cfg.update(kwargs)
    return cfg


class ProjensAuditstests(tests.ProjensTests):
    """ Tests for the projens.audits plugins """

    def test_report(self):
        """ Test the AuditReport object. """
        report = AuditReport('contraction', trials=3, max_violation=-0.1,
                             bound=0.9, tolerance=1e-6)
        self.assertTrue(report.passed)
        self.assertEqual(
            report.to_json(),
            {
                'name': 'contraction',
                'trials': 3,
                'max_violation': -0.1,
                'bound': 0.9,
                'pass': True,
                'details': {},
            })
        self.assertEqual(json.loads(report.dumps())['pass'], True)

        report = AuditReport('optimism', trials=1, max_violation=1e-3,
                             tolerance=1e-6)
        self.assertFalse(report.passed)
        self.assertTrue(AuditReport('optimism').passed)
        self.assertFalse(AuditReport('optimism', passed=False).passed)

    def test_report_merge(self):
        """ Test merging the reports of several MDPs. """
        first = AuditReport(
            'residuals', trials=2, max_violation=-0.5, bound=0.5,
            details={'bias': 0.1, 'label': 'x'})
        second = AuditReport(
            'residuals', trials=3, max_violation=-0.2, bound=0.45,
            details={'bias': 0.3})
        merged = AuditReport.merge([first, second])
        self.assertEqual(merged.name, 'residuals')
        self.assertEqual(merged.trials, 5)
        self.assertEqual(merged.max_violation, -0.2)
        self.assertEqual(merged.bound, 0.5)
        self.assertEqual(merged.details, {'bias': 0.3})
        self.assertTrue(merged.passed)

        failed = AuditReport('residuals', passed=False)
        merged = AuditReport.merge([first, failed])
        self.assertFalse(merged.passed)
        self.assertEqual(merged.max_violation, -0.5)
        self.assertRaises(ArgumentError, AuditReport.merge, [])

    def test_get_audits(self):
        """ Test loading the audit plugins. """
        audits = get_audits()
        self.assertEqual(
            [audit.name for audit in audits],
            ['contraction', 'optimism', 'propagation', 'residuals'])
        self.assertTrue(all(issubclass(audit, BaseAudit) for audit in audits))
        self.assertEqual(
            get_audits(['residuals', 'optimism']),
            [ResidualAudit, OptimismAudit])
        self.assertRaises(ArgumentError, get_audits, ['optimism', 'foo'])

    def test_sample(self):
        """ Test the trials of an audit are reproducible. """
        cfg = audit_config()
        mdp, pi, _ = ContractionAudit.sample(cfg, 1)
        again, pi_again, _ = ContractionAudit.sample(cfg, 1)
        np.testing.assert_array_equal(mdp.transitions, again.transitions)
        np.testing.assert_array_equal(pi.probs, pi_again.probs)
        other, _, _ = PropagationAudit.sample(cfg, 1)
        self.assertFalse(np.array_equal(mdp.transitions, other.transitions))

        specs = BaseAudit.specs_for(tests.self_loop_mdp(1.0, 0.5), 3)
        self.assertEqual(specs[0].support.z_min, 2.0)
        self.assertEqual(specs[0].support.z_max, 3.0)

    def test_audit_contraction(self):
        """ Test the contraction audit with categorical members. """
        mdp = sample_random_mdp(5, 3, 2, 2, 0.9)
        pi = Policy.random(self.rng, 3, 2)
        low, high = mdp.return_range()
        specs = [
            ProjectionSpec.categorical(CategoricalSupport(low, high, 11)),
            ProjectionSpec.categorical(CategoricalSupport(low, high, 5))]
        report = audit_contraction(mdp, pi, specs, 10, rng=self.rng)
        self.assertEqual(report.name, 'contraction')
        self.assertEqual(report.trials, 10)
        self.assertAlmostEqual(report.bound, 0.9)
        self.assertTrue(report.passed)
        self.assertLessEqual(report.details['max_ratio'], 0.9 + 1e-6)

        table = random_table(self.rng, 3, 2, 3, low, high)
        report = audit_contraction(
            mdp, pi, specs, 1, pairs=[(table, table)])
        self.assertEqual(report.trials, 0)
        self.assertIsNone(report.max_violation)
        self.assertTrue(report.passed)

    def test_contraction_run(self):
        """ Test running the contraction plugin. """
        report = ContractionAudit.run(audit_config())
        self.assertEqual(report.name, 'contraction')
        self.assertEqual(report.trials, 4)
        self.assertAlmostEqual(report.bound, 0.5)
        self.assertIn('max_ratio', report.details)

    def test_audit_optimism(self):
        """ Test the optimism audit. """
        estimates = ReturnTable([[dirac(0)], [uniform([0, 4])]])
        truths = ReturnTable([[dirac(1)], [dirac(2)]])
        report = audit_optimism(estimates, truths)
        self.assertTrue(report.passed)
        self.assertEqual(report.trials, 2)
        # 0 + 1 - 1 and 2 + 2 - 2
        self.assertEqual(report.details['min_slack'], 0.0)
        self.assertEqual(report.max_violation, 0.0)
        self.assertRaises(
            ArgumentError, audit_optimism, estimates,
            ReturnTable([[dirac(0)]]))

        report = OptimismAudit.run(audit_config())
        self.assertEqual(report.trials, 20)
        self.assertTrue(report.passed)

    def test_audit_propagation(self):
        """ Test the propagation audit with categorical members. """
        mdp = sample_random_mdp(8, 3, 2, 2, 0.8)
        pi = Policy.random(self.rng, 3, 2)
        low, high = mdp.return_range()
        specs = [
            ProjectionSpec.categorical(CategoricalSupport(low, high, 7)),
            ProjectionSpec.categorical(CategoricalSupport(low, high, 4))]
        eta_hat = random_table(self.rng, 3, 2, 4, low, high)
        report = audit_propagation(mdp, pi, eta_hat, specs)
        self.assertEqual(report.trials, 6)
        self.assertTrue(report.passed)
        self.assertLessEqual(report.details['bonus_gap'], 1e-6)
        self.assertGreater(report.details['max_distance'], 0)

        self.assertRaises(
            ArgumentError, audit_propagation, mdp, pi, eta_hat,
            [ProjectionSpec.quantile(3, modulus_c=2.0)])

    def test_audit_propagation_at_fixed_point(self):
        """ Test the fixed point itself has no distance to bound. """
        mdp = tests.self_loop_mdp(1.0, 0.5)
        pi = Policy.uniform(1, 1)
        fixed = ReturnTable([[dirac(2)]])
        specs = [ProjectionSpec.categorical(CategoricalSupport(0, 4, 5)),
                 ProjectionSpec.quantile(2)]
        report = audit_propagation(
            mdp, pi, fixed, specs, fixed_point=fixed)
        self.assertTrue(report.passed)
        self.assertEqual(report.details['max_distance'], 0.0)
        self.assertEqual(report.max_violation, 0.0)

    def test_propagation_run(self):
        """ Test running the propagation plugin. """
        report = PropagationAudit.run(audit_config())
        self.assertEqual(report.name, 'propagation')
        self.assertEqual(report.trials, 8)
        self.assertIn('bonus_gap', report.details)

    def test_reference_table(self):
        """ Test the categorical reference of a self loop. """
        table, error = reference_table(
            tests.self_loop_mdp(1.0, 0.5), Policy.uniform(1, 1), 11)
        self.assertLess(abs(table.means()[0, 0] - 2.0), 1e-8)
        self.assertAlmostEqual(error, 0.2)

    def test_audit_residuals(self):
        """ Test the residual audit on a self loop. """
        mdp = tests.self_loop_mdp(1.0, 0.5)
        pi = Policy.uniform(1, 1)
        specs = BaseAudit.specs_for(mdp, 3)
        report = audit_residuals(
            mdp, pi, specs, [3, 5], 21, tol=1e-12)
        self.assertEqual(report.name, 'residuals')
        # Bias, w_avg and optimism per K, monotonicity from the second K
        self.assertEqual(report.trials, 7)
        self.assertTrue(report.passed)
        for key in ('bias_3', 'bias_bound_5', 'wavg_3', 'wavg_bound_5',
                    'disagreement_bound_3', 'reference_error'):
            self.assertIn(key, report.details)
        self.assertLess(report.details['bias_5'], 1e-9)

        self.assertRaises(
            ArgumentError, audit_residuals, mdp, pi, specs, [1, 5], 21)
        self.assertRaises(
            ArgumentError, audit_residuals, mdp, pi, specs, [], 21)

    def test_residuals_run(self):
        """ Test running the residual plugin. """
        report = ResidualAudit.run(audit_config())
        self.assertEqual(report.name, 'residuals')
        self.assertEqual(report.trials, 7)
        self.assertIn('wavg_5', report.details)


if __name__ == '__main__':
    SUITE = unittest.TestLoader().loadTestsFromTestCase(ProjensAuditstests)
    unittest.TextTestRunner(verbosity=2).run(SUITE)
