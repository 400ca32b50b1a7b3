# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Numeric audits of the projection-ensemble bounds. Each audit is a plugin:
a :class:`BaseAudit` subclass living in a module of this package, found
with straight.plugin.

"""

import json

import numpy as np
from straight.plugin import load

from projens.exceptions import ArgumentError
from projens.lib.mdp import Policy, sample_random_mdp
from projens.lib.projection import default_specs


class AuditReport(object):
    """ Outcome of an audit.

    :arg name: the audit name
    :kwarg trials: number of checks that were evaluated
    :kwarg max_violation: largest excess over the bound, None when no
        check was evaluated
    :kwarg bound: the bound the checks were held against
    :kwarg tolerance: largest violation still counted as a pass
    :kwarg passed: overrides the pass flag derived from ``tolerance``
    :kwarg details: extra figures worth reporting

    """

    def __init__(self, name, trials=0, max_violation=None, bound=None,
                 tolerance=0.0, passed=None, details=None):
        self.name = name
        self.trials = int(trials)
        self.max_violation = None if max_violation is None \
            else float(max_violation)
        self.bound = None if bound is None else float(bound)
        self.tolerance = float(tolerance)
        if passed is None:
            passed = self.max_violation is None \
                or self.max_violation <= self.tolerance
        self.passed = bool(passed)
        self.details = dict(details or {})

    def __repr__(self):
        return '<AuditReport(%s, trials=%d, pass=%s)>' % (
            self.name, self.trials, self.passed)

    def to_json(self):
        """ The report as a JSON-serializable dict. """
        return {
            'name': self.name,
            'trials': self.trials,
            'max_violation': self.max_violation,
            'bound': self.bound,
            'pass': self.passed,
            'details': self.details,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def merge(cls, reports, name=None):
        """ Combine the reports of one audit run over several MDPs. """
        if not reports:
            raise ArgumentError('Nothing to merge')
        violations = [
            report.max_violation for report in reports
            if report.max_violation is not None]
        bounds = [report.bound for report in reports
                  if report.bound is not None]
        details = {}
        for report in reports:
            for key, value in report.details.items():
                if isinstance(value, (int, float)):
                    details[key] = max(details.get(key, value), value)
        return cls(
            name or reports[0].name,
            trials=sum(report.trials for report in reports),
            max_violation=max(violations) if violations else None,
            bound=max(bounds) if bounds else None,
            tolerance=reports[0].tolerance,
            passed=all(report.passed for report in reports),
            details=details,
        )


class BaseAudit(object):
    ''' Base class for projens' audits. '''

    name = None
    # Distinguishes the random streams of the audits
    stream = 0

    @classmethod
    def run(cls, cfg):  # pragma: no cover
        ''' Run the audit with the resolved audit configuration.

        :arg cfg: a ``munch.Munch`` of the ``AUDIT_`` keys, lower-cased
            and without prefix, plus the global ``seed``
        :return: an :class:`AuditReport`

        '''
        raise NotImplementedError('Audits must define their own run method')

    @classmethod
    def sample(cls, cfg, trial):
        ''' The random MDP, policy and generator of one trial. '''
        key = [cfg.seed, cls.stream, trial]
        mdp = sample_random_mdp(
            key, cfg.n_states, cfg.n_actions, cfg.reward_atoms, cfg.gamma)
        rng = np.random.default_rng(key + [1])
        pi = Policy.random(rng, mdp.n_states, mdp.n_actions)
        return mdp, pi, rng

    @staticmethod
    def specs_for(mdp, n_atoms):
        ''' Categorical and quantile members spanning the return range. '''
        low, high = mdp.return_range()
        if high - low < 1e-12:
            high = low + 1.0
        return default_specs(n_atoms, low, high)


def get_audits(names=None):
    ''' Return the audit plugins, sorted by name, optionally restricted to
    the given names.
    '''
    plugins = load('projens.audits', subclasses=BaseAudit)
    audits = {
        plugin.name: plugin for plugin in plugins
        if plugin.name is not None}
    if names is None:
        names = sorted(audits)
    unknown = [name for name in names if name not in audits]
    if unknown:
        raise ArgumentError('Unknown audits: %s' % ', '.join(unknown))
    return [audits[name] for name in names]
