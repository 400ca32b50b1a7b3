# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Validation of run configurations. Each subcommand has a form whose
fields are the configuration keys of that subcommand, lower-cased and
without their prefix.

"""

import wtforms
from wtforms import validators

from projens.lib.agent import Variant
# pylint: disable=R0903,W0232,E1002


KNOWN_AUDITS = ('contraction', 'optimism', 'propagation', 'residuals')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')
FALSE_VALUES = ('false', 'False', 'FALSE', '0', 'no', 'off', '')


class ListField(wtforms.Field):
    """ Comma separated list of values, each converted by ``coerce``. """

    def __init__(self, label=None, validators=None, coerce=str, **kwargs):
        super(ListField, self).__init__(label, validators, **kwargs)
        self.coerce = coerce

    def process_formdata(self, valuelist):
        if not valuelist:
            return
        items = [
            item.strip() for item in valuelist[0].strip('[]()').split(',')]
        items = [item.strip('\'"') for item in items if item]
        try:
            self.data = [self.coerce(item) for item in items]
        except ValueError:
            self.data = None
            raise ValueError(
                self.gettext('Not a valid list of %s') % self.coerce.__name__)

    def _value(self):
        return ','.join(str(item) for item in self.data or [])


class BelowOne(object):
    """ Wtforms validator requiring a value strictly below 1. """

    def __call__(self, form, field):
        if field.data is not None and not field.data < 1:
            raise validators.ValidationError('Must be strictly below 1')


class StrictlyPositive(object):
    """ Wtforms validator requiring a value strictly above 0. """

    def __call__(self, form, field):
        if field.data is not None and not field.data > 0:
            raise validators.ValidationError('Must be strictly positive')


class ItemsInRange(object):
    """ Wtforms validator bounding every item of a list. """

    def __init__(self, min=None, max=None):
        self.min = min
        self.max = max

    def __call__(self, form, field):
        for item in field.data or []:
            if (self.min is not None and item < self.min) \
                    or (self.max is not None and item > self.max):
                raise validators.ValidationError(
                    'Items must lie in [%s, %s], got %s' % (
                        self.min, self.max, item))


class ItemsAnyOf(object):
    """ Wtforms validator restricting the items of a list to choices. """

    def __init__(self, values):
        self.values = values

    def __call__(self, form, field):
        unknown = [item for item in field.data or []
                   if item not in self.values]
        if unknown:
            raise validators.ValidationError(
                'Unknown values %s, pick from %s' % (
                    ', '.join(unknown), ', '.join(self.values)))


def _positive_int(label, minimum=1):
    return wtforms.IntegerField(
        label, [validators.InputRequired(), validators.NumberRange(min=minimum)])


def _float(label, minimum=None):
    checks = [validators.InputRequired()]
    if minimum is not None:
        checks.append(validators.NumberRange(min=minimum))
    return wtforms.FloatField(label, checks)


def _positive_float(label):
    return wtforms.FloatField(
        label, [validators.InputRequired(), StrictlyPositive()])


class RunForm(wtforms.Form):
    ''' Keys shared by every subcommand. '''

    config_prefix = None
    global_keys = ('seed', 'jobs', 'output_dir', 'log_level')

    seed = _positive_int('Master seed', minimum=0)
    jobs = _positive_int('Parallel jobs')
    output_dir = wtforms.StringField(
        'Output folder', [validators.InputRequired()])
    log_level = wtforms.SelectField(
        'Log level', [validators.InputRequired()],
        choices=[(level, level) for level in LOG_LEVELS])

    @classmethod
    def config_key(cls, name):
        ''' The configuration key behind the field ``name``. '''
        if name in cls.global_keys:
            return name.upper()
        return cls.config_prefix + name.upper()

    def validate_support(self, low, high):
        if low.data is not None and high.data is not None \
                and not high.data > low.data:
            high.errors.append('Must be above %s' % low.name)
            return False
        return True


class AuditForm(RunForm):
    ''' Form validating the ``AUDIT_`` keys. '''

    config_prefix = 'AUDIT_'

    names = ListField(
        'Audits to run', [validators.InputRequired(), ItemsAnyOf(KNOWN_AUDITS)])
    trials = _positive_int('Random MDPs of the contraction audit')
    table_pairs = _positive_int('Table pairs per MDP')
    optimism_pairs = _positive_int('Pairs of the optimism audit')
    propagation_trials = _positive_int('Random MDPs of the propagation audit')
    residual_trials = _positive_int('Random MDPs of the residual audit')
    n_states = _positive_int('States')
    n_actions = _positive_int('Actions')
    reward_atoms = _positive_int('Reward atoms')
    gamma = wtforms.FloatField(
        'Discount',
        [validators.InputRequired(), validators.NumberRange(min=0), BelowOne()])
    atoms = _positive_int('Atoms per member', minimum=2)
    k_values = ListField(
        'Resolutions', [validators.InputRequired(), ItemsInRange(min=2)],
        coerce=int)
    reference_resolution = _positive_int('Reference resolution', minimum=2)
    p = _float('Wasserstein order', minimum=1.0)
    tolerance = _positive_float('Fixed-point tolerance')
    max_iter = _positive_int('Fixed-point iteration cap')
    dump_tables = wtforms.BooleanField(
        'Dump the reference tables', false_values=FALSE_VALUES)


class DeepSeaForm(RunForm):
    ''' Form validating the ``DEEPSEA_`` keys. '''

    config_prefix = 'DEEPSEA_'

    sizes = ListField(
        'Grid sizes', [validators.InputRequired(), ItemsInRange(min=1)],
        coerce=int)
    seeds = ListField(
        'Seeds', [validators.InputRequired(), ItemsInRange(min=0)], coerce=int)
    episodes = _positive_int('Training episodes', minimum=0)
    variants = ListField(
        'Variants',
        [validators.InputRequired(),
         ItemsAnyOf([variant.value for variant in Variant])])
    stochastic = wtforms.BooleanField('Stochastic', false_values=FALSE_VALUES)
    hidden = ListField('Hidden widths', [ItemsInRange(min=1)], coerce=int)
    atoms = _positive_int('Atoms per member', minimum=2)
    lr = _positive_float('Learning rate')
    batch_size = _positive_int('Batch size')
    adam_eps = _positive_float('Adam epsilon')
    buffer_capacity = _positive_int('Replay capacity')
    target_update_freq = _positive_int('Target update frequency')
    gamma = wtforms.FloatField(
        'Discount',
        [validators.InputRequired(), validators.NumberRange(min=0), BelowOne()])
    beta_init = _float('Initial bonus scale', minimum=0)
    prior_scale_quantile = _float('Quantile prior scale', minimum=0)
    prior_scale_categorical = _float('Categorical prior scale', minimum=0)
    v_min = _float('Value support minimum')
    v_max = _float('Value support maximum')
    bonus_v_max = wtforms.FloatField(
        'Bonus support maximum', [validators.Optional(), StrictlyPositive()])
    eval_every = _positive_int('Training episodes between evaluations')
    solve_threshold = _float('Solving evaluation return')
    regret_threshold = _float('Regret return threshold')
    checkpoint = wtforms.BooleanField('Checkpoint', false_values=FALSE_VALUES)

    def validate(self, **kwargs):
        valid = super(DeepSeaForm, self).validate(**kwargs)
        return self.validate_support(self.v_min, self.v_max) and valid


class ToyRegForm(RunForm):
    ''' Form validating the ``TOYREG_`` keys. '''

    config_prefix = 'TOYREG_'

    samples = _positive_int('Samples')
    clusters = ListField(
        'Cluster bounds', [validators.InputRequired()], coerce=float)
    noise = _float('Noise level', minimum=0)
    noise_slope = _float('Noise slope', minimum=0)
    steps = _positive_int('Gradient steps', minimum=0)
    batch_size = _positive_int('Batch size')
    atoms = _positive_int('Atoms per member', minimum=2)
    hidden = ListField('Hidden widths', [ItemsInRange(min=1)], coerce=int)
    lr = _positive_float('Learning rate')
    adam_eps = _positive_float('Adam epsilon')
    prior_scale_quantile = _float('Quantile prior scale', minimum=0)
    prior_scale_categorical = _float('Categorical prior scale', minimum=0)
    v_min = _float('Value support minimum')
    v_max = _float('Value support maximum')
    grid_min = _float('Grid minimum')
    grid_max = _float('Grid maximum')
    grid_points = _positive_int('Grid points', minimum=2)

    def validate_clusters(self, field):
        bounds = field.data or []
        if len(bounds) % 2 or any(
                low > high for low, high in zip(bounds[0::2], bounds[1::2])):
            raise validators.ValidationError(
                'Clusters are consecutive (low, high) bounds')

    def validate(self, **kwargs):
        valid = super(ToyRegForm, self).validate(**kwargs)
        valid = self.validate_support(self.v_min, self.v_max) and valid
        return self.validate_support(self.grid_min, self.grid_max) and valid


FORMS = {
    'audit': AuditForm,
    'deepsea': DeepSeaForm,
    'toyreg': ToyRegForm,
}
