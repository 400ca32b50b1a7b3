# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Command line interface: the ``audit``, ``deepsea`` and ``toyreg``
subcommands, their configuration and their run directories.

"""

import argparse
import csv
import enum
import hashlib
import json
import logging
import multiprocessing
import os
import types

import flask
import munch
import numpy as np
from werkzeug.datastructures import MultiDict

import projens
import projens.audits
import projens.lib.notify
from projens.audits.propagation import PropagationAudit
from projens.exceptions import ConfigError, ProjensException
from projens.forms import FORMS
from projens.lib.agent import (
    EVAL, TRAIN, AgentState, EpisodeRecord, PeDqnConfig, run_episode,
    save_agent)
from projens.lib.distribution import inverse_cdf, make_particle
from projens.lib.envs import DeepSea, toy_regression_sample
from projens.lib.neural import AdamState, forward, make_member, regress
from projens.lib.projection import CategoricalSupport, ProjectionKind
from projens.log_utils import get_file_handler, set_run_context


LOG = logging.getLogger('projens.cli')

REGRET_HEADER = ('size', 'seed', 'variant', 'episodes_to_solve',
                 'total_regret')
VISITS_HEADER = ('size', 'seed', 'variant', 'episodes', 'unique_states',
                 'unique_pairs')
TOYREG_LEVELS = np.arange(1, 10) / 10.0
TOYREG_HEADER = ('x', 'model') + tuple(
    'q%d' % round(100 * level) for level in TOYREG_LEVELS)


class EXITCODE(enum.IntEnum):
    ''' Exit codes of the command line. '''
    SUCCESS = 0
    FAILURE = 1
    CONFIGERROR = 2


def parse_overrides(extra):
    """ Turn ``--name value`` and ``--name=value`` arguments into
    ``(name, value)`` pairs; dashes in names become underscores.
    """
    overrides = []
    extra = list(extra)
    while extra:
        item = extra.pop(0)
        if not item.startswith('--') or len(item) < 3:
            raise ConfigError('Unexpected argument: %s' % item)
        name, sep, value = item[2:].partition('=')
        if not sep:
            if not extra:
                raise ConfigError('No value given for --%s' % name)
            value = extra.pop(0)
        overrides.append((name.replace('-', '_'), value))
    return overrides


def to_text(value):
    ''' Render a configuration value as a form input. '''
    if isinstance(value, (list, tuple)):
        return ','.join(str(item) for item in value)
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_config_file(path):
    """ Run a configuration file and return the names it defines.

    Names starting with an underscore and imported modules are left
    out; every other name, whatever its case, is returned so unknown
    keys can be reported.

    :raise ConfigError: when the file cannot be read or run

    """
    namespace = {'__file__': path}
    try:
        with open(path) as stream:
            exec(compile(stream.read(), path, 'exec'), namespace)
    except Exception as err:
        raise ConfigError('Could not read %s: %s' % (path, err))
    return dict(
        (key, value) for key, value in namespace.items()
        if not key.startswith('_')
        and not isinstance(value, types.ModuleType))


def load_run_config(command, config_path=None, overrides=None):
    """ Resolve the configuration of a subcommand.

    Defaults come from ``projens.CONFIG``, then the configuration file,
    then the command line overrides; the result is validated by the
    subcommand's form.

    :arg command: ``audit``, ``deepsea`` or ``toyreg``
    :kwarg config_path: a file of ``KEY = value`` lines
    :kwarg overrides: ``(name, value)`` pairs from the command line
    :return: a ``munch.Munch`` of the validated values
    :raise ConfigError: on an unreadable file, unknown keys or invalid
        values

    """
    config = flask.Config(projens.CONFIG.root_path)
    config.update(projens.CONFIG)
    if config_path:
        user = read_config_file(os.path.abspath(config_path))
        errors = []
        for key in sorted(set(user) - set(config)):
            if key.upper() in config:
                errors.append('Unknown configuration key %s, keys are upper '
                              'case: %s' % (key, key.upper()))
            else:
                errors.append('Unknown configuration key %s' % key)
        if errors:
            raise ConfigError(errors)
        config.update(user)

    form_cls = FORMS[command]
    names = list(form_cls()._fields)
    formdata = MultiDict()
    for name in names:
        formdata[name] = to_text(config[form_cls.config_key(name)])

    errors = []
    for name, value in overrides or []:
        if name not in names:
            errors.append('Unknown option --%s' % name.replace('_', '-'))
        else:
            formdata[name] = value
    if errors:
        raise ConfigError(errors)

    form = form_cls(formdata=formdata)
    if not form.validate():
        raise ConfigError([
            '%s: %s' % (form_cls.config_key(field.name), error)
            for field in form for error in field.errors])
    return munch.Munch(form.data)


def write_snapshot(path, command, cfg):
    ''' Write the resolved configuration as a file ``--config`` reads. '''
    form_cls = FORMS[command]
    with open(path, 'w') as stream:
        for name in form_cls()._fields:
            stream.write('%s = %r\n' % (form_cls.config_key(name), cfg[name]))


def source_digest():
    ''' Git-style sha1 over the package sources. '''
    root = os.path.dirname(os.path.abspath(projens.__file__))
    digest = hashlib.sha1()
    for folder, dirs, files in sorted(os.walk(root)):
        dirs.sort()
        for filename in sorted(files):
            if not filename.endswith('.py'):
                continue
            path = os.path.join(folder, filename)
            with open(path, 'rb') as stream:
                content = stream.read()
            blob = hashlib.sha1(b'blob %d\0' % len(content) + content)
            digest.update(os.path.relpath(path, root).encode('utf-8'))
            digest.update(blob.hexdigest().encode('ascii'))
    return digest.hexdigest()


def write_version(path):
    with open(path, 'w') as stream:
        stream.write('projens %s (sha1 %s)\n' % (
            projens.__version__, source_digest()))


def _write_csv(path, header, rows):
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream)
        writer.writerow(header)
        writer.writerows(rows)


def dump_tables(cfg, outdir):
    """ Write ``fixed_point.csv``, ``disagreement.csv`` and ``bonus.csv``,
    one row per (state, action), for the first propagation MDP.
    """
    set_run_context(command='audit', audit='tables', seed=cfg.seed)
    tables = PropagationAudit.reference_tables(cfg)
    for filename, table in zip(
            ('fixed_point.csv', 'disagreement.csv', 'bonus.csv'), tables):
        with open(os.path.join(outdir, filename), 'w') as stream:
            table.to_csv(stream)
    LOG.info('Wrote the reference tables, largest disagreement %.3g, '
             'largest bonus %.3g', np.max(tables[1].values),
             np.max(tables[2].values))


def cmd_audit(cfg, outdir):
    """ Run the configured audits and write ``audits.json``.

    :return: SUCCESS when every audit passed, FAILURE otherwise

    """
    reports = []

    def collect(sender, msg=None):
        reports.append(msg)

    with projens.lib.notify.AUDIT_FINISHED.connected_to(collect):
        for audit in projens.audits.get_audits(cfg.names):
            set_run_context(command='audit', audit=audit.name, seed=cfg.seed)
            report = audit.run(cfg)
            LOG.info('%s audit %s: %d checks, max violation %s',
                     audit.name, 'passed' if report.passed else 'FAILED',
                     report.trials, report.max_violation)
            projens.lib.notify.log(audit, 'audit.finished', report)

    with open(os.path.join(outdir, 'audits.json'), 'w') as stream:
        json.dump([report.to_json() for report in reports], stream,
                  indent=2, sort_keys=True)
    if cfg.dump_tables:
        dump_tables(cfg, outdir)
    if all(report.passed for report in reports):
        return EXITCODE.SUCCESS
    return EXITCODE.FAILURE


def run_deepsea_job(job):
    """ Train one variant on one deep sea instance.

    :arg job: ``(cfg, outdir, size, seed, variant)``
    :return: the regret and visits rows of the job

    """
    cfg, outdir, size, seed, variant = job
    set_run_context(command='deepsea', size=size, seed=seed, variant=variant)
    train_env = DeepSea(size, cfg.stochastic, seed)
    eval_env = DeepSea(size, cfg.stochastic, seed)
    st = AgentState(
        PeDqnConfig.from_config(cfg, variant, horizon=size),
        train_env.obs_size, train_env.n_actions, seed)

    name = '%s_N%d_s%d' % (variant, size, seed)
    solved_at = None
    regret = 0
    with open(os.path.join(outdir, 'episodes_%s.csv' % name), 'w',
              newline='') as stream:
        writer = csv.writer(stream)
        writer.writerow(EpisodeRecord.CSV_HEADER)

        def write_record(sender, msg=None):
            writer.writerow(msg.to_csv_row())

        with projens.lib.notify.EPISODE_FINISHED.connected_to(
                write_record, sender=st):
            for episode in range(1, cfg.episodes + 1):
                record = run_episode(st, train_env, TRAIN, cfg.regret_threshold)
                regret += int(record.regret)
                if episode % cfg.eval_every == 0:
                    evaluation = run_episode(
                        st, eval_env, EVAL, cfg.regret_threshold)
                    if solved_at is None \
                            and evaluation.total >= cfg.solve_threshold:
                        solved_at = episode
                        LOG.info('Solved after %d episodes', episode)

    if cfg.checkpoint:
        save_agent(st, os.path.join(outdir, 'agent_%s.ckpt' % name))
    LOG.info('Finished %d episodes, regret %d', cfg.episodes, regret)
    return (
        (size, seed, variant, '' if solved_at is None else solved_at, regret),
        (size, seed, variant, cfg.episodes, train_env.unique_states(),
         train_env.unique_pairs()),
    )


def cmd_deepsea(cfg, outdir):
    """ Train every (variant, size, seed) and write the per-episode CSVs,
    ``regret.csv``, ``visits.csv`` and ``summary.json``.
    """
    jobs = [
        (cfg, outdir, size, seed, variant)
        for variant in cfg.variants
        for size in cfg.sizes
        for seed in cfg.seeds]
    if not cfg.episodes:
        jobs = []

    if cfg.jobs > 1 and len(jobs) > 1:
        pool = multiprocessing.Pool(cfg.jobs)
        try:
            results = pool.map(run_deepsea_job, jobs)
        finally:
            pool.close()
            pool.join()
    else:
        results = [run_deepsea_job(job) for job in jobs]

    _write_csv(os.path.join(outdir, 'regret.csv'), REGRET_HEADER,
               [regret for regret, _ in results])
    _write_csv(os.path.join(outdir, 'visits.csv'), VISITS_HEADER,
               [visits for _, visits in results])
    summary = summarize_regret([regret for regret, _ in results])
    with open(os.path.join(outdir, 'summary.json'), 'w') as stream:
        json.dump(summary, stream, indent=2, sort_keys=True)
    for entry in summary:
        LOG.info('%s on N=%d: solved %d of %d seeds', entry['variant'],
                 entry['size'], entry['solved'], entry['seeds'])
    return EXITCODE.SUCCESS


def summarize_regret(rows):
    """ Aggregate ``regret.csv`` rows per (variant, size).

    :return: one dict per (variant, size) with the number of seeds, of
        seeds solved, the median episodes to solve among those and the
        mean total regret

    """
    groups = {}
    for size, seed, variant, solved_at, regret in rows:
        groups.setdefault((variant, size), []).append((solved_at, regret))
    summary = []
    for (variant, size), runs in sorted(groups.items()):
        solved = [solved_at for solved_at, _ in runs if solved_at != '']
        summary.append({
            'variant': variant,
            'size': size,
            'seeds': len(runs),
            'solved': len(solved),
            'median_episodes_to_solve':
                float(np.median(solved)) if solved else None,
            'mean_regret': float(np.mean([regret for _, regret in runs])),
        })
    return summary


def _quantile_lines(locations, probs):
    ''' The nine decile levels of each distribution of a batch. '''
    return [
        inverse_cdf(make_particle(locs, weights), TOYREG_LEVELS)
        for locs, weights in zip(locations, probs)]


def cmd_toyreg(cfg, outdir):
    """ Fit a quantile and a categorical member to the toy regression data
    and write their quantile lines over a grid to ``toyreg.csv``.
    """
    set_run_context(command='toyreg', seed=cfg.seed)
    data = np.array(toy_regression_sample(
        cfg.seed, cfg.samples, cfg.clusters, cfg.noise, cfg.noise_slope))
    _write_csv(os.path.join(outdir, 'toyreg_data.csv'), ('x', 'y'),
               [(repr(x), repr(y)) for x, y in data.tolist()])
    inputs, outputs = data[:, :1], data[:, 1:]

    support = CategoricalSupport(cfg.v_min, cfg.v_max, cfg.atoms)
    member_seeds, batch_seed = np.random.SeedSequence(cfg.seed).spawn(2)
    widths = [1] + cfg.hidden
    seeds = member_seeds.spawn(2)
    members = [
        make_member(ProjectionKind.QUANTILE, seeds[0], widths, 1, cfg.atoms,
                    prior_scale=cfg.prior_scale_quantile),
        make_member(ProjectionKind.CATEGORICAL, seeds[1], widths, 1,
                    cfg.atoms, support, cfg.prior_scale_categorical),
    ]
    optims = [AdamState(member.net.params, cfg.lr, cfg.adam_eps)
              for member in members]

    rng = np.random.default_rng(batch_seed)
    batch_size = min(cfg.batch_size, len(data))
    actions = np.zeros(batch_size, dtype=np.intp)
    for step in range(cfg.steps):
        index = rng.choice(len(data), size=batch_size, replace=False)
        target = (outputs[index], np.ones((batch_size, 1)))
        stats = regress(members, optims, inputs[index], actions,
                        [target, target], 'toyreg')
        if (step + 1) % 500 == 0:
            LOG.debug('Step %d: %s', step + 1, stats)

    grid = np.linspace(cfg.grid_min, cfg.grid_max, cfg.grid_points)
    head = forward(members, grid[:, None]).take(
        np.zeros(len(grid), dtype=np.intp))
    lines = {
        'quantile': _quantile_lines(*head.member_atoms(0)),
        'categorical': _quantile_lines(*head.member_atoms(1)),
        'mixture': _quantile_lines(*head.atoms()),
    }
    rows = []
    for index, x in enumerate(grid.tolist()):
        for model in ('quantile', 'categorical', 'mixture'):
            rows.append([repr(x), model] + [
                repr(value) for value in lines[model][index].tolist()])
    _write_csv(os.path.join(outdir, 'toyreg.csv'), TOYREG_HEADER, rows)
    LOG.info('Wrote quantile lines over %d grid points', len(grid))
    return EXITCODE.SUCCESS


COMMANDS = {
    'audit': (cmd_audit, 'Run the numeric audits of the tabular bounds'),
    'deepsea': (cmd_deepsea, 'Train agents on deep sea'),
    'toyreg': (cmd_toyreg, 'Fit the toy regression demo'),
}


def get_parser():
    ''' The argument parser of the projens command. '''
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config', help='Configuration file of KEY = value lines')
    common.add_argument(
        '--output', help='Run directory (default: OUTPUT_DIR/<command>)')

    parser = argparse.ArgumentParser(
        prog='projens',
        description='Projection ensembles for distributional RL. Any '
        'configuration key of a subcommand can be overridden with '
        '--<key> <value>, e.g. `projens audit --trials 5`.')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    for name in sorted(COMMANDS):
        subparsers.add_parser(
            name, parents=[common], help=COMMANDS[name][1])
    return parser


def main(argv=None):
    """ Entry point of the projens command.

    :return: an :class:`EXITCODE`

    """
    parser = get_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        cfg = load_run_config(
            args.command, args.config, parse_overrides(extra))
    except ConfigError as err:
        for message in err.errors:
            LOG.error(message)
        return EXITCODE.CONFIGERROR

    projens.LOG.setLevel(cfg.log_level)
    projens.handler.setLevel(cfg.log_level)
    outdir = args.output or os.path.join(cfg.output_dir, args.command)
    if not os.path.exists(outdir):
        os.makedirs(outdir)
    write_snapshot(os.path.join(outdir, 'config.cfg'), args.command, cfg)
    write_version(os.path.join(outdir, 'version.txt'))

    file_handler = get_file_handler(
        os.path.join(outdir, 'projens.log'), cfg.log_level)
    projens.LOG.addHandler(file_handler)
    try:
        LOG.info('Running %s into %s', args.command, outdir)
        return COMMANDS[args.command][0](cfg, outdir)
    except ProjensException:
        LOG.exception('The %s run failed', args.command)
        return EXITCODE.FAILURE
    finally:
        projens.LOG.removeHandler(file_handler)
        file_handler.close()
