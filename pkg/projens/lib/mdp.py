# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Finite MDPs with finitely supported rewards, the exact distributional
Bellman operator, projected fixed-point iteration, ensemble disagreement
and the propagation of one-step disagreement bonuses.

"""

import logging

import numpy as np

from projens.exceptions import ArgumentError
from projens.lib.distribution import (
    NORMALIZATION_TOLERANCE, ParticleDistribution, dirac, make_particle,
    mean, wasserstein)
from projens.lib.projection import contraction_modulus, projection_mixture


LOG = logging.getLogger('projens.lib.mdp')


def _check_stochastic(matrix, what):
    if np.any(matrix < 0):
        raise ArgumentError('%s has negative probabilities' % what)
    if np.any(np.abs(matrix.sum(axis=-1) - 1.0) > NORMALIZATION_TOLERANCE):
        raise ArgumentError('%s rows must sum to one' % what)


class FiniteMdp(object):
    """ A finite MDP.

    :arg rewards: ``rewards[s][a]`` is the reward distribution of (s, a)
    :arg transitions: array of shape (S, A, S) with P(s' | s, a)
    :arg gamma: discount in [0, 1)
    :kwarg start: initial state distribution, uniform by default

    """

    def __init__(self, rewards, transitions, gamma, start=None):
        transitions = np.asarray(transitions, dtype=np.float64)
        if transitions.ndim != 3 or transitions.shape[0] != transitions.shape[2]:
            raise ArgumentError(
                'Transitions must have shape (S, A, S), got %s'
                % (transitions.shape,))
        n_states, n_actions = transitions.shape[:2]
        _check_stochastic(transitions, 'The transition matrix')
        if len(rewards) != n_states or any(
                len(row) != n_actions for row in rewards):
            raise ArgumentError('Need one reward distribution per (s, a)')
        if not 0.0 <= gamma < 1.0:
            raise ArgumentError('The discount lies in [0, 1), got %r' % gamma)

        if start is None:
            start = np.full(n_states, 1.0 / n_states)
        start = np.asarray(start, dtype=np.float64)
        if start.shape != (n_states,):
            raise ArgumentError('The start distribution needs %d entries'
                                % n_states)
        _check_stochastic(start, 'The start distribution')

        self.rewards = [list(row) for row in rewards]
        self.transitions = transitions
        self.gamma = float(gamma)
        self.start = start
        self.r_min = min(float(d.locations[0]) for row in rewards for d in row)
        self.r_max = max(float(d.locations[-1]) for row in rewards for d in row)

    @property
    def n_states(self):
        return self.transitions.shape[0]

    @property
    def n_actions(self):
        return self.transitions.shape[1]

    def return_range(self):
        """ Bounds [R_min / (1 - gamma), R_max / (1 - gamma)] of every
        return distribution.
        """
        scale = 1.0 / (1.0 - self.gamma)
        return self.r_min * scale, self.r_max * scale

    def __repr__(self):
        return '<FiniteMdp(%d states, %d actions, gamma=%r)>' % (
            self.n_states, self.n_actions, self.gamma)


class Policy(object):
    """ A stochastic policy, ``probs[s, a] = pi(a | s)``. """

    def __init__(self, probs):
        probs = np.asarray(probs, dtype=np.float64)
        if probs.ndim != 2:
            raise ArgumentError('Policy probabilities must have shape (S, A)')
        _check_stochastic(probs, 'The policy')
        self.probs = probs

    @classmethod
    def uniform(cls, n_states, n_actions):
        return cls(np.full((n_states, n_actions), 1.0 / n_actions))

    @classmethod
    def deterministic(cls, actions, n_actions):
        actions = np.asarray(actions, dtype=np.intp)
        probs = np.zeros((actions.size, n_actions))
        probs[np.arange(actions.size), actions] = 1.0
        return cls(probs)

    @classmethod
    def random(cls, rng, n_states, n_actions):
        return cls(rng.dirichlet(np.ones(n_actions), size=n_states))

    def actions(self):
        """ The most likely action of every state. """
        return np.argmax(self.probs, axis=1)


class ReturnTable(object):
    """ One return distribution per state-action pair. """

    def __init__(self, dist):
        self.dist = [list(row) for row in dist]
        if not self.dist or not self.dist[0]:
            raise ArgumentError('A return table needs at least one cell')
        if any(len(row) != len(self.dist[0]) for row in self.dist):
            raise ArgumentError('Every state needs the same number of actions')

    @classmethod
    def constant(cls, n_states, n_actions, dist):
        return cls([[dist] * n_actions for _ in range(n_states)])

    @property
    def n_states(self):
        return len(self.dist)

    @property
    def n_actions(self):
        return len(self.dist[0])

    @property
    def shape(self):
        return self.n_states, self.n_actions

    def __getitem__(self, cell):
        state, action = cell
        return self.dist[state][action]

    def cells(self):
        """ Iterate over ``(state, action, distribution)``. """
        for state, row in enumerate(self.dist):
            for action, dist in enumerate(row):
                yield state, action, dist

    def map(self, function):
        """ New table with ``function`` applied to every distribution. """
        return ReturnTable([[function(d) for d in row] for row in self.dist])

    def means(self):
        return np.array([[mean(d) for d in row] for row in self.dist])

    def to_csv(self, stream):
        """ Write ``state,action,loc_0,w_0,...`` rows. """
        for state, action, dist in self.cells():
            stream.write('%d,%d,%s\n' % (state, action, dist.to_csv_row()))

    @classmethod
    def from_csv(cls, stream):
        """ Read back a table written by :meth:`to_csv`. """
        return cls([[ParticleDistribution.from_csv_row(rest) for rest in row]
                    for row in _read_cells(stream)])


class BonusTable(object):
    """ A non-negative value per state-action pair. """

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2:
            raise ArgumentError('Bonus values must have shape (S, A)')
        if np.any(values < 0):
            raise ArgumentError('Bonus values must be non-negative')
        self.values = values

    def __getitem__(self, cell):
        return float(self.values[cell])

    def to_csv(self, stream):
        """ Write ``state,action,bonus`` rows. """
        for (state, action), value in np.ndenumerate(self.values):
            stream.write('%d,%d,%r\n' % (state, action, float(value)))

    @classmethod
    def from_csv(cls, stream):
        """ Read back a table written by :meth:`to_csv`. """
        rows = _read_cells(stream)
        try:
            values = [[float(rest) for rest in row] for row in rows]
        except ValueError as err:
            raise ArgumentError('Invalid bonus value: %s' % err)
        return cls(values)


def _read_cells(stream):
    """ Parse ``state,action,rest`` rows into a complete (S, A) grid of
    the ``rest`` strings.
    """
    cells = {}
    for number, line in enumerate(stream, 1):
        if not line.strip():
            continue
        state, action, rest = (line.strip().split(',', 2) + [''])[:3]
        try:
            cell = int(state), int(action)
        except ValueError:
            raise ArgumentError('Line %d does not start with state,action'
                                % number)
        if cell in cells:
            raise ArgumentError('Cell %s given twice' % (cell,))
        cells[cell] = rest
    if not cells:
        raise ArgumentError('No cells to read')
    n_states = max(state for state, _ in cells) + 1
    n_actions = max(action for _, action in cells) + 1
    if len(cells) != n_states * n_actions or any(
            state < 0 or action < 0 for state, action in cells):
        raise ArgumentError('The cells do not cover a %d x %d table'
                            % (n_states, n_actions))
    return [[cells[state, action] for action in range(n_actions)]
            for state in range(n_states)]


def _check_shapes(mdp, pi, eta=None):
    if pi.probs.shape != (mdp.n_states, mdp.n_actions):
        raise ArgumentError('The policy does not match the MDP')
    if eta is not None and eta.shape != (mdp.n_states, mdp.n_actions):
        raise ArgumentError('The return table does not match the MDP')


def _backup_atoms(eta, mdp, pi, state, action):
    """ Unnormalized atoms of (T eta)(state, action). """
    reward = mdp.rewards[state][action]
    successors = mdp.transitions[state, action][:, None] * pi.probs
    locations, weights = [], []
    for next_state, next_action in zip(*np.nonzero(successors)):
        dist = eta.dist[next_state][next_action]
        locations.append((
            reward.locations[:, None]
            + mdp.gamma * dist.locations[None, :]).ravel())
        weights.append((
            reward.weights[:, None]
            * (successors[next_state, next_action] * dist.weights)[None, :]
        ).ravel())
    return np.concatenate(locations), np.concatenate(weights)


def bellman_backup(eta, mdp, pi):
    """ Exact distributional Bellman operator.

    Every cell becomes the finite mixture, over rewards r and successors
    (s', a'), of eta(s', a') scaled by gamma and shifted by r.
    """
    _check_shapes(mdp, pi, eta)
    return ReturnTable([
        [make_particle(*_backup_atoms(eta, mdp, pi, state, action))
         for action in range(mdp.n_actions)]
        for state in range(mdp.n_states)])


def apply_projected_operator(eta, mdp, pi, specs):
    """ The projection mixture of the Bellman backup of ``eta``. """
    _check_shapes(mdp, pi, eta)
    return ReturnTable([
        [projection_mixture(
            make_particle(*_backup_atoms(eta, mdp, pi, state, action)), specs)
         for action in range(mdp.n_actions)]
        for state in range(mdp.n_states)])


def ensemble_members(eta, mdp, pi, specs):
    """ The individual projections Pi_i T eta, one table per member. """
    backup = bellman_backup(eta, mdp, pi)
    return [backup.map(spec.project) for spec in specs]


def cellwise_wasserstein(eta_a, eta_b, p=1.0):
    """ Array of w_p distances between the two tables, cell by cell. """
    if eta_a.shape != eta_b.shape:
        raise ArgumentError('The return tables have different shapes')
    return np.array([
        [wasserstein(d_a, d_b, p) for d_a, d_b in zip(row_a, row_b)]
        for row_a, row_b in zip(eta_a.dist, eta_b.dist)])


def sup_wasserstein(eta_a, eta_b, p=1.0):
    """ Supremum over cells of the w_p distance. """
    return float(np.max(cellwise_wasserstein(eta_a, eta_b, p)))


def greedy_policy(eta):
    """ Deterministic policy maximizing the mean, lowest action on ties. """
    return Policy.deterministic(np.argmax(eta.means(), axis=1), eta.n_actions)


def policy_matrix(mdp, pi):
    """ The (SA, SA) matrix of P(s' | s, a) pi(a' | s'). """
    _check_shapes(mdp, pi)
    size = mdp.n_states * mdp.n_actions
    return np.einsum('ijk,kl->ijkl', mdp.transitions, pi.probs).reshape(
        size, size)


class IterationResult(object):
    """ Outcome of :func:`iterate_projection_mixture`.

    ``history[k]`` is the sup w_1 step from the k-th iterate to the next.
    """

    def __init__(self, table, iterations, history, converged):
        self.table = table
        self.iterations = iterations
        self.history = history
        self.converged = converged

    def __repr__(self):
        return '<IterationResult(iterations=%d, converged=%s)>' % (
            self.iterations, self.converged)


def iterate_projection_mixture(
        mdp, pi, specs, tol=1e-8, max_iter=1000, init=None):
    """ Iterate eta <- Omega_M T eta from a table of Diracs at zero.

    :arg mdp: the :class:`FiniteMdp`
    :arg pi: the evaluated :class:`Policy`
    :arg specs: the :class:`ProjectionSpec` members
    :kwarg tol: stop at the first iterate whose step is below ``tol``
    :kwarg max_iter: give up after this many operator applications
    :kwarg init: starting table instead of the Diracs at zero
    :return: an :class:`IterationResult`; ``converged`` is False when the
        iteration cap was hit

    """
    _check_shapes(mdp, pi, init)
    bound = contraction_modulus(specs) * mdp.gamma
    if bound >= 1:
        LOG.warning(
            'c_bar * gamma = %.4g >= 1, the projected operator may not '
            'contract', bound)

    eta = init or ReturnTable.constant(mdp.n_states, mdp.n_actions, dirac(0.0))
    history = []
    for iteration in range(max_iter):
        following = apply_projected_operator(eta, mdp, pi, specs)
        step = sup_wasserstein(eta, following)
        history.append(step)
        if step < tol:
            LOG.debug('Fixed point reached after %d iterations', iteration)
            return IterationResult(eta, iteration, history, True)
        eta = following

    LOG.warning(
        'No fixed point within %d iterations, last step %.3g', max_iter,
        history[-1] if history else float('nan'))
    return IterationResult(eta, max_iter, history, False)


def ensemble_disagreement(members):
    """ Average pairwise w_1 distance between member tables.

    Off-diagonal pairs only, normalized by M(M - 1).
    """
    if len(members) < 2:
        raise ArgumentError('Disagreement needs at least two members')
    shape = members[0].shape
    if any(member.shape != shape for member in members):
        raise ArgumentError('Ensemble members have different shapes')

    total = np.zeros(shape)
    for i, first in enumerate(members):
        for second in members[i + 1:]:
            total += cellwise_wasserstein(first, second)
    count = len(members)
    return BonusTable(2.0 * total / (count * (count - 1)))


def iter_bonus(mdp, pi, one_step, c_bar):
    """ Yield the bonus iterates b_{k+1} = u + c_bar gamma P_pi b_k from
    b_0 = 0, endlessly.
    """
    matrix = c_bar * mdp.gamma * policy_matrix(mdp, pi)
    one_step = one_step.values.ravel()
    bonus = np.zeros_like(one_step)
    while True:
        bonus = one_step + matrix.dot(bonus)
        yield bonus.reshape(mdp.n_states, mdp.n_actions)


def propagate_bonus(mdp, pi, one_step, c_bar, tol=1e-10, max_iter=100000):
    """ Fixed point of the bonus recursion, an upper bound on the
    distance to the projected fixed point.

    :raise ArgumentError: when ``c_bar * gamma >= 1``

    """
    if c_bar * mdp.gamma >= 1:
        raise ArgumentError(
            'Bonus propagation needs c_bar * gamma < 1, got %r'
            % (c_bar * mdp.gamma))
    previous = np.zeros((mdp.n_states, mdp.n_actions))
    for iteration, bonus in enumerate(iter_bonus(mdp, pi, one_step, c_bar)):
        step = np.max(np.abs(bonus - previous))
        if step < tol:
            return BonusTable(bonus)
        if iteration >= max_iter:
            LOG.warning(
                'Bonus not converged within %d iterations, last step %.3g',
                max_iter, step)
            return BonusTable(bonus)
        previous = bonus


def random_table(rng, n_states, n_actions, n_atoms, low, high):
    """ Table of K-atom equally weighted distributions with locations
    uniform in [low, high].
    """
    return ReturnTable([
        [make_particle(rng.uniform(low, high, n_atoms), np.ones(n_atoms))
         for _ in range(n_actions)]
        for _ in range(n_states)])


def sample_random_mdp(seed, n_states, n_actions, reward_atoms, gamma):
    """ Random MDP, deterministic given ``seed``.

    Transition rows and the start distribution are flat Dirichlet draws;
    each reward has between one and ``reward_atoms`` atoms in [0, 1].
    """
    if n_states < 1 or n_actions < 1 or reward_atoms < 1:
        raise ArgumentError('An MDP needs at least one state, action and '
                            'reward atom')
    rng = np.random.default_rng(seed)
    transitions = rng.dirichlet(
        np.ones(n_states), size=(n_states, n_actions))
    rewards = []
    for _ in range(n_states):
        row = []
        for _ in range(n_actions):
            count = rng.integers(1, reward_atoms + 1)
            row.append(make_particle(
                rng.uniform(0.0, 1.0, count), rng.dirichlet(np.ones(count))))
        rewards.append(row)
    start = rng.dirichlet(np.ones(n_states))
    return FiniteMdp(rewards, transitions, gamma, start)
