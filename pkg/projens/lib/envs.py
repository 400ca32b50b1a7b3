# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

The deep sea exploration environment and the toy regression data set.

"""

import numpy as np

import projens.default_config as defaults
from projens.exceptions import ArgumentError, UsageError


LEFT = 'left'
RIGHT = 'right'


class DeepSea(object):
    """ N x N grid walked from the top-left corner, one row down per step.

    Each cell maps the actions {0, 1} to a move left or right through a
    random action map drawn from ``seed``. Moving right costs 0.01 / N;
    reaching the bottom row with a right move from the last column earns
    a reward of 1. The stochastic variant inverts the executed move with
    probability 1 / N.

    :arg size: grid size N, also the episode length
    :kwarg stochastic: whether moves may be inverted
    :kwarg seed: seed of the action map and of the move inversions

    """

    def __init__(self, size, stochastic=False, seed=0):
        size = int(size)
        if size < 1:
            raise ArgumentError('The grid size must be positive, got %d' % size)
        self.size = size
        self.stochastic = bool(stochastic)
        self.seed = seed
        self.flip_prob = 1.0 / size if stochastic else 0.0
        self.move_cost = 0.01 / size

        map_seed, flip_seed = np.random.SeedSequence(seed).spawn(2)
        # action_map[row, col] is the action moving right in that cell
        self.action_map = np.random.default_rng(map_seed).integers(
            0, 2, size=(size, size))
        self._rng = np.random.default_rng(flip_seed)

        self.visits = np.zeros((size, size), dtype=np.int64)
        # pair_visits[row, col, action] counts the actions taken in a cell
        self.pair_visits = np.zeros((size, size, 2), dtype=np.int64)
        self.moves = 0
        self.flips = 0
        self.row = 0
        self.col = 0
        self.done = True

    def __repr__(self):
        return '<DeepSea(size=%d, stochastic=%s, seed=%r)>' % (
            self.size, self.stochastic, self.seed)

    @property
    def obs_size(self):
        return self.size * self.size

    @property
    def n_actions(self):
        return 2

    def observation(self):
        """ One-hot encoding of (row, col); all zeros once done. """
        obs = np.zeros(self.obs_size)
        if not self.done:
            obs[self.row * self.size + self.col] = 1.0
        return obs

    def reset(self):
        """ Start a new episode in the top-left cell. """
        self.row = 0
        self.col = 0
        self.done = False
        self.visits[0, 0] += 1
        return self.observation()

    def step(self, action):
        """ Apply ``action`` and return ``(observation, reward, done)``.

        :raise UsageError: if the episode is over
        :raise ArgumentError: if the action is not 0 or 1

        """
        if self.done:
            raise UsageError('The episode is over, reset the environment')
        if action not in (0, 1):
            raise ArgumentError('Actions are 0 or 1, got %r' % (action,))

        self.pair_visits[self.row, self.col, action] += 1
        right = action == self.action_map[self.row, self.col]
        if self.flip_prob and self._rng.random() < self.flip_prob:
            right = not right
            self.flips += 1
        self.moves += 1

        reward = 0.0
        from_last_column = self.col == self.size - 1
        if right:
            reward -= self.move_cost
            self.col = min(self.col + 1, self.size - 1)
        else:
            self.col = max(self.col - 1, 0)
        self.row += 1

        if self.row == self.size:
            self.done = True
            if right and from_last_column:
                reward += 1.0
        else:
            self.visits[self.row, self.col] += 1
        return self.observation(), reward, self.done

    def optimal_actions(self):
        """ The action sequence moving right at every step. """
        return [int(self.action_map[row, row]) for row in range(self.size)]

    def unique_states(self):
        """ Number of cells visited at least once. """
        return int(np.count_nonzero(self.visits))

    def unique_pairs(self):
        """ Number of (cell, action) pairs taken at least once. """
        return int(np.count_nonzero(self.pair_visits))


def toy_regression_sample(
        seed, n, clusters=None, noise=None, noise_slope=None):
    """ Clustered one-dimensional regression data.

    x is drawn uniformly in a cluster picked uniformly among the
    (low, high) bounds listed consecutively in ``clusters``, then
    y = sin(3x) + (noise + noise_slope |x|) * N(0, 1).

    :return: the list of ``(x, y)`` pairs

    """
    if clusters is None:
        clusters = defaults.TOYREG_CLUSTERS
    if noise is None:
        noise = defaults.TOYREG_NOISE
    if noise_slope is None:
        noise_slope = defaults.TOYREG_NOISE_SLOPE
    if int(n) < 1:
        raise ArgumentError('Need at least one sample, got %r' % n)
    bounds = np.asarray(clusters, dtype=np.float64)
    if bounds.size == 0 or bounds.size % 2 or np.any(bounds[1::2] < bounds[0::2]):
        raise ArgumentError(
            'Clusters are (low, high) pairs, got %r' % (clusters,))
    bounds = bounds.reshape(-1, 2)

    rng = np.random.default_rng(seed)
    chosen = bounds[rng.integers(0, len(bounds), size=int(n))]
    x = rng.uniform(chosen[:, 0], chosen[:, 1])
    y = np.sin(3.0 * x) + (noise + noise_slope * np.abs(x)) \
        * rng.standard_normal(int(n))
    return list(zip(x.tolist(), y.tolist()))
