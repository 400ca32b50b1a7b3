# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

"""

import unittest
import sys
import os

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(
    os.path.abspath(__file__)), '..'))

from projens.exceptions import ArgumentError, UsageError
from projens.lib.envs import DeepSea, toy_regression_sample
import tests


def play(env, actions):
    """ Run one episode with the given actions, return the total reward
    and the number of steps.
    """
    env.reset()
    total, steps, done = 0.0, 0, False
    for action in actions:
        _, reward, done = env.step(action)
        total += reward
        steps += 1
        if done:
            break
    return total, steps


class ProjensLibEnvstests(tests.ProjensTests):
    """ Tests for projens.lib.envs """

    def test_deepsea_right(self):
        """ Test moving right at every step reaches the treasure. """
        env = DeepSea(4, seed=3)
        total, steps = play(env, env.optimal_actions())
        self.assertAlmostEqual(total, 0.99)
        self.assertEqual(steps, 4)
        self.assertTrue(env.done)
        np.testing.assert_array_equal(np.diag(env.visits), [1, 1, 1, 1])
        self.assertEqual(env.unique_states(), 4)

    def test_deepsea_left(self):
        """ Test moving left at every step earns nothing. """
        env = DeepSea(4, seed=3)
        actions = [1 - action for action in env.optimal_actions()]
        total, steps = play(env, actions)
        self.assertEqual(total, 0.0)
        self.assertEqual(steps, 4)
        np.testing.assert_array_equal(env.visits[:, 0], [1, 1, 1, 1])

    def test_deepsea_pair_visits(self):
        """ Test the count of (cell, action) pairs taken. """
        env = DeepSea(4, seed=3)
        self.assertEqual(env.unique_pairs(), 0)
        play(env, env.optimal_actions())
        self.assertEqual(env.unique_pairs(), 4)
        self.assertEqual(env.pair_visits.sum(), 4)
        # Same cells, same actions
        play(env, env.optimal_actions())
        self.assertEqual(env.unique_pairs(), 4)
        self.assertEqual(env.unique_states(), 4)

        # The other action in the first cell only
        env.reset()
        env.step(1 - env.action_map[0, 0])
        self.assertEqual(env.unique_pairs(), 5)
        self.assertEqual(env.unique_states(), 5)
        self.assertEqual(
            env.pair_visits[0, 0, 1 - env.action_map[0, 0]], 1)
        self.assertEqual(env.pair_visits[0, 0, env.action_map[0, 0]], 2)

    def test_deepsea_observation(self):
        """ Test the one-hot observations. """
        env = DeepSea(3)
        self.assertEqual(env.obs_size, 9)
        self.assertEqual(env.n_actions, 2)
        obs = env.reset()
        np.testing.assert_array_equal(obs, [1, 0, 0, 0, 0, 0, 0, 0, 0])
        obs, _, done = env.step(env.action_map[0, 0])
        self.assertFalse(done)
        self.assertEqual(obs[4], 1.0)
        self.assertEqual(obs.sum(), 1.0)
        env.step(0)
        obs, _, done = env.step(0)
        self.assertTrue(done)
        self.assertEqual(obs.sum(), 0.0)

    def test_deepsea_errors(self):
        """ Test stepping outside of an episode or with a bad action. """
        env = DeepSea(2)
        self.assertRaises(UsageError, env.step, 0)
        env.reset()
        self.assertRaises(ArgumentError, env.step, 2)
        play(env, [0, 0])
        self.assertRaises(UsageError, env.step, 0)
        self.assertRaises(ArgumentError, DeepSea, 0)

    def test_deepsea_action_map(self):
        """ Test the action map only depends on the seed. """
        np.testing.assert_array_equal(
            DeepSea(6, seed=1).action_map, DeepSea(6, seed=1).action_map)
        self.assertFalse(np.array_equal(
            DeepSea(6, seed=1).action_map, DeepSea(6, seed=2).action_map))
        self.assertEqual(DeepSea(6).flip_prob, 0.0)
        self.assertAlmostEqual(DeepSea(6).move_cost, 0.01 / 6)

    def test_deepsea_stochastic(self):
        """ Test moves are inverted with probability 1 / N. """
        env = DeepSea(4, stochastic=True, seed=5)
        self.assertEqual(env.flip_prob, 0.25)
        for _ in range(25000):
            total, steps = play(env, env.optimal_actions())
            self.assertEqual(steps, 4)
        self.assertEqual(env.moves, 100000)
        # Within three standard errors of the flip probability
        stderr = np.sqrt(0.25 * 0.75 / env.moves)
        self.assertAlmostEqual(
            env.flips / float(env.moves), 0.25, delta=3 * stderr)

    def test_toy_regression_sample(self):
        """ Test the toy regression data set. """
        data = toy_regression_sample(4, 500)
        self.assertEqual(len(data), 500)
        self.assertEqual(data, toy_regression_sample(4, 500))
        self.assertNotEqual(data, toy_regression_sample(5, 500))
        for x, _ in data:
            self.assertTrue(-1.0 <= x <= -0.3 or 0.3 <= x <= 1.0)

        data = toy_regression_sample(
            4, 50, clusters=[2.0, 3.0], noise=0.0, noise_slope=0.0)
        for x, y in data:
            self.assertTrue(2.0 <= x <= 3.0)
            self.assertAlmostEqual(y, np.sin(3.0 * x), delta=1e-12)

        self.assertRaises(ArgumentError, toy_regression_sample, 1, 0)
        self.assertRaises(
            ArgumentError, toy_regression_sample, 1, 5, clusters=[1.0])
        self.assertRaises(
            ArgumentError, toy_regression_sample, 1, 5, clusters=[1.0, 0.0])


if __name__ == '__main__':
    SUITE = unittest.TestLoader().loadTestsFromTestCase(ProjensLibEnvstests)
    unittest.TextTestRunner(verbosity=2).run(SUITE)
