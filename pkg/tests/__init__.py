# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

"""

import unittest
import shutil
import sys
import tempfile
import os

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(
    os.path.abspath(__file__)), '..'))

import projens
from projens.lib.distribution import dirac, make_particle
from projens.lib.mdp import FiniteMdp


HERE = os.path.join(os.path.dirname(os.path.abspath(__file__)))

# Remove the log handlers for the tests
projens.LOG.handlers = []

# Randomized cases drawn by each property test
CASES = 1000


class ProjensTests(unittest.TestCase):
    """ Base class of the projens tests: a scratch folder and a seeded
    random generator per test.
    """

    seed = 20260101

    def __init__(self, method_name='runTest'):
        """ Constructor. """
        unittest.TestCase.__init__(self, method_name)
        self.path = None
        self.rng = None

    # pylint: disable=C0103
    def setUp(self):
        """ Set up the environnment, ran before every tests. """
        self.path = tempfile.mkdtemp(prefix='projens-tests')
        self.rng = np.random.default_rng(self.seed)

    # pylint: disable=C0103
    def tearDown(self):
        """ Remove the scratch folder, ran after every tests. """
        if self.path and os.path.exists(self.path):
            shutil.rmtree(self.path)

    def random_particle(self, max_atoms=6, low=-5.0, high=5.0):
        """ A random distribution with 1 to ``max_atoms`` atoms in
        [low, high].
        """
        count = self.rng.integers(1, max_atoms + 1)
        return make_particle(
            self.rng.uniform(low, high, count),
            self.rng.dirichlet(np.ones(count)))

    def assertParticleEqual(self, first, second, atol=1e-9):
        """ Both distributions have the same atoms. """
        self.assertTrue(
            first.isclose(second, atol=atol),
            '%r != %r' % (first, second))


def self_loop_mdp(reward=1.0, gamma=0.5):
    """ One state, one action, deterministic reward, looping forever. """
    return FiniteMdp([[dirac(reward)]], np.ones((1, 1, 1)), gamma)


def two_state_chain(gamma=0.9, rewards=(1.0, 0.0)):
    """ s0 -> s1 -> s1 with a single action and deterministic rewards. """
    transitions = np.zeros((2, 1, 2))
    transitions[0, 0, 1] = 1.0
    transitions[1, 0, 1] = 1.0
    return FiniteMdp(
        [[dirac(rewards[0])], [dirac(rewards[1])]], transitions, gamma,
        start=[1.0, 0.0])


def random_batch_particles(rng, count, max_atoms=5, low=-3.0, high=3.0):
    """ ``count`` random distributions. """
    dists = []
    for _ in range(count):
        atoms = rng.integers(1, max_atoms + 1)
        dists.append(make_particle(
            rng.uniform(low, high, atoms), rng.dirichlet(np.ones(atoms))))
    return dists


if __name__ == '__main__':
    SUITE = unittest.TestLoader().loadTestsFromTestCase(ProjensTests)
    unittest.TextTestRunner(verbosity=2).run(SUITE)
