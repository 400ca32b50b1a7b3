# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

"""

import unittest
import sys
import os

import numpy as np
from scipy import stats

sys.path.insert(0, os.path.join(os.path.dirname(
    os.path.abspath(__file__)), '..'))

import projens.lib.distribution as dist_lib
from projens.exceptions import ArgumentError
from projens.lib.distribution import (
    ParticleDistribution, cdf, convolve, dirac, inverse_cdf, make_particle,
    mean, mixture, pushforward_affine, uniform, wasserstein,
    wasserstein_1_arrays, wasserstein_cdf_area)
import tests


class ProjensLibDistributiontests(tests.ProjensTests):
    """ Tests for projens.lib.distribution """

    def test_make_particle(self):
        """ Test the make_particle function of projens.lib.distribution. """
        self.assertEqual(
            make_particle([1, 0], [0.5, 0.5]).atoms, [(0.0, 0.5), (1.0, 0.5)])
        self.assertEqual(
            make_particle([2, 2], [0.3, 0.7]).atoms, [(2.0, 1.0)])
        self.assertEqual(
            make_particle([0, 1, 2], [1, 1, 2]).atoms,
            [(0.0, 0.25), (1.0, 0.25), (2.0, 0.5)])

        # Zero weights are dropped, near-equal locations merged
        dist = make_particle([3.0, 1.0, 1.0 + 1e-13], [0.0, 0.5, 0.5])
        self.assertEqual(len(dist), 1)
        self.assertAlmostEqual(dist.weights[0], 1.0)

        self.assertRaises(ArgumentError, make_particle, [], [])
        self.assertRaises(ArgumentError, make_particle, [0, 1], [1])
        self.assertRaises(ArgumentError, make_particle, [0, 1], [1, -0.1])
        self.assertRaises(ArgumentError, make_particle, [0, 1], [0, 0])
        self.assertRaises(ArgumentError, make_particle, [np.nan], [1])

    def test_make_particle_invariants(self):
        """ Test that random distributions are sorted and normalized. """
        for _ in range(tests.CASES):
            dist = self.random_particle(max_atoms=10)
            self.assertTrue(np.all(np.diff(dist.locations) > 0))
            self.assertTrue(np.all(dist.weights > 0))
            self.assertAlmostEqual(dist.weights.sum(), 1.0, delta=1e-9)

    def test_immutable(self):
        """ Test that the atoms of a distribution cannot be changed. """
        dist = make_particle([0, 1], [1, 1])
        self.assertRaises(ValueError, dist.locations.__setitem__, 0, 5.0)
        self.assertRaises(ValueError, dist.weights.__setitem__, 0, 5.0)

    def test_csv_row(self):
        """ Test the CSV serialization of a distribution. """
        dist = make_particle([0.1, -2.5], [0.25, 0.75])
        self.assertEqual(dist.to_csv_row(), '-2.5,0.75,0.1,0.25')
        self.assertParticleEqual(
            ParticleDistribution.from_csv_row('-2.5,0.75,0.1,0.25\n'), dist,
            atol=0)
        self.assertRaises(
            ArgumentError, ParticleDistribution.from_csv_row, '1,2,3')

    def test_cdf(self):
        """ Test the cdf function of projens.lib.distribution. """
        self.assertEqual(cdf(dirac(0), 0), 1.0)
        self.assertEqual(cdf(dirac(0), -1e-9), 0.0)
        self.assertEqual(cdf(make_particle([0, 1], [1, 1]), 0.5), 0.5)
        self.assertEqual(
            cdf(make_particle([0, 1, 2], [1, 1, 2]), 1), 0.5)
        np.testing.assert_allclose(
            cdf(make_particle([0, 1, 2], [1, 1, 2]), [-1, 0, 1.5, 2, 10]),
            [0, 0.25, 0.5, 1.0, 1.0])

    def test_inverse_cdf(self):
        """ Test the inverse_cdf function of projens.lib.distribution. """
        for tau in (0.0, 0.1, 0.5, 1.0):
            self.assertEqual(inverse_cdf(dirac(3.5), tau), 3.5)
        dist = uniform([0, 1, 2, 3])
        self.assertEqual(inverse_cdf(dist, 0.25), 0.0)
        self.assertEqual(inverse_cdf(dist, 0.26), 1.0)
        self.assertEqual(inverse_cdf(dist, 0.75), 2.0)
        self.assertEqual(inverse_cdf(dist, 0.0), 0.0)
        self.assertEqual(inverse_cdf(dist, 1.0), 3.0)
        np.testing.assert_array_equal(
            inverse_cdf(dist, [0.125, 0.375, 0.625, 0.875]), [0, 1, 2, 3])
        self.assertRaises(ArgumentError, inverse_cdf, dist, 1.5)
        self.assertRaises(ArgumentError, inverse_cdf, dist, -0.1)

    def test_inverse_cdf_is_generalized_inverse(self):
        """ Test inf{x : F(x) >= tau} against the CDF itself. """
        for _ in range(tests.CASES):
            dist = self.random_particle()
            tau = self.rng.uniform(0.001, 1.0)
            value = inverse_cdf(dist, tau)
            self.assertGreaterEqual(cdf(dist, value), tau - 1e-12)
            below = dist.locations[dist.locations < value]
            if below.size:
                self.assertLess(cdf(dist, below[-1]), tau)

    def test_mean(self):
        """ Test the mean function of projens.lib.distribution. """
        self.assertEqual(mean(make_particle([0, 2], [1, 1])), 1.0)
        self.assertEqual(mean(dirac(3)), 3.0)
        self.assertEqual(mean(make_particle([0, 4], [0.25, 0.75])), 3.0)

    def test_wasserstein(self):
        """ Test the wasserstein function of projens.lib.distribution. """
        self.assertEqual(wasserstein(dirac(-1), dirac(2.5)), 3.5)
        self.assertEqual(
            wasserstein(make_particle([0, 1], [1, 1]), dirac(0)), 0.5)
        dist = self.random_particle()
        for p in (1, 1.5, 2, 3, np.inf):
            self.assertEqual(wasserstein(dist, dist, p), 0.0)
        # w_2 of a half/half split against a Dirac
        self.assertAlmostEqual(
            wasserstein(make_particle([0, 2], [1, 1]), dirac(0), 2),
            np.sqrt(2.0), places=12)
        self.assertEqual(
            wasserstein(make_particle([0, 2], [1, 1]), dirac(0), np.inf), 2.0)
        self.assertRaises(ArgumentError, wasserstein, dist, dist, 0.5)

    def test_wasserstein_scipy_oracle(self):
        """ Test w_1 against scipy and against the CDF-area form. """
        for _ in range(tests.CASES):
            first = self.random_particle(max_atoms=8)
            second = self.random_particle(max_atoms=8)
            expected = stats.wasserstein_distance(
                first.locations, second.locations,
                first.weights, second.weights)
            self.assertAlmostEqual(
                wasserstein(first, second), expected, delta=1e-9)
            self.assertAlmostEqual(
                wasserstein(first, second),
                wasserstein_cdf_area(first, second), delta=1e-12)

    def test_wasserstein_1_arrays(self):
        """ Test the batched CDF-area distance. """
        firsts = [self.random_particle(max_atoms=1) for _ in range(5)]
        seconds = [self.random_particle(max_atoms=1) for _ in range(5)]
        got = wasserstein_1_arrays(
            np.array([[d.locations[0], d.locations[0]] for d in firsts]),
            np.full((5, 2), 0.5),
            np.array([[d.locations[0]] for d in seconds]),
            np.ones((5, 1)))
        expected = [wasserstein(a, b) for a, b in zip(firsts, seconds)]
        np.testing.assert_allclose(got, expected, atol=1e-12)

        locations = self.rng.uniform(-1, 1, (3, 4, 6))
        weights = self.rng.dirichlet(np.ones(6), size=(3, 4))
        others = self.rng.uniform(-1, 1, (3, 4, 6))
        got = wasserstein_1_arrays(locations, weights, others, weights)
        self.assertEqual(got.shape, (3, 4))
        self.assertAlmostEqual(
            got[2, 1],
            wasserstein(make_particle(locations[2, 1], weights[2, 1]),
                        make_particle(others[2, 1], weights[2, 1])),
            delta=1e-12)

    def test_metric_axioms(self):
        """ Test non-negativity, symmetry and the triangle inequality. """
        for _ in range(tests.CASES):
            first, second, third = [self.random_particle() for _ in range(3)]
            for p in (1, 2, np.inf):
                w_12 = wasserstein(first, second, p)
                self.assertGreaterEqual(w_12, 0.0)
                self.assertAlmostEqual(
                    w_12, wasserstein(second, first, p), delta=1e-12)
                self.assertLessEqual(
                    wasserstein(first, third, p),
                    w_12 + wasserstein(second, third, p) + 1e-9)

    def test_shift_and_scaling(self):
        """ Test shift invariance and scaling of w_p. """
        for _ in range(tests.CASES):
            first, second = self.random_particle(), self.random_particle()
            shift = self.rng.uniform(-10, 10)
            scale = self.rng.uniform(-3, 3)
            for p in (1, 2):
                distance = wasserstein(first, second, p)
                self.assertAlmostEqual(
                    wasserstein(pushforward_affine(first, shift, 1.0),
                                pushforward_affine(second, shift, 1.0), p),
                    distance, delta=1e-9)
                self.assertAlmostEqual(
                    wasserstein(pushforward_affine(first, 0.0, scale),
                                pushforward_affine(second, 0.0, scale), p),
                    abs(scale) * distance, delta=1e-9)

    def test_pushforward_scaling(self):
        """ Test w_1 of common pushforwards scales by gamma. """
        for _ in range(tests.CASES):
            first, second = self.random_particle(), self.random_particle()
            reward = self.rng.uniform(-1, 1)
            gamma = self.rng.uniform(0, 1)
            self.assertAlmostEqual(
                wasserstein(pushforward_affine(first, reward, gamma),
                            pushforward_affine(second, reward, gamma)),
                gamma * wasserstein(first, second), delta=1e-12)

    def test_sum_inequality(self):
        """ Test w_p of sums of independent variables against the sum of
        the distances, by explicit convolution.
        """
        for _ in range(tests.CASES):
            count = self.rng.integers(2, 4)
            xs = [self.random_particle(max_atoms=3) for _ in range(count)]
            ys = [self.random_particle(max_atoms=3) for _ in range(count)]
            coefs = self.rng.uniform(-2, 2, count)
            for p in (1, 2):
                bound = sum(
                    abs(coef) * wasserstein(x, y, p)
                    for coef, x, y in zip(coefs, xs, ys))
                self.assertLessEqual(
                    wasserstein(convolve(xs, coefs), convolve(ys, coefs), p),
                    bound + 1e-9)

    def test_convolve(self):
        """ Test the convolve function of projens.lib.distribution. """
        coin = make_particle([0, 1], [1, 1])
        self.assertParticleEqual(
            convolve([coin, coin], [1, 1]),
            make_particle([0, 1, 2], [1, 2, 1]))
        self.assertParticleEqual(
            convolve([coin, dirac(3)], [2, -1]),
            make_particle([-3, -1], [1, 1]))
        self.assertRaises(ArgumentError, convolve, [coin], [1, 2])

    def test_mixture(self):
        """ Test the mixture function of projens.lib.distribution. """
        self.assertParticleEqual(
            mixture([dirac(0), dirac(1)], [0.5, 0.5]),
            make_particle([0, 1], [1, 1]))
        dist = self.random_particle()
        self.assertParticleEqual(mixture([dist, dist], [0.5, 0.5]), dist)
        self.assertParticleEqual(
            mixture([make_particle([0, 2], [1, 1]), dirac(1)], [0.5, 0.5]),
            make_particle([0, 1, 2], [0.25, 0.5, 0.25]))
        self.assertRaises(ArgumentError, mixture, [dist], [0.5, 0.5])
        self.assertRaises(ArgumentError, mixture, [dist, dist], [0.7, 0.7])
        self.assertRaises(ArgumentError, mixture, [], [])

    def test_pushforward_affine(self):
        """ Test the pushforward_affine function. """
        self.assertParticleEqual(
            pushforward_affine(make_particle([0, 2], [1, 1]), 1, 0.5),
            make_particle([1, 2], [1, 1]))
        dist = self.random_particle()
        self.assertParticleEqual(pushforward_affine(dist, 0, 1), dist)
        self.assertParticleEqual(
            pushforward_affine(dirac(2.0), 1.0, 0.9), dirac(2.8))
        # A zero discount collapses everything on the reward
        self.assertParticleEqual(
            pushforward_affine(dist, 0.3, 0.0), dirac(0.3))

    def test_midpoint_quantiles(self):
        """ Test the midpoint quantile levels. """
        np.testing.assert_allclose(
            dist_lib.midpoint_quantiles(4), [0.125, 0.375, 0.625, 0.875])
        self.assertRaises(ArgumentError, dist_lib.midpoint_quantiles, 0)
        self.assertEqual(dist_lib.check_quantile(1), 1.0)
        self.assertRaises(ArgumentError, dist_lib.check_quantile, 1.01)


if __name__ == '__main__':
    SUITE = unittest.TestLoader().loadTestsFromTestCase(
        ProjensLibDistributiontests)
    unittest.TextTestRunner(verbosity=2).run(SUITE)
