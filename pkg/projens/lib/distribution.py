# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Exact finite distributions on the real line: weighted mixtures of Dirac
deltas, their CDFs, quantiles, Wasserstein distances and affine
pushforwards.

"""

import numpy as np

from projens.exceptions import ArgumentError


# Atoms closer than this are the same atom
MERGE_TOLERANCE = 1e-12
# Slack accepted on sums of weights that must equal one
NORMALIZATION_TOLERANCE = 1e-9
# Slack used when comparing a cumulative weight with a quantile level
QUANTILE_TOLERANCE = 1e-12


class ParticleDistribution(object):
    """ A finite weighted mixture of Dirac deltas.

    Locations are sorted, strictly increasing (equal locations merged) and
    the weights are positive and sum to one. Instances are immutable; build
    them with :func:`make_particle`.

    """

    __slots__ = ('locations', 'weights')

    def __init__(self, locations, weights):
        locations.flags.writeable = False
        weights.flags.writeable = False
        self.locations = locations
        self.weights = weights

    @property
    def atoms(self):
        """ The list of ``(location, weight)`` pairs. """
        return list(zip(self.locations.tolist(), self.weights.tolist()))

    def __len__(self):
        return self.locations.size

    def __repr__(self):
        if len(self) <= 6:
            return 'ParticleDistribution(%s)' % ', '.join(
                '%.6g:%.6g' % atom for atom in self.atoms)
        return 'ParticleDistribution(%d atoms in [%.6g, %.6g])' % (
            len(self), self.locations[0], self.locations[-1])

    def isclose(self, other, atol=1e-9):
        """ Whether both distributions have the same atoms, up to ``atol``
        on locations and weights.
        """
        return len(self) == len(other) \
            and np.allclose(self.locations, other.locations, atol=atol, rtol=0) \
            and np.allclose(self.weights, other.weights, atol=atol, rtol=0)

    def to_csv_row(self):
        """ Serialize as ``loc_0,w_0,loc_1,w_1,...``. """
        return ','.join(
            '%r,%r' % (loc, weight) for loc, weight in self.atoms)

    @classmethod
    def from_csv_row(cls, row):
        """ Read back a row written by :meth:`to_csv_row`. """
        values = [float(item) for item in row.strip().split(',') if item]
        if not values or len(values) % 2:
            raise ArgumentError(
                'A distribution row needs location,weight pairs, got %d '
                'values' % len(values))
        return make_particle(values[0::2], values[1::2])


def _normalized(locations, weights):
    """ Sort, drop empty atoms, merge equal locations and normalize.
    The weights must already be non-negative with a positive sum.
    """
    order = np.argsort(locations, kind='mergesort')
    locations = locations[order]
    weights = weights[order]

    keep = weights > 0
    locations = locations[keep]
    weights = weights[keep]

    if locations.size > 1:
        starts = np.concatenate(([True], np.diff(locations) > MERGE_TOLERANCE))
        if not starts.all():
            group = np.cumsum(starts) - 1
            weights = np.bincount(group, weights=weights)
            locations = locations[starts]

    return ParticleDistribution(
        np.ascontiguousarray(locations), weights / weights.sum())


def make_particle(locations, weights):
    """ Build a distribution from atom locations and weights.

    :arg locations: the atom locations, in any order
    :arg weights: non-negative weights, normalized here
    :return: the sorted, merged and normalized distribution
    :rtype: ParticleDistribution
    :raise ArgumentError: on empty input, mismatched lengths, non-finite
        values, negative weights or a zero total weight

    """
    locations = np.asarray(locations, dtype=np.float64).ravel()
    weights = np.asarray(weights, dtype=np.float64).ravel()

    if locations.size == 0:
        raise ArgumentError('A distribution needs at least one atom')
    if locations.shape != weights.shape:
        raise ArgumentError(
            'Got %d locations but %d weights' % (locations.size, weights.size))
    if not (np.all(np.isfinite(locations)) and np.all(np.isfinite(weights))):
        raise ArgumentError('Atom locations and weights must be finite')
    if np.any(weights < 0):
        raise ArgumentError('Atom weights must be non-negative')
    if weights.sum() <= 0:
        raise ArgumentError('Atom weights must have a positive sum')

    return _normalized(locations, weights)


def dirac(location):
    """ The distribution putting all its mass on ``location``. """
    return make_particle([location], [1.0])


def uniform(locations):
    """ Equal weights on the given locations. """
    locations = np.asarray(locations, dtype=np.float64).ravel()
    return make_particle(locations, np.ones_like(locations))


def check_quantile(tau):
    """ Return ``tau`` as a float, raising if it is outside [0, 1]. """
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise ArgumentError('A quantile level lies in [0, 1], got %r' % tau)
    return tau


def midpoint_quantiles(n_atoms):
    """ The levels (2k - 1) / 2K, k = 1..K. """
    if n_atoms < 1:
        raise ArgumentError('Need at least one quantile, got %r' % n_atoms)
    return np.arange(1, 2 * n_atoms, 2, dtype=np.float64) / (2.0 * n_atoms)


def cdf(dist, x):
    """ Right-continuous CDF: total weight of the atoms at or below ``x``.
    ``x`` may be a scalar or an array.
    """
    cumulative = np.concatenate(([0.0], np.cumsum(dist.weights)))
    cumulative[-1] = 1.0
    index = np.searchsorted(dist.locations, x, side='right')
    values = cumulative[index]
    if np.ndim(values) == 0:
        return float(values)
    return values


def inverse_cdf(dist, tau):
    """ Generalized inverse inf{x : F(x) >= tau}.

    ``tau`` may be a scalar or an array of levels in [0, 1]; level 0
    returns the smallest location.
    """
    levels = np.asarray(tau, dtype=np.float64)
    if np.any(levels < 0) or np.any(levels > 1):
        raise ArgumentError('Quantile levels lie in [0, 1], got %r' % (tau,))
    cumulative = np.cumsum(dist.weights)
    index = np.searchsorted(
        cumulative, levels - QUANTILE_TOLERANCE, side='left')
    index = np.minimum(index, cumulative.size - 1)
    values = dist.locations[index]
    if np.ndim(values) == 0:
        return float(values)
    return values


def mean(dist):
    """ Expectation of the distribution. """
    return float(np.dot(dist.weights, dist.locations))


def variance(dist):
    """ Variance of the distribution. """
    centered = dist.locations - mean(dist)
    return float(np.dot(dist.weights, centered * centered))


def _quantile_partition(dist_a, dist_b):
    """ Split (0, 1] at every jump of both quantile functions.

    Returns the interval widths and the two quantile functions' values on
    each interval, where both are constant.
    """
    cum_a = np.cumsum(dist_a.weights)
    cum_b = np.cumsum(dist_b.weights)
    cum_a[-1] = cum_b[-1] = 1.0

    edges = np.concatenate(([0.0], np.union1d(cum_a, cum_b)))
    widths = np.diff(edges)
    middles = edges[:-1] + widths / 2.0

    index_a = np.minimum(
        np.searchsorted(cum_a, middles, side='left'), cum_a.size - 1)
    index_b = np.minimum(
        np.searchsorted(cum_b, middles, side='left'), cum_b.size - 1)
    return widths, dist_a.locations[index_a], dist_b.locations[index_b]


def wasserstein(dist_a, dist_b, p=1.0):
    """ Exact p-Wasserstein distance (int_0^1 |F_a^-1 - F_b^-1|^p)^(1/p).

    The integral is evaluated over the merged partition of both CDFs' jump
    points, on which the quantile functions are piecewise constant.
    ``p = inf`` gives the largest quantile gap.

    :raise ArgumentError: if ``p < 1``

    """
    p = float(p)
    if not p >= 1:
        raise ArgumentError('The Wasserstein order must be >= 1, got %r' % p)

    widths, quant_a, quant_b = _quantile_partition(dist_a, dist_b)
    gaps = np.abs(quant_a - quant_b)

    if np.isinf(p):
        return float(np.max(gaps[widths > QUANTILE_TOLERANCE], initial=0.0))
    if p == 1.0:
        return float(np.dot(widths, gaps))
    return float(np.dot(widths, gaps ** p) ** (1.0 / p))


def wasserstein_1_arrays(locations_a, weights_a, locations_b, weights_b):
    """ 1-Wasserstein distance in its CDF-area form over batches of atoms.

    The last axis holds the atoms; the leading axes of both operands must
    agree and are kept in the result. Weights are taken as normalized.
    """
    locations_a, weights_a = np.broadcast_arrays(
        np.asarray(locations_a, dtype=np.float64),
        np.asarray(weights_a, dtype=np.float64))
    locations_b, weights_b = np.broadcast_arrays(
        np.asarray(locations_b, dtype=np.float64),
        np.asarray(weights_b, dtype=np.float64))

    locations = np.concatenate([locations_a, locations_b], axis=-1)
    signed = np.concatenate([weights_a, -weights_b], axis=-1)

    order = np.argsort(locations, axis=-1, kind='mergesort')
    locations = np.take_along_axis(locations, order, axis=-1)
    signed = np.take_along_axis(signed, order, axis=-1)

    cdf_gap = np.cumsum(signed, axis=-1)[..., :-1]
    return np.sum(np.abs(cdf_gap) * np.diff(locations, axis=-1), axis=-1)


def wasserstein_cdf_area(dist_a, dist_b):
    """ 1-Wasserstein distance as the area between the two CDFs. """
    return float(wasserstein_1_arrays(
        dist_a.locations, dist_a.weights, dist_b.locations, dist_b.weights))


def mixture(dists, mix_weights):
    """ The mixture sum_i w_i d_i.

    :raise ArgumentError: on mismatched lengths or weights that are
        negative or do not sum to one

    """
    if len(dists) != len(mix_weights):
        raise ArgumentError(
            'Got %d distributions but %d mixture weights' % (
                len(dists), len(mix_weights)))
    if not dists:
        raise ArgumentError('A mixture needs at least one component')
    mix_weights = np.asarray(mix_weights, dtype=np.float64)
    if np.any(mix_weights < 0):
        raise ArgumentError('Mixture weights must be non-negative')
    if abs(mix_weights.sum() - 1.0) > NORMALIZATION_TOLERANCE:
        raise ArgumentError(
            'Mixture weights must sum to one, got %r' % mix_weights.sum())

    locations = np.concatenate([dist.locations for dist in dists])
    weights = np.concatenate([
        share * dist.weights for dist, share in zip(dists, mix_weights)])
    return make_particle(locations, weights)


def pushforward_affine(dist, reward, gamma):
    """ Law of ``reward + gamma * Z`` for ``Z`` distributed as ``dist``. """
    return make_particle(reward + gamma * dist.locations, dist.weights)


def convolve(dists, coefs):
    """ Exact law of sum_i a_i X_i for independent X_i ~ dists[i].

    The number of atoms is the product of the operands' sizes; meant for
    small operands.
    """
    if len(dists) != len(coefs):
        raise ArgumentError(
            'Got %d distributions but %d coefficients' % (
                len(dists), len(coefs)))
    locations = np.zeros(1)
    weights = np.ones(1)
    for dist, coef in zip(dists, coefs):
        locations = (locations[:, None] + coef * dist.locations[None, :]).ravel()
        weights = (weights[:, None] * dist.weights[None, :]).ravel()
    return make_particle(locations, weights)
