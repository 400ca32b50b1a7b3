# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Categorical and quantile projections, the quantile regression loss and
the uniform mixture of projections.

"""

import enum

import numpy as np

from projens.exceptions import ArgumentError
from projens.lib.distribution import (
    inverse_cdf, make_particle, midpoint_quantiles, mixture)


# Positions this close to a support point (in units of the spacing) are
# snapped onto it
SNAP_TOLERANCE = 1e-9


class ProjectionKind(enum.Enum):
    ''' The two families of parametric return distributions. '''
    CATEGORICAL = 'categorical'
    QUANTILE = 'quantile'


class CategoricalSupport(object):
    """ K evenly spaced locations z_1 < ... < z_K. """

    def __init__(self, z_min, z_max, n_atoms):
        n_atoms = int(n_atoms)
        if n_atoms < 2:
            raise ArgumentError(
                'A categorical support needs at least 2 atoms, got %d'
                % n_atoms)
        if not float(z_max) > float(z_min):
            raise ArgumentError(
                'Empty support range [%r, %r]' % (z_min, z_max))
        self.z_min = float(z_min)
        self.z_max = float(z_max)
        self.z = np.linspace(self.z_min, self.z_max, n_atoms)
        self.z.flags.writeable = False

    @classmethod
    def from_locations(cls, locations):
        """ Build the support from explicit locations, which must be
        strictly increasing and evenly spaced.
        """
        locations = np.asarray(locations, dtype=np.float64).ravel()
        if locations.size < 2:
            raise ArgumentError('A categorical support needs at least 2 atoms')
        steps = np.diff(locations)
        if np.any(steps <= 0):
            raise ArgumentError('Support locations must be strictly increasing')
        scale = max(1.0, float(np.max(np.abs(locations))))
        if np.max(np.abs(steps - steps.mean())) > 1e-12 * scale:
            raise ArgumentError('Support locations must be evenly spaced')
        return cls(locations[0], locations[-1], locations.size)

    @property
    def n_atoms(self):
        return self.z.size

    @property
    def spacing(self):
        return (self.z_max - self.z_min) / (self.n_atoms - 1)

    def __len__(self):
        return self.n_atoms

    def __repr__(self):
        return 'CategoricalSupport(%r, %r, %d)' % (
            self.z_min, self.z_max, self.n_atoms)

    def index_of(self, locations, atol=1e-9):
        """ Indices of the support points at the given locations.

        :raise ArgumentError: if a location is not a support point

        """
        locations = np.asarray(locations, dtype=np.float64)
        index = np.rint((locations - self.z_min) / self.spacing).astype(np.intp)
        inside = (index >= 0) & (index < self.n_atoms)
        clipped = np.clip(index, 0, self.n_atoms - 1)
        if not np.all(inside & (np.abs(self.z[clipped] - locations) <= atol)):
            raise ArgumentError('Locations off the support %r' % self)
        return clipped


def categorical_weights(locations, weights, support):
    """ Categorical projection of batches of atoms.

    The last axis holds the atoms of one distribution, the leading axes
    are kept. Each atom splits its mass between its two neighbouring
    support points in proportion to proximity; atoms outside the support
    go entirely to the nearest end point.

    :return: the probabilities on ``support.z``, shape ``(..., K)``

    """
    locations, weights = np.broadcast_arrays(
        np.asarray(locations, dtype=np.float64),
        np.asarray(weights, dtype=np.float64))
    n_atoms = support.n_atoms

    position = (np.clip(locations, support.z_min, support.z_max)
                - support.z_min) / support.spacing
    snapped = np.rint(position)
    position = np.where(
        np.abs(position - snapped) < SNAP_TOLERANCE, snapped, position)
    lower = np.clip(np.floor(position), 0, n_atoms - 2).astype(np.intp)
    upper_share = position - lower

    lead = locations.shape[:-1]
    rows = int(np.prod(lead, dtype=np.intp))
    offsets = np.arange(rows, dtype=np.intp)[:, None] * n_atoms
    index = (offsets + lower.reshape(rows, -1)).ravel()
    size = rows * n_atoms

    out = np.bincount(
        index, weights=(weights * (1.0 - upper_share)).ravel(),
        minlength=size)
    out += np.bincount(
        index + 1, weights=(weights * upper_share).ravel(), minlength=size)
    return out.reshape(lead + (n_atoms,))


def project_categorical(dist, support):
    """ Project a distribution onto the categorical support. """
    probs = categorical_weights(dist.locations, dist.weights, support)
    return make_particle(support.z, probs)


def project_quantile(dist, n_atoms):
    """ K equally weighted atoms at the midpoint quantiles of ``dist``. """
    if int(n_atoms) < 1:
        raise ArgumentError(
            'A quantile projection needs at least one atom, got %r' % n_atoms)
    locations = inverse_cdf(dist, midpoint_quantiles(int(n_atoms)))
    return make_particle(locations, np.ones_like(locations))


def quantile_loss(theta, tau, dist):
    """ Exact E[rho_tau(Z - theta)] with rho_tau(u) = u (tau - 1{u <= 0}).
    """
    residual = dist.locations - float(theta)
    return float(np.dot(dist.weights, residual * (tau - (residual <= 0))))


class ProjectionSpec(object):
    """ One member of a projection ensemble.

    :arg kind: a :class:`ProjectionKind` or its value
    :kwarg support: the :class:`CategoricalSupport` of a categorical member
    :kwarg n_atoms: the number of quantiles of a quantile member
    :kwarg modulus_c: the assumed bounding modulus of the projection

    """

    def __init__(self, kind, support=None, n_atoms=None, modulus_c=1.0):
        self.kind = ProjectionKind(kind)
        if not modulus_c > 0:
            raise ArgumentError(
                'The projection modulus must be positive, got %r' % modulus_c)
        self.modulus_c = float(modulus_c)
        self.support = None
        if self.kind is ProjectionKind.CATEGORICAL:
            if not isinstance(support, CategoricalSupport):
                raise ArgumentError('A categorical member needs a support')
            self.support = support
            self.n_atoms = support.n_atoms
        else:
            if n_atoms is None or int(n_atoms) < 1:
                raise ArgumentError(
                    'A quantile member needs at least one atom, got %r'
                    % n_atoms)
            self.n_atoms = int(n_atoms)

    @classmethod
    def categorical(cls, support, modulus_c=1.0):
        return cls(ProjectionKind.CATEGORICAL, support=support,
                   modulus_c=modulus_c)

    @classmethod
    def quantile(cls, n_atoms, modulus_c=1.0):
        return cls(ProjectionKind.QUANTILE, n_atoms=n_atoms,
                   modulus_c=modulus_c)

    def __repr__(self):
        if self.support is not None:
            return 'ProjectionSpec(categorical, %r)' % self.support
        return 'ProjectionSpec(quantile, %d)' % self.n_atoms

    def project(self, dist):
        if self.kind is ProjectionKind.CATEGORICAL:
            return project_categorical(dist, self.support)
        return project_quantile(dist, self.n_atoms)

    def error_bound(self, z_min, z_max):
        """ Largest w_1 distance between a distribution supported in
        [z_min, z_max] and its projection.
        """
        if self.kind is ProjectionKind.CATEGORICAL:
            return self.support.spacing
        return (float(z_max) - float(z_min)) / self.n_atoms

    def with_atoms(self, n_atoms, z_min=None, z_max=None):
        """ The same kind of projection at another resolution; a
        categorical support keeps its range unless a new one is given.
        """
        if self.kind is ProjectionKind.QUANTILE:
            return ProjectionSpec.quantile(n_atoms, self.modulus_c)
        support = CategoricalSupport(
            self.support.z_min if z_min is None else z_min,
            self.support.z_max if z_max is None else z_max,
            n_atoms)
        return ProjectionSpec.categorical(support, self.modulus_c)


def default_specs(n_atoms, z_min, z_max):
    """ The categorical and quantile pair used throughout projens. """
    return [
        ProjectionSpec.categorical(CategoricalSupport(z_min, z_max, n_atoms)),
        ProjectionSpec.quantile(n_atoms),
    ]


def contraction_modulus(specs):
    """ Average modulus c_bar = (1/M) sum_i c_i. """
    if not specs:
        raise ArgumentError('A projection ensemble needs at least one member')
    return float(np.mean([spec.modulus_c for spec in specs]))


def projection_mixture(dist, specs):
    """ Uniform mixture of the individual projections of ``dist``. """
    if not specs:
        raise ArgumentError('A projection ensemble needs at least one member')
    parts = [spec.project(dist) for spec in specs]
    return mixture(parts, [1.0 / len(parts)] * len(parts))
