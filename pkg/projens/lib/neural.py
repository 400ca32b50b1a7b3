# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Dense networks trained by hand-written backpropagation and Adam, fixed
random prior networks, ensemble members with a quantile or categorical
output, and the two projection losses with their exact gradients.

"""

import numpy as np

from projens.exceptions import ArgumentError, NumericalError, UsageError
from projens.lib.distribution import make_particle, midpoint_quantiles
from projens.lib.projection import ProjectionKind, categorical_weights


CHECKPOINT_HEADER = 'projens-checkpoint 1'

# Target probabilities below this are treated as zero by the KL loss
PROB_FLOOR = 1e-12


def softmax(logits):
    ''' Softmax over the last axis. '''
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=-1, keepdims=True)


def log_softmax(logits):
    ''' Log-softmax over the last axis. '''
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


class Mlp(object):
    """ Feed-forward network: rectifier on the hidden layers, identity on
    the output layer.

    ``weights[l]`` has shape (fan_in, fan_out), ``biases[l]`` (fan_out,).
    """

    def __init__(self, weights, biases):
        if not weights or len(weights) != len(biases):
            raise ArgumentError('Need one bias vector per weight matrix')
        for layer, (weight, bias) in enumerate(zip(weights, biases)):
            if weight.ndim != 2 or bias.shape != (weight.shape[1],):
                raise ArgumentError('Inconsistent shapes in layer %d' % layer)
            if layer and weight.shape[0] != weights[layer - 1].shape[1]:
                raise ArgumentError('Layer %d does not chain' % layer)
        self.weights = list(weights)
        self.biases = list(biases)

    @property
    def widths(self):
        return [self.weights[0].shape[0]] + [
            weight.shape[1] for weight in self.weights]

    @property
    def params(self):
        """ Parameters as a flat list ``[W_0, b_0, W_1, b_1, ...]``. """
        params = []
        for weight, bias in zip(self.weights, self.biases):
            params.extend((weight, bias))
        return params

    def __repr__(self):
        return '<Mlp(%s)>' % '-'.join(str(width) for width in self.widths)

    def forward(self, inputs, keep=False):
        """ Output for a batch of inputs of shape (B, fan_in).

        :kwarg keep: also return what :meth:`backward` needs

        """
        inputs = np.asarray(inputs, dtype=np.float64)
        if inputs.ndim != 2 or inputs.shape[1] != self.widths[0]:
            raise ArgumentError(
                'Expected inputs of shape (B, %d), got %s'
                % (self.widths[0], inputs.shape))
        layer_inputs, pre_activations = [], []
        last = len(self.weights) - 1
        out = inputs
        for layer, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            layer_inputs.append(out)
            out = out.dot(weight) + bias
            if layer < last:
                pre_activations.append(out)
                out = np.maximum(out, 0.0)
        if keep:
            return out, (layer_inputs, pre_activations)
        return out

    def backward(self, cache, grad_out):
        """ Gradients of the parameters, in the order of :attr:`params`,
        given the gradient of the loss with respect to the output.
        """
        layer_inputs, pre_activations = cache
        grads = [None] * (2 * len(self.weights))
        grad = grad_out
        for layer in reversed(range(len(self.weights))):
            grads[2 * layer] = layer_inputs[layer].T.dot(grad)
            grads[2 * layer + 1] = grad.sum(axis=0)
            if layer:
                grad = grad.dot(self.weights[layer].T) \
                    * (pre_activations[layer - 1] > 0)
        return grads

    def copy(self):
        return Mlp([w.copy() for w in self.weights],
                   [b.copy() for b in self.biases])

    def load_params(self, other):
        """ Overwrite the parameters in place with those of ``other``. """
        for mine, theirs in zip(self.params, other.params):
            mine[...] = theirs


def _check_widths(widths):
    widths = [int(width) for width in widths]
    if len(widths) < 2 or min(widths) < 1:
        raise ArgumentError('Invalid layer widths %r' % (widths,))
    return widths


def init_mlp(seed, widths):
    """ He initialization: normal weights of std sqrt(2 / fan_in),
    resampled beyond two standard deviations, zero biases.
    """
    widths = _check_widths(widths)
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        std = np.sqrt(2.0 / fan_in)
        weight = rng.normal(0.0, std, size=(fan_in, fan_out))
        outside = np.abs(weight) > 2 * std
        while outside.any():
            weight[outside] = rng.normal(0.0, std, size=outside.sum())
            outside = np.abs(weight) > 2 * std
        weights.append(weight)
        biases.append(np.zeros(fan_out))
    return Mlp(weights, biases)


class PriorNet(object):
    """ A fixed random network whose scaled output is added to a member's
    logits. Never trained.
    """

    def __init__(self, mlp, scale):
        if scale < 0:
            raise ArgumentError('The prior scale must be non-negative')
        self.mlp = mlp
        self.scale = float(scale)

    def __call__(self, inputs):
        if not self.scale:
            return 0.0
        return self.scale * self.mlp.forward(inputs)


class AdamState(object):
    """ Moment estimates of Adam for a list of parameters. """

    def __init__(self, params, lr=5e-4, eps=1e-8, beta1=0.9, beta2=0.999):
        self.lr = float(lr)
        self.eps = float(eps)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.m = [np.zeros_like(param) for param in params]
        self.v = [np.zeros_like(param) for param in params]
        self.step = 0

    def copy(self):
        other = AdamState([], self.lr, self.eps, self.beta1, self.beta2)
        other.m = [m.copy() for m in self.m]
        other.v = [v.copy() for v in self.v]
        other.step = self.step
        return other


def adam_step(net, grads, state):
    """ One bias-corrected Adam update of ``net``'s parameters, in place.

    :raise NumericalError: if a gradient holds non-finite values

    """
    params = net.params
    if len(grads) != len(params) or any(
            grad.shape != param.shape for grad, param in zip(grads, params)):
        raise ArgumentError('Gradients do not match the parameters')
    bad = [
        '  parameter %d %s: %d non-finite of %d' % (
            index, grad.shape, np.size(grad) - np.isfinite(grad).sum(),
            np.size(grad))
        for index, grad in enumerate(grads) if not np.all(np.isfinite(grad))]
    if bad:
        raise NumericalError(
            'Non-finite gradient at Adam step %d' % (state.step + 1),
            diagnostic='\n'.join(bad))

    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for param, grad, m, v in zip(params, grads, state.m, state.v):
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad * grad
        param -= state.lr * (m / correction1) / (
            np.sqrt(v / correction2) + state.eps)
    return net, state


class Member(object):
    """ One ensemble member: a network with its prior, producing K logits
    per action.

    Quantile members output atom locations directly; categorical members
    output the pre-softmax logits of probabilities on ``support``.
    """

    def __init__(self, kind, net, prior, n_actions, n_atoms, support=None):
        self.kind = ProjectionKind(kind)
        if self.kind is ProjectionKind.CATEGORICAL and support is None:
            raise ArgumentError('A categorical member needs a support')
        if net.widths[-1] != n_actions * n_atoms:
            raise ArgumentError(
                'The network outputs %d values, expected %d actions x %d '
                'atoms' % (net.widths[-1], n_actions, n_atoms))
        self.net = net
        self.prior = prior
        self.n_actions = n_actions
        self.n_atoms = n_atoms
        self.support = support

    def __repr__(self):
        return '<Member(%s, %r)>' % (self.kind.value, self.net)

    def logits(self, obs, keep=False):
        """ Logits of shape (B, A, K), prior included. """
        obs = np.atleast_2d(obs)
        out = self.net.forward(obs, keep=keep)
        if keep:
            out, cache = out
        out = (out + self.prior(obs)).reshape(
            obs.shape[0], self.n_actions, self.n_atoms)
        if keep:
            return out, cache
        return out

    def backward(self, cache, grad_logits):
        """ Parameter gradients given the gradient on the logits. """
        return self.net.backward(
            cache, grad_logits.reshape(grad_logits.shape[0], -1))

    def atoms(self, logits):
        """ Locations and probabilities encoded by the logits. """
        if self.kind is ProjectionKind.QUANTILE:
            return logits, np.full(logits.shape, 1.0 / self.n_atoms)
        return np.broadcast_to(self.support.z, logits.shape), softmax(logits)

    def copy(self):
        """ A copy with its own network; the fixed prior is shared. """
        return Member(self.kind, self.net.copy(), self.prior,
                      self.n_actions, self.n_atoms, self.support)


def make_member(kind, seed, widths, n_actions, n_atoms, support=None,
                prior_scale=0.0):
    """ Initialize a member and its prior from independent streams of
    ``seed``; ``widths`` lists the input and hidden widths.
    """
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    net_seed, prior_seed = seed.spawn(2)
    widths = list(widths) + [n_actions * n_atoms]
    return Member(
        kind, init_mlp(net_seed, widths),
        PriorNet(init_mlp(prior_seed, widths), prior_scale),
        n_actions, n_atoms, support)


class MixtureHead(object):
    """ Outputs of the members of an ensemble for a batch of inputs.

    The encoded distribution is the uniform mixture of the members'
    distributions.
    """

    def __init__(self, members, logits):
        self.members = members
        self.logits = logits

    def member_atoms(self, index):
        return self.members[index].atoms(self.logits[index])

    def atoms(self):
        """ Mixture locations and probabilities, shape (..., M K). """
        parts = [self.member_atoms(index) for index in range(len(self.members))]
        count = float(len(parts))
        return (np.concatenate([locs for locs, _ in parts], axis=-1),
                np.concatenate([probs / count for _, probs in parts], axis=-1))

    def means(self):
        locations, probs = self.atoms()
        return np.sum(locations * probs, axis=-1)

    def take(self, actions):
        """ The head restricted to one action per input. """
        rows = np.arange(len(actions))
        return MixtureHead(
            self.members, [logits[rows, actions] for logits in self.logits])

    def quantile_logits(self):
        return [logits for member, logits in zip(self.members, self.logits)
                if member.kind is ProjectionKind.QUANTILE]

    def categorical_logits(self):
        return [logits for member, logits in zip(self.members, self.logits)
                if member.kind is ProjectionKind.CATEGORICAL]


def forward(members, obs):
    """ Run every member on ``obs``, of shape (B, obs_size) or (obs_size,).
    """
    obs = np.atleast_2d(np.asarray(obs, dtype=np.float64))
    return MixtureHead(members, [member.logits(obs) for member in members])


def decode_distribution(head, index=0, action=None):
    """ The mixture distribution of one input (and one action, for heads
    that still hold every action) as a :class:`ParticleDistribution`.
    """
    locations, probs = head.atoms()
    locations, probs = locations[index], probs[index]
    if action is not None:
        locations, probs = locations[action], probs[action]
    if locations.ndim != 1:
        raise UsageError('Pick an action to decode a distribution')
    return make_particle(locations, probs)


def qr_loss_grad(quantiles, target, weights=None, taus=None):
    """ Quantile regression loss and its gradient.

    loss = (1/K) sum_k sum_j p_j rho_{tau_k}(y_j - theta_k) for a target
    with atoms y_j of probability p_j.

    :arg quantiles: locations theta, shape (..., K)
    :arg target: a :class:`ParticleDistribution`, or target locations of
        shape (..., J) with ``weights``
    :kwarg taus: quantile levels, midpoint quantiles by default
    :return: ``(loss, grad)`` with loss of shape (...) and grad like
        ``quantiles``

    """
    if weights is None:
        locations, weights = target.locations, target.weights
    else:
        locations = np.asarray(target, dtype=np.float64)
        weights = np.asarray(weights, dtype=np.float64)
    theta = np.asarray(quantiles, dtype=np.float64)
    n_atoms = theta.shape[-1]
    taus = midpoint_quantiles(n_atoms) if taus is None else np.asarray(taus)

    lead = np.broadcast_shapes(
        theta.shape[:-1], locations.shape[:-1], weights.shape[:-1])
    locations = np.broadcast_to(locations, lead + locations.shape[-1:])
    weights = np.broadcast_to(weights, lead + weights.shape[-1:])
    theta_b = np.broadcast_to(theta, lead + (n_atoms,))
    n_targets = locations.shape[-1]

    # Sorting the target atoms together with theta gives, at each theta_k,
    # F(theta_k) = sum_{y_j <= theta_k} p_j and S(theta_k) = sum p_j y_j
    # over the same atoms; target atoms come first so ties count as below.
    merged = np.concatenate([locations, theta_b], axis=-1)
    masses = np.concatenate([weights, np.zeros(theta_b.shape)], axis=-1)
    order = np.argsort(merged, axis=-1, kind='mergesort')
    sorted_masses = np.take_along_axis(masses, order, axis=-1)
    cum_mass = np.cumsum(sorted_masses, axis=-1)
    cum_moment = np.cumsum(
        sorted_masses * np.take_along_axis(merged, order, axis=-1), axis=-1)
    below_mass = np.empty(merged.shape)
    below_moment = np.empty(merged.shape)
    np.put_along_axis(below_mass, order, cum_mass, axis=-1)
    np.put_along_axis(below_moment, order, cum_moment, axis=-1)
    below_mass = below_mass[..., n_targets:]
    below_moment = below_moment[..., n_targets:]

    total = weights.sum(axis=-1, keepdims=True)
    first_moment = np.sum(weights * locations, axis=-1, keepdims=True)
    loss = np.sum(
        taus * (first_moment - theta_b * total)
        - (below_moment - theta_b * below_mass), axis=-1) / n_atoms
    grad = (below_mass - taus * total) / n_atoms
    return loss, grad


def kl_loss_grad(logits, target, support=None):
    """ KL divergence from the target probabilities to softmax(logits)
    and its gradient softmax(logits) - target.

    :arg target: probabilities on the support, shape like ``logits``, or a
        :class:`ParticleDistribution` whose atoms lie on ``support``
    :raise ArgumentError: if a target atom is off the support

    """
    logits = np.asarray(logits, dtype=np.float64)
    if hasattr(target, 'locations'):
        if support is None:
            raise ArgumentError('Need the support to place the target atoms')
        probs = np.zeros(support.n_atoms)
        np.add.at(probs, support.index_of(target.locations), target.weights)
        target = probs
    target = np.asarray(target, dtype=np.float64)
    target = np.where(target < PROB_FLOOR, 0.0, target)

    log_probs = log_softmax(logits)
    positive = target > 0
    loss = np.sum(np.where(
        positive, target * (np.log(np.where(positive, target, 1.0))
                            - log_probs), 0.0), axis=-1)
    return loss, np.exp(log_probs) - target


def member_loss_grad(member, logits, locations, weights):
    """ Loss and logit gradient of a member regressing toward the target
    atoms: quantile regression for quantile members, KL to the projected
    target for categorical ones.
    """
    if member.kind is ProjectionKind.QUANTILE:
        return qr_loss_grad(logits, locations, weights)
    return kl_loss_grad(
        logits, categorical_weights(locations, weights, member.support))


def save_checkpoint(path, nets):
    """ Write named networks to a versioned text file.

    :arg nets: list of ``(name, Mlp)`` pairs

    """
    with open(path, 'w') as stream:
        stream.write(CHECKPOINT_HEADER + '\n')
        for name, net in nets:
            stream.write('net %s %d\n' % (name, len(net.weights)))
            for weight, bias in zip(net.weights, net.biases):
                stream.write('layer %d %d\n' % weight.shape)
                stream.write(' '.join(repr(v) for v in weight.ravel().tolist()))
                stream.write('\n')
                stream.write(' '.join(repr(v) for v in bias.tolist()))
                stream.write('\n')


def load_checkpoint(path):
    """ Read back the ``(name, Mlp)`` pairs written by
    :func:`save_checkpoint`.
    """
    with open(path) as stream:
        lines = iter(stream.read().splitlines())
    if next(lines, None) != CHECKPOINT_HEADER:
        raise ArgumentError('%s is not a projens checkpoint' % path)

    nets = []
    for line in lines:
        _, name, n_layers = line.split()
        weights, biases = [], []
        for _ in range(int(n_layers)):
            _, rows, cols = next(lines).split()
            shape = (int(rows), int(cols))
            weights.append(np.array(
                next(lines).split(), dtype=np.float64).reshape(shape))
            biases.append(np.array(next(lines).split(), dtype=np.float64))
        nets.append((name, Mlp(weights, biases)))
    return nets


def regress(members, optims, inputs, actions, targets, label='value'):
    """ One Adam step of every member toward its target atoms at the
    given actions.

    :arg targets: one ``(locations, weights)`` pair per member, each of
        shape (B, J)
    :return: the mean loss of every member, keyed ``<label>_loss_<i>``
    :raise NumericalError: if a loss is not finite

    """
    stats = {}
    rows = np.arange(len(actions))
    for index, (member, optim, (locations, weights)) in enumerate(
            zip(members, optims, targets)):
        logits, cache = member.logits(inputs, keep=True)
        loss, grad = _checked_loss(
            member, index, logits, rows, actions, locations, weights, label)
        grad_logits = np.zeros_like(logits)
        grad_logits[rows, actions] = grad / len(actions)
        adam_step(member.net, member.backward(cache, grad_logits), optim)
        stats['%s_loss_%d' % (label, index)] = float(np.mean(loss))
    return stats


def batch_losses(members, inputs, actions, targets, label='value'):
    """ The mean loss of every member toward its targets, as
    :func:`regress` reports it, without changing any parameter.
    """
    stats = {}
    rows = np.arange(len(actions))
    for index, (member, (locations, weights)) in enumerate(
            zip(members, targets)):
        loss, _ = _checked_loss(
            member, index, member.logits(inputs), rows, actions, locations,
            weights, label)
        stats['%s_loss_%d' % (label, index)] = float(np.mean(loss))
    return stats


def _checked_loss(member, index, logits, rows, actions, locations, weights,
                  label):
    loss, grad = member_loss_grad(
        member, logits[rows, actions], locations, weights)
    if not np.all(np.isfinite(loss)):
        raise NumericalError(
            'Non-finite %s loss for member %d (%s)' % (
                label, index, member.kind.value),
            diagnostic='targets in [%r, %r], logits in [%r, %r]' % (
                np.min(locations), np.max(locations),
                np.min(logits), np.max(logits)))
    return loss, grad
