# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

The projection-ensemble DQN agent: a value ensemble mixing quantile and
categorical members, a bonus ensemble learning the propagated
disagreement of the value members, and optimistic action selection.

"""

import enum
import logging

import numpy as np

import projens.lib.notify
from projens.exceptions import ArgumentError, UsageError
from projens.lib.distribution import wasserstein_1_arrays
from projens.lib.neural import (
    AdamState, forward, load_checkpoint, make_member, regress,
    save_checkpoint)
from projens.lib.projection import CategoricalSupport, ProjectionKind


LOG = logging.getLogger('projens.lib.agent')

TRAIN = 'train'
EVAL = 'eval'


class Variant(enum.Enum):
    ''' Ensemble variants; ``pe-dqn`` is the full agent. '''
    PE_DQN = 'pe-dqn'
    QR_QR = 'qr-qr'
    C51_C51 = 'c51-c51'
    IND = 'ind'
    NO_BONUS = 'no-bonus'

    @property
    def member_kinds(self):
        if self is Variant.QR_QR:
            return (ProjectionKind.QUANTILE, ProjectionKind.QUANTILE)
        if self is Variant.C51_C51:
            return (ProjectionKind.CATEGORICAL, ProjectionKind.CATEGORICAL)
        return (ProjectionKind.QUANTILE, ProjectionKind.CATEGORICAL)

    @property
    def has_bonus_nets(self):
        return self not in (Variant.IND, Variant.NO_BONUS)

    @property
    def explores(self):
        return self is not Variant.NO_BONUS


class PeDqnConfig(object):
    """ Hyperparameters of the agent. """

    def __init__(self, n_atoms=51, hidden=(64,), v_min=-1.0, v_max=1.0,
                 lr=5e-4, adam_eps=0.001 / 128, batch_size=128,
                 target_update_freq=4, buffer_capacity=10000, gamma=0.99,
                 beta_init=5.0, prior_scale_quantile=20.0,
                 prior_scale_categorical=0.0, total_episodes=500,
                 variant=Variant.PE_DQN, bonus_v_max=None, horizon=None):
        errors = []
        if int(n_atoms) < 2:
            errors.append('n_atoms must be at least 2')
        if not v_max > v_min:
            errors.append('v_max must be above v_min')
        if not 0.0 <= gamma < 1.0:
            errors.append('gamma must lie in [0, 1)')
        for name, value in (
                ('lr', lr), ('adam_eps', adam_eps),
                ('batch_size', batch_size),
                ('target_update_freq', target_update_freq),
                ('buffer_capacity', buffer_capacity)):
            if not value > 0:
                errors.append('%s must be positive' % name)
        for name, value in (
                ('beta_init', beta_init),
                ('prior_scale_quantile', prior_scale_quantile),
                ('prior_scale_categorical', prior_scale_categorical),
                ('total_episodes', total_episodes)):
            if value < 0:
                errors.append('%s must be non-negative' % name)
        if horizon is not None and int(horizon) < 1:
            errors.append('horizon must be positive')
        if bonus_v_max is not None and not bonus_v_max > 0:
            errors.append('bonus_v_max must be positive')
        if errors:
            raise ArgumentError('; '.join(errors))

        self.n_atoms = int(n_atoms)
        self.hidden = [int(width) for width in hidden]
        self.v_min = float(v_min)
        self.v_max = float(v_max)
        self.lr = float(lr)
        self.adam_eps = float(adam_eps)
        self.batch_size = int(batch_size)
        self.target_update_freq = int(target_update_freq)
        self.buffer_capacity = int(buffer_capacity)
        self.gamma = float(gamma)
        self.beta_init = float(beta_init)
        self.prior_scales = {
            ProjectionKind.QUANTILE: float(prior_scale_quantile),
            ProjectionKind.CATEGORICAL: float(prior_scale_categorical),
        }
        self.total_episodes = int(total_episodes)
        self.variant = Variant(variant)
        self.horizon = None if horizon is None else int(horizon)
        # Largest one-step disagreement is the width of the value support,
        # summed over at most ``horizon`` discounted steps
        if self.horizon is None:
            steps = 1.0 / (1.0 - self.gamma)
        else:
            steps = float(np.sum(self.gamma ** np.arange(self.horizon)))
        self.bonus_v_max = float(bonus_v_max) if bonus_v_max else \
            (self.v_max - self.v_min) * steps

    @classmethod
    def from_config(cls, cfg, variant, horizon=None):
        """ Build from the resolved deep sea configuration; ``horizon`` is
        the episode length when it is bounded.
        """
        return cls(
            n_atoms=cfg.atoms, hidden=cfg.hidden, v_min=cfg.v_min,
            v_max=cfg.v_max, lr=cfg.lr, adam_eps=cfg.adam_eps,
            batch_size=cfg.batch_size,
            target_update_freq=cfg.target_update_freq,
            buffer_capacity=cfg.buffer_capacity, gamma=cfg.gamma,
            beta_init=cfg.beta_init,
            prior_scale_quantile=cfg.prior_scale_quantile,
            prior_scale_categorical=cfg.prior_scale_categorical,
            total_episodes=cfg.episodes, variant=variant,
            bonus_v_max=cfg.bonus_v_max, horizon=horizon)


class Transition(object):
    ''' One environment step. '''

    __slots__ = ('obs', 'action', 'reward', 'next_obs', 'done')

    def __init__(self, obs, action, reward, next_obs, done):
        self.obs = obs
        self.action = action
        self.reward = reward
        self.next_obs = next_obs
        self.done = done


class Batch(object):
    ''' Transitions sampled from the replay buffer, as arrays. '''

    def __init__(self, obs, actions, rewards, next_obs, dones):
        self.obs = obs
        self.actions = actions
        self.rewards = rewards
        self.next_obs = next_obs
        self.dones = dones

    def __len__(self):
        return len(self.actions)


class ReplayBuffer(object):
    """ Ring buffer of transitions with uniform sampling. """

    def __init__(self, capacity, obs_size):
        self.capacity = int(capacity)
        self.obs = np.zeros((self.capacity, obs_size), dtype=np.float32)
        self.next_obs = np.zeros((self.capacity, obs_size), dtype=np.float32)
        self.actions = np.zeros(self.capacity, dtype=np.intp)
        self.rewards = np.zeros(self.capacity)
        self.dones = np.zeros(self.capacity)
        self.size = 0
        self.position = 0

    def __len__(self):
        return self.size

    def add(self, transition):
        index = self.position
        self.obs[index] = transition.obs
        self.actions[index] = transition.action
        self.rewards[index] = transition.reward
        self.next_obs[index] = transition.next_obs
        self.dones[index] = float(transition.done)
        self.position = (index + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, rng, batch_size):
        """ Draw ``batch_size`` distinct stored transitions.

        :raise UsageError: when fewer transitions are stored

        """
        if self.size < batch_size:
            raise UsageError(
                'Cannot sample %d transitions out of %d'
                % (batch_size, self.size))
        index = rng.choice(self.size, size=batch_size, replace=False)
        return Batch(
            self.obs[index].astype(np.float64), self.actions[index],
            self.rewards[index], self.next_obs[index].astype(np.float64),
            self.dones[index])


class AgentState(object):
    """ Networks, optimizers, replay and counters of one agent.

    :arg cfg: the :class:`PeDqnConfig`
    :arg obs_size: length of the observations
    :arg n_actions: number of actions
    :arg seed: seed of every random stream of the agent

    """

    def __init__(self, cfg, obs_size, n_actions, seed):
        self.cfg = cfg
        self.seed = seed
        self.n_actions = n_actions
        sequence = np.random.SeedSequence(seed)
        value_seeds, bonus_seeds, sample_seed = sequence.spawn(3)
        self.rng = np.random.default_rng(sample_seed)

        self.value_support = CategoricalSupport(
            cfg.v_min, cfg.v_max, cfg.n_atoms)
        self.bonus_support = CategoricalSupport(
            0.0, cfg.bonus_v_max, cfg.n_atoms)
        widths = [obs_size] + cfg.hidden
        kinds = cfg.variant.member_kinds

        self.value_members = [
            make_member(kind, member_seed, widths, n_actions, cfg.n_atoms,
                        self.value_support, cfg.prior_scales[kind])
            for kind, member_seed in zip(kinds, value_seeds.spawn(len(kinds)))]
        self.bonus_members = []
        if cfg.variant.has_bonus_nets:
            self.bonus_members = [
                make_member(kind, member_seed, widths, n_actions,
                            cfg.n_atoms, self.bonus_support,
                            cfg.prior_scales[kind])
                for kind, member_seed in zip(
                    kinds, bonus_seeds.spawn(len(kinds)))]

        self.value_targets = [member.copy() for member in self.value_members]
        self.bonus_targets = [member.copy() for member in self.bonus_members]
        self.value_optims = [
            AdamState(member.net.params, cfg.lr, cfg.adam_eps)
            for member in self.value_members]
        self.bonus_optims = [
            AdamState(member.net.params, cfg.lr, cfg.adam_eps)
            for member in self.bonus_members]

        self.buffer = ReplayBuffer(cfg.buffer_capacity, obs_size)
        self.steps = 0
        self.updates = 0
        self.episodes = 0
        self.beta = cfg.beta_init

    def __repr__(self):
        return '<AgentState(%s, seed=%r, episodes=%d)>' % (
            self.cfg.variant.value, self.seed, self.episodes)

    def sync_targets(self):
        ''' Hard copy of every online network into its target. '''
        for member, target in zip(
                self.value_members + self.bonus_members,
                self.value_targets + self.bonus_targets):
            target.net.load_params(member.net)

    def named_nets(self):
        ''' The online networks, named for checkpoints. '''
        nets = []
        for group, members in (
                ('value', self.value_members), ('bonus', self.bonus_members)):
            for index, member in enumerate(members):
                nets.append(('%s_%d_%s' % (group, index, member.kind.value),
                             member.net))
        return nets


def save_agent(st, path):
    ''' Checkpoint the online networks of the agent. '''
    save_checkpoint(path, st.named_nets())


def load_agent(st, path):
    ''' Restore the online and target networks from a checkpoint. '''
    saved = dict(load_checkpoint(path))
    for name, net in st.named_nets():
        if name not in saved:
            raise ArgumentError('%s holds no network %s' % (path, name))
        net.load_params(saved[name])
    st.sync_targets()


def head_disagreement(head):
    """ Average pairwise w_1 between the members of a
    :class:`MixtureHead`, for every input and action: shape (B, A).
    """
    parts = [head.member_atoms(index) for index in range(len(head.members))]
    total = 0.0
    for i, (locs_i, probs_i) in enumerate(parts):
        for locs_j, probs_j in parts[i + 1:]:
            total = total + wasserstein_1_arrays(
                locs_i, probs_i, locs_j, probs_j)
    count = len(parts)
    return 2.0 * total / (count * (count - 1))


def disagreement(members, obs):
    """ Average pairwise w_1 between the members' distributions, for
    every input and action: shape (B, A).
    """
    return head_disagreement(forward(members, obs))


def bonus_values(st, obs, wavg=None):
    """ Bonus estimate of every action, shape (B, A): the bonus ensemble's
    mean shifted by the current disagreement, or the disagreement alone
    for agents without bonus networks.

    :kwarg wavg: the disagreement at ``obs`` when already computed

    """
    if not st.cfg.variant.explores:
        return np.zeros((np.atleast_2d(obs).shape[0], st.n_actions))
    if wavg is None:
        wavg = disagreement(st.value_members, obs)
    if st.bonus_members:
        return forward(st.bonus_members, obs).means() + wavg
    return wavg


def _scores_and_wavg(st, obs, beta):
    head = forward(st.value_members, obs)
    wavg = head_disagreement(head)
    scores = head.means()
    if beta > 0:
        scores = scores + beta * bonus_values(st, obs, wavg)
    return scores, wavg


def action_scores(st, obs, beta):
    ''' Value means plus ``beta`` times the bonus, shape (B, A). '''
    return _scores_and_wavg(st, obs, beta)[0]


def select_action(st, obs, beta):
    """ Optimistic greedy action, the lowest index on ties. """
    return int(np.argmax(action_scores(st, obs, beta)[0]))


def compute_wavg(st, obs, action):
    """ Disagreement of the value members at (obs, action). """
    return float(disagreement(st.value_members, obs)[0, action])


def beta_schedule(cfg, episode):
    """ beta_init decayed linearly to zero over a third of the episodes. """
    if episode < 0:
        raise ArgumentError('Episode indices start at 0')
    horizon = cfg.total_episodes / 3.0
    if horizon <= 0:
        return 0.0
    return cfg.beta_init * max(0.0, 1.0 - episode / horizon)


def _bootstrap_atoms(targets, next_obs, next_actions=None):
    """ Atoms of the target mixture at the next inputs and the greedy (or
    given) next actions, shape (B, M K).
    """
    head = forward(targets, next_obs)
    if next_actions is None:
        next_actions = np.argmax(head.means(), axis=1)
    return head.take(next_actions).atoms()


def value_bootstrap(st, batch):
    """ The sampled Bellman targets of the value members, one
    ``(locations, weights)`` pair of shape (B, J) per member.

    The target mixture is bootstrapped at its greedy next action and
    pushed forward by (r, gamma (1 - done)); independent members
    bootstrap from their own target only.
    """
    discount = (st.cfg.gamma * (1.0 - batch.dones))[:, None]
    rewards = batch.rewards[:, None]
    if st.cfg.variant is Variant.IND:
        atoms = [_bootstrap_atoms([target], batch.next_obs)
                 for target in st.value_targets]
    else:
        atoms = [_bootstrap_atoms(st.value_targets, batch.next_obs)] \
            * len(st.value_members)
    return [(rewards + discount * locations, weights)
            for locations, weights in atoms]


def train_value_step(st, batch):
    """ Regress the value members toward :func:`value_bootstrap`. """
    return regress(st.value_members, st.value_optims, batch.obs,
                   batch.actions, value_bootstrap(st, batch), 'value')


def bonus_bootstrap(st, batch):
    """ The sampled target of the bonus at the batch's (s, a).

    The intrinsic reward is the disagreement w_avg(s, a) of the current
    value members; the target bonus mixture, shifted by w_avg(s', a'),
    is bootstrapped at the optimistic action a' under the current beta:
    w_avg(s, a) + gamma (1 - done) (B(s', a') + w_avg(s', a')).

    :return: ``(locations, weights, wavg)`` with atoms of shape (B, J)
        and the intrinsic rewards of shape (B,)

    """
    rows = np.arange(len(batch))
    wavg = disagreement(st.value_members, batch.obs)[rows, batch.actions]
    discount = (st.cfg.gamma * (1.0 - batch.dones))[:, None]
    scores, next_wavg = _scores_and_wavg(st, batch.next_obs, st.beta)
    next_actions = np.argmax(scores, axis=1)
    locations, weights = _bootstrap_atoms(
        st.bonus_targets, batch.next_obs, next_actions)
    next_wavg = next_wavg[rows, next_actions]
    locations = wavg[:, None] + discount * (locations + next_wavg[:, None])
    return locations, weights, wavg


def train_bonus_step(st, batch):
    """ Regress the bonus members toward :func:`bonus_bootstrap`.

    The bonus estimate is the network output shifted by w_avg(s, a), so
    the networks learn the target minus w_avg(s, a).
    """
    if not st.bonus_members:
        return {}
    locations, weights, wavg = bonus_bootstrap(st, batch)
    target = (locations - wavg[:, None], weights)
    return regress(st.bonus_members, st.bonus_optims, batch.obs,
                   batch.actions, [target] * len(st.bonus_members), 'bonus')


class EpisodeRecord(object):
    ''' Summary of one episode. '''

    CSV_HEADER = ('seed', 'episode', 'mode', 'return', 'regret_flag',
                  'steps', 'beta', 'wavg_mean')

    def __init__(self, seed, episode, mode, total, steps, beta, wavg_mean,
                 regret_threshold=0.5):
        self.seed = seed
        self.episode = episode
        self.mode = mode
        self.total = total
        self.steps = steps
        self.beta = beta
        self.wavg_mean = wavg_mean
        self.regret = total < regret_threshold

    def __repr__(self):
        return '<EpisodeRecord(%s %d, return=%.4g)>' % (
            self.mode, self.episode, self.total)

    def to_csv_row(self):
        return [self.seed, self.episode, self.mode, repr(self.total),
                int(self.regret), self.steps, repr(self.beta),
                repr(self.wavg_mean)]


def run_episode(st, env, mode=TRAIN, regret_threshold=0.5):
    """ Play one episode of ``env``.

    Training episodes act optimistically under the scheduled beta, store
    their transitions and, once the buffer holds a batch, take one value
    and one bonus gradient step per environment step; targets are synced
    every ``target_update_freq`` gradient steps. Evaluation episodes act
    greedily and change nothing.

    :return: the :class:`EpisodeRecord`, also sent as an
        ``episode.finished`` notification

    """
    if mode not in (TRAIN, EVAL):
        raise ArgumentError('Unknown episode mode %r' % mode)
    cfg = st.cfg
    training = mode == TRAIN
    beta = 0.0
    if training and cfg.variant.explores:
        beta = beta_schedule(cfg, st.episodes)
    if training:
        st.beta = beta

    obs = env.reset()
    done = False
    total, steps, wavgs = 0.0, 0, []
    while not done:
        scores, wavg = _scores_and_wavg(st, obs, beta)
        action = int(np.argmax(scores[0]))
        wavgs.append(float(wavg[0, action]))

        next_obs, reward, done = env.step(action)
        total += reward
        steps += 1
        if training:
            st.buffer.add(Transition(obs, action, reward, next_obs, done))
            st.steps += 1
            if len(st.buffer) >= cfg.batch_size:
                train_value_step(
                    st, st.buffer.sample(st.rng, cfg.batch_size))
                train_bonus_step(
                    st, st.buffer.sample(st.rng, cfg.batch_size))
                st.updates += 1
                if st.updates % cfg.target_update_freq == 0:
                    st.sync_targets()
        obs = next_obs

    if training:
        st.episodes += 1
    record = EpisodeRecord(
        st.seed, st.episodes, mode, total, steps, beta,
        float(np.mean(wavgs)), regret_threshold)
    LOG.debug('%s episode %d: return %.4g in %d steps (beta %.3g)',
              mode, record.episode, total, steps, beta)
    projens.lib.notify.log(st, 'episode.finished', record)
    return record
