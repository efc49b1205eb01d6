import logging

from typing import Any, Dict, List

import numpy as np

from .. import exceptions
from ..core import DiscreteAction, Transition, TransitionDataset
from ..envs import Env, make_env
from .config import ExperimentConfig

logger = logging.getLogger(__name__)


def random_transitions(env: Env, n_transitions: int, seed: int = 0) -> TransitionDataset:
    """Roll out a uniform-random policy until ``n_transitions`` transitions have been recorded.

    The environment is re-seeded with ``seed`` and reset whenever an episode ends. Episodes cut by the time
    limit are recorded as non-terminal.

    :param env: The environment to explore.
    :type env: Env
    :param n_transitions: Exact number of transitions to record; must be positive.
    :type n_transitions: int
    :param seed: Seeds both the environment and the action sampler.
    :type seed: int
    :return: The collected transitions.
    :rtype: TransitionDataset
    """
    if n_transitions <= 0:
        raise exceptions.EmptyDataset('Asked to collect {} transitions; a dataset needs at least one.'.format(
            n_transitions))
    env.seed(seed)
    rng = np.random.default_rng(seed)
    transitions = []  # type: List[Transition]
    obs = env.reset()
    episodes = 1
    while len(transitions) < n_transitions:
        action = int(rng.integers(env.n_actions))
        next_obs, reward, done = env.step(action)
        transitions.append(Transition(obs=obs, action=DiscreteAction(action, env.n_actions), reward=reward,
                                      next_obs=next_obs, done=done and not env.truncated))
        if done:
            obs = env.reset()
            episodes += 1
        else:
            obs = next_obs
    logger.info('collected %d transitions over %d episodes of %s', len(transitions), episodes, env.name)
    return TransitionDataset.from_transitions(transitions, n_actions=env.n_actions, env_name=env.name,
                                              seed=seed)


def collect_env_overrides(config: ExperimentConfig) -> Dict[str, Any]:
    """The env overrides used while collecting.

    Distractors stay out of the representation dataset: an env with ``n_distractors > 0`` is collected with
    ``distractors_active=False`` unless ``collect.env_overrides`` sets ``distractors_active`` itself.
    """
    overrides = dict(config.collect.env_overrides)
    if getattr(config.env, 'n_distractors', 0) and 'distractors_active' not in overrides:
        overrides['distractors_active'] = False
    return overrides


def collect(config: ExperimentConfig) -> TransitionDataset:
    """Build the experiment's environment (with the collect-only overrides) and record random transitions."""
    overrides = collect_env_overrides(config)
    if overrides.get('distractors_active') is False and getattr(config.env, 'n_distractors', 0):
        logger.info('collecting without the %d distractors', config.env.n_distractors)
    try:
        env = make_env(config.env_name, config.env_config(**overrides))
    except (TypeError, ValueError) as error:
        raise exceptions.ConfigError('invalid collect.env_overrides: {}'.format(error))
    return random_transitions(env, config.collect.n_transitions, config.collect.seed)
