import logging
import dataclasses

from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence

import numpy as np
import pandas as pd

from .. import exceptions
from ..core import LatentTransition
from ..envs import Env
from ..nets import ModelBundle, load_checkpoint, restore_models, save_checkpoint
from .base import Agent, AgentConfig
from .catalogue import get_agent_class

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ['seed', 'episode', 'steps', 'return', 'success']


@dataclasses.dataclass
class EpisodeMetrics:
    seed: int
    episode: int
    steps: int
    ret: float
    success: bool
    env_steps: int = 0

    def to_row(self) -> Dict[str, Any]:
        return {'seed': self.seed, 'episode': self.episode, 'steps': self.steps, 'return': self.ret,
                'success': int(self.success)}


def metrics_frame(metrics: Sequence[EpisodeMetrics]) -> pd.DataFrame:
    return pd.DataFrame([m.to_row() for m in metrics], columns=METRIC_COLUMNS)


def check_bundle_matches_env(bundle: ModelBundle, env: Env) -> None:
    if tuple(bundle.config.observation_shape) != tuple(env.observation_shape):
        raise exceptions.CheckpointMismatch(
            'The representation was trained on observations of shape {} but the env renders {}'.format(
                tuple(bundle.config.observation_shape), tuple(env.observation_shape)))
    if bundle.config.n_actions != env.n_actions:
        raise exceptions.CheckpointMismatch(
            'The representation was trained with {} actions but the env has {}'.format(
                bundle.config.n_actions, env.n_actions))


def iter_train_policy(env: Env, bundle: ModelBundle, agent: str, config: AgentConfig,
                      seed: Optional[int] = None, on_agent: Optional[Callable[[Agent], None]] = None
                      ) -> Iterator[EpisodeMetrics]:
    """Train a policy on top of a frozen representation, yielding the metrics of every finished episode.

    Observations are encoded with the frozen state encoder; transitions are stored in latent coordinates.
    Episodes cut by the time limit are stored as non-terminal so that the learner keeps bootstrapping.
    An episode still running when the ``env_steps`` budget runs out is left out of the metrics, though
    its transitions were learned from.

    :param env: The environment to act in.
    :type env: Env
    :param bundle: The learned representation; it is frozen and never updated.
    :type bundle: ModelBundle
    :param agent: Registered agent name, ``'td3'`` or ``'dqn'``.
    :type agent: str
    :param config: The agent configuration, including the episode and step budgets.
    :type config: AgentConfig
    :param seed: Overrides ``config.seed`` and seeds the environment.
    :type seed: int
    :param on_agent: Called with the agent once it is built, so callers can keep a handle on it.
    :type on_agent: Callable
    """
    check_bundle_matches_env(bundle, env)
    if seed is not None:
        config = dataclasses.replace(config, seed=seed)
    learner = get_agent_class(agent)(config, bundle)
    if on_agent is not None:
        on_agent(learner)
    env.seed(config.seed)

    total_steps = 0
    for episode in range(1, config.episodes + 1):
        state = learner.encode(env.reset())
        episode_return = 0.0
        done = False
        while not done and total_steps < config.env_steps:
            if total_steps < config.warmup_steps:
                stored, action = learner.warmup_action()
            else:
                stored, action = learner.act(state, explore=True)
            next_obs, reward, done = env.step(action)
            next_state = learner.encode(next_obs)
            learner.observe(LatentTransition(state=state, action=stored, reward=reward, next_state=next_state,
                                             done=done and not env.truncated))
            total_steps += 1
            episode_return += reward
            state = next_state
            if total_steps >= config.warmup_steps:
                for _ in range(config.updates_per_step):
                    learner.update()

        if not done:
            logger.debug('seed %d: step budget of %d spent during episode %d, which is not reported',
                         config.seed, config.env_steps, episode)
            break
        metrics = EpisodeMetrics(seed=config.seed, episode=episode, steps=env.state.steps, ret=episode_return,
                                 success=bool(env.success), env_steps=total_steps)
        logger.debug('seed %d episode %d: steps=%d return=%.4f success=%s', config.seed, episode, metrics.steps,
                     metrics.ret, metrics.success)
        yield metrics
        if total_steps >= config.env_steps:
            break


@dataclasses.dataclass
class PolicyRun:
    agent: Agent
    metrics: List[EpisodeMetrics]

    @property
    def frame(self) -> pd.DataFrame:
        return metrics_frame(self.metrics)


def train_policy(env: Env, bundle: ModelBundle, agent: str, config: AgentConfig,
                 seed: Optional[int] = None) -> PolicyRun:
    """Run :func:`iter_train_policy` to the end and return the trained agent with all episode metrics."""
    holder = []  # type: List[Agent]
    metrics = list(iter_train_policy(env, bundle, agent, config, seed, on_agent=holder.append))
    if metrics:
        window = metrics[-50:]
        logger.info('%s seed %d: %d episodes, final mean steps %.2f, success %.2f', agent, holder[0].config.seed,
                    len(metrics), np.mean([m.steps for m in window]), np.mean([m.success for m in window]))
    return PolicyRun(agent=holder[0], metrics=metrics)


def evaluate_policy(env: Env, agent: Agent, episodes: int, seed: int = 0) -> List[EpisodeMetrics]:
    """Greedy rollouts of a trained agent, without exploration noise and without learning."""
    env.seed(seed)
    results = []
    for episode in range(1, episodes + 1):
        state = agent.encode(env.reset())
        episode_return, done = 0.0, False
        while not done:
            _, action = agent.act(state, explore=False)
            obs, reward, done = env.step(action)
            episode_return += reward
            state = agent.encode(obs)
        results.append(EpisodeMetrics(seed=seed, episode=episode, steps=env.state.steps, ret=episode_return,
                                      success=bool(env.success)))
    return results


def save_agent(agent: Agent, path: str) -> str:
    config = dataclasses.asdict(agent.config)
    return save_checkpoint(path, agent.name, config, agent.networks(), {'updates': agent.updates})


def load_agent(path: str, agent: str, bundle: ModelBundle) -> Agent:
    """Rebuild an agent of the registered kind ``agent`` from :func:`save_agent` output."""
    container = load_checkpoint(path, agent)
    agent_cls = get_agent_class(agent)
    learner = agent_cls(agent_cls.config_cls(**container['config']), bundle)
    restore_models(container, learner.networks())
    learner.updates = int(container['extra'].get('updates', 0))
    return learner
