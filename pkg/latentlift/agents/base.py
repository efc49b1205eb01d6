import logging
import dataclasses

from typing import Any, ClassVar, Dict, Sequence, Tuple, Type

import numpy as np
import torch
from torch import nn

from .. import exceptions
from ..core import DiscreteAction, LatentTransition, Observation, ReplayBuffer
from ..nets import ModelBundle

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class AgentConfig:
    """Settings shared by every latent-space policy learner.

    ``episodes`` and ``env_steps`` bound the training run; training stops at whichever comes first.
    """

    gamma: float = 0.99
    batch_size: int = 64
    replay_capacity: int = 100000
    warmup_steps: int = 1000
    hidden: Tuple[int, ...] = (256, 256)
    updates_per_step: int = 1
    episodes: int = 500
    env_steps: int = 30000
    seed: int = 0

    def __post_init__(self):
        self.hidden = tuple(self.hidden)
        if not 0.0 < self.gamma < 1.0:
            raise ValueError('gamma must lie in (0, 1), got {}'.format(self.gamma))
        if self.batch_size < 1 or self.replay_capacity < self.batch_size:
            raise ValueError('batch_size must be positive and no larger than replay_capacity')
        if self.warmup_steps < 0 or self.updates_per_step < 0 or self.episodes < 1 or self.env_steps < 1:
            raise ValueError('warmup_steps and updates_per_step must be non-negative, episodes and env_steps positive')


@dataclasses.dataclass
class LatentBatch:
    state: torch.Tensor
    action: torch.Tensor
    reward: torch.Tensor
    next_state: torch.Tensor
    done: torch.Tensor

    @classmethod
    def stack(cls, transitions: Sequence[LatentTransition], discrete: bool = False) -> 'LatentBatch':
        return cls(
            state=torch.as_tensor(np.stack([t.state for t in transitions]), dtype=torch.float32),
            action=torch.as_tensor(np.asarray([t.action for t in transitions]),
                                   dtype=torch.long if discrete else torch.float32),
            reward=torch.as_tensor([t.reward for t in transitions], dtype=torch.float32),
            next_state=torch.as_tensor(np.stack([t.next_state for t in transitions]), dtype=torch.float32),
            done=torch.as_tensor([float(t.done) for t in transitions], dtype=torch.float32),
        )


def check_finite(value: torch.Tensor, where: str) -> float:
    scalar = float(value.detach())
    if not np.isfinite(scalar):
        raise exceptions.DivergenceError(where, scalar)
    return scalar


class Agent(object):
    """This is the base class for policies that act on latent states of a frozen representation.

    The representation bundle is frozen on construction; agents only read it to encode observations
    (and, for latent-action agents, to decode actions).
    """

    name = 'agent'  # type: str
    autoload = False  # type: bool
    config_cls = AgentConfig  # type: ClassVar[Type[Any]]
    discrete_replay = False  # type: bool

    def __init__(self, config: AgentConfig, bundle: ModelBundle):
        self.config = config
        self.bundle = bundle.freeze()
        self.n_actions = bundle.config.n_actions
        self.dim_s = bundle.config.dim_s
        self.rng = np.random.default_rng(config.seed)
        self.replay = ReplayBuffer(config.replay_capacity, rng_seed=config.seed)  # type: ReplayBuffer
        self.updates = 0

    def __repr__(self) -> str:
        return '<{} seed={} updates={} replay={}>'.format(self.__class__.__name__, self.config.seed, self.updates,
                                                          len(self.replay))

    def encode(self, obs: Observation) -> np.ndarray:
        """Latent state of one observation as a float32 vector."""
        return self.bundle.encode_numpy(obs).astype(np.float32)

    def act(self, state: np.ndarray, explore: bool) -> Tuple[Any, DiscreteAction]:
        """Return the action to store in replay and the discrete action to send to the environment."""
        raise NotImplementedError('must be implemented in derived classes')

    def warmup_action(self) -> Tuple[Any, DiscreteAction]:
        """A uniformly random action used before learning starts."""
        raise NotImplementedError('must be implemented in derived classes')

    def observe(self, transition: LatentTransition) -> None:
        self.replay.add(transition)

    def update(self) -> Dict[str, float]:
        """Run one learning step from replay; returns the losses of that step (empty while replay is too small)."""
        raise NotImplementedError('must be implemented in derived classes')

    def networks(self) -> Dict[str, nn.Module]:
        raise NotImplementedError('must be implemented in derived classes')
