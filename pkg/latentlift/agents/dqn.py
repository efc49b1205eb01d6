import copy
import dataclasses

from typing import Dict, Tuple

import numpy as np
import torch
from torch import nn

from ..core import DiscreteAction
from ..nets import ModelBundle, QNetwork
from ..utils import torch_seed
from .base import Agent, AgentConfig, LatentBatch, check_finite
from .catalogue import register_agent


@dataclasses.dataclass
class DQNConfig(AgentConfig):
    epsilon_greedy: float = 0.25
    lr: float = 5e-4
    target_update_period: int = 1000

    def __post_init__(self):
        super(DQNConfig, self).__post_init__()
        if not 0.0 <= self.epsilon_greedy <= 1.0:
            raise ValueError('epsilon_greedy must lie in [0, 1], got {}'.format(self.epsilon_greedy))
        if self.target_update_period < 1:
            raise ValueError('target_update_period must be positive')


def dqn_target(q_target: nn.Module, batch: LatentBatch, gamma: float) -> torch.Tensor:
    with torch.no_grad():
        return batch.reward + gamma * (1.0 - batch.done) * q_target(batch.next_state).max(dim=-1).values


@register_agent
class DQNAgent(Agent):
    """Q-learning directly from latent states to discrete actions, with a fixed epsilon-greedy exploration."""

    name = 'dqn'
    autoload = True
    config_cls = DQNConfig
    discrete_replay = True

    def __init__(self, config: DQNConfig, bundle: ModelBundle):
        super(DQNAgent, self).__init__(config, bundle)
        self.config = config  # type: DQNConfig
        with torch_seed(config.seed):
            self.q_network = QNetwork(self.dim_s, self.n_actions, config.hidden)
        self.q_target = copy.deepcopy(self.q_network)
        self.optimiser = torch.optim.Adam(self.q_network.parameters(), lr=config.lr)

    def networks(self) -> Dict[str, nn.Module]:
        return {'q_network': self.q_network, 'q_target': self.q_target}

    def act(self, state: np.ndarray, explore: bool) -> Tuple[int, DiscreteAction]:
        if explore and self.rng.random() < self.config.epsilon_greedy:
            index = int(self.rng.integers(self.n_actions))
        else:
            with torch.no_grad():
                index = int(torch.argmax(self.q_network(torch.as_tensor(state, dtype=torch.float32))))
        return index, DiscreteAction(index, self.n_actions)

    def warmup_action(self) -> Tuple[int, DiscreteAction]:
        index = int(self.rng.integers(self.n_actions))
        return index, DiscreteAction(index, self.n_actions)

    def update(self) -> Dict[str, float]:
        if len(self.replay) < self.config.batch_size:
            return {}
        return self.update_on(LatentBatch.stack(self.replay.sample_batch(self.config.batch_size), discrete=True))

    def update_on(self, batch: LatentBatch) -> Dict[str, float]:
        y = dqn_target(self.q_target, batch, self.config.gamma)
        q = self.q_network(batch.state).gather(-1, batch.action.unsqueeze(-1)).squeeze(-1)
        loss = nn.functional.mse_loss(q, y)
        result = {'q_loss': check_finite(loss, 'DQN update')}
        self.optimiser.zero_grad()
        loss.backward()
        self.optimiser.step()
        self.updates += 1
        if self.updates % self.config.target_update_period == 0:
            self.q_target.load_state_dict(self.q_network.state_dict())
        return result
