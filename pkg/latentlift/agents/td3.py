"""Twin delayed deterministic policy gradient on the latent state and latent action spaces.

The actor outputs latent actions in [-1, 1]; the frozen action decoder turns them into discrete actions
at the environment boundary.
"""
import copy
import logging
import dataclasses

from typing import Dict, Optional, Tuple

import numpy as np
import torch
from torch import nn

from ..core import DiscreteAction
from ..nets import Actor, Critic, ModelBundle
from ..utils import torch_seed
from .base import Agent, AgentConfig, LatentBatch, check_finite
from .catalogue import register_agent

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class TD3Config(AgentConfig):
    tau: float = 0.005
    policy_delay: int = 2
    sigma_explore: float = 0.35
    sigma_target: float = 0.2
    clip_c: float = 0.5
    lr_actor: float = 5e-4
    lr_critic: float = 5e-4

    def __post_init__(self):
        super(TD3Config, self).__post_init__()
        if not 0.0 < self.tau <= 1.0:
            raise ValueError('tau must lie in (0, 1], got {}'.format(self.tau))
        if self.clip_c <= 0 or self.policy_delay < 1:
            raise ValueError('clip_c must be positive and policy_delay at least 1')
        if self.sigma_explore < 0 or self.sigma_target < 0:
            raise ValueError('noise scales must be non-negative')


def soft_update(target: nn.Module, online: nn.Module, tau: float) -> None:
    """``target <- tau * online + (1 - tau) * target``, parameter by parameter."""
    with torch.no_grad():
        for target_param, param in zip(target.parameters(), online.parameters()):
            target_param.copy_(tau * param + (1.0 - tau) * target_param)


def td3_target(actor_target: nn.Module, critic1_target: nn.Module, critic2_target: nn.Module,
               batch: LatentBatch, gamma: float, noise: torch.Tensor) -> torch.Tensor:
    """Clipped double-Q target with target-policy smoothing.

    :param noise: Already clipped smoothing noise, one row per batch element.
    :type noise: torch.Tensor
    :return: ``r + gamma * (1 - done) * min(Q1'(s', a~), Q2'(s', a~))`` with ``a~ = clip(pi'(s') + noise, -1, 1)``.
    :rtype: torch.Tensor
    """
    with torch.no_grad():
        next_action = torch.clamp(actor_target(batch.next_state) + noise, -1.0, 1.0)
        next_q = torch.min(critic1_target(batch.next_state, next_action),
                           critic2_target(batch.next_state, next_action))
        return batch.reward + gamma * (1.0 - batch.done) * next_q


@register_agent
class TD3Agent(Agent):
    name = 'td3'
    autoload = True
    config_cls = TD3Config

    def __init__(self, config: TD3Config, bundle: ModelBundle):
        super(TD3Agent, self).__init__(config, bundle)
        self.config = config  # type: TD3Config
        self.dim_a = bundle.config.dim_a
        with torch_seed(config.seed):
            self.actor = Actor(self.dim_s, self.dim_a, config.hidden)
            self.critic1 = Critic(self.dim_s, self.dim_a, config.hidden)
            self.critic2 = Critic(self.dim_s, self.dim_a, config.hidden)
        self.actor_target = copy.deepcopy(self.actor)
        self.critic1_target = copy.deepcopy(self.critic1)
        self.critic2_target = copy.deepcopy(self.critic2)
        self.actor_optimiser = torch.optim.Adam(self.actor.parameters(), lr=config.lr_actor)
        self.critic_optimiser = torch.optim.Adam(
            list(self.critic1.parameters()) + list(self.critic2.parameters()), lr=config.lr_critic)
        self.noise_generator = torch.Generator().manual_seed(config.seed)

    def networks(self) -> Dict[str, nn.Module]:
        return {
            'actor': self.actor, 'critic1': self.critic1, 'critic2': self.critic2,
            'actor_target': self.actor_target, 'critic1_target': self.critic1_target,
            'critic2_target': self.critic2_target,
        }

    def decode(self, latent_action: np.ndarray) -> DiscreteAction:
        index = int(self.bundle.decode_numpy(latent_action[None, :])[0])
        return DiscreteAction(index, self.n_actions)

    def act(self, state: np.ndarray, explore: bool) -> Tuple[np.ndarray, DiscreteAction]:
        with torch.no_grad():
            latent = self.actor(torch.as_tensor(state, dtype=torch.float32)[None, :])[0].numpy().astype(np.float64)
        if explore and self.config.sigma_explore > 0:
            latent = latent + self.rng.normal(0.0, self.config.sigma_explore, size=self.dim_a)
        latent = np.clip(latent, -1.0, 1.0).astype(np.float32)
        return latent, self.decode(latent)

    def warmup_action(self) -> Tuple[np.ndarray, DiscreteAction]:
        latent = self.rng.uniform(-1.0, 1.0, size=self.dim_a).astype(np.float32)
        return latent, self.decode(latent)

    def smoothing_noise(self, batch_size: int) -> torch.Tensor:
        noise = torch.randn((batch_size, self.dim_a), generator=self.noise_generator) * self.config.sigma_target
        return torch.clamp(noise, -self.config.clip_c, self.config.clip_c)

    def target(self, batch: LatentBatch, noise: Optional[torch.Tensor] = None) -> torch.Tensor:
        if noise is None:
            noise = self.smoothing_noise(len(batch.reward))
        return td3_target(self.actor_target, self.critic1_target, self.critic2_target, batch, self.config.gamma,
                          noise)

    def update(self) -> Dict[str, float]:
        if len(self.replay) < self.config.batch_size:
            return {}
        return self.update_on(LatentBatch.stack(self.replay.sample_batch(self.config.batch_size)))

    def update_on(self, batch: LatentBatch) -> Dict[str, float]:
        """One critic step, plus an actor step and soft target updates every ``policy_delay`` calls."""
        y = self.target(batch)
        critic_loss = (nn.functional.mse_loss(self.critic1(batch.state, batch.action), y)
                       + nn.functional.mse_loss(self.critic2(batch.state, batch.action), y))
        losses = {'critic_loss': check_finite(critic_loss, 'TD3 critic update')}
        self.critic_optimiser.zero_grad()
        critic_loss.backward()
        self.critic_optimiser.step()
        self.updates += 1

        if self.updates % self.config.policy_delay == 0:
            actor_loss = -self.critic1(batch.state, self.actor(batch.state)).mean()
            losses['actor_loss'] = check_finite(actor_loss, 'TD3 actor update')
            self.actor_optimiser.zero_grad()
            actor_loss.backward()
            self.actor_optimiser.step()
            soft_update(self.actor_target, self.actor, self.config.tau)
            soft_update(self.critic1_target, self.critic1, self.config.tau)
            soft_update(self.critic2_target, self.critic2, self.config.tau)
        return losses
