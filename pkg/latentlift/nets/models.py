"""The networks of the representation bundle and of the latent-space agents.

Every module is a pure function of its parameters and inputs. Inputs carry a leading batch dimension;
an unbatched input is accepted and gives an unbatched output.
"""
import torch
from torch import nn

from .. import exceptions
from .config import NetConfig
from .layers import check_width, mlp


def _batched(tensor: torch.Tensor, ndim: int):
    if tensor.dim() == ndim - 1:
        return tensor.unsqueeze(0), True
    return tensor, False


class Encoder(nn.Module):
    """Maps ``N x H x W x 3`` observations in [0, 1] to latent states."""

    def __init__(self, config: NetConfig):
        super(Encoder, self).__init__()
        self.observation_shape = config.observation_shape
        (c1, c2), (k1, k2) = config.conv_channels, config.conv_kernels
        self.conv = nn.Sequential(
            nn.Conv2d(3, c1, kernel_size=k1, stride=config.conv_stride, padding=config.conv_padding),
            nn.ReLU(),
            nn.Conv2d(c1, c2, kernel_size=k2, stride=config.conv_stride, padding=config.conv_padding),
            nn.ReLU(),
            nn.Flatten(),
        )
        self.head = mlp(config.flat_dim, config.hidden, config.dim_s)

    def forward(self, obs: torch.Tensor) -> torch.Tensor:
        obs, single = _batched(obs, 4)
        if tuple(obs.shape[1:]) != tuple(self.observation_shape):
            raise exceptions.ShapeMismatch('the encoder expects observations of shape {}, got {}'.format(
                self.observation_shape, tuple(obs.shape[1:])))
        state = self.head(self.conv(obs.permute(0, 3, 1, 2)))
        return state[0] if single else state


class ActionEncoder(nn.Module):
    """Maps a latent state and a one-hot action to a latent action in (-1, 1)."""

    def __init__(self, config: NetConfig):
        super(ActionEncoder, self).__init__()
        self.dim_s, self.n_actions = config.dim_s, config.n_actions
        self.state_free = config.state_free_action_encoder
        self.net = mlp(config.dim_s + config.n_actions, config.hidden, config.dim_a, nn.Tanh())

    def forward(self, state: torch.Tensor, action_one_hot: torch.Tensor) -> torch.Tensor:
        check_width(state, self.dim_s, 'latent state')
        check_width(action_one_hot, self.n_actions, 'one-hot action')
        if self.state_free:
            state = torch.zeros_like(state)
        return self.net(torch.cat([state, action_one_hot], dim=-1))


class ActionDecoder(nn.Module):
    """Maps a latent action to a probability vector over the ``n_actions`` discrete actions."""

    def __init__(self, config: NetConfig):
        super(ActionDecoder, self).__init__()
        self.dim_a = config.dim_a
        self.net = mlp(config.dim_a, config.hidden, config.n_actions)

    def logits(self, latent_action: torch.Tensor) -> torch.Tensor:
        check_width(latent_action, self.dim_a, 'latent action')
        return self.net(latent_action)

    def forward(self, latent_action: torch.Tensor) -> torch.Tensor:
        return torch.softmax(self.logits(latent_action), dim=-1)

    def decode(self, latent_action: torch.Tensor) -> torch.Tensor:
        """Index of the most probable action; the first maximum wins ties."""
        return torch.argmax(self.logits(latent_action), dim=-1)


class TransitionModel(nn.Module):
    """Residual latent dynamics ``s + delta(s, a)``."""

    def __init__(self, config: NetConfig):
        super(TransitionModel, self).__init__()
        self.dim_s, self.action_dim = config.dim_s, config.action_input_dim
        self.net = mlp(config.dim_s + config.action_input_dim, config.hidden, config.dim_s)

    def delta(self, state: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        check_width(state, self.dim_s, 'latent state')
        check_width(action, self.action_dim, 'action input')
        return self.net(torch.cat([state, action], dim=-1))

    def forward(self, state: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        return state + self.delta(state, action)


class RewardModel(nn.Module):

    def __init__(self, config: NetConfig):
        super(RewardModel, self).__init__()
        self.dim_s, self.action_dim = config.dim_s, config.action_input_dim
        self.net = mlp(config.dim_s + config.action_input_dim, config.hidden, 1)

    def forward(self, state: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        check_width(state, self.dim_s, 'latent state')
        check_width(action, self.action_dim, 'action input')
        return self.net(torch.cat([state, action], dim=-1)).squeeze(-1)


class Actor(nn.Module):
    """Deterministic latent policy with tanh-bounded output."""

    def __init__(self, dim_s: int, dim_a: int, hidden=(256, 256)):
        super(Actor, self).__init__()
        self.dim_s = dim_s
        self.net = mlp(dim_s, hidden, dim_a, nn.Tanh())

    def forward(self, state: torch.Tensor) -> torch.Tensor:
        check_width(state, self.dim_s, 'latent state')
        return self.net(state)


class Critic(nn.Module):

    def __init__(self, dim_s: int, dim_a: int, hidden=(256, 256)):
        super(Critic, self).__init__()
        self.dim_s, self.dim_a = dim_s, dim_a
        self.net = mlp(dim_s + dim_a, hidden, 1)

    def forward(self, state: torch.Tensor, latent_action: torch.Tensor) -> torch.Tensor:
        check_width(state, self.dim_s, 'latent state')
        check_width(latent_action, self.dim_a, 'latent action')
        return self.net(torch.cat([state, latent_action], dim=-1)).squeeze(-1)


class QNetwork(nn.Module):
    """One Q-value per discrete action, used by the DQN baseline."""

    def __init__(self, dim_s: int, n_actions: int, hidden=(256, 256)):
        super(QNetwork, self).__init__()
        self.dim_s = dim_s
        self.net = mlp(dim_s, hidden, n_actions)

    def forward(self, state: torch.Tensor) -> torch.Tensor:
        check_width(state, self.dim_s, 'latent state')
        return self.net(state)
