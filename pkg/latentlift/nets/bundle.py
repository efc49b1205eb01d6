import logging

from typing import Dict, Iterator, Optional, Union

import numpy as np
import torch
from torch import nn

from .. import exceptions
from ..utils import torch_seed
from .config import NetConfig
from .layers import as_tensor
from .models import ActionDecoder, ActionEncoder, Encoder, RewardModel, TransitionModel

logger = logging.getLogger(__name__)

MODEL_NAMES = ('encoder', 'action_encoder', 'action_decoder', 'transition', 'reward')


class ModelBundle(object):
    """The learned homomorphism: state encoder, action encoder, action decoder, transition and reward models.

    .. code:: pycon

        >>> from latentlift.nets import ModelBundle, NetConfig
        >>> bundle = ModelBundle.build(NetConfig(observation_shape=(50, 50, 3), n_actions=4))
        >>> bundle.encoder.head[-1].out_features
        10
    """

    def __init__(self, config: NetConfig, encoder: Encoder, action_encoder: ActionEncoder,
                 action_decoder: ActionDecoder, transition: TransitionModel, reward: RewardModel):
        self.config = config
        self.encoder = encoder
        self.action_encoder = action_encoder
        self.action_decoder = action_decoder
        self.transition = transition
        self.reward = reward
        self.frozen = False
        self.checkpoint_extra = {}  # type: Dict
        self.check_compatible()

    @classmethod
    def build(cls, config: NetConfig) -> 'ModelBundle':
        """Initialise all five models from ``config.init_seed``."""
        with torch_seed(config.init_seed):
            models = dict(
                encoder=Encoder(config),
                action_encoder=ActionEncoder(config),
                action_decoder=ActionDecoder(config),
                transition=TransitionModel(config),
                reward=RewardModel(config),
            )
        for model in models.values():
            model.to(config.torch_dtype)
        return cls(config, **models)  # type: ignore

    def check_compatible(self) -> None:
        state_out = self.encoder.head[-1].out_features
        latent_out = self.action_encoder.net[-2].out_features
        if not state_out == self.transition.dim_s == self.reward.dim_s == self.action_encoder.dim_s:
            raise exceptions.ShapeMismatch('the encoder output does not match the latent state width of the models')
        if latent_out != self.action_decoder.dim_a:
            raise exceptions.ShapeMismatch('the action encoder output does not match the action decoder input')
        if self.config.use_psi and latent_out != self.transition.action_dim:
            raise exceptions.ShapeMismatch('the action encoder output does not match the transition model input')
        if self.transition.action_dim != self.reward.action_dim:
            raise exceptions.ShapeMismatch('the transition and reward models take different action inputs')

    def models(self) -> Dict[str, nn.Module]:
        return {name: getattr(self, name) for name in MODEL_NAMES}

    def parameters(self) -> Iterator[nn.Parameter]:
        for model in self.models().values():
            yield from model.parameters()

    @property
    def dtype(self) -> torch.dtype:
        return self.config.torch_dtype

    def train(self, mode: bool = True) -> 'ModelBundle':
        for model in self.models().values():
            model.train(mode)
        return self

    def freeze(self) -> 'ModelBundle':
        """Stop every parameter from receiving gradients; the bundle is only evaluated from now on."""
        for parameter in self.parameters():
            parameter.requires_grad_(False)
        self.train(False)
        self.frozen = True
        return self

    def parameter_snapshot(self) -> Dict[str, torch.Tensor]:
        return {
            '{}.{}'.format(name, key): value.detach().clone()
            for name, model in self.models().items()
            for key, value in model.state_dict().items()
        }

    def one_hot(self, action: Union[np.ndarray, torch.Tensor]) -> torch.Tensor:
        index = torch.as_tensor(np.asarray(action) if not isinstance(action, torch.Tensor) else action,
                                dtype=torch.long)
        return nn.functional.one_hot(index, self.config.n_actions).to(self.dtype)

    def action_input(self, state: torch.Tensor, action: Union[np.ndarray, torch.Tensor],
                     use_psi: Optional[bool] = None) -> torch.Tensor:
        """The action fed to the transition and reward models: a latent action or the raw one-hot action."""
        one_hot = self.one_hot(action)
        use_psi = self.config.use_psi if use_psi is None else use_psi
        return self.action_encoder(state, one_hot) if use_psi else one_hot

    def encode(self, obs: Union[np.ndarray, torch.Tensor]) -> torch.Tensor:
        return self.encoder(as_tensor(obs, self.dtype))

    @torch.no_grad()
    def encode_numpy(self, obs: np.ndarray) -> np.ndarray:
        return self.encode(obs).cpu().numpy().astype(np.float64)

    @torch.no_grad()
    def decode_numpy(self, latent_action: np.ndarray) -> np.ndarray:
        """Discrete action index for each latent action (argmax of the decoder)."""
        return self.action_decoder.decode(as_tensor(latent_action, self.dtype)).cpu().numpy()
