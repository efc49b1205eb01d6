"""Objectives that make the encoders an approximate MDP homomorphism of the observed control problem.

The ``*_error`` kernels work on plain tensors and return one value per batch element; the ``*_loss``
functions run a :class:`~latentlift.nets.ModelBundle` on a :class:`Batch` and average over the batch.
"""
import dataclasses

from typing import Dict, Optional, Sequence

import numpy as np
import torch

from ..core import Transition, TransitionDataset, to_uint8
from ..nets import ModelBundle, as_tensor

PROBABILITY_FLOOR = 1e-12
LOSS_NAMES = ('L_T', 'L_R', 'L_c', 'L_delta')


@dataclasses.dataclass
class LossWeights:
    w_T: float = 1.0
    w_R: float = 1.0
    w_c: float = 1.0
    w_delta: float = 1.0
    hinge_eps: float = 1.0

    def __post_init__(self):
        if min(self.w_T, self.w_R, self.w_c, self.w_delta) < 0:
            raise ValueError('loss weights must be non-negative, got {}'.format(self))
        if self.hinge_eps <= 0:
            raise ValueError('hinge_eps must be positive, got {}'.format(self.hinge_eps))


@dataclasses.dataclass
class Wiring:
    """How the models are connected.

    ``use_psi`` routes actions through the action encoder; without it the transition and reward models
    see the raw one-hot action. ``stop_target_gradient`` blocks gradients through the encoding of the
    successor observation. ``state_free_psi`` makes the action encoder ignore the latent state.
    """

    use_psi: bool = True
    stop_target_gradient: bool = False
    state_free_psi: bool = False


@dataclasses.dataclass
class Batch:
    obs: torch.Tensor
    action: torch.Tensor
    reward: torch.Tensor
    next_obs: torch.Tensor
    negatives: Optional[torch.Tensor] = None

    def __len__(self) -> int:
        return int(self.action.shape[0])

    @classmethod
    def from_dataset(cls, dataset: TransitionDataset, indices: np.ndarray, negative_indices: Optional[np.ndarray],
                     dtype: torch.dtype = torch.float32) -> 'Batch':
        return cls(
            obs=as_tensor(dataset.obs[indices], dtype),
            action=torch.as_tensor(dataset.action[indices], dtype=torch.long),
            reward=torch.as_tensor(dataset.reward[indices], dtype=dtype),
            next_obs=as_tensor(dataset.next_obs[indices], dtype),
            negatives=None if negative_indices is None else as_tensor(dataset.obs[negative_indices], dtype),
        )

    @classmethod
    def from_transitions(cls, transitions: Sequence[Transition], negatives: Optional[Sequence[np.ndarray]] = None,
                         dtype: torch.dtype = torch.float32) -> 'Batch':
        return cls(
            obs=as_tensor(np.stack([to_uint8(t.obs) for t in transitions]), dtype),
            action=torch.as_tensor([t.action.index for t in transitions], dtype=torch.long),
            reward=torch.as_tensor([t.reward for t in transitions], dtype=dtype),
            next_obs=as_tensor(np.stack([to_uint8(t.next_obs) for t in transitions]), dtype),
            negatives=None if negatives is None else as_tensor(np.stack([to_uint8(n) for n in negatives]), dtype),
        )


def transition_error(target: torch.Tensor, prediction: torch.Tensor) -> torch.Tensor:
    return torch.linalg.vector_norm(target - prediction, dim=-1)


def reward_error(reward: torch.Tensor, predicted: torch.Tensor) -> torch.Tensor:
    return torch.abs(reward - predicted)


def hinge_error(negative: torch.Tensor, prediction: torch.Tensor, eps: float) -> torch.Tensor:
    """``max(0, eps - |negative - prediction|)``, bounded by ``[0, eps]``."""
    return torch.clamp(eps - torch.linalg.vector_norm(negative - prediction, dim=-1), min=0.0)


def cross_entropy(probabilities: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
    """Negative log-probability of the true action, with probabilities floored at ``1e-12``."""
    chosen = probabilities.gather(-1, action.long().unsqueeze(-1)).squeeze(-1)
    return -torch.log(torch.clamp(chosen, min=PROBABILITY_FLOOR))


class _Encoded(object):
    """Latent quantities shared by the four objectives, computed once per batch."""

    def __init__(self, bundle: ModelBundle, batch: Batch, wiring: Wiring, with_negatives: bool = True):
        self.state = bundle.encode(batch.obs)
        next_state = bundle.encode(batch.next_obs)
        self.next_state = next_state.detach() if wiring.stop_target_gradient else next_state
        self.action = bundle.action_input(self.state, batch.action, wiring.use_psi)
        self.prediction = bundle.transition(self.state, self.action)
        self.negatives = None
        if with_negatives and batch.negatives is not None:
            self.negatives = bundle.encode(batch.negatives)


def transition_loss(bundle: ModelBundle, batch: Batch, wiring: Optional[Wiring] = None) -> torch.Tensor:
    encoded = _Encoded(bundle, batch, wiring or Wiring(use_psi=bundle.config.use_psi), with_negatives=False)
    return transition_error(encoded.next_state, encoded.prediction).mean()


def reward_loss(bundle: ModelBundle, batch: Batch, wiring: Optional[Wiring] = None) -> torch.Tensor:
    wiring = wiring or Wiring(use_psi=bundle.config.use_psi)
    state = bundle.encode(batch.obs)
    action = bundle.action_input(state, batch.action, wiring.use_psi)
    return reward_error(batch.reward, bundle.reward(state, action)).mean()


def contrastive_loss(bundle: ModelBundle, batch: Batch, eps: float = 1.0,
                     wiring: Optional[Wiring] = None) -> torch.Tensor:
    if batch.negatives is None:
        raise ValueError('the contrastive loss needs one negative observation per batch element')
    encoded = _Encoded(bundle, batch, wiring or Wiring(use_psi=bundle.config.use_psi))
    return hinge_error(encoded.negatives, encoded.prediction, eps).mean()


def decoder_loss(bundle: ModelBundle, batch: Batch) -> torch.Tensor:
    state = bundle.encode(batch.obs)
    latent_action = bundle.action_encoder(state, bundle.one_hot(batch.action))
    return cross_entropy(bundle.action_decoder(latent_action), batch.action).mean()


def compute_losses(bundle: ModelBundle, batch: Batch, weights: Optional[LossWeights] = None,
                   wiring: Optional[Wiring] = None) -> Dict[str, torch.Tensor]:
    """Evaluate all four objectives and their weighted sum from a single encoding pass.

    :param bundle: The models being trained.
    :type bundle: ModelBundle
    :param batch: Observations, actions, rewards, successors and (optionally) negatives.
    :type batch: Batch
    :param weights: Loss weights and the hinge margin.
    :type weights: LossWeights
    :param wiring: Whether the action encoder is used and whether target gradients are stopped.
    :type wiring: Wiring
    :return: Tensors keyed ``L_T``, ``L_R``, ``L_c``, ``L_delta`` and ``total``. ``L_c`` is zero without negatives.
    :rtype: Dict[str, torch.Tensor]
    """
    weights = weights or LossWeights()
    wiring = wiring or Wiring(use_psi=bundle.config.use_psi)
    encoded = _Encoded(bundle, batch, wiring)

    losses = {
        'L_T': transition_error(encoded.next_state, encoded.prediction).mean(),
        'L_R': reward_error(batch.reward, bundle.reward(encoded.state, encoded.action)).mean(),
    }
    if encoded.negatives is not None:
        losses['L_c'] = hinge_error(encoded.negatives, encoded.prediction, weights.hinge_eps).mean()
    else:
        losses['L_c'] = torch.zeros((), dtype=bundle.dtype)

    latent_action = encoded.action if wiring.use_psi else bundle.action_encoder(
        encoded.state, bundle.one_hot(batch.action))
    losses['L_delta'] = cross_entropy(bundle.action_decoder(latent_action), batch.action).mean()
    losses['total'] = (weights.w_T * losses['L_T'] + weights.w_R * losses['L_R']
                       + weights.w_c * losses['L_c'] + weights.w_delta * losses['L_delta'])
    return losses


def total_loss(bundle: ModelBundle, batch: Batch, weights: Optional[LossWeights] = None,
               wiring: Optional[Wiring] = None) -> torch.Tensor:
    return compute_losses(bundle, batch, weights, wiring)['total']
