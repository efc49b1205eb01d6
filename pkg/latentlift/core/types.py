import math
import dataclasses

from typing import Tuple, Union

import numpy as np

from .. import exceptions

# An observation is a height x width x 3 float32 array with every entry in [0, 1].
Observation = np.ndarray


def validate_observation(obs: np.ndarray) -> np.ndarray:
    """Check that ``obs`` is an RGB image normalised to [0, 1].

    :param obs: The observation to check.
    :type obs: np.ndarray
    :return: The same observation.
    :rtype: np.ndarray
    """
    if obs.ndim != 3 or obs.shape[-1] != 3:
        raise exceptions.ShapeMismatch(
            'An observation must be a height x width x 3 array, got shape {}'.format(obs.shape)
        )
    if not np.all(np.isfinite(obs)) or obs.min(initial=0.0) < 0.0 or obs.max(initial=0.0) > 1.0:
        raise ValueError('Observation entries must be finite and within [0, 1].')
    return obs


def to_uint8(obs: np.ndarray) -> np.ndarray:
    """Quantise a [0, 1] observation to 8-bit RGB."""
    return np.round(np.asarray(obs, dtype=np.float64) * 255.0).astype(np.uint8)


def from_uint8(pixels: np.ndarray) -> np.ndarray:
    """Normalise 8-bit RGB pixels to a float32 observation in [0, 1]."""
    return (np.asarray(pixels, dtype=np.float32) / np.float32(255.0)).astype(np.float32)


@dataclasses.dataclass(frozen=True)
class DiscreteAction:
    """An action of a discrete action space with ``n_actions`` elements."""

    index: int
    n_actions: int

    def __post_init__(self):
        if self.n_actions < 1 or not 0 <= int(self.index) < self.n_actions:
            raise exceptions.InvalidAction(self.index, self.n_actions)
        object.__setattr__(self, 'index', int(self.index))

    def one_hot(self) -> np.ndarray:
        return one_hot(self)


def one_hot(action: Union[DiscreteAction, Tuple[int, int]]) -> np.ndarray:
    """Return the one-hot encoding of ``action``.

    .. code:: pycon

        >>> from latentlift.core import DiscreteAction, one_hot
        >>> one_hot(DiscreteAction(index=3, n_actions=4)).tolist()
        [0.0, 0.0, 0.0, 1.0]

    :param action: The action, or an ``(index, n_actions)`` pair.
    :type action: DiscreteAction
    :return: A float32 vector of length ``n_actions`` with a single one.
    :rtype: np.ndarray
    """
    if not isinstance(action, DiscreteAction):
        action = DiscreteAction(*action)
    vector = np.zeros(action.n_actions, dtype=np.float32)
    vector[action.index] = 1.0
    return vector


@dataclasses.dataclass(frozen=True, eq=False)
class Transition:
    """One experience tuple ``(o, a, r, o', done)`` collected from an environment."""

    obs: np.ndarray
    action: DiscreteAction
    reward: float
    next_obs: np.ndarray
    done: bool

    def __post_init__(self):
        if not math.isfinite(float(self.reward)):
            raise ValueError('Transition reward must be finite, got {}'.format(self.reward))
        if self.obs.shape != self.next_obs.shape:
            raise exceptions.ShapeMismatch(
                'obs and next_obs differ in shape: {} and {}'.format(self.obs.shape, self.next_obs.shape)
            )

    def __repr__(self) -> str:
        return '<Transition action={} reward={!r} done={!r} shape={}>'.format(
            self.action.index, self.reward, self.done, self.obs.shape
        )


@dataclasses.dataclass(frozen=True, eq=False)
class LatentTransition:
    """An experience tuple expressed in latent coordinates, as stored by the policy learners.

    ``action`` is the latent action vector for TD3 and the discrete action index for DQN.
    """

    state: np.ndarray
    action: Union[np.ndarray, int]
    reward: float
    next_state: np.ndarray
    done: bool
