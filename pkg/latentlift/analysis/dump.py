import logging
import dataclasses

from typing import Optional

import numpy as np
import torch

from .. import exceptions
from ..envs import Env
from ..nets import ModelBundle, as_tensor

logger = logging.getLogger(__name__)


def _as_rows(value) -> np.ndarray:
    value = np.asarray(value, dtype=np.float64)
    return value[:, None] if value.ndim == 1 else value


@dataclasses.dataclass
class LatentDump:
    """Latent states of rendered environment states, with the hidden state and the reward of each row.

    ``latent_actions[i, a]`` is the latent action of discrete action ``a`` in row ``i`` and ``deltas[i, a]``
    is the predicted latent move ``T(s, a) - s``; both are optional.
    """

    true_state: np.ndarray
    latent: np.ndarray
    reward: np.ndarray
    latent_actions: Optional[np.ndarray] = None
    deltas: Optional[np.ndarray] = None
    env: str = ''

    def __post_init__(self):
        self.latent = _as_rows(self.latent)
        self.true_state = _as_rows(self.true_state)
        self.reward = np.asarray(self.reward, dtype=np.float64).reshape(-1)
        n = len(self.latent)
        if len(self.true_state) != n or len(self.reward) != n:
            raise exceptions.ShapeMismatch('every dump column needs {} rows'.format(n))
        for name in ('latent_actions', 'deltas'):
            value = getattr(self, name)
            if value is not None:
                value = np.asarray(value, dtype=np.float64)
                if value.ndim != 3 or len(value) != n:
                    raise exceptions.ShapeMismatch('{} must be rows x actions x width'.format(name))
                setattr(self, name, value)
        if self.deltas is not None and n and self.deltas.shape[2] != self.latent.shape[1]:
            raise exceptions.ShapeMismatch('the latent moves must be as wide as the latent states')

    def __len__(self) -> int:
        return len(self.latent)

    @property
    def n_actions(self) -> int:
        return 0 if self.latent_actions is None else int(self.latent_actions.shape[1])

    def save(self, path: str) -> str:
        arrays = dict(true_state=self.true_state, latent=self.latent, reward=self.reward, env=np.asarray(self.env))
        if self.latent_actions is not None:
            arrays['latent_actions'] = self.latent_actions
        if self.deltas is not None:
            arrays['deltas'] = self.deltas
        with open(path, 'wb') as stream:
            np.savez_compressed(stream, **arrays)
        return path

    @classmethod
    def load(cls, path: str) -> 'LatentDump':
        try:
            with np.load(path) as archive:
                return cls(
                    true_state=archive['true_state'],
                    latent=archive['latent'],
                    reward=archive['reward'],
                    latent_actions=archive['latent_actions'] if 'latent_actions' in archive else None,
                    deltas=archive['deltas'] if 'deltas' in archive else None,
                    env=str(archive['env']),
                )
        except (KeyError, ValueError, OSError) as error:
            raise exceptions.DatasetFormatError('{} is not a latent dump ({})'.format(path, error))


@torch.no_grad()
def build_latent_dump(env: Env, bundle: ModelBundle, n_samples: int = 2000, seed: int = 0,
                      batch_size: int = 256) -> LatentDump:
    """Render ``n_samples`` states drawn from the environment's spawn distribution and encode them.

    :param env: The environment whose states are sampled; its running episode is left untouched.
    :type env: Env
    :param bundle: The learned models.
    :type bundle: ModelBundle
    :param n_samples: Number of rows in the dump.
    :type n_samples: int
    :param seed: Seed of the state sampler.
    :type seed: int
    :return: The dump with latent actions and latent moves of every discrete action.
    :rtype: LatentDump
    """
    rng = np.random.default_rng(seed)
    states = [env.sample_state(rng) for _ in range(n_samples)]
    n_actions = bundle.config.n_actions
    width_a = bundle.config.action_input_dim

    latent = np.zeros((n_samples, bundle.config.dim_s))
    latent_actions = np.zeros((n_samples, n_actions, width_a))
    deltas = np.zeros((n_samples, n_actions, bundle.config.dim_s))
    for start in range(0, n_samples, batch_size):
        chunk = states[start:start + batch_size]
        obs = np.stack([env.render_state(state) for state in chunk])
        state = bundle.encode(as_tensor(obs, bundle.dtype))
        latent[start:start + len(chunk)] = state.cpu().numpy()
        for action in range(n_actions):
            index = np.full(len(chunk), action)
            action_input = bundle.action_input(state, index)
            latent_actions[start:start + len(chunk), action] = action_input.cpu().numpy()
            deltas[start:start + len(chunk), action] = bundle.transition.delta(state, action_input).cpu().numpy()

    if n_samples == 0:
        logger.warning('built an empty latent dump')
    return LatentDump(
        true_state=np.asarray([env.true_state(state) for state in states]) if states else np.zeros((0, 1)),
        latent=latent,
        reward=np.asarray([env.state_reward(state) for state in states]),
        latent_actions=latent_actions,
        deltas=deltas,
        env=env.name,
    )
