import os
import json
import logging

from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .. import exceptions
from ..utils import Lookup
from .replay import draw_negative_indices, observation_key
from .types import DiscreteAction, Transition, from_uint8, to_uint8

FORMAT_VERSION = 1
HEADER_FILE = 'header.json'
ARRAYS_FILE = 'transitions.npz'

logger = logging.getLogger(__name__)


class TransitionDataset(object):
    """A fixed, array-backed set of transitions collected before representation learning.

    Observations are kept as 8-bit RGB so that saving and loading is bit-exact.
    """

    def __init__(self, obs: np.ndarray, action: np.ndarray, reward: np.ndarray, next_obs: np.ndarray,
                 done: np.ndarray, n_actions: int, env_name: str = 'unknown', seed: Optional[int] = None):
        if obs.dtype != np.uint8 or next_obs.dtype != np.uint8:
            raise exceptions.DatasetFormatError('observations must be stored as uint8 pixels')
        if obs.shape != next_obs.shape or obs.ndim != 4 or obs.shape[-1] != 3:
            raise exceptions.ShapeMismatch(
                'expected N x H x W x 3 observation arrays, got {} and {}'.format(obs.shape, next_obs.shape)
            )
        count = obs.shape[0]
        if not (len(action) == len(reward) == len(done) == count):
            raise exceptions.ShapeMismatch('all transition arrays must have the same length')
        if count and (action.min() < 0 or action.max() >= n_actions):
            raise exceptions.InvalidAction(int(action.max()), n_actions)
        if not np.all(np.isfinite(reward)):
            raise exceptions.DatasetFormatError('rewards must be finite')

        self.obs = obs
        self.action = action.astype(np.int64)
        self.reward = reward.astype(np.float64)
        self.next_obs = next_obs
        self.done = done.astype(bool)
        self.n_actions = n_actions
        self.env_name = env_name
        self.seed = seed
        self._ids = None  # type: Optional[Tuple[np.ndarray, np.ndarray]]

    @classmethod
    def from_transitions(cls, transitions: Sequence[Transition], n_actions: Optional[int] = None,
                         env_name: str = 'unknown', seed: Optional[int] = None) -> 'TransitionDataset':
        if len(transitions) == 0:
            raise exceptions.EmptyDataset('A transition dataset needs at least one transition.')
        if n_actions is None:
            n_actions = transitions[0].action.n_actions
        return cls(
            obs=np.stack([to_uint8(t.obs) for t in transitions]),
            action=np.asarray([t.action.index for t in transitions], dtype=np.int64),
            reward=np.asarray([t.reward for t in transitions], dtype=np.float64),
            next_obs=np.stack([to_uint8(t.next_obs) for t in transitions]),
            done=np.asarray([t.done for t in transitions], dtype=bool),
            n_actions=n_actions,
            env_name=env_name,
            seed=seed,
        )

    def __len__(self) -> int:
        return int(self.obs.shape[0])

    def __getitem__(self, index: int) -> Transition:
        return Transition(
            obs=from_uint8(self.obs[index]),
            action=DiscreteAction(int(self.action[index]), self.n_actions),
            reward=float(self.reward[index]),
            next_obs=from_uint8(self.next_obs[index]),
            done=bool(self.done[index]),
        )

    def __repr__(self) -> str:
        return '<TransitionDataset env={!r} count={} observation_shape={} n_actions={}>'.format(
            self.env_name, len(self), self.observation_shape, self.n_actions
        )

    @property
    def observation_shape(self) -> Tuple[int, int, int]:
        return tuple(self.obs.shape[1:])  # type: ignore

    def subset(self, indices: np.ndarray) -> 'TransitionDataset':
        return TransitionDataset(
            obs=self.obs[indices], action=self.action[indices], reward=self.reward[indices],
            next_obs=self.next_obs[indices], done=self.done[indices], n_actions=self.n_actions,
            env_name=self.env_name, seed=self.seed,
        )

    def split(self, holdout_fraction: float, seed: int = 0) -> Tuple['TransitionDataset', 'TransitionDataset']:
        """Split into a training part and a held-out part with a seeded permutation."""
        if not 0.0 < holdout_fraction < 1.0:
            raise ValueError('holdout_fraction must be in (0, 1), got {}'.format(holdout_fraction))
        order = np.random.default_rng(seed).permutation(len(self))
        n_holdout = max(1, int(round(holdout_fraction * len(self))))
        return self.subset(np.sort(order[n_holdout:])), self.subset(np.sort(order[:n_holdout]))

    def observation_ids(self) -> Tuple[np.ndarray, np.ndarray]:
        """Ids of ``obs`` and ``next_obs`` such that equal ids mean bitwise-equal pixels."""
        if self._ids is None:
            lookup = Lookup()
            obs_ids = np.asarray([lookup[observation_key(o)] for o in self.obs], dtype=np.int64)
            next_ids = np.asarray([lookup[observation_key(o)] for o in self.next_obs], dtype=np.int64)
            self._ids = (obs_ids, next_ids)
        return self._ids

    def negative_indices(self, batch_indices: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Indices whose ``obs`` serve as contrastive negatives for the transitions at ``batch_indices``.

        Uses the same re-drawing rule as :meth:`ReplayBuffer.sample_negatives`.
        """
        obs_ids, next_ids = self.observation_ids()
        indices, unresolved = draw_negative_indices(obs_ids, next_ids[batch_indices], rng)
        if unresolved:
            logger.debug('%d negatives could not be made different from their positive', unresolved)
        return indices

    def header(self) -> Dict[str, Any]:
        return {
            'format_version': FORMAT_VERSION,
            'env': self.env_name,
            'image_size': int(self.obs.shape[1]),
            'observation_shape': list(self.observation_shape),
            'n_actions': int(self.n_actions),
            'count': len(self),
            'seed': self.seed,
        }

    def save(self, directory: str) -> str:
        """Write the dataset to ``directory`` (a header plus a compressed array archive)."""
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, HEADER_FILE), 'w') as stream:
            json.dump(self.header(), stream, indent=2, sort_keys=True)
        np.savez_compressed(
            os.path.join(directory, ARRAYS_FILE),
            obs=self.obs, action=self.action, reward=self.reward, next_obs=self.next_obs, done=self.done,
        )
        logger.info('saved %d transitions to %s', len(self), directory)
        return directory

    @classmethod
    def load(cls, directory: str) -> 'TransitionDataset':
        header_path = os.path.join(directory, HEADER_FILE)
        if not os.path.exists(header_path):
            raise exceptions.DatasetFormatError('No dataset header found at {}'.format(header_path))
        with open(header_path) as stream:
            header = json.load(stream)
        if header.get('format_version') != FORMAT_VERSION:
            raise exceptions.DatasetFormatError(
                'Unsupported dataset format version {!r}, expected {}'.format(header.get('format_version'),
                                                                              FORMAT_VERSION)
            )
        with np.load(os.path.join(directory, ARRAYS_FILE)) as arrays:
            dataset = cls(
                obs=arrays['obs'], action=arrays['action'], reward=arrays['reward'],
                next_obs=arrays['next_obs'], done=arrays['done'], n_actions=int(header['n_actions']),
                env_name=header['env'], seed=header.get('seed'),
            )
        if len(dataset) != header['count']:
            raise exceptions.DatasetFormatError(
                'Header announces {} transitions but {} were stored'.format(header['count'], len(dataset))
            )
        return dataset
