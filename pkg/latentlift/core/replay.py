import warnings

from typing import Generic, List, Sequence, Tuple, TypeVar

import numpy as np

from .. import exceptions
from ..utils import Lookup
from .types import Transition

T = TypeVar('T')


def observation_key(obs: np.ndarray) -> bytes:
    """Key under which two observations compare equal exactly when their pixels are bitwise equal."""
    array = np.ascontiguousarray(obs)
    return str(array.dtype).encode('ascii') + str(array.shape).encode('ascii') + array.tobytes()


def draw_negative_indices(candidate_ids: np.ndarray, positive_ids: np.ndarray, rng: np.random.Generator,
                          max_redraws: int = 10) -> Tuple[np.ndarray, int]:
    """Draw one candidate per positive so that the candidate's observation differs from the positive.

    Candidates are drawn uniformly and re-drawn while they clash with their positive. Positives that still
    clash after ``max_redraws`` rounds are resolved by drawing uniformly among the non-clashing candidates,
    which gives the same distribution as unlimited re-drawing.

    :param candidate_ids: Observation id of every candidate.
    :type candidate_ids: np.ndarray
    :param positive_ids: Observation id of every positive (the successor observation of a batch element).
    :type positive_ids: np.ndarray
    :param rng: The generator that makes the draws.
    :type rng: np.random.Generator
    :param max_redraws: Number of vectorised re-drawing rounds before falling back to explicit selection.
    :type max_redraws: int
    :return: The chosen candidate indices and the number of positives for which no differing candidate exists.
    :rtype: Tuple[np.ndarray, int]
    """
    n_candidates = len(candidate_ids)
    indices = rng.integers(0, n_candidates, size=len(positive_ids))
    clash = candidate_ids[indices] == positive_ids
    for _ in range(max_redraws):
        if not clash.any():
            return indices, 0
        indices[clash] = rng.integers(0, n_candidates, size=int(clash.sum()))
        clash = candidate_ids[indices] == positive_ids

    unresolved = 0
    for position in np.flatnonzero(clash):
        valid = np.flatnonzero(candidate_ids != positive_ids[position])
        if len(valid) == 0:
            unresolved += 1
            continue
        indices[position] = valid[rng.integers(0, len(valid))]
    return indices, unresolved


class ReplayBuffer(Generic[T]):
    """A fixed-capacity experience memory with FIFO eviction and seeded sampling.

    .. code:: pycon

        >>> from latentlift.core import ReplayBuffer
        >>> buffer = ReplayBuffer(capacity=2, rng_seed=0)
        >>> for item in ['a', 'b', 'c']:
        ...     buffer.add(item)
        >>> buffer.entries
        ['b', 'c']

    Sampling is without replacement unless ``replace=True``. Two buffers built with the same seed and the
    same insert sequence produce the same sample sequence; ``reset_rng`` rewinds the sampling stream.
    """

    def __init__(self, capacity: int, rng_seed: int = 0, replace: bool = False):
        if capacity < 1:
            raise ValueError('capacity must be positive, got {}'.format(capacity))
        self.capacity = capacity
        self.rng_seed = rng_seed
        self.replace = replace
        self._storage = []  # type: List[T]
        self._obs_ids = []  # type: List[int]
        self._next = 0
        self._lookup = Lookup()
        self.reset_rng()

    def reset_rng(self) -> None:
        """Restore the sampling generator to its seeded state."""
        self._rng = np.random.default_rng(self.rng_seed)

    def __len__(self) -> int:
        return len(self._storage)

    def __getitem__(self, position: int) -> T:
        """Return the entry at ``position`` counted from the oldest stored entry."""
        if not -len(self) <= position < len(self):
            raise IndexError(position)
        return self._storage[self._physical(position % len(self))]

    def _physical(self, position: int) -> int:
        if len(self._storage) < self.capacity:
            return position
        return (self._next + position) % self.capacity

    @property
    def entries(self) -> List[T]:
        """Stored entries, oldest first."""
        return [self[i] for i in range(len(self))]

    def add(self, entry: T) -> None:
        obs_id = self._lookup[observation_key(entry.obs)] if isinstance(entry, Transition) else -1
        if len(self._storage) < self.capacity:
            self._storage.append(entry)
            self._obs_ids.append(obs_id)
        else:
            self._storage[self._next] = entry
            self._obs_ids[self._next] = obs_id
            self._next = (self._next + 1) % self.capacity
            if len(self._lookup) > 2 * self.capacity:
                self._rebuild_lookup()

    def _rebuild_lookup(self) -> None:
        """Forget the keys of evicted observations and renumber the stored ones."""
        lookup = Lookup()
        self._obs_ids = [lookup[observation_key(entry.obs)] if isinstance(entry, Transition) else -1
                         for entry in self._storage]
        self._lookup = lookup

    @property
    def tracked_observations(self) -> int:
        """Distinct observation keys held for negative sampling; at most twice the capacity."""
        return len(self._lookup)

    def extend(self, entries: Sequence[T]) -> None:
        for entry in entries:
            self.add(entry)

    def sample_batch(self, n: int) -> List[T]:
        """Sample ``n`` entries uniformly.

        :param n: The batch size.
        :type n: int
        :return: The sampled entries.
        :rtype: List
        """
        if n < 1:
            raise ValueError('batch size must be positive, got {}'.format(n))
        if len(self) < n and not (self.replace and len(self) > 0):
            raise exceptions.UnderfilledBuffer(len(self), n)
        chosen = self._rng.choice(len(self._storage), size=n, replace=self.replace)
        return [self._storage[i] for i in chosen]

    def sample_negatives(self, batch: Sequence[Transition]) -> List[np.ndarray]:
        """Draw one negative observation per batch element for the contrastive loss.

        Each negative is the ``obs`` of a uniformly drawn stored transition, re-drawn while it is
        pixel-identical to the batch element's own ``next_obs``. When the buffer holds no differing
        observation a warning is emitted and the clashing draw is returned anyway.

        :param batch: Transitions, normally from ``sample_batch``.
        :type batch: Sequence[Transition]
        :return: One observation per batch element.
        :rtype: List[np.ndarray]
        """
        if len(self) <= len(batch):
            raise exceptions.UnderfilledBuffer(len(self), len(batch) + 1)
        for entry in self._storage[:1]:
            if not isinstance(entry, Transition):
                raise TypeError('sample_negatives needs a buffer of Transition entries')

        candidate_ids = np.asarray(self._obs_ids, dtype=np.int64)
        positive_ids = np.asarray([self._lookup.get(observation_key(item.next_obs)) for item in batch],
                                  dtype=np.int64)
        indices, unresolved = draw_negative_indices(candidate_ids, positive_ids, self._rng)
        if unresolved:
            warnings.warn(
                '{} of {} negatives are identical to their positive observation because the buffer holds '
                'no other observation.'.format(unresolved, len(batch))
            )
        return [self._storage[i].obs for i in indices]  # type: ignore


def sample_batch(buffer: ReplayBuffer, n: int) -> list:
    """Sample ``n`` entries from ``buffer``, see :meth:`ReplayBuffer.sample_batch`."""
    return buffer.sample_batch(n)


def sample_negatives(buffer: ReplayBuffer, batch: Sequence[Transition]) -> List[np.ndarray]:
    """Draw contrastive negatives from ``buffer``, see :meth:`ReplayBuffer.sample_negatives`."""
    return buffer.sample_negatives(batch)
