from typing import Optional

import numpy as np
import torch
from sklearn.metrics import pairwise_distances

from ..core import TransitionDataset
from ..nets import ModelBundle, as_tensor


@torch.no_grad()
def encode_dataset(bundle: ModelBundle, obs: np.ndarray, batch_size: int = 512) -> np.ndarray:
    """Latent states of a stack of observations, encoded in chunks."""
    chunks = [bundle.encode_numpy(obs[start:start + batch_size]) for start in range(0, len(obs), batch_size)]
    if not chunks:
        return np.zeros((0, bundle.config.dim_s))
    return np.concatenate(chunks)


@torch.no_grad()
def action_round_trip_accuracy(bundle: ModelBundle, dataset: TransitionDataset, batch_size: int = 512) -> float:
    """Fraction of transitions whose action survives encoding and decoding, ``argmax dec(enc(s, a)) == a``."""
    hits = 0
    for start in range(0, len(dataset), batch_size):
        stop = start + batch_size
        state = bundle.encode(as_tensor(dataset.obs[start:stop], bundle.dtype))
        action = torch.as_tensor(dataset.action[start:stop], dtype=torch.long)
        latent = bundle.action_encoder(state, bundle.one_hot(action))
        hits += int((bundle.action_decoder.decode(latent) == action).sum())
    return hits / max(len(dataset), 1)


def mean_pairwise_latent_distance(bundle: ModelBundle, dataset: TransitionDataset, max_samples: int = 1000,
                                  seed: Optional[int] = 0) -> float:
    """Mean Euclidean distance between the latent states of distinct observations in ``dataset``.

    A collapsed encoder gives a value near zero.
    """
    obs_ids, _ = dataset.observation_ids()
    _, first = np.unique(obs_ids, return_index=True)
    if len(first) > max_samples:
        first = np.random.default_rng(seed).choice(first, size=max_samples, replace=False)
    if len(first) < 2:
        return 0.0
    latent = encode_dataset(bundle, dataset.obs[np.sort(first)])
    distances = pairwise_distances(latent, metric='euclidean')
    return float(distances[np.triu_indices(len(latent), k=1)].mean())
