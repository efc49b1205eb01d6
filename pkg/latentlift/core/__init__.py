from .types import (
    Observation, DiscreteAction, Transition, LatentTransition, one_hot, validate_observation, to_uint8, from_uint8,
)
from .replay import ReplayBuffer, sample_batch, sample_negatives, draw_negative_indices, observation_key
from .dataset import TransitionDataset
