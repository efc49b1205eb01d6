import math
import logging
import dataclasses

from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import torch

from .. import exceptions
from ..core import TransitionDataset
from ..nets import ModelBundle, NetConfig, save_bundle
from .baselines import configure_baseline
from .losses import LOSS_NAMES, Batch, LossWeights, Wiring, compute_losses

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ['epoch'] + list(LOSS_NAMES) + ['total']


@dataclasses.dataclass
class ReprConfig:
    """Hyper-parameters of representation learning; defaults follow the published grid-world setup."""

    weights: LossWeights = dataclasses.field(default_factory=LossWeights)
    learning_rate: float = 5e-4
    batch_size: int = 256
    epochs: int = 100
    baseline: str = 'ours'
    dim_s: int = 10
    dim_a: int = 5
    seed: int = 0
    stop_target_gradient: bool = False
    state_free_action_encoder: bool = False
    holdout_fraction: float = 0.1
    hidden: Tuple[int, ...] = (64, 32)
    conv_stride: int = 2
    conv_padding: int = 0
    adam_betas: Tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8
    dtype: str = 'float32'

    def __post_init__(self):
        if isinstance(self.weights, dict):
            self.weights = LossWeights(**self.weights)
        self.baseline = self.baseline.lower()
        self.hidden = tuple(self.hidden)
        self.adam_betas = tuple(self.adam_betas)  # type: ignore
        if self.learning_rate <= 0 or self.batch_size < 1 or self.epochs < 0:
            raise ValueError('learning_rate and batch_size must be positive and epochs non-negative')
        if not 0.0 <= self.holdout_fraction < 1.0:
            raise ValueError('holdout_fraction must be in [0, 1), got {}'.format(self.holdout_fraction))

    def configure(self) -> Tuple[LossWeights, Wiring]:
        """The masked loss weights and the wiring of the selected method."""
        return configure_baseline(self.baseline, self.weights, self.stop_target_gradient)

    def net_config(self, observation_shape, n_actions: int, wiring: Wiring) -> NetConfig:
        return NetConfig(
            observation_shape=tuple(observation_shape), dim_s=self.dim_s, dim_a=self.dim_a, n_actions=n_actions,
            hidden=self.hidden, conv_stride=self.conv_stride, conv_padding=self.conv_padding,
            state_free_action_encoder=self.state_free_action_encoder or wiring.state_free_psi,
            use_psi=wiring.use_psi, init_seed=self.seed, dtype=self.dtype,
        )


@dataclasses.dataclass
class RepresentationResult:
    bundle: ModelBundle
    curves: pd.DataFrame
    weights: LossWeights
    wiring: Wiring
    config: ReprConfig

    def initial(self, column: str) -> float:
        return float(self.curves[column].iloc[0])

    def final(self, column: str) -> float:
        return float(self.curves[column].iloc[-1])

    def save(self, path: str, extra: Optional[Dict[str, Any]] = None) -> str:
        """Freeze the bundle and write it together with the loss curves and the method description."""
        payload = {
            'baseline': self.config.baseline,
            'weights': dataclasses.asdict(self.weights),
            'wiring': dataclasses.asdict(self.wiring),
            'curves': self.curves.to_dict(orient='list'),
        }
        payload.update(extra or {})
        return save_bundle(self.bundle.freeze(), path, payload)


def _batches(dataset: TransitionDataset, batch_size: int, rng: np.random.Generator, shuffle: bool = True):
    order = rng.permutation(len(dataset)) if shuffle else np.arange(len(dataset))
    for start in range(0, len(order), batch_size):
        indices = order[start:start + batch_size]
        yield indices, dataset.negative_indices(indices, rng)


def evaluate_losses(bundle: ModelBundle, dataset: TransitionDataset, weights: LossWeights, wiring: Wiring,
                    batch_size: int = 256, seed: int = 0) -> Dict[str, float]:
    """Batch-size weighted mean of every loss over ``dataset`` without updating anything."""
    rng = np.random.default_rng(seed)
    sums = dict.fromkeys(list(LOSS_NAMES) + ['total'], 0.0)
    with torch.no_grad():
        for indices, negatives in _batches(dataset, batch_size, rng, shuffle=False):
            batch = Batch.from_dataset(dataset, indices, negatives, bundle.dtype)
            for name, value in compute_losses(bundle, batch, weights, wiring).items():
                sums[name] += float(value) * len(indices)
    return {name: value / len(dataset) for name, value in sums.items()}


def train_representation(config: ReprConfig, dataset: TransitionDataset,
                         callback: Optional[Callable[[int, Dict[str, float]], None]] = None
                         ) -> RepresentationResult:
    """Fit a model bundle to a fixed transition dataset with minibatch Adam on the weighted total loss.

    Row ``0`` of the returned curves holds the losses of the freshly initialised bundle; row ``e`` holds the
    mean training losses of epoch ``e``.

    :param config: Method, loss weights and optimisation settings.
    :type config: ReprConfig
    :param dataset: Transitions collected by random interaction.
    :type dataset: TransitionDataset
    :param callback: Called after every epoch with the epoch number and its mean losses.
    :type callback: Callable
    :return: The trained bundle with its loss curves.
    :rtype: RepresentationResult
    """
    if len(dataset) < config.batch_size:
        raise exceptions.EmptyDataset('The dataset holds {} transitions, fewer than one batch of {}'.format(
            len(dataset), config.batch_size))
    weights, wiring = config.configure()
    bundle = ModelBundle.build(config.net_config(dataset.observation_shape, dataset.n_actions, wiring))
    optimiser = torch.optim.Adam(list(bundle.parameters()), lr=config.learning_rate, betas=config.adam_betas,
                                 eps=config.adam_eps)
    rng = np.random.default_rng(config.seed)
    logger.info('training %s representation on %d transitions for %d epochs', config.baseline, len(dataset),
                config.epochs)

    rows = [dict(epoch=0, **evaluate_losses(bundle, dataset, weights, wiring, config.batch_size, config.seed))]
    for epoch in range(1, config.epochs + 1):
        bundle.train(True)
        sums = dict.fromkeys(list(LOSS_NAMES) + ['total'], 0.0)
        for indices, negatives in _batches(dataset, config.batch_size, rng):
            batch = Batch.from_dataset(dataset, indices, negatives, bundle.dtype)
            losses = compute_losses(bundle, batch, weights, wiring)
            if not torch.isfinite(losses['total']):
                raise exceptions.DivergenceError('representation training (epoch {})'.format(epoch),
                                                 float(losses['total']))
            optimiser.zero_grad()
            losses['total'].backward()
            optimiser.step()
            for name, value in losses.items():
                sums[name] += float(value.detach()) * len(indices)

        means = {name: value / len(dataset) for name, value in sums.items()}
        rows.append(dict(epoch=epoch, **means))
        logger.info('epoch %d: total=%.5f L_T=%.5f L_R=%.5f L_c=%.5f L_delta=%.5f', epoch, means['total'],
                    means['L_T'], means['L_R'], means['L_c'], means['L_delta'])
        if callback is not None:
            callback(epoch, means)

    bundle.train(False)
    curves = pd.DataFrame(rows, columns=CURVE_COLUMNS)
    if not all(math.isfinite(v) for v in curves['total']):
        raise exceptions.DivergenceError('representation training', curves['total'].iloc[-1])
    return RepresentationResult(bundle=bundle, curves=curves, weights=weights, wiring=wiring, config=config)


def save_loss_curves(curves: pd.DataFrame, path: str) -> str:
    curves.to_csv(path, index=False, columns=CURVE_COLUMNS)
    return path


def curves_from_records(records: Dict[str, List[float]]) -> pd.DataFrame:
    return pd.DataFrame(records, columns=CURVE_COLUMNS)
