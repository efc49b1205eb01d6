import logging
import warnings

from ...core import TransitionDataset
from ...representation import (
    action_round_trip_accuracy, evaluate_losses, mean_pairwise_latent_distance, save_loss_curves,
    train_representation,
)
from .base import Stage, StageContext, StageResult
from .catalogue import register_stage

logger = logging.getLogger(__name__)


class TrainRepresentationStage(Stage):
    """Learn the state and action encoders on the collected dataset and freeze them into ``train_repr/bundle.pt``.

    A held-out share of the dataset is kept aside to measure the action round trip and the spread of the
    latent states.
    """

    name = 'train_repr'
    autoload = True
    index = 1
    depends_on = ('collect', )
    blocks = ('repr', )

    def run(self, context: StageContext) -> StageResult:
        config = context.config.repr
        dataset = TransitionDataset.load(context.artifact('collect', 'dataset'))
        if config.holdout_fraction > 0:
            train, holdout = dataset.split(config.holdout_fraction, seed=config.seed)
        else:
            train, holdout = dataset, dataset

        result = train_representation(config, train)
        held_out = evaluate_losses(result.bundle, holdout, result.weights, result.wiring, config.batch_size,
                                   config.seed)
        spread = mean_pairwise_latent_distance(result.bundle, holdout, seed=config.seed)
        if spread < 1e-6:
            warnings.warn('the {} representation collapsed: mean latent distance {:.3g}'.format(
                config.baseline, spread))
        metrics = {
            'baseline': config.baseline,
            'epochs': config.epochs,
            'n_train': len(train),
            'n_holdout': len(holdout),
            'mean_pairwise_latent_distance': spread,
        }
        metrics.update({'final_{}'.format(name): result.final(name) for name in ('L_T', 'L_R', 'L_c', 'L_delta',
                                                                                 'total')})
        metrics.update({'initial_L_T': result.initial('L_T')})
        metrics.update({'holdout_{}'.format(name): value for name, value in held_out.items()})
        if result.wiring.use_psi:
            metrics['action_round_trip_accuracy'] = action_round_trip_accuracy(result.bundle, holdout)
        logger.info('%s representation: held-out total loss %.5f, latent spread %.4f', config.baseline,
                    held_out['total'], spread)

        bundle_path = result.save(context.path('train_repr', 'bundle.pt'), extra={'metrics': metrics})
        curves_path = save_loss_curves(result.curves, context.path('train_repr', 'loss_curves.csv'))
        return StageResult(
            artifacts={'bundle': context.relative(bundle_path), 'loss_curves': context.relative(curves_path)},
            metrics=metrics,
        )


register_stage(TrainRepresentationStage)
