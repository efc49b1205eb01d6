import numpy as np

from ..collect import collect
from .base import Stage, StageContext, StageResult
from .catalogue import register_stage


class CollectStage(Stage):
    """Record transitions of a uniform-random policy into ``collect/dataset``."""

    name = 'collect'
    autoload = True
    index = 0
    blocks = ('env', 'collect')

    def run(self, context: StageContext) -> StageResult:
        dataset = collect(context.config)
        directory = dataset.save(context.path('collect', 'dataset', ''))
        return StageResult(
            artifacts={'dataset': context.relative(directory)},
            metrics={
                'n_transitions': len(dataset),
                'mean_reward': float(np.mean(dataset.reward)),
                'terminal_fraction': float(np.mean(dataset.done)),
            },
        )


register_stage(CollectStage)
