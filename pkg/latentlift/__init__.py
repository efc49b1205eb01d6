from typing import Optional, Sequence

# convenient imports
from . import exceptions
from . import core
from . import envs
from . import nets
from . import representation
from . import agents
from . import homoverify
from . import analysis
from . import pipeline
from .pipeline import ExperimentConfig, Pipeline, RunManifest, load_config

__version__ = VERSION = "0.3.0"

__all__ = [
    'core', 'envs', 'nets', 'representation', 'agents', 'homoverify', 'analysis', 'pipeline', 'exceptions',
    'ExperimentConfig', 'Pipeline', 'RunManifest', 'load_config', 'run_experiment', 'verify_mirror_grid',
]


def run_experiment(path: Optional[str] = None, overrides: Sequence[str] = (), force: bool = False) -> RunManifest:
    """Run the default pipeline (collect, train_repr, train_policy, eval, plot) of an experiment file.

    :param path: The experiment YAML file; ``None`` uses the default 6 x 6 grid-world experiment.
    :type path: str, optional
    :param overrides: ``dotted.key=value`` overrides, e.g. ``['repr.epochs=10']``.
    :type overrides: Sequence[str]
    :param force: Re-run every stage even when its outputs are up to date.
    :type force: bool
    :return: The manifest listing every artifact of the run.
    :rtype: RunManifest
    """
    return Pipeline(load_config(path, overrides), force=force).run()


def verify_mirror_grid(grid_n: int = 3, n_actions: int = 4, gamma: float = 0.9) -> homoverify.LiftingResult:
    """Fold a square grid world onto its half above the diagonal and check that lifting stays optimal.

    .. code:: pycon

        >>> import latentlift
        >>> result = latentlift.verify_mirror_grid(3)
        >>> result.precondition_ok, result.optimal
        (True, True)

    :param grid_n: Side of the grid; the goal sits in the bottom-right corner.
    :type grid_n: int
    :return: The homomorphism report and the lifted and optimal values.
    :rtype: LiftingResult
    """
    config = envs.GridWorldConfig(grid_n=grid_n, n_actions=n_actions, image_size=max(grid_n, 10))
    source, image, mapping = homoverify.mirror_quotient(config, gamma)
    return homoverify.verify_lifting(source, image, mapping)
