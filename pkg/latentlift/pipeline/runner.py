import os
import time
import logging

from typing import Dict, List, Optional, Sequence, Type, Union

from .. import exceptions
from .config import ExperimentConfig, dump_config
from .manifest import DONE, FAILED, SKIPPED, RunManifest, StageRecord
from .stages import Stage, StageContext, stage_catalogue

logger = logging.getLogger(__name__)

StageLike = Union[Stage, Type[Stage], str]


def code_version() -> str:
    from .. import __version__
    return __version__


class Pipeline(object):
    """The Pipeline class runs the stages of an experiment in order and records what they produce.

    Stages whose fingerprint matches the manifest of an earlier run, and whose artifacts are still on
    disk, are skipped; every other stage runs. By default the registered stages with ``autoload`` set are
    used, ordered by their ``index``.

    .. code:: pycon

        >>> import latentlift
        >>> config = latentlift.pipeline.load_config(None, ['output_dir=/tmp/latentlift-doc'])
        >>> pipeline = latentlift.pipeline.Pipeline(config)
        >>> [stage.name for stage in pipeline.stages]
        ['collect', 'train_repr', 'train_policy', 'eval', 'plot']
    """

    def __init__(self, config: ExperimentConfig, stage_list: Optional[Sequence[StageLike]] = None,
                 force: bool = False):
        """Create a ``Pipeline`` object.

        :param config: The experiment configuration.
        :type config: ExperimentConfig
        :param stage_list: The stages to run; all autoloaded stages by default.
        :type stage_list: Optional[Sequence[Union[Type[Stage], Stage, str]]]
        :param force: Run every stage even when its outputs are up to date.
        :type force: bool
        """
        self.config = config
        self.force = force
        self._stages = {}  # type: Dict[str, Stage]

        if stage_list is None:
            stage_list = [stage for stage in stage_catalogue.get_all().values() if stage.autoload]

        for stage in stage_list:
            self.add_stage(stage)

    @property
    def output_dir(self) -> str:
        return self.config.output_dir

    @property
    def stages(self) -> List[Stage]:
        return sorted(self._stages.values(), key=lambda stage: (stage.index, stage.name))

    def add_stage(self, stage: StageLike):
        """Add a ``Stage`` to the pipeline, as a class, an instance or a registered name.

        .. code:: pycon

            >>> import latentlift
            >>> config = latentlift.pipeline.load_config(None, ['output_dir=/tmp/latentlift-doc'])
            >>> pipeline = latentlift.pipeline.Pipeline(config, stage_list=[])
            >>> pipeline.add_stage('collect')
            >>> pipeline.add_stage(latentlift.pipeline.VerifyStage)

        :param stage: The ``Stage`` to add.
        :type stage: a Stage class, a Stage instance, or a string with the stage's name
        """
        if isinstance(stage, type):
            if not issubclass(stage, Stage):
                raise TypeError('"{}" is not a subclass of Stage'.format(stage))
            stage = stage()
        elif isinstance(stage, str):
            if stage not in stage_catalogue:
                raise exceptions.ConfigError('Unknown stage "{}", registered stages are {}'.format(
                    stage, sorted(stage_catalogue.get_all())))
            stage = stage_catalogue.get(stage)()
        if not isinstance(stage, Stage):
            raise TypeError('The stage "{}" is not an instance of the Stage class.'.format(stage))
        if stage.name in self._stages:
            raise KeyError('can not add Stage "{}" to this Pipeline, this name is already in use. '
                           'Try removing it first.'.format(stage.name))
        self._stages[stage.name] = stage

    def remove_stage(self, stage: StageLike):
        """Remove a ``Stage`` given as a class, an instance or a name."""
        if isinstance(stage, type):
            self._stages.pop(stage.name)
        elif isinstance(stage, Stage):
            self._stages.pop(stage.name)
        elif isinstance(stage, str):
            self._stages.pop(stage)

    def load_manifest(self) -> RunManifest:
        manifest = RunManifest.load(self.output_dir)
        if manifest is None:
            manifest = RunManifest(config_fingerprint=self.config.fingerprint(), code_version=code_version())
        manifest.config_fingerprint = self.config.fingerprint()
        manifest.code_version = code_version()
        manifest.partial = False
        manifest.error = None
        return manifest

    def run(self) -> RunManifest:
        """Run the stages in order and return the manifest; a failing stage stops the run.

        :raises StageFailure: When a stage raises; the manifest on disk records the completed stages.
        """
        os.makedirs(self.output_dir, exist_ok=True)
        dump_config(self.config, os.path.join(self.output_dir, 'config.yaml'))
        manifest = self.load_manifest()
        context = StageContext(config=self.config, output_dir=self.output_dir, manifest=manifest)
        started = time.time()

        for stage in self.stages:
            stage_fingerprint = stage.fingerprint(self.config, manifest)
            previous = manifest.stages.get(stage.name)
            if not self.force and previous is not None and previous.fingerprint == stage_fingerprint and \
                    previous.complete(self.output_dir):
                previous.status = SKIPPED
                previous.wall_clock = 0.0
                logger.info('stage %s is up to date, skipping', stage.name)
                continue

            logger.info('running stage %s', stage.name)
            stage_started = time.time()
            try:
                result = stage.run(context)
            except Exception as error:
                manifest.stages[stage.name] = StageRecord(name=stage.name, fingerprint=stage_fingerprint,
                                                          status=FAILED, wall_clock=time.time() - stage_started,
                                                          error='{}: {}'.format(type(error).__name__, error))
                manifest.partial = True
                manifest.error = manifest.stages[stage.name].error
                manifest.wall_clock = time.time() - started
                manifest.save(self.output_dir)
                if isinstance(error, exceptions.StageFailure):
                    raise
                raise exceptions.StageFailure(stage.name, manifest.error) from error

            manifest.stages[stage.name] = StageRecord(
                name=stage.name, fingerprint=stage_fingerprint, status=DONE, artifacts=result.artifacts,
                metrics=result.metrics, wall_clock=time.time() - stage_started,
            )
            manifest.save(self.output_dir)
            logger.info('stage %s finished in %.1fs', stage.name, manifest.stages[stage.name].wall_clock)

        manifest.wall_clock = time.time() - started
        manifest.save(self.output_dir)
        return manifest


def run_pipeline(config: ExperimentConfig, stages: Optional[Sequence[StageLike]] = None,
                 force: bool = False) -> RunManifest:
    """Run the experiment pipeline described by ``config``.

    :param config: The experiment configuration.
    :type config: ExperimentConfig
    :param stages: Stages to run instead of the default five.
    :param force: Re-run stages even when they are up to date.
    :type force: bool
    :return: The run manifest.
    :rtype: RunManifest
    """
    return Pipeline(config, stage_list=stages, force=force).run()
