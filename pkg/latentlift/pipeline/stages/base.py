import os
import dataclasses

from typing import Any, Dict, Optional, Tuple

from ...utils import ToStringMixin, fingerprint
from ..config import ExperimentConfig
from ..manifest import RunManifest


@dataclasses.dataclass
class StageContext:
    """Everything a running stage may read: the config, the output directory and earlier stages' records."""

    config: ExperimentConfig
    output_dir: str
    manifest: RunManifest

    def path(self, *parts: str) -> str:
        """Absolute path under the output directory; parent directories are created."""
        path = os.path.join(self.output_dir, *parts)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        return path

    def relative(self, path: str) -> str:
        return os.path.relpath(path, self.output_dir)

    def artifact(self, stage: str, key: str) -> str:
        return self.manifest.artifact(stage, key, self.output_dir)


@dataclasses.dataclass
class StageResult:
    artifacts: Dict[str, str] = dataclasses.field(default_factory=dict)
    metrics: Dict[str, Any] = dataclasses.field(default_factory=dict)


class Stage(ToStringMixin):
    """This is the base class for the steps of an experiment pipeline.

    A stage declares the stages it reads from (``depends_on``) and the config blocks it uses (``blocks``).
    Its fingerprint covers exactly those, so editing an unrelated block does not invalidate it. A new stage
    needs a ``name``, an ``index`` and a ``run`` method returning the artifacts it wrote:

    .. code:: pycon

        >>> import latentlift
        >>> class Report(latentlift.pipeline.Stage):
        ...     name = 'report'
        ...     index = 50
        ...     depends_on = ('eval', )
        ...     def run(self, context):
        ...         return latentlift.pipeline.StageResult()
    """

    name = 'stage'  # type: str
    autoload = False  # type: bool
    index = 10000  # type: int
    depends_on = ()  # type: Tuple[str, ...]
    blocks = ()  # type: Tuple[str, ...]

    def __init__(self, name: Optional[str] = None):
        if name is not None:
            self.name = name

    def __repr__(self) -> str:
        return self._to_string(['name', 'index'])

    def fingerprint(self, config: ExperimentConfig, manifest: RunManifest) -> str:
        upstream = {stage: manifest.fingerprint_of(stage) for stage in self.depends_on}
        return fingerprint(self.name, upstream, {block: config.block(block) for block in self.blocks})

    def run(self, context: StageContext) -> StageResult:
        raise NotImplementedError('must be implemented in derived classes')
