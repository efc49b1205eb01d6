import os
import json
import logging
import dataclasses

from typing import Any, Dict, Optional

from .. import exceptions

logger = logging.getLogger(__name__)

MANIFEST_FILE = 'manifest.json'

DONE = 'done'
SKIPPED = 'skipped'
FAILED = 'failed'


@dataclasses.dataclass
class StageRecord:
    """What a stage produced: artifact paths relative to the output directory, headline metrics and timing."""

    name: str
    fingerprint: str
    status: str = DONE
    artifacts: Dict[str, str] = dataclasses.field(default_factory=dict)
    metrics: Dict[str, Any] = dataclasses.field(default_factory=dict)
    wall_clock: float = 0.0
    error: Optional[str] = None

    def complete(self, output_dir: str) -> bool:
        """Whether the stage finished and every artifact it recorded is still on disk."""
        return self.status in (DONE, SKIPPED) and all(
            os.path.exists(os.path.join(output_dir, path)) for path in self.artifacts.values()
        )


@dataclasses.dataclass
class RunManifest:
    config_fingerprint: str
    code_version: str
    stages: Dict[str, StageRecord] = dataclasses.field(default_factory=dict)
    wall_clock: float = 0.0
    partial: bool = False
    error: Optional[str] = None

    def artifact(self, stage: str, key: str, output_dir: str) -> str:
        """Absolute path of an artifact recorded by an earlier stage."""
        record = self.stages.get(stage)
        if record is None or key not in record.artifacts or record.status == FAILED:
            raise exceptions.StageFailure(stage, 'no {!r} artifact recorded; run the {} stage first'.format(
                key, stage))
        path = os.path.join(output_dir, record.artifacts[key])
        if not os.path.exists(path):
            raise exceptions.StageFailure(stage, 'the recorded artifact {} is missing'.format(path))
        return path

    def fingerprint_of(self, stage: str) -> Optional[str]:
        record = self.stages.get(stage)
        return None if record is None or record.status == FAILED else record.fingerprint

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> 'RunManifest':
        stages = {name: StageRecord(**record) for name, record in raw.get('stages', {}).items()}
        return cls(
            config_fingerprint=raw['config_fingerprint'],
            code_version=raw['code_version'],
            stages=stages,
            wall_clock=float(raw.get('wall_clock', 0.0)),
            partial=bool(raw.get('partial', False)),
            error=raw.get('error'),
        )

    def save(self, output_dir: str) -> str:
        os.makedirs(output_dir, exist_ok=True)
        path = os.path.join(output_dir, MANIFEST_FILE)
        with open(path + '.tmp', 'w') as stream:
            json.dump(self.to_dict(), stream, indent=2, sort_keys=True)
        os.replace(path + '.tmp', path)
        return path

    @classmethod
    def load(cls, output_dir: str) -> Optional['RunManifest']:
        path = os.path.join(output_dir, MANIFEST_FILE)
        if not os.path.exists(path):
            return None
        try:
            with open(path) as stream:
                return cls.from_dict(json.load(stream))
        except (ValueError, KeyError, TypeError) as error:
            logger.warning('ignoring unreadable manifest %s (%s)', path, error)
            return None
