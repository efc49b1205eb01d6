"""Experiment configuration: one YAML file per experiment, with dotted command-line overrides.

.. code:: yaml

    schema_version: 1
    output_dir: runs/maze6
    seeds: [0, 1, 2]
    env: {name: gridworld, grid_n: 6, n_actions: 4}
    collect: {n_transitions: 10000}
    repr: {baseline: ours, epochs: 100}
    agent: {name: td3, env_steps: 30000}
    analysis: {n_samples: 2000}
"""
import os
import copy
import logging
import dataclasses

from typing import Any, Dict, List, Optional, Sequence

import yaml
from dotenv import find_dotenv, load_dotenv

from .. import exceptions
from ..agents import AgentConfig, get_agent_class
from ..envs import env_catalogue
from ..representation import ReprConfig
from ..utils import fingerprint, to_plain

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
OUTPUT_ROOT_VARIABLE = 'LATENTLIFT_OUTPUT_ROOT'
BLOCKS = ('env', 'collect', 'repr', 'agent', 'analysis')


@dataclasses.dataclass
class CollectConfig:
    """Random-policy data collection.

    ``env_overrides`` are applied to the env block while collecting only. Distractors are switched off for
    collection unless ``env_overrides`` sets ``distractors_active``, so policies meet them unseen.
    """

    n_transitions: int = 10000
    seed: int = 0
    env_overrides: Dict[str, Any] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.n_transitions < 0:
            raise ValueError('n_transitions must be non-negative, got {}'.format(self.n_transitions))


@dataclasses.dataclass
class AnalysisConfig:
    """Evaluation and figure settings; ``components`` defaults to 2 on grids and 3 on navigation."""

    n_samples: int = 2000
    components: Optional[int] = None
    dump_seed: int = 0
    eval_episodes: int = 50
    eval_seed: int = 12345
    best_k: int = 3
    final_window: int = 50
    image_format: str = 'svg'

    def __post_init__(self):
        if self.components not in (None, 2, 3):
            raise ValueError('components must be 2 or 3, got {}'.format(self.components))
        if self.image_format not in ('svg', 'png'):
            raise ValueError("image_format must be 'svg' or 'png', got {!r}".format(self.image_format))
        if self.n_samples < 0 or self.eval_episodes < 0 or self.best_k < 1 or self.final_window < 1:
            raise ValueError('n_samples and eval_episodes must be non-negative, best_k and final_window positive')

    def n_components(self, env_name: str) -> int:
        if self.components is not None:
            return self.components
        return 3 if env_name == 'navigation' else 2


@dataclasses.dataclass
class ExperimentConfig:
    env_name: str
    env: Any
    collect: CollectConfig
    repr: ReprConfig
    agent_name: str
    agent: AgentConfig
    analysis: AnalysisConfig
    seeds: List[int]
    output_dir: str
    workers: int = 1
    schema_version: int = SCHEMA_VERSION

    def block(self, name: str) -> Dict[str, Any]:
        """The plain-dict form of a config block, as it enters fingerprints."""
        if name == 'env':
            return dict(name=self.env_name, **to_plain(self.env))
        if name == 'agent':
            return dict(name=self.agent_name, **to_plain(self.agent))
        if name == 'seeds':
            return {'seeds': list(self.seeds)}
        return to_plain(getattr(self, name))

    def to_dict(self) -> Dict[str, Any]:
        raw = {name: self.block(name) for name in BLOCKS}
        raw.update(schema_version=self.schema_version, seeds=list(self.seeds), output_dir=self.output_dir,
                   workers=self.workers)
        return raw

    def fingerprint(self) -> str:
        return fingerprint(self.to_dict())

    def env_config(self, **overrides: Any) -> Any:
        if not overrides:
            return self.env
        return dataclasses.replace(self.env, **overrides)

    def agent_config(self, seed: int) -> AgentConfig:
        return dataclasses.replace(self.agent, seed=seed)


def _build(cls, raw: Any, block: str):
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise exceptions.ConfigError('the {} block must be a mapping, got {!r}'.format(block, raw))
    try:
        return cls(**raw)
    except (TypeError, ValueError) as error:
        raise exceptions.ConfigError('invalid {} block: {}'.format(block, error))


def parse_override(override: str) -> Sequence[Any]:
    """Split ``dotted.key=value``; the value is read with YAML scalar rules."""
    key, sep, value = override.partition('=')
    if not sep or not key.strip():
        raise exceptions.ConfigError('overrides look like dotted.key=value, got {!r}'.format(override))
    try:
        parsed = yaml.safe_load(value) if value.strip() else None
    except yaml.YAMLError as error:
        raise exceptions.ConfigError('cannot parse the value of {!r}: {}'.format(override, error))
    return key.strip().split('.'), parsed


def apply_overrides(raw: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    raw = copy.deepcopy(raw)
    for override in overrides:
        path, value = parse_override(override)
        node = raw
        for key in path[:-1]:
            child = node.setdefault(key, {})
            if not isinstance(child, dict):
                raise exceptions.ConfigError('cannot set {!r}: {!r} is not a mapping'.format(override, key))
            node = child
        node[path[-1]] = value
    return raw


def output_root() -> Optional[str]:
    return os.environ.get(OUTPUT_ROOT_VARIABLE) or None


def config_from_dict(raw: Dict[str, Any]) -> ExperimentConfig:
    """Validate a raw config mapping and build the typed config.

    :param raw: The parsed YAML document, overrides applied.
    :type raw: Dict[str, Any]
    :return: The experiment config.
    :rtype: ExperimentConfig
    """
    if not isinstance(raw, dict):
        raise exceptions.ConfigError('an experiment config must be a mapping')
    raw = copy.deepcopy(raw)
    version = raw.pop('schema_version', SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise exceptions.ConfigError('unsupported schema_version {!r}, expected {}'.format(version, SCHEMA_VERSION))
    unknown = set(raw) - set(BLOCKS) - {'seeds', 'output_dir', 'workers'}
    if unknown:
        raise exceptions.ConfigError('unknown config keys {}'.format(sorted(unknown)))

    env_raw = dict(raw.get('env') or {})
    env_name = env_raw.pop('name', 'gridworld')
    if env_name not in env_catalogue:
        raise exceptions.ConfigError('unknown env {!r}, registered envs are {}'.format(
            env_name, sorted(env_catalogue.get_all())))
    env = _build(env_catalogue.get(env_name).config_cls, env_raw, 'env')

    agent_raw = dict(raw.get('agent') or {})
    agent_name = agent_raw.pop('name', 'td3')
    agent = _build(get_agent_class(agent_name).config_cls, agent_raw, 'agent')

    seeds = raw.get('seeds', [0])
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    if not isinstance(seeds, list) or not seeds or not all(isinstance(seed, int) for seed in seeds):
        raise exceptions.ConfigError('seeds must be a non-empty list of integers or a count, got {!r}'.format(seeds))
    if len(set(seeds)) != len(seeds):
        raise exceptions.ConfigError('seeds must be distinct, got {}'.format(seeds))

    workers = raw.get('workers', 1)
    if not isinstance(workers, int) or workers < 1:
        raise exceptions.ConfigError('workers must be a positive integer, got {!r}'.format(workers))

    output_dir = str(raw.get('output_dir') or 'runs')
    root = output_root()
    if root and not os.path.isabs(output_dir):
        output_dir = os.path.join(root, output_dir)

    return ExperimentConfig(
        env_name=env_name,
        env=env,
        collect=_build(CollectConfig, raw.get('collect'), 'collect'),
        repr=_build(ReprConfig, raw.get('repr'), 'repr'),
        agent_name=agent_name,
        agent=agent,
        analysis=_build(AnalysisConfig, raw.get('analysis'), 'analysis'),
        seeds=list(seeds),
        output_dir=output_dir,
        workers=workers,
    )


def load_config(path: Optional[str] = None, overrides: Sequence[str] = ()) -> ExperimentConfig:
    """Read an experiment YAML file, apply ``--set`` overrides and validate.

    A ``.env`` file found from the working directory is loaded first, so it may set the output root.

    :param path: The YAML file; ``None`` starts from the defaults.
    :type path: str, optional
    :param overrides: ``dotted.key=value`` strings.
    :type overrides: Sequence[str]
    :return: The experiment config.
    :rtype: ExperimentConfig
    """
    load_dotenv(find_dotenv(usecwd=True))
    raw = {}  # type: Dict[str, Any]
    if path is not None:
        try:
            with open(path) as stream:
                raw = yaml.safe_load(stream) or {}
        except OSError as error:
            raise exceptions.ConfigError('cannot read config {}: {}'.format(path, error))
        except yaml.YAMLError as error:
            raise exceptions.ConfigError('config {} is not valid YAML: {}'.format(path, error))
    config = config_from_dict(apply_overrides(raw, overrides))
    logger.debug('loaded config %s with fingerprint %s', path, config.fingerprint())
    return config


def dump_config(config: ExperimentConfig, path: str) -> str:
    with open(path, 'w') as stream:
        yaml.safe_dump(config.to_dict(), stream, sort_keys=True)
    return path
