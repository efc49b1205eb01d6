import os
import logging
import dataclasses

from typing import Any, Dict, Optional

import torch
from torch import nn

from .. import exceptions
from ..utils import fingerprint
from .bundle import ModelBundle
from .config import NetConfig

FORMAT_VERSION = 1

logger = logging.getLogger(__name__)


def save_checkpoint(path: str, kind: str, config: Dict[str, Any], models: Dict[str, nn.Module],
                    extra: Optional[Dict[str, Any]] = None) -> str:
    """Write a versioned container of named models with their shapes and a config fingerprint.

    :param path: Destination file.
    :type path: str
    :param kind: What the container holds, e.g. ``'bundle'`` or ``'td3'``; checked when loading.
    :type kind: str
    :param config: Plain configuration needed to rebuild the models.
    :type config: dict
    :param models: The models to store, by name.
    :type models: Dict[str, nn.Module]
    :param extra: Anything else to keep next to the models (loss curves, step counters).
    :type extra: dict
    :return: ``path``
    :rtype: str
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    state_dicts = {name: model.state_dict() for name, model in models.items()}
    container = {
        'format_version': FORMAT_VERSION,
        'kind': kind,
        'config': config,
        'fingerprint': fingerprint(config),
        'shapes': {name: {key: list(value.shape) for key, value in sd.items()} for name, sd in state_dicts.items()},
        'models': state_dicts,
        'extra': extra or {},
    }
    torch.save(container, path)
    logger.debug('saved %s checkpoint with models %s to %s', kind, sorted(models), path)
    return path


def load_checkpoint(path: str, kind: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise exceptions.CheckpointMismatch('No checkpoint found at {}'.format(path))
    container = torch.load(path, map_location='cpu', weights_only=False)
    if container.get('format_version') != FORMAT_VERSION:
        raise exceptions.CheckpointMismatch('Unsupported checkpoint format version {!r} in {}'.format(
            container.get('format_version'), path))
    if container.get('kind') != kind:
        raise exceptions.CheckpointMismatch('{} holds a {!r} checkpoint, expected {!r}'.format(
            path, container.get('kind'), kind))
    if container['fingerprint'] != fingerprint(container['config']):
        raise exceptions.CheckpointMismatch(
            'The configuration stored in {} does not match its fingerprint'.format(path))
    return container


def restore_models(container: Dict[str, Any], models: Dict[str, nn.Module]) -> None:
    """Load stored parameters into freshly built ``models`` after checking every tensor shape."""
    for name, model in models.items():
        stored = container['models'].get(name)
        if stored is None:
            raise exceptions.CheckpointMismatch('The checkpoint has no model named {!r}'.format(name))
        expected = {key: list(value.shape) for key, value in model.state_dict().items()}
        if expected != container['shapes'][name]:
            raise exceptions.CheckpointMismatch('Stored shapes of {!r} do not match the configured network'.format(
                name))
        model.load_state_dict(stored)


def save_bundle(bundle: ModelBundle, path: str, extra: Optional[Dict[str, Any]] = None) -> str:
    return save_checkpoint(path, 'bundle', dataclasses.asdict(bundle.config), bundle.models(), extra)


def load_bundle(path: str) -> ModelBundle:
    """Rebuild a :class:`ModelBundle` from a checkpoint written by :func:`save_bundle`."""
    container = load_checkpoint(path, 'bundle')
    bundle = ModelBundle.build(NetConfig(**container['config']))
    restore_models(container, bundle.models())
    bundle.checkpoint_extra = container.get('extra', {})
    return bundle
