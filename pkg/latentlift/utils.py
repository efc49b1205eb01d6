import json
import random
import hashlib
import contextlib
import dataclasses

from typing import Any, Dict, Hashable, Iterator, List

import numpy as np
import torch


class Lookup(object):
    """The Lookup object is used to create an in-memory reference table that
    hands out a unique, consecutive identifier to every distinct key.
    """

    def __init__(self):
        self.table = {}  # type: Dict[Hashable, int]

    def __getitem__(self, key: Hashable) -> int:
        try:
            return self.table[key]
        except KeyError:
            self.table[key] = len(self.table)
            return self.table[key]

    def __len__(self) -> int:
        return len(self.table)

    def get(self, key: Hashable, default: int = -1) -> int:
        """The identifier of a known key, without handing out a new one."""
        return self.table.get(key, default)


class ToStringMixin(object):
    def _to_string(self, attributes: List[str]) -> str:
        item_attributes = [
            "{}={}".format(item, getattr(self, item, None).__repr__())
            for item in attributes
            if getattr(self, item, None) is not None
        ]
        return "<{} {}>".format(self.__class__.__name__, " ".join(item_attributes))


def seed_everything(seed: int) -> None:
    """Seed the python, numpy and torch random number generators.

    :param seed: The seed shared by all generators.
    :type seed: int
    """
    random.seed(seed)
    np.random.seed(seed % (2 ** 32))
    torch.manual_seed(seed)


@contextlib.contextmanager
def torch_seed(seed: int) -> Iterator[None]:
    """Run a block with the global torch generator seeded, restoring the previous state afterwards.

    Used to initialise networks from a recorded seed without disturbing any other random stream.
    """
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        yield


def to_plain(value: Any) -> Any:
    """Convert dataclasses, tuples and numpy scalars into plain JSON-able python objects."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {field.name: to_plain(getattr(value, field.name)) for field in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def canonical_json(value: Any) -> str:
    """Serialise ``value`` so that equal content always gives the same string, whatever the key order."""
    return json.dumps(to_plain(value), sort_keys=True, separators=(',', ':'), allow_nan=True)


def fingerprint(*values: Any) -> str:
    """Return the SHA-256 hex digest of the canonical JSON of ``values``.

    .. code:: pycon

        >>> from latentlift.utils import fingerprint
        >>> fingerprint({'a': 1, 'b': 2}) == fingerprint({'b': 2, 'a': 1})
        True

    :param values: Any number of JSON-able objects or dataclasses.
    :return: The hexadecimal digest.
    :rtype: str
    """
    digest = hashlib.sha256()
    for value in values:
        digest.update(canonical_json(value).encode('utf8'))
        digest.update(b'\x00')
    return digest.hexdigest()
