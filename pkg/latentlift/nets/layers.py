from typing import Optional, Sequence, Union

import numpy as np
import torch
from torch import nn

from .. import exceptions


def mlp(in_dim: int, hidden: Sequence[int], out_dim: int, output_activation: Optional[nn.Module] = None
        ) -> nn.Sequential:
    """Fully connected stack with ReLU between layers and an optional output activation."""
    layers = []  # type: list
    width = in_dim
    for size in hidden:
        layers += [nn.Linear(width, size), nn.ReLU()]
        width = size
    layers.append(nn.Linear(width, out_dim))
    if output_activation is not None:
        layers.append(output_activation)
    return nn.Sequential(*layers)


def as_tensor(value: Union[np.ndarray, torch.Tensor, float], dtype: torch.dtype) -> torch.Tensor:
    """Convert arrays to tensors of ``dtype``; 8-bit pixels are scaled to [0, 1]."""
    if isinstance(value, torch.Tensor):
        return value.to(dtype)
    array = np.asarray(value)
    if array.dtype == np.uint8:
        return torch.as_tensor(array, dtype=dtype) / 255.0
    return torch.as_tensor(array, dtype=dtype)


def check_width(tensor: torch.Tensor, width: int, what: str) -> None:
    if tensor.shape[-1] != width:
        raise exceptions.ShapeMismatch('{} must have {} features, got shape {}'.format(what, width,
                                                                                     tuple(tensor.shape)))


def parameter_count(module: nn.Module) -> int:
    return sum(p.numel() for p in module.parameters())
