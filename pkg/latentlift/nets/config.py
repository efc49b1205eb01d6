import dataclasses

from typing import Tuple

import torch

DTYPES = {'float32': torch.float32, 'float64': torch.float64}


def conv_output_size(size: int, kernel: int, stride: int, padding: int) -> int:
    return (size + 2 * padding - kernel) // stride + 1


@dataclasses.dataclass
class NetConfig:
    """Shapes and hyper-parameters shared by every network of a model bundle.

    ``use_psi`` decides whether the transition and reward models consume the latent action produced by
    the action encoder (``dim_a`` inputs) or the raw one-hot action (``n_actions`` inputs).
    """

    observation_shape: Tuple[int, int, int] = (50, 50, 3)
    dim_s: int = 10
    dim_a: int = 5
    n_actions: int = 4
    hidden: Tuple[int, ...] = (64, 32)
    policy_hidden: Tuple[int, ...] = (256, 256)
    conv_channels: Tuple[int, int] = (32, 64)
    conv_kernels: Tuple[int, int] = (3, 5)
    conv_stride: int = 2
    conv_padding: int = 0
    state_free_action_encoder: bool = False
    use_psi: bool = True
    init_seed: int = 0
    dtype: str = 'float32'

    def __post_init__(self):
        self.observation_shape = tuple(int(v) for v in self.observation_shape)  # type: ignore
        self.hidden = tuple(int(v) for v in self.hidden)
        self.policy_hidden = tuple(int(v) for v in self.policy_hidden)
        self.conv_channels = tuple(int(v) for v in self.conv_channels)  # type: ignore
        self.conv_kernels = tuple(int(v) for v in self.conv_kernels)  # type: ignore
        if len(self.observation_shape) != 3 or self.observation_shape[-1] != 3:
            raise ValueError('observation_shape must be (height, width, 3), got {}'.format(self.observation_shape))
        if min(self.dim_s, self.dim_a, self.n_actions) < 1:
            raise ValueError('dim_s, dim_a and n_actions must be positive')
        if self.conv_stride < 1 or self.conv_padding < 0:
            raise ValueError('conv_stride must be positive and conv_padding non-negative')
        if self.dtype not in DTYPES:
            raise ValueError('dtype must be one of {}, got {!r}'.format(sorted(DTYPES), self.dtype))
        height, width = self.conv_feature_map()
        if height < 1 or width < 1:
            raise ValueError('observations of shape {} are too small for the convolution stack'.format(
                self.observation_shape))

    def conv_feature_map(self) -> Tuple[int, int]:
        height, width = self.observation_shape[:2]
        for kernel in self.conv_kernels:
            height = conv_output_size(height, kernel, self.conv_stride, self.conv_padding)
            width = conv_output_size(width, kernel, self.conv_stride, self.conv_padding)
        return height, width

    @property
    def flat_dim(self) -> int:
        height, width = self.conv_feature_map()
        return self.conv_channels[-1] * height * width

    @property
    def action_input_dim(self) -> int:
        """Width of the action input of the transition and reward models."""
        return self.dim_a if self.use_psi else self.n_actions

    @property
    def torch_dtype(self) -> torch.dtype:
        return DTYPES[self.dtype]
