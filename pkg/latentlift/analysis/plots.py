"""Static figures. Every figure is written next to a CSV holding exactly the plotted values."""
import os
import logging
import warnings

from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from .curves import CurveSet, curve_frame
from .dump import LatentDump
from .pca import pca_project

logger = logging.getLogger(__name__)

FORMATS = ('svg', 'png')
CURVE_COLORS = ('#c92a2a', '#1864ab', '#2b8a3e', '#e67700', '#5f3dc4', '#0b7285')


def _paths(out: str, image_format: str) -> Tuple[str, str]:
    if image_format not in FORMATS:
        raise ValueError('unsupported image format {!r}, choose from {}'.format(image_format, FORMATS))
    stem, _ = os.path.splitext(out)
    directory = os.path.dirname(stem)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return '{}.{}'.format(stem, image_format), stem + '.csv'


def latent_map_frame(dump: LatentDump, n_components: int = 2) -> pd.DataFrame:
    """The rows of a latent map: principal coordinates, reward and true state of every dump row."""
    projection = pca_project(dump, n_components) if len(dump) else None
    frame = pd.DataFrame(index=range(len(dump)))
    for component in range(n_components):
        if projection is not None and component < projection.n_components:
            frame['pc{}'.format(component + 1)] = projection.projected[:, component]
        else:
            frame['pc{}'.format(component + 1)] = 0.0
    frame['reward'] = dump.reward
    for column in range(dump.true_state.shape[1]):
        frame['true_{}'.format(column)] = dump.true_state[:, column]
    return frame


def plot_latent_map(dump: LatentDump, out: str, n_components: int = 2, image_format: str = 'svg',
                    title: Optional[str] = None, color: str = 'reward') -> Tuple[str, str]:
    """Scatter the first principal components of the latent states, coloured by reward or a true coordinate.

    :param dump: The latent dump to show.
    :type dump: LatentDump
    :param out: Output path; the extension is replaced by the image format and by ``.csv``.
    :type out: str
    :param n_components: 2 for a flat map, 3 for a 3-D scatter.
    :type n_components: int
    :param color: The column that colours the points: ``reward`` or ``true_0``, ``true_1``, ...
    :type color: str
    :return: The image path and the CSV path.
    :rtype: Tuple[str, str]
    """
    if n_components not in (2, 3):
        raise ValueError('a latent map shows 2 or 3 components, got {}'.format(n_components))
    image_path, csv_path = _paths(out, image_format)
    if len(dump) == 0:
        warnings.warn('the latent dump is empty, writing an empty latent map')
    frame = latent_map_frame(dump, n_components)
    if color != 'reward' and (not color.startswith('true_') or color not in frame.columns):
        raise ValueError('cannot colour by {!r}, choose reward or one of the true_* columns'.format(color))
    frame.to_csv(csv_path, index=False)

    figure = Figure(figsize=(5, 5))
    if n_components == 3:
        axes = figure.add_subplot(projection='3d')
        points = axes.scatter(frame['pc1'], frame['pc2'], frame['pc3'], c=frame[color], cmap='viridis', s=8)
        axes.set_zlabel('PC 3')
    else:
        axes = figure.add_subplot()
        points = axes.scatter(frame['pc1'], frame['pc2'], c=frame[color], cmap='viridis', s=8)
    axes.set_xlabel('PC 1')
    axes.set_ylabel('PC 2')
    if len(dump):
        figure.colorbar(points, ax=axes, label=color)
    axes.set_title(title or dump.env or 'latent states')
    figure.savefig(image_path, format=image_format)
    logger.info('wrote latent map %s (%d points)', image_path, len(dump))
    return image_path, csv_path


def plot_curves(curves: Dict[str, CurveSet], out: str, x: str = 'episode', image_format: str = 'svg',
                ylabel: Optional[str] = None, reference: Optional[float] = None) -> Tuple[str, str]:
    """Plot the mean of each curve set with a band of one standard deviation.

    :param curves: Curve sets by method name.
    :type curves: Dict[str, CurveSet]
    :param x: ``episode`` or ``env_steps``.
    :type x: str
    :param reference: Optional horizontal reference line, such as the optimal number of steps.
    :type reference: float, optional
    :return: The image path and the CSV path.
    :rtype: Tuple[str, str]
    """
    image_path, csv_path = _paths(out, image_format)
    curve_frame(curves).to_csv(csv_path, index=False)

    figure = Figure(figsize=(6, 4))
    axes = figure.add_subplot()
    for color, (name, curve) in zip(CURVE_COLORS * (1 + len(curves) // len(CURVE_COLORS)), curves.items()):
        frame = curve.frame
        spread = np.sqrt(frame['variance'].to_numpy())
        axes.plot(frame[x], frame['mean'], color=color, label='{} (best {})'.format(name, curve.best_k))
        axes.fill_between(frame[x], frame['mean'] - spread, frame['mean'] + spread, color=color, alpha=0.25,
                          linewidth=0)
    if reference is not None:
        axes.axhline(reference, color='black', linestyle='--', linewidth=1, label='optimal')
    axes.set_xlabel('environment steps' if x == 'env_steps' else 'episode')
    metric = next(iter(curves.values())).metric if curves else ''
    axes.set_ylabel(ylabel or metric)
    if curves:
        axes.legend()
    figure.savefig(image_path, format=image_format)
    logger.info('wrote curves %s', image_path)
    return image_path, csv_path
