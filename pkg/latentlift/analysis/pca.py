import warnings
import dataclasses

from typing import Union

import numpy as np
from sklearn.decomposition import PCA

from .dump import LatentDump

RANK_TOLERANCE = 1e-12


@dataclasses.dataclass
class Projection:
    """The result of :func:`pca_project`; ``components`` holds one unit-norm principal axis per row."""

    projected: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    explained_variance_ratio: np.ndarray
    mean: np.ndarray

    @property
    def n_components(self) -> int:
        return int(self.components.shape[0])

    def reconstruct(self) -> np.ndarray:
        return self.projected @ self.components + self.mean


def _empty(rows: np.ndarray, mean: np.ndarray) -> Projection:
    width = rows.shape[1]
    return Projection(np.zeros((rows.shape[0], 0)), np.zeros((0, width)), np.zeros(0), np.zeros(0), mean)


def pca_project(data: Union[LatentDump, np.ndarray], n_components: int = 2) -> Projection:
    """Project rows onto their leading principal components.

    The axes come from a full-rank ``sklearn.decomposition.PCA`` fit. Each axis is then flipped so that its
    largest-magnitude loading is positive. Directions whose variance is negligible next to the largest one are
    dropped with a warning, so a collapsed input gives zero components.

    .. code:: pycon

        >>> import numpy as np
        >>> from latentlift.analysis import pca_project
        >>> pca_project(np.array([[0.0, 0.0], [2.0, 0.0]]), n_components=2).n_components
        1

    :param data: A latent dump or an ``N x D`` array.
    :type data: LatentDump or np.ndarray
    :param n_components: The number of components wanted.
    :type n_components: int
    :return: Projected rows, axes and explained variance.
    :rtype: Projection
    """
    rows = np.asarray(data.latent if isinstance(data, LatentDump) else data, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError('pca_project needs an N x D array, got shape {}'.format(rows.shape))
    if n_components < 1:
        raise ValueError('n_components must be positive')
    n, width = rows.shape
    mean = rows.mean(axis=0) if n else np.zeros(width)
    if n < 2:
        warnings.warn('at least two rows are needed for a principal component analysis')
        return _empty(rows, mean)
    if not np.any(rows - mean):
        warnings.warn('all rows are identical, no principal direction exists')
        return _empty(rows, mean)

    pca = PCA(n_components=min(n, width), svd_solver='full').fit(rows)
    variance = np.clip(pca.explained_variance_, 0.0, None)
    rank = int(np.sum(variance > RANK_TOLERANCE * max(variance[0], RANK_TOLERANCE)))
    keep = min(n_components, rank)
    if keep < n_components:
        warnings.warn('the data spans {} non-degenerate directions, {} components were requested'.format(
            rank, n_components))

    components = pca.components_[:keep]
    pivots = np.argmax(np.abs(components), axis=1)
    components = components * np.sign(components[np.arange(keep), pivots])[:, None]
    return Projection(
        projected=(rows - pca.mean_) @ components.T,
        components=components,
        explained_variance=variance[:keep],
        explained_variance_ratio=pca.explained_variance_ratio_[:keep],
        mean=pca.mean_,
    )
