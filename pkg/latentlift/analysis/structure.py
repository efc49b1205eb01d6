import warnings
import dataclasses

from typing import Any, Dict, Union

import numpy as np
from sklearn.metrics import pairwise_distances

from .dump import LatentDump

DEGENERATE_DISTANCE = 1e-12


@dataclasses.dataclass
class StructureScore:
    score: float
    degenerate: bool
    n_cells: int
    n_adjacent_pairs: int
    threshold: float

    def to_record(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


def cell_means(true_state: np.ndarray, latent: np.ndarray):
    """Average the latent states of rows that share a true cell.

    :return: The distinct cells and their mean latent state.
    """
    cells, inverse = np.unique(np.asarray(true_state, dtype=np.float64), axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    sums = np.zeros((len(cells), latent.shape[1]))
    np.add.at(sums, inverse, latent)
    return cells, sums / np.bincount(inverse, minlength=len(cells))[:, None]


def neighborhood_consistency(dump: Union[LatentDump, Any], adjacency: float = 1.0) -> StructureScore:
    """How well the latent space keeps neighbouring grid cells together.

    Latent states are averaged per true cell. A pair of cells is adjacent when their true coordinates lie
    within ``adjacency`` of each other. The score is the fraction of adjacent pairs whose latent distance is
    below the median latent distance of the non-adjacent pairs. A collapsed latent space has no such
    median; it scores 0 and is flagged as degenerate.

    :param dump: A latent dump recorded on a grid world.
    :type dump: LatentDump
    :param adjacency: Largest true distance between neighbouring cells.
    :type adjacency: float
    :return: The score in ``[0, 1]``.
    :rtype: StructureScore
    """
    cells, latent = cell_means(dump.true_state, dump.latent)
    n = len(cells)
    if n < 3:
        warnings.warn('a structure score needs at least three distinct cells, got {}'.format(n))
        return StructureScore(score=0.0, degenerate=True, n_cells=n, n_adjacent_pairs=0, threshold=0.0)

    upper = np.triu_indices(n, k=1)
    true_distance = pairwise_distances(cells)[upper]
    latent_distance = pairwise_distances(latent)[upper]
    adjacent = true_distance <= adjacency + 1e-9
    if not adjacent.any() or adjacent.all():
        warnings.warn('the dump has no adjacent or no non-adjacent cell pairs')
        return StructureScore(score=0.0, degenerate=True, n_cells=n, n_adjacent_pairs=int(adjacent.sum()),
                              threshold=0.0)

    threshold = float(np.median(latent_distance[~adjacent]))
    scale = max(float(np.abs(latent).max()), 1.0)
    if threshold <= DEGENERATE_DISTANCE * scale:
        warnings.warn('the latent space is collapsed, the structure score is undefined')
        return StructureScore(score=0.0, degenerate=True, n_cells=n, n_adjacent_pairs=int(adjacent.sum()),
                              threshold=threshold)
    score = float(np.mean(latent_distance[adjacent] < threshold))
    return StructureScore(score=score, degenerate=False, n_cells=n, n_adjacent_pairs=int(adjacent.sum()),
                          threshold=threshold)
