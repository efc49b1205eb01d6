import logging
import dataclasses

from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from .. import exceptions

logger = logging.getLogger(__name__)

LOWER_IS_BETTER = {'steps': True, 'return': False, 'success': False}


@dataclasses.dataclass
class CurveSet:
    """Per-episode mean and variance of one metric over the best ``k`` seeds.

    ``frame`` has the columns ``episode``, ``env_steps`` (the mean cumulative number of environment steps
    of the kept seeds at that episode), ``mean``, ``variance`` and ``n_seeds``.
    """

    metric: str
    seeds: List[int]
    frame: pd.DataFrame
    scores: Dict[int, float] = dataclasses.field(default_factory=dict)

    @property
    def best_k(self) -> int:
        return len(self.seeds)


def _runs_frame(runs: Union[pd.DataFrame, Dict[int, pd.DataFrame]]) -> pd.DataFrame:
    if isinstance(runs, dict):
        frames = [frame.assign(seed=seed) for seed, frame in runs.items()]
        runs = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=['seed', 'episode'])
    missing = {'seed', 'episode'} - set(runs.columns)
    if missing:
        raise exceptions.DatasetFormatError('the runs lack the columns {}'.format(sorted(missing)))
    return runs.sort_values(['seed', 'episode'], kind='mergesort').reset_index(drop=True)


def aggregate_curves(runs: Union[pd.DataFrame, Dict[int, pd.DataFrame]], best_k: int = 3, metric: str = 'steps',
                     final_window: int = 50, lower_is_better: Optional[bool] = None) -> CurveSet:
    """Keep the ``best_k`` seeds and average their learning curves episode by episode.

    Seeds are ranked by the mean of ``metric`` over their last ``final_window`` episodes; ties are broken by
    the seed number, so the result does not depend on the order of the runs. Variances use ``ddof=0``.

    :param runs: Episode metrics with ``seed`` and ``episode`` columns, or a frame per seed.
    :type runs: pd.DataFrame or Dict[int, pd.DataFrame]
    :param best_k: Number of seeds to keep.
    :type best_k: int
    :param metric: The column to aggregate.
    :type metric: str
    :param final_window: Number of final episodes used for ranking.
    :type final_window: int
    :param lower_is_better: Ranking direction; by default lower is better for ``steps`` only.
    :type lower_is_better: bool, optional
    :return: The aggregated curves.
    :rtype: CurveSet
    """
    frame = _runs_frame(runs)
    if metric not in frame.columns:
        raise exceptions.DatasetFormatError('the runs have no {!r} column'.format(metric))
    seeds = sorted(int(seed) for seed in frame['seed'].unique())
    if best_k < 1 or best_k > len(seeds):
        raise exceptions.InsufficientSeeds(available=len(seeds), best_k=best_k)
    if lower_is_better is None:
        lower_is_better = LOWER_IS_BETTER.get(metric, False)

    frame = frame.assign(env_steps=frame.groupby('seed')['steps'].cumsum()) if 'steps' in frame.columns \
        else frame.assign(env_steps=np.nan)
    scores = {
        seed: float(group[metric].tail(final_window).mean())
        for seed, group in frame.groupby('seed')
    }
    ranked = sorted(seeds, key=lambda seed: (scores[seed] if lower_is_better else -scores[seed], seed))
    kept = ranked[:best_k]
    logger.debug('kept seeds %s out of %s for %s', kept, seeds, metric)

    selected = frame[frame['seed'].isin(kept)]
    grouped = selected.groupby('episode')
    curves = pd.DataFrame({
        'env_steps': grouped['env_steps'].mean(),
        'mean': grouped[metric].mean(),
        'variance': grouped[metric].var(ddof=0),
        'n_seeds': grouped[metric].count(),
    }).reset_index()
    return CurveSet(metric=metric, seeds=kept, frame=curves, scores={seed: scores[seed] for seed in seeds})


def steps_to_threshold(curve: CurveSet, threshold: float, window: int = 1) -> Optional[float]:
    """Environment steps after which the mean curve first reaches ``threshold``.

    The mean is smoothed with a trailing moving average of ``window`` episodes. For metrics where lower is
    better the threshold is reached from above, otherwise from below.

    :return: The mean cumulative number of environment steps, or ``None`` when the threshold is never reached.
    :rtype: float, optional
    """
    smoothed = curve.frame['mean'].rolling(window, min_periods=window).mean()
    if LOWER_IS_BETTER.get(curve.metric, False):
        reached = smoothed <= threshold
    else:
        reached = smoothed >= threshold
    if not reached.any():
        return None
    return float(curve.frame['env_steps'][reached.idxmax()])


def curve_frame(curves: Dict[str, CurveSet]) -> pd.DataFrame:
    """Stack named curve sets into one long table with a ``method`` column."""
    frames = [curve.frame.assign(method=name, metric=curve.metric) for name, curve in curves.items()]
    if not frames:
        return pd.DataFrame(columns=['method', 'metric', 'episode', 'env_steps', 'mean', 'variance', 'n_seeds'])
    stacked = pd.concat(frames, ignore_index=True)
    return stacked[['method', 'metric', 'episode', 'env_steps', 'mean', 'variance', 'n_seeds']]
