import os
import logging

from typing import Dict, Iterable, List, Optional

import pandas as pd

from .. import exceptions

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ['method', 'env', 'metric', 'value']


def final_window_summary(metrics: pd.DataFrame, method: str, env: str, final_window: int = 50) -> pd.DataFrame:
    """Long-format summary of a metrics table: the mean of every metric over each seed's final episodes."""
    if metrics.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    tail = metrics.sort_values(['seed', 'episode']).groupby('seed').tail(final_window)
    rows = [
        {'method': method, 'env': env, 'metric': metric, 'value': float(tail[metric].mean())}
        for metric in ('steps', 'return', 'success') if metric in tail.columns
    ]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def read_summaries(paths: Iterable[str], final_window: int = 50) -> pd.DataFrame:
    """Read metrics or summary CSVs.

    A file that already has ``method, env, metric, value`` columns is taken as it is. A raw metrics file is
    summarised with :func:`final_window_summary`; its method and env are read from ``method`` and ``env``
    columns when present and otherwise from the names of the two enclosing directories
    (``<env>/<method>/metrics.csv``).
    """
    frames = []  # type: List[pd.DataFrame]
    for path in paths:
        try:
            frame = pd.read_csv(path)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as error:
            raise exceptions.DatasetFormatError('cannot read {} ({})'.format(path, error))
        if set(SUMMARY_COLUMNS) <= set(frame.columns):
            frames.append(frame[SUMMARY_COLUMNS])
            continue
        if 'seed' not in frame.columns or 'episode' not in frame.columns:
            raise exceptions.DatasetFormatError('{} is neither a metrics nor a summary table'.format(path))
        parent = os.path.dirname(os.path.abspath(path))
        method = str(frame['method'].iloc[0]) if 'method' in frame.columns and len(frame) else \
            os.path.basename(parent)
        env = str(frame['env'].iloc[0]) if 'env' in frame.columns and len(frame) else \
            os.path.basename(os.path.dirname(parent))
        frames.append(final_window_summary(frame, method, env, final_window))
    if not frames:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    return pd.concat(frames, ignore_index=True)


def comparison_table(metrics: pd.DataFrame, metric_order: Optional[Dict[str, int]] = None) -> pd.DataFrame:
    """Pivot a long summary into one row per method and one column per ``(env, metric)`` pair.

    Repeated entries for the same cell are averaged.
    """
    missing = set(SUMMARY_COLUMNS) - set(metrics.columns)
    if missing:
        raise exceptions.DatasetFormatError('the summary lacks the columns {}'.format(sorted(missing)))
    if metrics.empty:
        return pd.DataFrame()
    table = metrics.pivot_table(index='method', columns=['env', 'metric'], values='value', aggfunc='mean')
    if metric_order:
        table = table.reindex(sorted(table.columns, key=lambda column: (column[0], metric_order.get(column[1], 99),
                                                                         column[1])), axis=1)
    return table.sort_index()
