"""Plain-text formats for tabular MDPs and homomorphism maps.

An MDP file holds a header line ``n_states n_actions gamma``, then ``n_states`` lines of successor
indices (the ``T`` table) and ``n_states`` lines of rewards (the ``R`` table). A map file holds a header
line ``n_states n_actions n_image_states n_image_actions``, one line with the state map ``f`` and
``n_states`` lines with the action map ``g``. Blank lines and everything after ``#`` are ignored.
"""
from typing import List, Tuple

import numpy as np

from .. import exceptions
from .homomorphism import HomomorphismMap
from .tabular import TabularMDP


def _rows(path: str) -> List[List[str]]:
    rows = []
    with open(path) as stream:
        for line in stream:
            content = line.split('#', 1)[0].split()
            if content:
                rows.append(content)
    return rows


def _table(rows: List[List[str]], n_rows: int, n_cols: int, dtype, what: str, path: str) -> np.ndarray:
    if len(rows) < n_rows or any(len(row) != n_cols for row in rows[:n_rows]):
        raise exceptions.DatasetFormatError('{}: the {} table must have {} rows of {} entries'.format(
            path, what, n_rows, n_cols))
    try:
        return np.asarray([[dtype(value) for value in row] for row in rows[:n_rows]])
    except ValueError as error:
        raise exceptions.DatasetFormatError('{}: bad entry in the {} table ({})'.format(path, what, error))


def read_mdp(path: str) -> TabularMDP:
    rows = _rows(path)
    if not rows or len(rows[0]) != 3:
        raise exceptions.DatasetFormatError('{}: the header must read "n_states n_actions gamma"'.format(path))
    try:
        n_states, n_actions, gamma = int(rows[0][0]), int(rows[0][1]), float(rows[0][2])
    except ValueError:
        raise exceptions.DatasetFormatError('{}: malformed header {}'.format(path, ' '.join(rows[0])))
    body = rows[1:]
    T = _table(body, n_states, n_actions, int, 'transition', path)
    R = _table(body[n_states:], n_states, n_actions, float, 'reward', path)
    if len(body) != 2 * n_states:
        raise exceptions.DatasetFormatError('{}: expected {} table rows, found {}'.format(path, 2 * n_states,
                                                                                        len(body)))
    try:
        return TabularMDP(T=T, R=R, gamma=gamma)
    except ValueError as error:
        raise exceptions.DatasetFormatError('{}: {}'.format(path, error))


def write_mdp(mdp: TabularMDP, path: str) -> str:
    with open(path, 'w') as stream:
        stream.write('{} {} {!r}\n'.format(mdp.n_states, mdp.n_actions, float(mdp.gamma)))
        stream.write('# transitions\n')
        for row in mdp.T:
            stream.write(' '.join(str(int(v)) for v in row) + '\n')
        stream.write('# rewards\n')
        for row in mdp.R:
            stream.write(' '.join(repr(float(v)) for v in row) + '\n')
    return path


def read_map(path: str) -> Tuple[HomomorphismMap, int, int]:
    """Read a map file.

    :return: The map and the declared numbers of image states and image actions.
    :rtype: Tuple[HomomorphismMap, int, int]
    """
    rows = _rows(path)
    if not rows or len(rows[0]) != 4:
        raise exceptions.DatasetFormatError(
            '{}: the header must read "n_states n_actions n_image_states n_image_actions"'.format(path))
    try:
        n_states, n_actions, n_image_states, n_image_actions = (int(v) for v in rows[0])
    except ValueError:
        raise exceptions.DatasetFormatError('{}: malformed header {}'.format(path, ' '.join(rows[0])))
    f = _table(rows[1:], 1, n_states, int, 'state map', path)[0]
    g = _table(rows[2:], n_states, n_actions, int, 'action map', path)
    if len(rows) != 2 + n_states:
        raise exceptions.DatasetFormatError('{}: expected {} action-map rows'.format(path, n_states))
    return HomomorphismMap(f=f, g=g), n_image_states, n_image_actions


def write_map(mapping: HomomorphismMap, path: str, n_image_states: int, n_image_actions: int) -> str:
    with open(path, 'w') as stream:
        stream.write('{} {} {} {}\n'.format(len(mapping.f), mapping.g.shape[1], n_image_states, n_image_actions))
        stream.write(' '.join(str(int(v)) for v in mapping.f) + '\n')
        for row in mapping.g:
            stream.write(' '.join(str(int(v)) for v in row) + '\n')
    return path
