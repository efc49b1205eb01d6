from typing import List, Tuple

import numpy as np

from ..envs.gridworld import MOVES, Cell, GridWorldConfig, grid_reward, move
from .homomorphism import HomomorphismMap
from .tabular import TabularMDP


def grid_cells(config: GridWorldConfig) -> List[Cell]:
    return [(row, col) for row in range(config.n_rows) for col in range(config.n_cols)]


def gridworld_mdp(config: GridWorldConfig, gamma: float = 0.9) -> Tuple[TabularMDP, List[Cell]]:
    """The distractor-free grid world as a tabular MDP over agent cells.

    Rewards are those of the pixel environment, paid on the cell that the move lands on. The goal is
    absorbing with zero reward so that values stay finite.

    :return: The MDP and the cell of every state index.
    :rtype: Tuple[TabularMDP, List[Cell]]
    """
    cells = grid_cells(config)
    index = {cell: i for i, cell in enumerate(cells)}
    goal = config.goal_cell  # type: Cell  # type: ignore
    T = np.zeros((len(cells), config.n_actions), dtype=np.int64)
    R = np.zeros((len(cells), config.n_actions))
    for cell in cells:
        for action in range(config.n_actions):
            if cell == goal:
                T[index[cell], action] = index[goal]
                continue
            landed = move(config, cell, action)
            T[index[cell], action] = index[landed]
            R[index[cell], action] = grid_reward(config, landed, goal)
    return TabularMDP(T=T, R=R, gamma=gamma), cells


def mirror_action(action: int) -> int:
    """The action whose move is the reflection of ``action`` in the main diagonal."""
    d_row, d_col = MOVES[action]
    return MOVES.index((d_col, d_row))


def mirror_quotient(config: GridWorldConfig, gamma: float = 0.9) -> Tuple[TabularMDP, TabularMDP, HomomorphismMap]:
    """Fold a square grid with its goal on the diagonal onto the half with ``row <= col``.

    Cells below the diagonal map to their reflection and their actions to the reflected actions; this
    pair of maps is an exact homomorphism onto the folded MDP.

    :return: The source MDP, the folded image MDP and the map between them.
    :rtype: Tuple[TabularMDP, TabularMDP, HomomorphismMap]
    """
    if config.n_rows != config.n_cols:
        raise ValueError('the mirror quotient needs a square grid')
    goal = config.goal_cell  # type: Cell  # type: ignore
    if goal[0] != goal[1]:
        raise ValueError('the mirror quotient needs the goal on the diagonal, got {}'.format(goal))

    source, cells = gridworld_mdp(config, gamma)
    image_cells = [cell for cell in cells if cell[0] <= cell[1]]
    image_index = {cell: i for i, cell in enumerate(image_cells)}

    def fold(cell: Cell) -> Cell:
        return cell if cell[0] <= cell[1] else (cell[1], cell[0])

    f = np.asarray([image_index[fold(cell)] for cell in cells], dtype=np.int64)
    g = np.asarray([
        [action if cell[0] <= cell[1] else mirror_action(action) for action in range(config.n_actions)]
        for cell in cells
    ], dtype=np.int64)

    T = np.zeros((len(image_cells), config.n_actions), dtype=np.int64)
    R = np.zeros((len(image_cells), config.n_actions))
    for cell in image_cells:
        for action in range(config.n_actions):
            if cell == goal:
                T[image_index[cell], action] = image_index[goal]
                continue
            landed = move(config, cell, action)
            T[image_index[cell], action] = image_index[fold(landed)]
            R[image_index[cell], action] = grid_reward(config, landed, goal)
    return source, TabularMDP(T=T, R=R, gamma=gamma), HomomorphismMap(f=f, g=g)
