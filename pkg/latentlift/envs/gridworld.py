import collections
import dataclasses

from typing import List, Optional, Tuple

import numpy as np

from ..core import Observation
from . import render
from .base import Env
from .catalogue import register_env

Cell = Tuple[int, int]

# row/column offsets; the first four are N, S, E, W and the last four the diagonals NE, NW, SE, SW
MOVES = ((-1, 0), (1, 0), (0, 1), (0, -1), (-1, 1), (-1, -1), (1, 1), (1, -1))
ACTION_NAMES = ('N', 'S', 'E', 'W', 'NE', 'NW', 'SE', 'SW')


@dataclasses.dataclass
class GridWorldConfig:
    """Configuration of the grid-world maze.

    ``grid_n`` is the number of rows (and columns unless ``grid_width`` is given). The reward for a
    non-goal step is ``-eta * d`` where ``d`` is the Manhattan distance to the goal divided by the number
    of cells (``distance_norm='cells'``) or by ``grid_n`` (``distance_norm='side'``).
    """

    grid_n: int = 6
    n_actions: int = 4
    n_distractors: int = 0
    image_size: int = 50
    r_reached: float = 1.0
    eta: float = 0.1
    max_steps: int = 50
    seed: int = 0
    grid_width: Optional[int] = None
    goal_cell: Optional[Tuple[int, int]] = None
    distance_norm: str = 'cells'
    distractors_active: bool = True

    def __post_init__(self):
        if self.grid_n < 1 or self.n_rows * self.n_cols < 2:
            raise ValueError('the grid needs at least two cells, got {} x {}'.format(self.n_rows, self.n_cols))
        if self.n_actions not in (4, 8):
            raise ValueError('n_actions must be 4 or 8, got {}'.format(self.n_actions))
        if not 0 <= self.n_distractors <= 3:
            raise ValueError('n_distractors must be between 0 and 3, got {}'.format(self.n_distractors))
        if self.image_size < max(self.n_rows, self.n_cols):
            raise ValueError('image_size must be at least the grid size, got {}'.format(self.image_size))
        if self.distance_norm not in ('cells', 'side'):
            raise ValueError("distance_norm must be 'cells' or 'side', got {!r}".format(self.distance_norm))
        if self.eta < 0 or self.max_steps < 1:
            raise ValueError('eta must be non-negative and max_steps positive')
        if self.goal_cell is None:
            self.goal_cell = (self.n_rows - 1, self.n_cols - 1)
        self.goal_cell = (int(self.goal_cell[0]), int(self.goal_cell[1]))
        if not (0 <= self.goal_cell[0] < self.n_rows and 0 <= self.goal_cell[1] < self.n_cols):
            raise ValueError('goal_cell {} lies outside the grid'.format(self.goal_cell))

    @property
    def n_rows(self) -> int:
        return self.grid_n

    @property
    def n_cols(self) -> int:
        return self.grid_width if self.grid_width is not None else self.grid_n

    @property
    def distance_scale(self) -> float:
        return float(self.n_rows * self.n_cols) if self.distance_norm == 'cells' else float(self.grid_n)


@dataclasses.dataclass
class GridWorldState:
    agent_cell: Cell
    goal_cell: Cell
    distractor_cells: List[Cell] = dataclasses.field(default_factory=list)
    steps: int = 0


def grid_reward(config: GridWorldConfig, agent_cell: Cell, goal_cell: Cell) -> float:
    """The distance-based maze reward of being in ``agent_cell``."""
    if agent_cell == goal_cell:
        return float(config.r_reached)
    distance = abs(agent_cell[0] - goal_cell[0]) + abs(agent_cell[1] - goal_cell[1])
    return -config.eta * distance / config.distance_scale


def move(config: GridWorldConfig, cell: Cell, action: int) -> Cell:
    """Apply a move; moves that would leave the grid keep the agent where it is."""
    d_row, d_col = MOVES[action]
    row, col = cell[0] + d_row, cell[1] + d_col
    if 0 <= row < config.n_rows and 0 <= col < config.n_cols:
        return (row, col)
    return cell


@register_env
class GridWorld(Env):
    """A maze in which a red triangle has to reach a square target, observed as an RGB image.

    .. code:: pycon

        >>> import latentlift
        >>> env = latentlift.envs.GridWorld(latentlift.envs.GridWorldConfig(grid_n=6, seed=0))
        >>> env.state = latentlift.envs.GridWorldState(agent_cell=(0, 0), goal_cell=(5, 5))
        >>> env.optimal_steps()
        10
    """

    name = 'gridworld'
    autoload = True
    config_cls = GridWorldConfig

    def __init__(self, config: GridWorldConfig):
        super(GridWorld, self).__init__(config)
        self.config = config  # type: GridWorldConfig

    @property
    def cells(self) -> List[Cell]:
        return [(row, col) for row in range(self.config.n_rows) for col in range(self.config.n_cols)]

    def _free_cells(self, *occupied: Cell) -> List[Cell]:
        return [cell for cell in self.cells if cell not in occupied]

    def _reset_state(self) -> GridWorldState:
        goal = self.config.goal_cell  # type: Cell  # type: ignore
        candidates = self._free_cells(goal)
        agent = candidates[int(self.rng.integers(len(candidates)))]
        distractors = []  # type: List[Cell]
        if self.config.distractors_active and self.config.n_distractors:
            free = self._free_cells(agent, goal)
            chosen = self.rng.choice(len(free), size=min(self.config.n_distractors, len(free)), replace=False)
            distractors = [free[int(i)] for i in chosen]
        return GridWorldState(agent_cell=agent, goal_cell=goal, distractor_cells=distractors)

    def _transition(self, action: int) -> Tuple[float, bool, bool]:
        state = self.state  # type: GridWorldState
        state.agent_cell = move(self.config, state.agent_cell, action)
        state.distractor_cells = [self._move_distractor(cell) for cell in state.distractor_cells]
        reached = state.agent_cell == state.goal_cell
        return grid_reward(self.config, state.agent_cell, state.goal_cell), reached, reached

    def _move_distractor(self, cell: Cell) -> Cell:
        blocked = (self.state.agent_cell, self.state.goal_cell)
        options = [move(self.config, cell, action) for action in range(4)] + [cell]
        options = [option for option in dict.fromkeys(options) if option not in blocked]
        if not options:
            options = self._free_cells(*blocked)
        return options[int(self.rng.integers(len(options)))]

    def render_state(self, state: GridWorldState) -> Observation:
        size = self.config.image_size
        canvas = render.blank(size)
        goal_color = render.YELLOW if self.config.n_distractors else render.GREEN

        top, left, bottom, right, margin = self._cell_box(state.goal_cell)
        render.fill_rect(canvas, top + margin, left + margin, bottom - margin, right - margin, goal_color)

        for index, cell in enumerate(state.distractor_cells):
            top, left, bottom, right, margin = self._cell_box(cell)
            radius = (bottom - top) / 2.0 - margin
            render.fill_disc(canvas, (top + bottom) / 2.0, (left + right) / 2.0, radius,
                             render.DISTRACTOR_COLORS[index % len(render.DISTRACTOR_COLORS)])

        top, left, bottom, right, margin = self._cell_box(state.agent_cell)
        render.fill_convex_polygon(canvas, [
            (top + margin, (left + right) / 2.0),
            (bottom - margin, right - margin),
            (bottom - margin, left + margin),
        ], render.RED)
        return render.to_observation(canvas)

    def _cell_box(self, cell: Cell) -> Tuple[float, float, float, float, float]:
        cell_h = self.config.image_size / self.config.n_rows
        cell_w = self.config.image_size / self.config.n_cols
        top, left = cell[0] * cell_h, cell[1] * cell_w
        return top, left, top + cell_h, left + cell_w, 0.15 * min(cell_h, cell_w)

    def optimal_steps(self, state: Optional[GridWorldState] = None) -> int:
        """Shortest number of steps from the agent to the goal under this env's action set (BFS)."""
        state = state if state is not None else self.state
        start, goal = state.agent_cell, state.goal_cell
        distances = {start: 0}
        queue = collections.deque([start])
        while queue:
            cell = queue.popleft()
            if cell == goal:
                return distances[cell]
            for action in range(self.n_actions):
                neighbour = move(self.config, cell, action)
                if neighbour not in distances:
                    distances[neighbour] = distances[cell] + 1
                    queue.append(neighbour)
        raise ValueError('the goal {} cannot be reached from {}'.format(goal, start))

    def mean_optimal_steps(self) -> float:
        """Average of :meth:`optimal_steps` over the spawn distribution (uniform over non-goal cells)."""
        goal = self.config.goal_cell  # type: Cell  # type: ignore
        steps = [self.optimal_steps(GridWorldState(agent_cell=cell, goal_cell=goal)) for cell in self._free_cells(goal)]
        return float(np.mean(steps))

    def sample_state(self, rng: np.random.Generator) -> GridWorldState:
        cells = self.cells
        agent = cells[int(rng.integers(len(cells)))]
        return GridWorldState(agent_cell=agent, goal_cell=self.config.goal_cell)  # type: ignore

    def state_reward(self, state: GridWorldState) -> float:
        return grid_reward(self.config, state.agent_cell, state.goal_cell)

    def true_state(self, state: GridWorldState) -> np.ndarray:
        return np.asarray(state.agent_cell, dtype=np.float64)
