import math
import dataclasses

from typing import Optional, Tuple

import numpy as np

from ..core import Observation
from . import render
from .base import Env
from .catalogue import register_env

Point = Tuple[float, float]

FORWARD, TURN_LEFT, TURN_RIGHT = 0, 1, 2


@dataclasses.dataclass
class ContinuousNavConfig:
    """Configuration of the top-down continuous navigation task.

    Unset ``d_min``, ``step_size`` and ``goal`` are derived from ``arena_size`` (``0.1``, ``0.05`` and
    ``(0.75, 0.75)`` times the arena side).
    """

    arena_size: float = 1.0
    n_actions: int = 3
    d_min: Optional[float] = None
    r_reached: float = 1.0
    r_crashed: float = -1.0
    eta: float = 0.1
    image_size: int = 48
    max_steps: int = 100
    seed: int = 0
    step_size: Optional[float] = None
    turn_angle: float = math.pi / 8
    goal: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.arena_size <= 0:
            raise ValueError('arena_size must be positive, got {}'.format(self.arena_size))
        if self.n_actions not in (3, 8):
            raise ValueError('n_actions must be 3 or 8, got {}'.format(self.n_actions))
        if self.d_min is None:
            self.d_min = 0.1 * self.arena_size
        if self.step_size is None:
            self.step_size = 0.05 * self.arena_size
        if self.goal is None:
            self.goal = (0.75 * self.arena_size, 0.75 * self.arena_size)
        self.goal = (float(self.goal[0]), float(self.goal[1]))
        if not 0 < self.d_min < self.arena_size:
            raise ValueError('d_min must lie in (0, arena_size), got {}'.format(self.d_min))
        if not self.r_crashed < 0 < self.r_reached:
            raise ValueError('rewards must satisfy r_crashed < 0 < r_reached')
        if self.step_size <= 0 or self.max_steps < 1 or self.image_size < 8:
            raise ValueError('step_size and max_steps must be positive and image_size at least 8')
        if not all(0.0 <= c <= self.arena_size for c in self.goal):
            raise ValueError('goal {} lies outside the arena'.format(self.goal))


@dataclasses.dataclass
class ContinuousNavState:
    position: Point
    heading: float
    goal: Point
    steps: int = 0


def nav_reward(config: ContinuousNavConfig, position: Point, goal: Point) -> Tuple[float, bool, bool]:
    """Reward of standing at ``position`` as ``(reward, terminal, success)``."""
    x, y = position
    if not (0.0 <= x <= config.arena_size and 0.0 <= y <= config.arena_size):
        return float(config.r_crashed), True, False
    distance = math.hypot(x - goal[0], y - goal[1])
    if distance <= config.d_min:  # type: ignore
        return float(config.r_reached), True, True
    return -config.eta * distance, False, False


@register_env
class ContinuousNavigation(Env):
    """A kinematic point robot that has to reach a purple disc in a walled square arena.

    With three actions the robot drives forward or turns on the spot; with eight it translates along the
    compass directions. Leaving the arena is a crash and ends the episode.
    """

    name = 'navigation'
    autoload = True
    config_cls = ContinuousNavConfig

    def __init__(self, config: ContinuousNavConfig):
        super(ContinuousNavigation, self).__init__(config)
        self.config = config  # type: ContinuousNavConfig

    def _random_pose(self, rng: np.random.Generator) -> ContinuousNavState:
        goal = self.config.goal  # type: Point  # type: ignore
        while True:
            x, y = rng.uniform(0.0, self.config.arena_size, size=2)
            if math.hypot(x - goal[0], y - goal[1]) > self.config.d_min:  # type: ignore
                return ContinuousNavState(
                    position=(float(x), float(y)), heading=float(rng.uniform(0.0, 2 * math.pi)), goal=goal,
                )

    def _reset_state(self) -> ContinuousNavState:
        return self._random_pose(self.rng)

    def _transition(self, action: int) -> Tuple[float, bool, bool]:
        state = self.state  # type: ContinuousNavState
        x, y = state.position
        step = self.config.step_size  # type: float  # type: ignore
        if self.config.n_actions == 3:
            if action == FORWARD:
                x, y = x + step * math.cos(state.heading), y + step * math.sin(state.heading)
            elif action == TURN_LEFT:
                state.heading = (state.heading + self.config.turn_angle) % (2 * math.pi)
            else:
                state.heading = (state.heading - self.config.turn_angle) % (2 * math.pi)
        else:
            # compass directions counter-clockwise from east
            state.heading = action * math.pi / 4
            x, y = x + step * math.cos(state.heading), y + step * math.sin(state.heading)
        state.position = (x, y)
        return nav_reward(self.config, state.position, state.goal)

    def _to_pixels(self, point: Point) -> Tuple[float, float]:
        scale = self.config.image_size / self.config.arena_size
        x = min(max(point[0], 0.0), self.config.arena_size)
        y = min(max(point[1], 0.0), self.config.arena_size)
        return (self.config.arena_size - y) * scale, x * scale

    def render_state(self, state: ContinuousNavState) -> Observation:
        canvas = render.blank(self.config.image_size, render.DARK_GREY)
        scale = self.config.image_size / self.config.arena_size

        goal_row, goal_col = self._to_pixels(state.goal)
        render.fill_disc(canvas, goal_row, goal_col, self.config.d_min * scale, render.PURPLE)  # type: ignore

        row, col = self._to_pixels(state.position)
        size = 0.06 * self.config.image_size
        # image rows grow downwards while y grows upwards
        heading = state.heading
        tip = (row - 1.5 * size * math.sin(heading), col + 1.5 * size * math.cos(heading))
        left = (row - size * math.sin(heading + 2.5), col + size * math.cos(heading + 2.5))
        right = (row - size * math.sin(heading - 2.5), col + size * math.cos(heading - 2.5))
        render.fill_convex_polygon(canvas, [tip, left, right], render.RED)
        return render.to_observation(canvas)

    def sample_state(self, rng: np.random.Generator) -> ContinuousNavState:
        return self._random_pose(rng)

    def state_reward(self, state: ContinuousNavState) -> float:
        return nav_reward(self.config, state.position, state.goal)[0]

    def true_state(self, state: ContinuousNavState) -> np.ndarray:
        return np.asarray([state.position[0], state.position[1], state.heading], dtype=np.float64)
