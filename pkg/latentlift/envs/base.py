from typing import Any, ClassVar, Tuple, Type

import numpy as np

from .. import exceptions
from ..core import DiscreteAction, Observation


class Env(object):
    """This is the base class for all simulators.

    An environment owns its configuration, a seeded random generator and the hidden true state. Agents
    only ever see the rendered RGB observation. A new environment needs a ``name``, a ``config_cls``
    dataclass and implementations of ``_reset_state``, ``_transition`` and ``render_state``:

    .. code:: pycon

        >>> import latentlift
        >>> env = latentlift.envs.make_env('gridworld', grid_n=6, seed=0)
        >>> obs = env.reset()
        >>> obs.shape
        (50, 50, 3)
    """

    name = 'env'  # type: str
    autoload = False  # type: bool
    config_cls = object  # type: ClassVar[Type[Any]]

    def __init__(self, config: Any):
        self.config = config
        self.rng = np.random.default_rng(getattr(config, 'seed', 0))
        self.state = None  # type: Any
        self.done = True
        self.success = False
        self.truncated = False

    @property
    def n_actions(self) -> int:
        return int(self.config.n_actions)

    @property
    def observation_shape(self) -> Tuple[int, int, int]:
        return (int(self.config.image_size), int(self.config.image_size), 3)

    def seed(self, seed: int) -> None:
        """Re-seed the environment's random generator."""
        self.rng = np.random.default_rng(seed)

    def reset(self) -> Observation:
        """Spawn the agent at a random starting position and return the first observation."""
        self.state = self._reset_state()
        self.done = False
        self.success = False
        self.truncated = False
        return self.render()

    def step(self, action) -> Tuple[Observation, float, bool]:
        """Apply ``action`` and return ``(observation, reward, done)``.

        :param action: A :class:`DiscreteAction` or an integer action index.
        :return: The next observation, the reward and whether the episode has finished.
        :rtype: Tuple[np.ndarray, float, bool]
        """
        if self.done:
            raise exceptions.EpisodeFinished()
        if not isinstance(action, DiscreteAction):
            action = DiscreteAction(int(action), self.n_actions)
        elif action.n_actions != self.n_actions:
            raise exceptions.InvalidAction(action.index, self.n_actions)

        reward, terminal, success = self._transition(action.index)
        self.state.steps += 1
        self.success = success
        self.truncated = not terminal and self.state.steps >= self.config.max_steps
        self.done = terminal or self.truncated
        return self.render(), float(reward), self.done

    def render(self) -> Observation:
        return self.render_state(self.state)

    def _reset_state(self) -> Any:
        raise NotImplementedError('must be implemented in derived classes')

    def _transition(self, action: int) -> Tuple[float, bool, bool]:
        """Advance ``self.state`` and return ``(reward, terminal, success)``."""
        raise NotImplementedError('must be implemented in derived classes')

    def render_state(self, state: Any) -> Observation:
        raise NotImplementedError('must be implemented in derived classes')

    def sample_state(self, rng: np.random.Generator) -> Any:
        """Draw a state from the spawn distribution without touching the running episode."""
        raise NotImplementedError('must be implemented in derived classes')

    def state_reward(self, state: Any) -> float:
        """The reward attached to being in ``state``, used to colour latent maps."""
        raise NotImplementedError('must be implemented in derived classes')

    def true_state(self, state: Any) -> np.ndarray:
        """Plain coordinates of the hidden state (a cell or a pose)."""
        raise NotImplementedError('must be implemented in derived classes')
