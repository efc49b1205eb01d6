from .catalogue import env_catalogue, register_env, remove_env, make_env
from .base import Env
from .gridworld import GridWorld, GridWorldConfig, GridWorldState, MOVES, ACTION_NAMES, grid_reward, move
from .navigation import ContinuousNavigation, ContinuousNavConfig, ContinuousNavState, nav_reward
