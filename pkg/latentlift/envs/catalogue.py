import inspect
import catalogue

from typing import Type, Optional, Union, TYPE_CHECKING

if TYPE_CHECKING:
    from latentlift.envs import Env

env_catalogue = catalogue.create('latentlift', 'envs', entry_points=True)


def register_env(env: Type['Env'], *, autoload: Optional[bool] = None) -> Type['Env']:
    """Register an environment so that it can be built by name from an experiment config.

    You can use ``register_env`` as a decorator or call it after your environment definition.

    .. code:: pycon

        >>> import latentlift
        >>> class NewEnv(latentlift.envs.Env):
        ...     name = 'new_env'
        >>> latentlift.envs.register_env(NewEnv)
        <class 'latentlift.envs.catalogue.NewEnv'>

    :param env: The ``Env`` class to register.
    :type env: Env class
    :param autoload: Kept for symmetry with the other catalogues; marks the env as a default choice.
    :type autoload: Optional[bool]
    """
    if not inspect.isclass(env):
        raise ValueError("env should be a class, not an instance.")

    if autoload is not None:
        env.autoload = autoload

    env_catalogue.register(env.name, func=env)

    return env


def remove_env(env: Union[Type['Env'], str]):
    """Remove an already registered environment.

    :param env: The ``Env`` class or its registered name.
    :type env: Union[Type['Env'], str]
    """
    if isinstance(env, str):
        if env in env_catalogue:
            catalogue._remove((*env_catalogue.namespace, env))

    elif inspect.isclass(env):
        if env.name in env_catalogue:
            catalogue._remove((*env_catalogue.namespace, env.name))

    else:
        raise ValueError("env should be a class (not an instance) or a string.")


def make_env(name: str, config=None, **kwargs) -> 'Env':
    """Build a registered environment by name.

    :param name: The registered name, e.g. ``'gridworld'``.
    :type name: str
    :param config: A config object of the environment's ``config_cls``; keyword arguments build one otherwise.
    :return: The environment instance.
    :rtype: Env
    """
    env_cls = env_catalogue.get(name)
    if config is None:
        config = env_cls.config_cls(**kwargs)
    return env_cls(config)
