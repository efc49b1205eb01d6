import inspect
import catalogue

from typing import Type, Optional, Union, TYPE_CHECKING

from .. import exceptions

if TYPE_CHECKING:
    from latentlift.agents import Agent
    from latentlift.nets import ModelBundle

agent_catalogue = catalogue.create('latentlift', 'agents', entry_points=True)


def register_agent(agent: Type['Agent'], *, autoload: Optional[bool] = None) -> Type['Agent']:
    """Register a policy learner so that experiment configs can select it by name.

    :param agent: The ``Agent`` class to register.
    :type agent: Agent class
    :param autoload: Whether the learner takes part in the default comparison.
    :type autoload: bool
    """
    if not inspect.isclass(agent):
        raise ValueError("agent should be a class, not an instance.")

    if autoload is not None:
        agent.autoload = autoload

    agent_catalogue.register(agent.name, func=agent)
    return agent


def remove_agent(agent: Union[Type['Agent'], str]) -> None:
    if isinstance(agent, str):
        if agent in agent_catalogue:
            catalogue._remove((*agent_catalogue.namespace, agent))

    elif inspect.isclass(agent):
        if agent.name in agent_catalogue:
            catalogue._remove((*agent_catalogue.namespace, agent.name))

    else:
        raise ValueError("agent should be a class (not an instance) or a string.")


def get_agent_class(name: str) -> Type['Agent']:
    if name not in agent_catalogue:
        raise exceptions.ConfigError('Unknown agent "{}", registered agents are {}'.format(
            name, sorted(agent_catalogue.get_all())))
    return agent_catalogue.get(name)


def make_agent(name: str, bundle: 'ModelBundle', config=None, **kwargs) -> 'Agent':
    agent_cls = get_agent_class(name)
    if config is None:
        config = agent_cls.config_cls(**kwargs)
    return agent_cls(config, bundle)
