import inspect
import catalogue

from typing import Type, Optional, Union, TYPE_CHECKING

if TYPE_CHECKING:
    from latentlift.pipeline.stages import Stage

stage_catalogue = catalogue.create('latentlift', 'stages', entry_points=True)


def register_stage(stage: Type['Stage'], *, autoload: Optional[bool] = None,
                   index: Optional[int] = None) -> Type['Stage']:
    """Register a pipeline stage so that a ``Pipeline`` can add it by name.

    The argument ``autoload`` sets whether a new ``Pipeline()`` runs this stage by default; ``index`` sets
    its position, lower indices running first.

    :param stage: The ``Stage`` class to register.
    :type stage: Stage class
    :param autoload: Whether to add this ``Stage`` on ``Pipeline`` initialisation.
    :type autoload: bool
    :param index: The position of this stage in the pipeline.
    :type index: int
    """
    if not inspect.isclass(stage):
        raise ValueError("stage should be a class, not an instance.")

    if autoload is not None:
        stage.autoload = autoload

    if index is not None:
        stage.index = index

    stage_catalogue.register(stage.name, func=stage)
    return stage


def remove_stage(stage: Union[Type['Stage'], str]) -> None:
    """Remove an already registered stage.

    :param stage: The ``Stage`` class or its registered name.
    :type stage: Union[Type['Stage'], str]
    """
    if isinstance(stage, str):
        if stage in stage_catalogue:
            catalogue._remove((*stage_catalogue.namespace, stage))

    elif inspect.isclass(stage):
        if stage.name in stage_catalogue:
            catalogue._remove((*stage_catalogue.namespace, stage.name))

    else:
        raise ValueError("stage should be a class (not an instance) or a string.")
