import inspect
import catalogue

from typing import Optional, Tuple, Type, Union

from .. import exceptions
from .losses import LossWeights, Wiring

baseline_catalogue = catalogue.create('latentlift', 'baselines', entry_points=True)


class Baseline(object):
    """A representation-learning method, expressed as an on/off mask over the four losses and a wiring.

    The mask multiplies the user's :class:`LossWeights`, so a method never switches on a loss the
    user turned off.
    """

    name = 'baseline'  # type: str
    autoload = False  # type: bool
    use_psi = True  # type: bool
    state_free_psi = False  # type: bool
    # transition, reward, contrastive, decoder
    mask = (True, True, True, True)  # type: Tuple[bool, bool, bool, bool]

    @classmethod
    def configure(cls, weights: Optional[LossWeights] = None,
                  stop_target_gradient: bool = False) -> Tuple[LossWeights, Wiring]:
        weights = weights or LossWeights()
        use_t, use_r, use_c, use_delta = cls.mask
        return (
            LossWeights(
                w_T=weights.w_T if use_t else 0.0,
                w_R=weights.w_R if use_r else 0.0,
                w_c=weights.w_c if use_c else 0.0,
                w_delta=weights.w_delta if use_delta else 0.0,
                hinge_eps=weights.hinge_eps,
            ),
            Wiring(use_psi=cls.use_psi, stop_target_gradient=stop_target_gradient,
                   state_free_psi=cls.state_free_psi),
        )


def register_baseline(baseline: Type[Baseline], *, autoload: Optional[bool] = None) -> Type[Baseline]:
    """Register a representation-learning method so that it can be selected by name.

    :param baseline: The ``Baseline`` class to register.
    :type baseline: Baseline class
    :param autoload: Whether the method is part of the default comparison.
    :type autoload: bool
    """
    if not inspect.isclass(baseline):
        raise ValueError("baseline should be a class, not an instance.")

    if autoload is not None:
        baseline.autoload = autoload

    baseline_catalogue.register(baseline.name, func=baseline)
    return baseline


def remove_baseline(baseline: Union[Type[Baseline], str]) -> None:
    if isinstance(baseline, str):
        if baseline in baseline_catalogue:
            catalogue._remove((*baseline_catalogue.namespace, baseline))

    elif inspect.isclass(baseline):
        if baseline.name in baseline_catalogue:
            catalogue._remove((*baseline_catalogue.namespace, baseline.name))

    else:
        raise ValueError("baseline should be a class (not an instance) or a string.")


def get_baseline(name: str) -> Type[Baseline]:
    key = name.lower()
    if key not in baseline_catalogue:
        raise exceptions.UnknownBaseline(name)
    return baseline_catalogue.get(key)


def configure_baseline(name: str, weights: Optional[LossWeights] = None,
                       stop_target_gradient: bool = False) -> Tuple[LossWeights, Wiring]:
    """Return the loss weights and wiring of a named method.

    .. code:: pycon

        >>> from latentlift.representation import configure_baseline
        >>> weights, wiring = configure_baseline('d_mdp')
        >>> weights.w_c, weights.w_delta, wiring.use_psi
        (0.0, 0.0, False)

    :param name: One of ``ours``, ``mdp_h``, ``d_mdp``, ``jsae``, ``jsae_c`` (case-insensitive).
    :type name: str
    :param weights: Base weights; defaults to all ones with a hinge margin of one.
    :type weights: LossWeights
    :return: The masked weights and the wiring flags.
    :rtype: Tuple[LossWeights, Wiring]
    """
    return get_baseline(name).configure(weights, stop_target_gradient)


@register_baseline
class Ours(Baseline):
    """All four losses with the action encoder in the loop."""
    name = 'ours'
    autoload = True


@register_baseline
class MDPH(Baseline):
    """Transition, reward and contrastive losses on the true one-hot action."""
    name = 'mdp_h'
    autoload = True
    use_psi = False
    mask = (True, True, True, False)


@register_baseline
class DMDP(Baseline):
    """Transition and reward losses only, on the true one-hot action."""
    name = 'd_mdp'
    autoload = True
    use_psi = False
    mask = (True, True, False, False)


@register_baseline
class JSAE(Baseline):
    """Joint state-action embedding: transition, reward and decoder losses without the contrastive term."""
    name = 'jsae'
    autoload = True
    state_free_psi = True
    mask = (True, True, False, True)


@register_baseline
class JSAEC(Baseline):
    """The joint state-action embedding losses plus the contrastive term."""
    name = 'jsae_c'
    autoload = True
    state_free_psi = True
    mask = (True, True, True, True)
