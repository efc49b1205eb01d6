import logging
import dataclasses

from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .. import exceptions
from .tabular import StochasticMDP, TabularMDP, policy_evaluation, value_iteration

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class HomomorphismMap:
    """A state map ``f[s]`` and a state-dependent action map ``g[s, a]`` into an image MDP."""

    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=np.int64)
        self.g = np.asarray(self.g, dtype=np.int64)
        if self.f.ndim != 1 or self.g.ndim != 2 or self.g.shape[0] != self.f.shape[0]:
            raise ValueError('f must have one entry per state and g one row per state')

    @classmethod
    def identity(cls, mdp) -> 'HomomorphismMap':
        return cls(f=np.arange(mdp.n_states), g=np.tile(np.arange(mdp.n_actions), (mdp.n_states, 1)))

    def check_domain(self, source, image) -> None:
        if self.g.shape != (source.n_states, source.n_actions):
            raise ValueError('the map covers {} states x {} actions but the MDP has {} x {}'.format(
                self.g.shape[0], self.g.shape[1], source.n_states, source.n_actions))
        if self.f.min() < 0 or self.f.max() >= image.n_states or self.g.min() < 0 or self.g.max() >= image.n_actions:
            raise ValueError('the map points outside the image MDP')


@dataclasses.dataclass
class Violation:
    kind: str
    state: int
    action: int
    expected: float
    found: float

    def __str__(self) -> str:
        return '{} condition fails at state {} action {}: image gives {}, source implies {}'.format(
            self.kind, self.state, self.action, self.found, self.expected)


@dataclasses.dataclass
class HomomorphismReport:
    transition_ok: bool
    reward_ok: bool
    violations: List[Violation] = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.transition_ok and self.reward_ok

    def to_record(self) -> Dict[str, Any]:
        return {
            'transition_ok': self.transition_ok,
            'reward_ok': self.reward_ok,
            'violations': [dataclasses.asdict(v) for v in self.violations],
        }


def check_homomorphism(source: TabularMDP, image: TabularMDP, mapping: HomomorphismMap,
                       reward_tolerance: float = 0.0) -> HomomorphismReport:
    """Check ``T(s, a) = s' => T_img(f(s), g(s, a)) = f(s')`` and ``R_img(f(s), g(s, a)) = R(s, a)`` everywhere.

    :param source: The original MDP.
    :type source: TabularMDP
    :param image: The candidate image MDP.
    :type image: TabularMDP
    :param mapping: State and action maps from ``source`` to ``image``.
    :type mapping: HomomorphismMap
    :param reward_tolerance: Largest reward difference still counted as equal.
    :type reward_tolerance: float
    :return: Both verdicts and every failing ``(s, a)`` pair.
    :rtype: HomomorphismReport
    """
    mapping.check_domain(source, image)
    violations = []  # type: List[Violation]
    f, g = mapping.f, mapping.g
    for s in range(source.n_states):
        for a in range(source.n_actions):
            image_state, image_action = f[s], g[s, a]
            expected_next = f[source.T[s, a]]
            found_next = image.T[image_state, image_action]
            if found_next != expected_next:
                violations.append(Violation('transition', s, a, float(expected_next), float(found_next)))
            if abs(image.R[image_state, image_action] - source.R[s, a]) > reward_tolerance:
                violations.append(Violation('reward', s, a, float(source.R[s, a]),
                                            float(image.R[image_state, image_action])))
    return HomomorphismReport(
        transition_ok=not any(v.kind == 'transition' for v in violations),
        reward_ok=not any(v.kind == 'reward' for v in violations),
        violations=violations,
    )


def check_stochastic_homomorphism(source: StochasticMDP, image: StochasticMDP, mapping: HomomorphismMap,
                                  tolerance: float = 1e-12) -> HomomorphismReport:
    """Stochastic version: the probability of reaching each block ``f^-1(s_img')`` must match the image MDP."""
    mapping.check_domain(source, image)
    violations = []  # type: List[Violation]
    # aggregate[s, a, s_img'] = sum of P(s'|s, a) over the block of s_img'
    aggregate = np.zeros((source.n_states, source.n_actions, image.n_states))
    for s_next in range(source.n_states):
        aggregate[:, :, mapping.f[s_next]] += source.P[:, :, s_next]
    for s in range(source.n_states):
        for a in range(source.n_actions):
            image_state, image_action = mapping.f[s], mapping.g[s, a]
            expected = aggregate[s, a]
            found = image.P[image_state, image_action]
            worst = int(np.argmax(np.abs(expected - found)))
            if abs(expected[worst] - found[worst]) > tolerance:
                violations.append(Violation('transition', s, a, float(expected[worst]), float(found[worst])))
            if abs(image.R[image_state, image_action] - source.R[s, a]) > tolerance:
                violations.append(Violation('reward', s, a, float(source.R[s, a]),
                                            float(image.R[image_state, image_action])))
    return HomomorphismReport(
        transition_ok=not any(v.kind == 'transition' for v in violations),
        reward_ok=not any(v.kind == 'reward' for v in violations),
        violations=violations,
    )


def induced_abstract_mdp(source: TabularMDP, mapping: HomomorphismMap, n_states: Optional[int] = None,
                         n_actions: Optional[int] = None) -> Tuple[TabularMDP, np.ndarray]:
    """Build the image MDP implied by a map, taking the first ``(s, a)`` that reaches each image pair.

    Image pairs that no ``(s, a)`` reaches become self-loops with a reward below anything the source can
    earn, so they are never chosen by an optimal image policy.

    :return: The image MDP and a boolean mask of the image pairs reached by the map.
    :rtype: Tuple[TabularMDP, np.ndarray]
    """
    n_states = int(mapping.f.max()) + 1 if n_states is None else n_states
    n_actions = int(mapping.g.max()) + 1 if n_actions is None else n_actions
    filler = source.R.min() - 1.0
    T = np.tile(np.arange(n_states)[:, None], (1, n_actions))
    R = np.full((n_states, n_actions), filler)
    covered = np.zeros((n_states, n_actions), dtype=bool)
    for s in range(source.n_states):
        for a in range(source.n_actions):
            image_state, image_action = mapping.f[s], mapping.g[s, a]
            if not covered[image_state, image_action]:
                T[image_state, image_action] = mapping.f[source.T[s, a]]
                R[image_state, image_action] = source.R[s, a]
                covered[image_state, image_action] = True
    return TabularMDP(T=T, R=R, gamma=source.gamma), covered


def lift_policy(source: TabularMDP, image: TabularMDP, mapping: HomomorphismMap,
                image_policy: np.ndarray) -> np.ndarray:
    """Lift an image policy: in state ``s`` take the lowest action ``a`` with ``g(s, a) = image_policy(f(s))``."""
    mapping.check_domain(source, image)
    policy = np.zeros(source.n_states, dtype=np.int64)
    for s in range(source.n_states):
        wanted = image_policy[mapping.f[s]]
        candidates = np.flatnonzero(mapping.g[s] == wanted)
        if len(candidates) == 0:
            raise exceptions.NoPreimageAction(s, int(wanted))
        policy[s] = candidates[0]
    return policy


@dataclasses.dataclass
class LiftingResult:
    report: HomomorphismReport
    image_policy: np.ndarray
    lifted_policy: np.ndarray
    lifted_values: np.ndarray
    optimal_values: np.ndarray
    max_abs_error: float
    tolerance: float

    @property
    def precondition_ok(self) -> bool:
        return self.report.ok

    @property
    def optimal(self) -> bool:
        return self.max_abs_error <= self.tolerance

    def to_record(self) -> Dict[str, Any]:
        return {
            'homomorphism': self.report.to_record(),
            'precondition_ok': self.precondition_ok,
            'lifted_policy': self.lifted_policy.tolist(),
            'max_abs_error': self.max_abs_error,
            'optimal': self.optimal,
        }


def verify_lifting(source: TabularMDP, image: TabularMDP, mapping: HomomorphismMap,
                   tolerance: float = 1e-10) -> LiftingResult:
    """Solve the image MDP, lift its optimal policy and compare the lifted values with the source optimum.

    Both value functions come from exact policy evaluation (the optimum is the value of the greedy policy
    of value iteration), so the comparison carries no iteration error. A failed homomorphism check is
    reported in the result rather than raised.
    """
    report = check_homomorphism(source, image, mapping)
    if not report.ok:
        logger.warning('the map is not a homomorphism (%d violations); the lifted policy may be suboptimal',
                       len(report.violations))
    _, image_policy = value_iteration(image)
    lifted = lift_policy(source, image, mapping, image_policy)
    lifted_values = policy_evaluation(source, lifted)
    _, source_policy = value_iteration(source)
    optimal_values = policy_evaluation(source, source_policy)
    return LiftingResult(
        report=report, image_policy=image_policy, lifted_policy=lifted, lifted_values=lifted_values,
        optimal_values=optimal_values, max_abs_error=float(np.max(np.abs(lifted_values - optimal_values))),
        tolerance=tolerance,
    )
