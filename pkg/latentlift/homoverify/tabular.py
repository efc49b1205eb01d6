"""Exact tabular MDPs and their solvers."""
import itertools
import dataclasses

from typing import Tuple, Union

import numpy as np


@dataclasses.dataclass
class TabularMDP:
    """A finite MDP with deterministic transitions ``T[s, a] -> s'`` and rewards ``R[s, a]``.

    .. code:: pycon

        >>> import numpy as np
        >>> from latentlift.homoverify import TabularMDP, value_iteration
        >>> values, policy = value_iteration(TabularMDP(T=np.array([[0]]), R=np.array([[1.0]]), gamma=0.9))
        >>> round(float(values[0]), 6)
        10.0
    """

    T: np.ndarray
    R: np.ndarray
    gamma: float

    def __post_init__(self):
        self.T = np.asarray(self.T, dtype=np.int64)
        self.R = np.asarray(self.R, dtype=np.float64)
        if self.T.ndim != 2 or self.T.shape != self.R.shape:
            raise ValueError('T and R must both be n_states x n_actions tables, got {} and {}'.format(
                self.T.shape, self.R.shape))
        if self.T.size == 0:
            raise ValueError('an MDP needs at least one state and one action')
        if self.T.min() < 0 or self.T.max() >= self.n_states:
            raise ValueError('T points outside the state set')
        if not np.all(np.isfinite(self.R)):
            raise ValueError('R must be finite')
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError('gamma must lie in [0, 1), got {}'.format(self.gamma))

    @property
    def n_states(self) -> int:
        return int(self.T.shape[0])

    @property
    def n_actions(self) -> int:
        return int(self.T.shape[1])

    def transition_tensor(self) -> np.ndarray:
        """``P[s, a, s']`` with a one at the deterministic successor."""
        P = np.zeros((self.n_states, self.n_actions, self.n_states))
        states, actions = np.indices(self.T.shape)
        P[states, actions, self.T] = 1.0
        return P


@dataclasses.dataclass
class StochasticMDP:
    """A finite MDP with transition probabilities ``P[s, a, s']``."""

    P: np.ndarray
    R: np.ndarray
    gamma: float

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=np.float64)
        self.R = np.asarray(self.R, dtype=np.float64)
        if self.P.ndim != 3 or self.P.shape[0] != self.P.shape[2] or self.P.shape[:2] != self.R.shape:
            raise ValueError('P must be S x A x S and R must be S x A')
        if np.any(self.P < 0) or not np.allclose(self.P.sum(axis=-1), 1.0, atol=1e-12):
            raise ValueError('every P[s, a] must be a probability distribution')
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError('gamma must lie in [0, 1), got {}'.format(self.gamma))

    @property
    def n_states(self) -> int:
        return int(self.P.shape[0])

    @property
    def n_actions(self) -> int:
        return int(self.P.shape[1])

    @classmethod
    def from_deterministic(cls, mdp: TabularMDP) -> 'StochasticMDP':
        return cls(P=mdp.transition_tensor(), R=mdp.R.copy(), gamma=mdp.gamma)


AnyMDP = Union[TabularMDP, StochasticMDP]


def _tensor(mdp: AnyMDP) -> np.ndarray:
    return mdp.transition_tensor() if isinstance(mdp, TabularMDP) else mdp.P


def q_values(mdp: AnyMDP, values: np.ndarray) -> np.ndarray:
    return mdp.R + mdp.gamma * _tensor(mdp) @ values


def policy_matrix(mdp: AnyMDP, policy: np.ndarray) -> np.ndarray:
    """Turn a deterministic policy (one action per state) into an ``S x A`` probability table."""
    policy = np.asarray(policy)
    if policy.ndim == 2:
        return policy.astype(np.float64)
    table = np.zeros((mdp.n_states, mdp.n_actions))
    table[np.arange(mdp.n_states), policy.astype(np.int64)] = 1.0
    return table


def policy_evaluation(mdp: AnyMDP, policy: np.ndarray) -> np.ndarray:
    """Exact discounted values of ``policy`` from the linear system ``(I - gamma P_pi) V = r_pi``.

    :param mdp: The MDP.
    :param policy: One action per state, or an ``S x A`` table of action probabilities.
    :type policy: np.ndarray
    :return: The value of every state.
    :rtype: np.ndarray
    """
    table = policy_matrix(mdp, policy)
    P_pi = np.einsum('sa,sat->st', table, _tensor(mdp))
    r_pi = (table * mdp.R).sum(axis=1)
    return np.linalg.solve(np.eye(mdp.n_states) - mdp.gamma * P_pi, r_pi)


def value_iteration(mdp: AnyMDP, tolerance: float = 1e-12, max_iterations: int = 1000000
                    ) -> Tuple[np.ndarray, np.ndarray]:
    """Iterate the Bellman optimality operator until the sup-norm residual drops below ``tolerance``.

    The greedy policy breaks ties by the lowest action index.

    :return: The optimal values and a greedy optimal policy.
    :rtype: Tuple[np.ndarray, np.ndarray]
    """
    values = np.zeros(mdp.n_states)
    for _ in range(max_iterations):
        updated = q_values(mdp, values).max(axis=1)
        residual = np.max(np.abs(updated - values))
        values = updated
        if residual < tolerance:
            break
    return values, np.argmax(q_values(mdp, values), axis=1)


def brute_force_optimal_values(mdp: AnyMDP, chunk_size: int = 16384) -> np.ndarray:
    """Elementwise best value over every deterministic policy; only feasible for tiny MDPs."""
    P = _tensor(mdp)
    states = np.arange(mdp.n_states)
    identity = np.eye(mdp.n_states)
    best = np.full(mdp.n_states, -np.inf)
    policies = itertools.product(range(mdp.n_actions), repeat=mdp.n_states)
    while True:
        chunk = np.asarray(list(itertools.islice(policies, chunk_size)), dtype=np.int64)
        if len(chunk) == 0:
            return best
        P_pi = P[states[None, :], chunk]
        r_pi = mdp.R[states[None, :], chunk]
        values = np.linalg.solve(identity[None] - mdp.gamma * P_pi, r_pi[..., None])[..., 0]
        best = np.maximum(best, values.max(axis=0))
