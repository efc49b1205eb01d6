"""Numerical check that a continuous latent policy followed by a deterministic action decoder has the same
performance gradient as the discrete policy it induces.

The latent action is one-dimensional, ``[-1, 1]`` is cut into equal bins and the latent policy of every
state is a softmax over bin logits ``theta[s, b]`` (a piecewise-constant density). The decoder maps each
interval between consecutive thresholds to one discrete action, so the probability of a discrete action is
the exact sum of the bin probabilities in its preimage.
"""
import dataclasses

from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import softmax

from .tabular import TabularMDP, policy_evaluation, q_values

N_BINS = 64


def bin_edges(n_bins: int = N_BINS) -> np.ndarray:
    return np.linspace(-1.0, 1.0, n_bins + 1)


def decoder_from_thresholds(thresholds: Sequence[float], n_bins: int = N_BINS) -> np.ndarray:
    """Discrete action of every bin for a decoder that switches action at each threshold.

    Thresholds must be interior bin edges in increasing order, each interval covering at least one bin.
    """
    edges = bin_edges(n_bins)
    thresholds = np.asarray(sorted(thresholds), dtype=np.float64)
    positions = np.round((thresholds + 1.0) / 2.0 * n_bins).astype(np.int64)
    if np.any(np.abs(edges[positions] - thresholds) > 1e-12):
        raise ValueError('decoder thresholds must lie on bin edges')
    if np.any(positions <= 0) or np.any(positions >= n_bins) or np.any(np.diff(positions) <= 0):
        raise ValueError('every decoder interval must cover at least one bin')
    return np.searchsorted(positions, np.arange(n_bins), side='right')


def decoder_matrix(decoder: np.ndarray, n_actions: int) -> np.ndarray:
    """``D[b, a]``, the probability that bin ``b`` decodes to action ``a`` (one-hot rows when deterministic)."""
    matrix = np.zeros((len(decoder), n_actions))
    matrix[np.arange(len(decoder)), decoder] = 1.0
    return matrix


def perturbed_decoder(decoder: np.ndarray, n_actions: int, strength: float, rng: np.random.Generator) -> np.ndarray:
    """A stochastic decoder that mixes the deterministic one with random action distributions."""
    noise = rng.dirichlet(np.ones(n_actions), size=len(decoder))
    return (1.0 - strength) * decoder_matrix(decoder, n_actions) + strength * noise


def bin_probabilities(theta: np.ndarray) -> np.ndarray:
    return softmax(theta, axis=1)


def induced_policy(theta: np.ndarray, decoder: np.ndarray) -> np.ndarray:
    """``pi_i(a|s)``, the latent-policy mass of every action's preimage; ``decoder`` is a ``D[b, a]`` matrix."""
    return bin_probabilities(theta) @ decoder


def discounted_visitation(mdp: TabularMDP, policy: np.ndarray, d0: np.ndarray) -> np.ndarray:
    """Unnormalised discounted state visitation ``d0^T (I - gamma P_pi)^-1``."""
    P_pi = np.einsum('sa,sat->st', policy, mdp.transition_tensor())
    return np.linalg.solve((np.eye(mdp.n_states) - mdp.gamma * P_pi).T, d0)


def intermediate_objective(mdp: TabularMDP, theta: np.ndarray, decoder: np.ndarray, d0: np.ndarray) -> float:
    return float(d0 @ policy_evaluation(mdp, induced_policy(theta, decoder)))


def intermediate_gradient(mdp: TabularMDP, theta: np.ndarray, decoder: np.ndarray, d0: np.ndarray) -> np.ndarray:
    """Exact policy gradient of the induced discrete policy with respect to the bin logits."""
    policy = induced_policy(theta, decoder)
    values = policy_evaluation(mdp, policy)
    q = q_values(mdp, values)
    visitation = discounted_visitation(mdp, policy, d0)
    p = bin_probabilities(theta)
    return visitation[:, None] * p * (q @ decoder.T - values[:, None])


def latent_action_mdp(mdp: TabularMDP, decoder: np.ndarray) -> TabularMDP:
    """The MDP whose actions are the bins, each executing the discrete action it decodes to."""
    return TabularMDP(T=mdp.T[:, decoder], R=mdp.R[:, decoder], gamma=mdp.gamma)


def latent_gradient(mdp: TabularMDP, theta: np.ndarray, decoder: np.ndarray, d0: np.ndarray) -> np.ndarray:
    """Exact policy gradient of the latent policy on the bin-action MDP, with ``Q(s, b) = Q(s, dec(b))``."""
    latent_mdp = latent_action_mdp(mdp, decoder)
    p = bin_probabilities(theta)
    values = policy_evaluation(latent_mdp, p)
    q = q_values(latent_mdp, values)
    visitation = discounted_visitation(latent_mdp, p, d0)
    return visitation[:, None] * p * (q - values[:, None])


def finite_difference_gradient(mdp: TabularMDP, theta: np.ndarray, decoder: np.ndarray, d0: np.ndarray,
                               step: float = 1e-5) -> np.ndarray:
    gradient = np.zeros_like(theta)
    for index in np.ndindex(*theta.shape):
        shifted = theta.copy()
        shifted[index] += step
        upper = intermediate_objective(mdp, shifted, decoder, d0)
        shifted[index] -= 2 * step
        lower = intermediate_objective(mdp, shifted, decoder, d0)
        gradient[index] = (upper - lower) / (2 * step)
    return gradient


def max_relative_error(a: np.ndarray, b: np.ndarray, floor: float) -> float:
    """Largest elementwise ``|a - b| / max(|a|, |b|, floor)``."""
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float(np.max(np.abs(a - b) / scale))


@dataclasses.dataclass
class GradientEquivalenceReport:
    grad_intermediate: np.ndarray
    grad_latent: np.ndarray
    max_rel_err: float
    grad_finite_difference: Optional[np.ndarray] = None
    fd_max_rel_err: Optional[float] = None
    deterministic_decoder: bool = True

    def passed(self, tolerance: float = 1e-6, fd_tolerance: float = 1e-4) -> bool:
        agree = self.max_rel_err < tolerance
        if self.fd_max_rel_err is not None:
            agree = agree and self.fd_max_rel_err < fd_tolerance
        return agree

    def to_record(self) -> Dict[str, Any]:
        return {
            'max_rel_err': self.max_rel_err,
            'fd_max_rel_err': self.fd_max_rel_err,
            'deterministic_decoder': self.deterministic_decoder,
            'passed': self.passed(),
        }


def check_gradient_equivalence(mdp: TabularMDP, thresholds: Sequence[float], theta: np.ndarray,
                               d0: Optional[np.ndarray] = None, decoder: Optional[np.ndarray] = None,
                               finite_differences: bool = True, floor: float = 1e-9, fd_floor: float = 1e-4
                               ) -> GradientEquivalenceReport:
    """Compare the gradient of the induced discrete policy with the gradient of the latent policy.

    :param mdp: The (small) image MDP with ``K`` discrete actions.
    :type mdp: TabularMDP
    :param thresholds: The ``K - 1`` decoder thresholds, each on a bin edge.
    :type thresholds: Sequence[float]
    :param theta: Bin logits, ``n_states x n_bins``.
    :type theta: np.ndarray
    :param d0: Initial state distribution, uniform by default.
    :type d0: np.ndarray
    :param decoder: A ``D[b, a]`` matrix used for the induced policy instead of the thresholds' decoder; a
        stochastic one shows what happens without a deterministic decoder.
    :type decoder: np.ndarray
    :param finite_differences: Also compute central finite differences of the induced objective.
    :type finite_differences: bool
    :return: Both gradients and their largest relative difference.
    :rtype: GradientEquivalenceReport
    """
    n_bins = theta.shape[1]
    nominal = decoder_from_thresholds(thresholds, n_bins)
    if nominal.max() >= mdp.n_actions or len(thresholds) != mdp.n_actions - 1:
        raise ValueError('{} thresholds cannot decode onto {} actions'.format(len(thresholds), mdp.n_actions))
    if d0 is None:
        d0 = np.full(mdp.n_states, 1.0 / mdp.n_states)
    matrix = decoder_matrix(nominal, mdp.n_actions) if decoder is None else np.asarray(decoder, dtype=np.float64)

    grad_intermediate = intermediate_gradient(mdp, theta, matrix, d0)
    grad_latent = latent_gradient(mdp, theta, nominal, d0)
    report = GradientEquivalenceReport(
        grad_intermediate=grad_intermediate,
        grad_latent=grad_latent,
        max_rel_err=max_relative_error(grad_intermediate, grad_latent, floor),
        deterministic_decoder=bool(np.all((matrix == 0.0) | (matrix == 1.0))),
    )
    if finite_differences:
        report.grad_finite_difference = finite_difference_gradient(mdp, theta, matrix, d0)
        report.fd_max_rel_err = max_relative_error(grad_intermediate, report.grad_finite_difference, fd_floor)
    return report


def random_gradient_instance(rng: np.random.Generator, max_states: int = 10, max_actions: int = 4,
                             n_bins: int = N_BINS, gamma: float = 0.9
                             ) -> Tuple[TabularMDP, np.ndarray, np.ndarray]:
    """A random small MDP with random decoder thresholds and random bin logits."""
    n_states = int(rng.integers(2, max_states + 1))
    n_actions = int(rng.integers(2, max_actions + 1))
    mdp = TabularMDP(
        T=rng.integers(0, n_states, size=(n_states, n_actions)),
        R=rng.uniform(-1.0, 1.0, size=(n_states, n_actions)),
        gamma=gamma,
    )
    positions = np.sort(rng.choice(np.arange(1, n_bins), size=n_actions - 1, replace=False))
    thresholds = bin_edges(n_bins)[positions]
    theta = rng.normal(0.0, 1.0, size=(n_states, n_bins))
    return mdp, thresholds, theta
