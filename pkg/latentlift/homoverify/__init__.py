from .tabular import (
    TabularMDP, StochasticMDP, q_values, policy_matrix, policy_evaluation, value_iteration, brute_force_optimal_values,
)
from .homomorphism import (
    HomomorphismMap, Violation, HomomorphismReport, LiftingResult, check_homomorphism,
    check_stochastic_homomorphism, induced_abstract_mdp, lift_policy, verify_lifting,
)
from .grids import grid_cells, gridworld_mdp, mirror_action, mirror_quotient
from .gradients import (
    N_BINS, GradientEquivalenceReport, bin_edges, decoder_from_thresholds, decoder_matrix, perturbed_decoder,
    induced_policy, intermediate_gradient, latent_gradient, finite_difference_gradient, check_gradient_equivalence,
    random_gradient_instance,
)
from .io import read_mdp, write_mdp, read_map, write_map
