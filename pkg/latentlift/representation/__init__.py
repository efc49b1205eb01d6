from .losses import (
    LossWeights, Wiring, Batch, LOSS_NAMES, transition_error, reward_error, hinge_error, cross_entropy,
    transition_loss, reward_loss, contrastive_loss, decoder_loss, compute_losses, total_loss,
)
from .baselines import (
    Baseline, baseline_catalogue, register_baseline, remove_baseline, get_baseline, configure_baseline,
)
from .trainer import (
    ReprConfig, RepresentationResult, CURVE_COLUMNS, evaluate_losses, train_representation, save_loss_curves,
    curves_from_records,
)
from .metrics import encode_dataset, action_round_trip_accuracy, mean_pairwise_latent_distance
