from .config import NetConfig, conv_output_size
from .layers import mlp, as_tensor, parameter_count
from .models import Encoder, ActionEncoder, ActionDecoder, TransitionModel, RewardModel, Actor, Critic, QNetwork
from .bundle import ModelBundle, MODEL_NAMES
from .checkpoint import save_checkpoint, load_checkpoint, restore_models, save_bundle, load_bundle
