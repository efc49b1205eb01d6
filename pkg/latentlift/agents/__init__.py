from .catalogue import agent_catalogue, register_agent, remove_agent, get_agent_class, make_agent
from .base import Agent, AgentConfig, LatentBatch
from .td3 import TD3Agent, TD3Config, soft_update, td3_target
from .dqn import DQNAgent, DQNConfig, dqn_target
from .training import (
    EpisodeMetrics, PolicyRun, METRIC_COLUMNS, metrics_frame, check_bundle_matches_env, iter_train_policy,
    train_policy, evaluate_policy, save_agent, load_agent,
)
